/*
 * Copyright 2026 The s5cells Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "s5/canonical.hpp"

#include <boost/container_hash/hash.hpp>
#include <boost/pending/disjoint_sets.hpp>

#include <algorithm>
#include <limits>
#include <sstream>

#include "s5/error.hpp"

namespace s5 {

namespace {

constexpr std::uint64_t kSat = std::numeric_limits<std::uint64_t>::max();

std::uint64_t sat_mul(std::uint64_t a, std::uint64_t b) {
  if (a == 0 || b == 0) return 0;
  if (a > kSat / b) return kSat;
  return a * b;
}

std::uint64_t sat_add(std::uint64_t a, std::uint64_t b) { return a > kSat - b ? kSat : a + b; }

std::uint64_t sat_pow2(std::uint64_t n) { return n >= 64 ? kSat : (1ULL << n); }

void sort_unique(std::vector<AtomId>& v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

}  // namespace

std::size_t AtomStore::VecHash::operator()(const std::vector<std::uint32_t>& v) const noexcept {
  return boost::hash_range(v.begin(), v.end());
}

AtomStore::AtomStore(Signature sig, Caps caps) : sig_(sig), caps_(caps) {
  validate_signature(sig_);
  if (caps_.full_level < 0 || caps_.lazy_level < caps_.full_level)
    throw InputError("level caps must satisfy 0 <= full <= lazy");
  if (caps_.budget == 0) throw InputError("budget must be positive");
}

void AtomStore::check_budget(std::uint64_t count, const char* what) const {
  if (count > caps_.budget)
    throw CapExceeded(std::string(what) + " needs " +
                      (count == kSat ? std::string("more than 2^64") : std::to_string(count)) +
                      " atoms, budget is " + std::to_string(caps_.budget));
}

void AtomStore::check_lazy(int level) const {
  if (level > caps_.lazy_level)
    throw CapExceeded("level " + std::to_string(level) + " exceeds the lazy level cap " +
                      std::to_string(caps_.lazy_level));
}

AtomId AtomStore::intern(Atom atom, std::vector<std::uint32_t> key) {
  if (auto it = atom_index_.find(key); it != atom_index_.end()) return it->second;
  if (atoms_.size() >= caps_.budget) check_budget(atoms_.size() + 1, "the atom store");
  auto id = static_cast<AtomId>(atoms_.size());
  atoms_.push_back(std::move(atom));
  atom_index_.emplace(std::move(key), id);
  return id;
}

AtomId AtomStore::level0(std::uint64_t valuation) {
  if (sig_.props < 64 && (valuation >> sig_.props) != 0)
    throw InputError("valuation mentions a proposition outside the vocabulary");
  std::vector<std::uint32_t> key{0, static_cast<std::uint32_t>(valuation),
                                 static_cast<std::uint32_t>(valuation >> 32)};
  return intern(Atom{0, kNoAtom, valuation, {}}, std::move(key));
}

ChoiceId AtomStore::intern_choice(std::vector<AtomId> members) {
  sort_unique(members);
  if (auto it = choice_index_.find(members); it != choice_index_.end()) return it->second;
  auto id = static_cast<ChoiceId>(choice_sets_.size());
  choice_sets_.push_back(members);
  choice_index_.emplace(std::move(members), id);
  return id;
}

std::string AtomStore::validate_extension(AtomId base,
                                          const std::vector<std::vector<AtomId>>& choices) const {
  if (base >= atoms_.size()) return "unknown base atom";
  if (choices.size() != static_cast<std::size_t>(sig_.agents))
    return "expected one possibility set per agent";
  const Atom& w = atoms_[base];
  for (int j = 0; j < sig_.agents; ++j) {
    const auto& m = choices[j];
    const std::string tag = "agent " + std::to_string(j) + ": ";
    if (m.empty()) return tag + "empty possibility set";
    bool has_base = false;
    std::vector<AtomId> bases;
    for (AtomId u : m) {
      if (u >= atoms_.size()) return tag + "unknown atom in possibility set";
      const Atom& ua = atoms_[u];
      if (ua.level != w.level) return tag + "possibility set mixes levels";
      if (u == base) has_base = true;
      if (w.level >= 1) {
        if (ua.choices[j] != w.choices[j])
          return tag + "atom " + std::to_string(u) + " lies outside the block of the base";
        bases.push_back(ua.base);
      }
    }
    if (!has_base) return tag + "base atom missing from its own possibility set";
    if (w.level >= 1) {
      sort_unique(bases);
      if (bases != choice_sets_[w.choices[j]])
        return tag + "possibility set misses a fiber met by the block";
    }
  }
  return {};
}

AtomId AtomStore::extend(AtomId base, const std::vector<std::vector<AtomId>>& choices) {
  if (base >= atoms_.size()) throw InputError("unknown base atom");
  check_lazy(atoms_[base].level + 1);
  std::vector<std::vector<AtomId>> sets = choices;
  for (auto& s : sets) sort_unique(s);
  if (auto why = validate_extension(base, sets); !why.empty())
    throw PreconditionError("invalid extension of atom " + std::to_string(base) + ": " + why);
  std::vector<ChoiceId> ids;
  ids.reserve(sets.size());
  for (auto& s : sets) ids.push_back(intern_choice(std::move(s)));
  const Atom& b = atoms_[base];
  std::vector<std::uint32_t> key{static_cast<std::uint32_t>(b.level + 1), base};
  key.insert(key.end(), ids.begin(), ids.end());
  return intern(Atom{b.level + 1, base, b.val, std::move(ids)}, std::move(key));
}

AtomId AtomStore::extend_ids(AtomId base, const std::vector<ChoiceId>& choices) {
  std::vector<std::vector<AtomId>> sets;
  sets.reserve(choices.size());
  for (ChoiceId c : choices) sets.push_back(choice_sets_.at(c));
  return extend(base, sets);
}

AtomId AtomStore::project(AtomId a, int k) const {
  if (k < 0 || k > level(a))
    throw PreconditionError("cannot project a level-" + std::to_string(level(a)) +
                            " atom to level " + std::to_string(k));
  while (atoms_[a].level > k) a = atoms_[a].base;
  return a;
}

std::optional<std::size_t> AtomStore::rank(AtomId a) const {
  if (auto it = rank_.find(a); it != rank_.end()) return it->second;
  return std::nullopt;
}

const std::vector<AtomId>& AtomStore::omega_level(int i) {
  if (i < 0) throw InputError("negative level");
  if (i > caps_.full_level)
    throw CapExceeded("full enumeration of level " + std::to_string(i) +
                      " exceeds the full-enumeration cap " + std::to_string(caps_.full_level));
  if (level_ranked(i)) return omega_[i];
  if (omega_.size() <= static_cast<std::size_t>(i)) {
    omega_.resize(i + 1);
    omega_done_.resize(i + 1, false);
  }
  std::vector<AtomId> out;
  if (i == 0) {
    if (sig_.props > 20) throw CapExceeded("too many propositions to enumerate valuations");
    check_budget(1ULL << sig_.props, "level 0");
    for (std::uint64_t v = 0; v < (1ULL << sig_.props); ++v) out.push_back(level0(v));
  } else {
    const auto prev = omega_level(i - 1);
    std::uint64_t total = 0;
    for (AtomId w : prev) total = sat_add(total, count_extensions(w));
    check_budget(total, ("level " + std::to_string(i)).c_str());
    std::vector<std::pair<std::vector<std::uint64_t>, AtomId>> keyed;
    keyed.reserve(total);
    for (AtomId w : prev)
      for (AtomId v : extensions(w)) {
        std::vector<std::uint64_t> key{rank_.at(w)};
        for (int j = 0; j < sig_.agents; ++j) {
          std::vector<std::uint64_t> rs;
          for (AtomId u : choices(v, j)) rs.push_back(rank_.at(u));
          std::sort(rs.begin(), rs.end());
          key.push_back(rs.size());
          key.insert(key.end(), rs.begin(), rs.end());
        }
        keyed.emplace_back(std::move(key), v);
      }
    std::sort(keyed.begin(), keyed.end());
    for (auto& [key, v] : keyed) out.push_back(v);
  }
  for (std::size_t r = 0; r < out.size(); ++r) rank_[out[r]] = r;
  omega_[i] = std::move(out);
  omega_done_[i] = true;
  return omega_[i];
}

std::uint64_t AtomStore::omega_count(int i) {
  if (i == 0) return sat_pow2(static_cast<std::uint64_t>(sig_.props));
  if (i - 1 > caps_.full_level)
    throw CapExceeded("counting level " + std::to_string(i) + " needs level " +
                      std::to_string(i - 1) + " enumerated");
  std::uint64_t total = 0;
  for (AtomId w : omega_level(i - 1)) total = sat_add(total, count_extensions(w));
  return total;
}

const std::vector<AtomId>& AtomStore::possibility_set(AtomId w, int agent) {
  if (agent < 0 || agent >= sig_.agents) throw InputError("agent index out of range");
  const int lvl = level(w);
  check_lazy(lvl);
  const std::pair<int, std::uint64_t> key{lvl == 0 ? -1 : agent,
                                          lvl == 0 ? kSat : choice_id(w, agent)};
  if (auto it = blocks_.find(key); it != blocks_.end()) return it->second;
  std::vector<AtomId> members;
  if (lvl == 0) {
    if (sig_.props > 20) throw CapExceeded("too many propositions to enumerate valuations");
    for (std::uint64_t v = 0; v < (1ULL << sig_.props); ++v) members.push_back(level0(v));
  } else {
    const ChoiceId fixed = choice_id(w, agent);
    const auto m = choice_set(fixed);
    std::uint64_t total = 0;
    for (AtomId u : m) total = sat_add(total, fiber_count(u, agent));
    check_budget(total, "a possibility set");
    for (AtomId u : m) {
      std::vector<std::vector<ChoiceId>> lists(sig_.agents);
      for (int k = 0; k < sig_.agents; ++k)
        lists[k] = k == agent ? std::vector<ChoiceId>{fixed} : valid_choices(u, k);
      std::vector<std::size_t> odo(sig_.agents, 0);
      std::vector<ChoiceId> pick(sig_.agents);
      while (true) {
        for (int k = 0; k < sig_.agents; ++k) pick[k] = lists[k][odo[k]];
        members.push_back(extend_ids(u, pick));
        int k = 0;
        for (; k < sig_.agents; ++k) {
          if (++odo[k] < lists[k].size()) break;
          odo[k] = 0;
        }
        if (k == sig_.agents) break;
      }
    }
  }
  sort_unique(members);
  return blocks_.emplace(key, std::move(members)).first->second;
}

std::uint64_t AtomStore::count_valid_subsets(AtomId w, int agent,
                                             const std::vector<AtomId>& block) const {
  if (level(w) == 0) return block.empty() ? 0 : sat_pow2(block.size() - 1);
  std::map<AtomId, std::uint64_t> fibers;
  for (AtomId u : block) ++fibers[base(u)];
  std::uint64_t n = 1;
  for (AtomId b : choices(w, agent)) {
    auto it = fibers.find(b);
    if (it == fibers.end()) return 0;
    n = sat_mul(n, b == base(w) ? sat_pow2(it->second - 1) : sat_pow2(it->second) - 1);
  }
  return n;
}

std::vector<ChoiceId> AtomStore::valid_subsets(AtomId w, int agent,
                                               const std::vector<AtomId>& block) {
  if (!std::binary_search(block.begin(), block.end(), w))
    throw PreconditionError("atom is not a member of the given block");
  const std::uint64_t count = count_valid_subsets(w, agent, block);
  check_budget(count, "possibility-set choices");
  // Groups of block members; the first group always holds w.
  std::vector<std::vector<AtomId>> groups;
  if (level(w) == 0) {
    groups.push_back(block);
  } else {
    std::map<AtomId, std::vector<AtomId>> fibers;
    for (AtomId u : block) fibers[base(u)].push_back(u);
    groups.push_back(fibers[base(w)]);
    for (AtomId b : choices(w, agent))
      if (b != base(w)) groups.push_back(fibers[b]);
  }
  // Per group, the list of admissible sub-selections.
  std::vector<std::vector<std::vector<AtomId>>> options(groups.size());
  for (std::size_t g = 0; g < groups.size(); ++g) {
    const auto& grp = groups[g];
    if (grp.size() >= 63) throw CapExceeded("fiber too large to enumerate subsets");
    for (std::uint64_t mask = 1; mask < (1ULL << grp.size()); ++mask) {
      std::vector<AtomId> sel;
      bool has_w = false;
      for (std::size_t b = 0; b < grp.size(); ++b)
        if (mask >> b & 1U) {
          sel.push_back(grp[b]);
          has_w |= grp[b] == w;
        }
      if (g == 0 && !has_w) continue;
      options[g].push_back(std::move(sel));
    }
    if (options[g].empty()) return {};
  }
  std::vector<ChoiceId> out;
  out.reserve(count);
  std::vector<std::size_t> odo(groups.size(), 0);
  while (true) {
    std::vector<AtomId> m;
    for (std::size_t g = 0; g < groups.size(); ++g)
      m.insert(m.end(), options[g][odo[g]].begin(), options[g][odo[g]].end());
    out.push_back(intern_choice(std::move(m)));
    std::size_t g = 0;
    for (; g < groups.size(); ++g) {
      if (++odo[g] < options[g].size()) break;
      odo[g] = 0;
    }
    if (g == groups.size()) break;
  }
  return out;
}

const std::vector<ChoiceId>& AtomStore::valid_choices(AtomId w, int agent) {
  if (agent < 0 || agent >= sig_.agents) throw InputError("agent index out of range");
  const std::pair<AtomId, int> key{w, agent};
  if (auto it = valid_.find(key); it != valid_.end()) return it->second;
  check_lazy(level(w) + 1);
  const auto block = possibility_set(w, agent);
  auto list = valid_subsets(w, agent, block);
  return valid_.emplace(key, std::move(list)).first->second;
}

std::uint64_t AtomStore::fiber_count(AtomId u, int skip_agent) {
  std::uint64_t n = 1;
  for (int k = 0; k < sig_.agents; ++k)
    if (k != skip_agent) n = sat_mul(n, count_valid_choices(u, k));
  return n;
}

std::uint64_t AtomStore::count_valid_choices(AtomId w, int agent) {
  const std::pair<AtomId, int> key{w, agent};
  if (auto it = valid_count_.find(key); it != valid_count_.end()) return it->second;
  std::uint64_t n = 1;
  if (level(w) == 0) {
    n = sat_pow2(sat_pow2(static_cast<std::uint64_t>(sig_.props)) - 1);
  } else {
    for (AtomId u : choices(w, agent)) {
      const std::uint64_t fiber = fiber_count(u, agent);
      n = sat_mul(n, u == base(w) ? sat_pow2(fiber - 1) : (fiber >= 64 ? kSat : sat_pow2(fiber) - 1));
    }
  }
  valid_count_.emplace(key, n);
  return n;
}

std::uint64_t AtomStore::count_extensions(AtomId w) {
  std::uint64_t n = 1;
  for (int j = 0; j < sig_.agents; ++j) n = sat_mul(n, count_valid_choices(w, j));
  return n;
}

std::vector<AtomId> AtomStore::extensions(AtomId w) {
  check_lazy(level(w) + 1);
  check_budget(count_extensions(w), "extensions");
  std::vector<std::vector<ChoiceId>> lists;
  for (int j = 0; j < sig_.agents; ++j) lists.push_back(valid_choices(w, j));
  std::vector<AtomId> out;
  std::vector<std::size_t> odo(sig_.agents, 0);
  std::vector<ChoiceId> pick(sig_.agents);
  while (true) {
    for (int j = 0; j < sig_.agents; ++j) pick[j] = lists[j][odo[j]];
    out.push_back(extend_ids(w, pick));
    int j = 0;
    for (; j < sig_.agents; ++j) {
      if (++odo[j] < lists[j].size()) break;
      odo[j] = 0;
    }
    if (j == sig_.agents) break;
  }
  return out;
}

KripkeStructure AtomStore::structure_on(const std::vector<AtomId>& atoms) const {
  if (atoms.empty()) throw PreconditionError("structure on an empty atom set");
  const int lvl = level(atoms[0]);
  std::vector<std::uint64_t> val;
  std::vector<Partition> parts(sig_.agents);
  for (AtomId a : atoms) {
    if (level(a) != lvl) throw PreconditionError("structure on atoms of mixed levels");
    val.push_back(valuation(a));
    for (int j = 0; j < sig_.agents; ++j)
      parts[j].push_back(lvl == 0 ? 0 : static_cast<int>(choice_id(a, j)));
  }
  return KripkeStructure(sig_.props, std::move(val), std::move(parts));
}

const KripkeStructure& AtomStore::level_structure(int i) {
  auto& slot = level_cache_[i];
  if (!slot.structure) {
    slot.structure = std::make_unique<KripkeStructure>(structure_on(omega_level(i)));
    slot.evaluator = std::make_unique<Evaluator>(*slot.structure);
  }
  return *slot.structure;
}

std::vector<AtomId> AtomStore::alpha_on_level(int i, const Formula& f) {
  check_vocabulary(f, sig_);
  if (f.depth() > i)
    throw PreconditionError("formula of depth " + std::to_string(f.depth()) +
                            " cannot be evaluated on level " + std::to_string(i));
  const auto& atoms = omega_level(i);
  level_structure(i);
  const TruthSet& t = level_cache_[i].evaluator->alpha(f);
  std::vector<AtomId> out;
  for (int s : to_indices(t)) out.push_back(atoms[s]);
  return out;
}

bool AtomStore::holds(AtomId v, const Formula& f) {
  const int d = f.depth();
  if (d > level(v))
    throw PreconditionError("formula of depth " + std::to_string(d) +
                            " cannot be evaluated at a level-" + std::to_string(level(v)) + " atom");
  const AtomId x = project(v, d);
  {
    auto it = local_memo_.find(f);
    if (it != local_memo_.end()) {
      auto jt = it->second.find(x);
      if (jt != it->second.end()) return jt->second;
    }
  }
  bool r = false;
  switch (f.kind()) {
    case Formula::Kind::Prop:
      if (f.index() >= sig_.props) throw InputError("proposition outside vocabulary");
      r = (valuation(x) >> f.index()) & 1U;
      break;
    case Formula::Kind::Not:
      r = !holds(x, f.child());
      break;
    case Formula::Kind::And:
      r = holds(x, f.child(0)) && holds(x, f.child(1));
      break;
    case Formula::Kind::Know: {
      if (f.index() >= sig_.agents) throw InputError("agent outside roster");
      r = true;
      for (AtomId u : choices(x, f.index()))
        if (!holds(u, f.child())) {
          r = false;
          break;
        }
      break;
    }
  }
  local_memo_[f][x] = r;
  return r;
}

Formula AtomStore::characteristic_formula(AtomId w) {
  if (w >= atoms_.size()) throw InputError("unknown atom");
  if (char_memo_.size() <= w) char_memo_.resize(atoms_.size());
  if (char_memo_[w]) return *char_memo_[w];
  std::vector<Formula> parts;
  if (level(w) == 0) {
    for (int q = 0; q < sig_.props; ++q) {
      Formula p = Formula::prop(q);
      parts.push_back((valuation(w) >> q & 1U) ? p : Formula::negate(p));
    }
  } else {
    parts.push_back(characteristic_formula(base(w)));
    for (int j = 0; j < sig_.agents; ++j) {
      std::vector<Formula> members;
      for (AtomId u : choices(w, j)) {
        Formula fu = characteristic_formula(u);
        members.push_back(fu);
        parts.push_back(Formula::negate(Formula::know(j, Formula::negate(fu))));
      }
      parts.push_back(Formula::know(j, disjunction(members)));
    }
  }
  Formula out = conjunction(parts);
  if (char_memo_.size() <= w) char_memo_.resize(atoms_.size());
  char_memo_[w] = out;
  return out;
}

bool AtomStore::is_tautology(const Formula& f) {
  const int d = f.depth();
  return alpha_on_level(d, f).size() == omega_level(d).size();
}

AtomStore::Census AtomStore::connectivity_census(int i) {
  Census c;
  if (i == 0) {
    c.atoms = omega_count(0);
    c.block_nodes = 1;
    c.connected = true;
    return c;
  }
  const auto prev = omega_level(i - 1);
  std::map<std::pair<int, ChoiceId>, std::size_t> node;
  for (AtomId w : prev)
    for (int j = 0; j < sig_.agents; ++j)
      for (ChoiceId m : valid_choices(w, j)) node.emplace(std::make_pair(j, m), node.size());
  boost::disjoint_sets_with_storage<> uf(node.size());
  for (AtomId w : prev) {
    c.atoms = sat_add(c.atoms, count_extensions(w));
    if (sig_.agents < 2) continue;
    // Every combination of choices occurs as an atom, so the atoms over w
    // join all of these nodes.
    const std::size_t anchor = node.at({0, valid_choices(w, 0).front()});
    for (int j = 0; j < sig_.agents; ++j)
      for (ChoiceId m : valid_choices(w, j)) uf.union_set(anchor, node.at({j, m}));
  }
  c.block_nodes = node.size();
  std::size_t roots = 0;
  for (std::size_t n = 0; n < node.size(); ++n)
    if (uf.find_set(n) == n) ++roots;
  c.connected = roots == 1;
  return c;
}

std::vector<std::vector<AtomId>> theory_levels(AtomStore& store, const KripkeStructure& k, int i) {
  if (i < 0) throw InputError("negative level");
  if (k.num_props() != store.signature().props || k.num_agents() != store.signature().agents)
    throw InputError("structure signature differs from the store signature");
  if (i > store.caps().lazy_level)
    throw CapExceeded("theory map level " + std::to_string(i) + " exceeds the lazy level cap");
  std::vector<std::vector<AtomId>> out(1);
  for (std::size_t s = 0; s < k.size(); ++s) out[0].push_back(store.level0(k.valuation(s)));
  for (int l = 0; l < i; ++l) {
    const auto& cur = out.back();
    std::vector<std::vector<std::vector<AtomId>>> per_block(k.num_agents());
    for (int j = 0; j < k.num_agents(); ++j) {
      per_block[j].resize(k.num_blocks(j));
      for (std::size_t b = 0; b < k.num_blocks(j); ++b)
        for (int t : k.block_members(j, static_cast<int>(b))) per_block[j][b].push_back(cur[t]);
    }
    std::vector<AtomId> next(k.size());
    for (std::size_t s = 0; s < k.size(); ++s) {
      std::vector<std::vector<AtomId>> sets(k.num_agents());
      for (int j = 0; j < k.num_agents(); ++j) sets[j] = per_block[j][k.block_of(j, s)];
      next[s] = store.extend(cur[s], sets);
    }
    out.push_back(std::move(next));
  }
  return out;
}

std::vector<AtomId> theory_map(AtomStore& store, const KripkeStructure& k, int i) {
  return theory_levels(store, k, i).back();
}

AtomId theory_map(AtomStore& store, const KripkeStructure& k, std::size_t point, int i) {
  if (point >= k.size()) throw InputError("point index out of range");
  return theory_map(store, k, i)[point];
}

std::string describe(const AtomStore& store, AtomId a) {
  std::ostringstream out;
  out << "L" << store.level(a) << "#" << a << "(val=" << store.valuation(a);
  if (store.level(a) > 0) {
    out << ", base=" << store.base(a) << ", M=[";
    for (int j = 0; j < store.signature().agents; ++j) {
      out << (j ? ",[" : "[");
      const auto& m = store.choices(a, j);
      for (std::size_t x = 0; x < m.size(); ++x) out << (x ? "," : "") << m[x];
      out << "]";
    }
    out << "]";
  }
  out << ")";
  return out.str();
}

}  // namespace s5
