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

#include "s5/ck.hpp"

#include <algorithm>

#include "s5/error.hpp"

namespace s5 {

const char* to_string(Closure c) {
  switch (c) {
    case Closure::Closed:
      return "closed";
    case Closure::NotClosed:
      return "not-closed";
    case Closure::Empty:
      return "empty";
  }
  return "?";
}

const char* to_string(BlockClass c) {
  switch (c) {
    case BlockClass::Neither:
      return "neither";
    case BlockClass::ProtoGenerative:
      return "proto-generative";
    case BlockClass::Generative:
      return "generative";
  }
  return "?";
}

const char* to_string(Generativity::Value v) {
  switch (v) {
    case Generativity::Value::Generative:
      return "generative";
    case Generativity::Value::NotGenerative:
      return "not-generative";
    case Generativity::Value::Unknown:
      return "unknown";
  }
  return "?";
}

CkSystem::CkSystem(AtomStore& store, Formula f) : store_(store), f_(std::move(f)), d_(f_.depth()) {
  check_vocabulary(f_, store_.signature());
}

void CkSystem::install(int i, std::vector<AtomId> atoms) {
  Level lv;
  lv.atoms = std::move(atoms);
  lv.blocks.resize(store_.signature().agents);
  for (std::size_t r = 0; r < lv.atoms.size(); ++r) {
    AtomId a = lv.atoms[r];
    lv.rank[a] = r;
    for (int j = 0; j < store_.signature().agents; ++j)
      lv.blocks[j][i == 0 ? 0 : store_.choice_id(a, j)].push_back(a);
  }
  for (auto& per_agent : lv.blocks)
    for (auto& [key, mem] : per_agent) std::sort(mem.begin(), mem.end());
  levels_[i] = std::move(lv);
}

CkSystem::Level& CkSystem::level_data(int i) {
  if (i < d_)
    throw PreconditionError("restricted levels start at the depth " + std::to_string(d_));
  if (auto it = levels_.find(i); it != levels_.end()) return it->second;
  if (i == d_) {
    install(i, store_.alpha_on_level(d_, f_));
    return levels_.at(i);
  }
  const auto prev = level_data(i - 1).atoms;
  std::uint64_t total = 0;
  for (AtomId w : prev) {
    const std::uint64_t c = count_restricted_extensions(w);
    total = total > UINT64_MAX - c ? UINT64_MAX : total + c;
  }
  store_.check_budget(total, ("restricted level " + std::to_string(i)).c_str());
  const auto& prank = levels_.at(i - 1).rank;
  std::vector<std::pair<std::vector<std::uint64_t>, AtomId>> keyed;
  for (AtomId w : prev)
    for (AtomId v : restricted_extensions(w)) {
      std::vector<std::uint64_t> key{prank.at(w)};
      for (int j = 0; j < store_.signature().agents; ++j) {
        std::vector<std::uint64_t> rs;
        for (AtomId u : store_.choices(v, j)) rs.push_back(prank.at(u));
        std::sort(rs.begin(), rs.end());
        key.push_back(rs.size());
        key.insert(key.end(), rs.begin(), rs.end());
      }
      keyed.emplace_back(std::move(key), v);
    }
  std::sort(keyed.begin(), keyed.end());
  std::vector<AtomId> atoms;
  atoms.reserve(keyed.size());
  for (auto& [key, v] : keyed) atoms.push_back(v);
  install(i, std::move(atoms));
  return levels_.at(i);
}

const std::vector<AtomId>& CkSystem::level(int i) { return level_data(i).atoms; }

bool CkSystem::contains(AtomId w) { return rank(w).has_value(); }

std::optional<std::size_t> CkSystem::rank(AtomId w) {
  const int i = store_.level(w);
  if (i < d_) return std::nullopt;
  const auto& r = level_data(i).rank;
  if (auto it = r.find(w); it != r.end()) return it->second;
  return std::nullopt;
}

void CkSystem::require_member(AtomId w, const char* what) {
  if (!contains(w))
    throw PreconditionError(std::string(what) + ": atom " + std::to_string(w) +
                            " is not in the restricted level");
}

const std::vector<AtomId>& CkSystem::block(AtomId w, int agent) {
  require_member(w, "block");
  const int i = store_.level(w);
  return level_data(i).blocks.at(agent).at(i == 0 ? 0 : store_.choice_id(w, agent));
}

std::vector<std::vector<AtomId>> CkSystem::blocks(int i, int agent) {
  std::vector<std::vector<AtomId>> out;
  for (const auto& [key, mem] : level_data(i).blocks.at(agent)) out.push_back(mem);
  std::sort(out.begin(), out.end());
  return out;
}

const KripkeStructure& CkSystem::structure(int i) {
  auto& lv = level_data(i);
  if (lv.atoms.empty()) throw PreconditionError("restricted level is empty");
  if (!lv.structure) lv.structure = std::make_unique<KripkeStructure>(store_.structure_on(lv.atoms));
  return *lv.structure;
}

Closure CkSystem::closure() {
  if (closure_) return *closure_;
  const auto& a = level(d_);
  if (a.empty()) {
    closure_ = Closure::Empty;
  } else if (d_ == 0) {
    closure_ = Closure::Closed;
  } else {
    closure_ = Closure::Closed;
    for (AtomId w : a)
      for (int j = 0; j < store_.signature().agents && *closure_ == Closure::Closed; ++j) {
        std::vector<AtomId> bases;
        for (AtomId u : block(w, j)) bases.push_back(store_.base(u));
        std::sort(bases.begin(), bases.end());
        bases.erase(std::unique(bases.begin(), bases.end()), bases.end());
        if (bases != store_.choices(w, j)) closure_ = Closure::NotClosed;
      }
  }
  return *closure_;
}

std::vector<AtomId> CkSystem::closed_core() {
  std::vector<AtomId> cur = level(d_);
  if (d_ == 0) return cur;
  const int agents = store_.signature().agents;
  while (true) {
    std::vector<AtomId> next;
    for (AtomId w : cur) {
      bool keep = true;
      for (int j = 0; j < agents && keep; ++j) {
        std::vector<AtomId> bases;
        for (AtomId u : cur)
          if (store_.choice_id(u, j) == store_.choice_id(w, j)) bases.push_back(store_.base(u));
        std::sort(bases.begin(), bases.end());
        bases.erase(std::unique(bases.begin(), bases.end()), bases.end());
        keep = bases == store_.choices(w, j);
      }
      if (keep) next.push_back(w);
    }
    if (next.size() == cur.size()) return cur;
    cur = std::move(next);
  }
}

bool CkSystem::has_dense_cell() {
  if (!semantically_closed())
    throw PreconditionError("dense-cell test needs a semantically closed formula");
  return is_connected(structure(d_));
}

std::uint64_t CkSystem::count_restricted_extensions(AtomId w) {
  require_member(w, "restricted extension");
  std::uint64_t n = 1;
  for (int j = 0; j < store_.signature().agents; ++j) {
    std::uint64_t c = store_.count_valid_subsets(w, j, block(w, j));
    n = (c != 0 && n > UINT64_MAX / c) ? UINT64_MAX : n * c;
  }
  return n;
}

std::vector<AtomId> CkSystem::restricted_extensions(AtomId w) {
  store_.check_budget(count_restricted_extensions(w), "restricted extensions");
  const int agents = store_.signature().agents;
  std::vector<std::vector<ChoiceId>> lists(agents);
  for (int j = 0; j < agents; ++j) lists[j] = store_.valid_subsets(w, j, block(w, j));
  std::vector<AtomId> out;
  for (const auto& l : lists)
    if (l.empty()) return out;
  std::vector<std::size_t> odo(agents, 0);
  std::vector<ChoiceId> pick(agents);
  while (true) {
    for (int j = 0; j < agents; ++j) pick[j] = lists[j][odo[j]];
    out.push_back(store_.extend_ids(w, pick));
    int j = 0;
    for (; j < agents; ++j) {
      if (++odo[j] < lists[j].size()) break;
      odo[j] = 0;
    }
    if (j == agents) break;
  }
  return out;
}

AtomId CkSystem::least_info_extension(AtomId w) {
  require_member(w, "least-information extension");
  std::vector<std::vector<AtomId>> sets;
  for (int j = 0; j < store_.signature().agents; ++j) sets.push_back(block(w, j));
  return store_.extend(w, sets);
}

BlockClass CkSystem::classify_block(int i, const std::vector<AtomId>& blk) {
  if (blk.empty()) throw PreconditionError("empty block");
  for (AtomId a : blk)
    if (store_.level(a) != i || !contains(a))
      throw PreconditionError("block is not inside the restricted level");
  std::map<AtomId, std::size_t> fibers;
  for (AtomId a : blk) ++fibers[i == 0 ? 0 : store_.base(a)];
  bool some = false, all = true;
  for (const auto& [v, n] : fibers) {
    some |= n >= 2;
    all &= n >= 2;
  }
  if (all) return BlockClass::Generative;
  return some ? BlockClass::ProtoGenerative : BlockClass::Neither;
}

BlockClass CkSystem::classify_atom(AtomId w, int agent) {
  return classify_block(store_.level(w), block(w, agent));
}

GenLevel CkSystem::gen_level(int cap) {
  const int agents = store_.signature().agents;
  if (agents < 2) throw PreconditionError("generativity needs at least two agents");
  GenLevel out;
  if (d_ > store_.caps().full_level) {
    out.reason = "cap";
    return out;
  }
  if (closure() != Closure::Closed) {
    out.reason = closure() == Closure::Empty ? "empty" : "not semantically closed";
    return out;
  }
  for (int i = d_; i <= cap; ++i) {
    const std::vector<AtomId>* atoms = nullptr;
    try {
      atoms = &level(i);
    } catch (const CapExceeded&) {
      out.reason = "cap";
      return out;
    }
    out.scanned_to = i;
    if (atoms->empty()) {
      out.reason = "empty";
      return out;
    }
    if (i == d_) {
      bool any_proto = false;
      for (int j = 0; j < agents && !any_proto; ++j)
        for (const auto& b : blocks(i, j))
          if (classify_block(i, b) != BlockClass::Neither) {
            any_proto = true;
            break;
          }
      if (!any_proto) {
        out.reason = "uniquely extending";
        return out;
      }
    }
    bool ok = true;
    for (AtomId w : *atoms) {
      int gen_agents = 0;
      for (int j = 0; j < agents; ++j)
        if (classify_atom(w, j) == BlockClass::Generative) ++gen_agents;
      if (agents >= 3 ? gen_agents < agents : gen_agents == 0) {
        ok = false;
        break;
      }
    }
    if (ok) {
      out.level = i;
      return out;
    }
  }
  out.reason = "cap";
  return out;
}

Generativity CkSystem::is_generative(int cap) {
  Generativity g;
  const auto no = [&](const char* why) {
    g.value = Generativity::Value::NotGenerative;
    g.reason = why;
    g.provenance = "proven-necessity";
    return g;
  };
  if (store_.signature().agents < 2) return no("fewer than two agents");
  if (d_ > cap || d_ > store_.caps().full_level) {
    g.reason = "depth exceeds cap";
    return g;
  }
  switch (closure()) {
    case Closure::Empty:
      return no("empty");
    case Closure::NotClosed:
      return no("not semantically closed");
    case Closure::Closed:
      break;
  }
  if (!has_dense_cell()) return no("not connected");
  for (int j = 0; j < store_.signature().agents; ++j)
    for (const auto& b : blocks(d_, j))
      if (classify_block(d_, b) != BlockClass::Neither) {
        g.value = Generativity::Value::Generative;
        g.provenance = "assumed-sufficiency";
        return g;
      }
  return no("unique extension");
}

CkImplication ck_implies(AtomStore& store, const Formula& f, const Formula& g, int i_cap) {
  CkImplication out;
  const int agents = store.signature().agents;
  for (int i = 0; i <= i_cap; ++i) {
    const Formula claim = implies(e_power(f, i, agents), g);
    if (claim.depth() > store.caps().full_level) break;
    out.checked_to = i;
    if (store.is_tautology(claim)) {
      out.shown = true;
      out.level = i;
      return out;
    }
  }
  return out;
}

}  // namespace s5
