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

#include "s5/fanout.hpp"

#include <algorithm>
#include <deque>
#include <set>

#include "s5/error.hpp"

namespace s5::alien {

namespace {

bool member(const std::vector<AtomId>& sorted, AtomId a) {
  return std::binary_search(sorted.begin(), sorted.end(), a);
}

bool meets(const std::vector<AtomId>& x, const std::vector<AtomId>& sorted) {
  return std::any_of(x.begin(), x.end(), [&](AtomId a) { return member(sorted, a); });
}

std::vector<AtomId> sorted_unique(std::vector<AtomId> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

std::vector<AtomId> merged(const std::vector<AtomId>& a, const std::vector<AtomId>& b) {
  std::vector<AtomId> out;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

AtomId gamma_of(const FanoutLevel& lvl, AtomId src) {
  auto it = std::lower_bound(lvl.gamma.begin(), lvl.gamma.end(), std::pair<AtomId, AtomId>{src, 0});
  return it != lvl.gamma.end() && it->first == src ? it->second : kNoAtom;
}

std::string atom_str(AtomId a) { return "#" + std::to_string(a); }

}  // namespace

const FanoutLevel* FanoutState::at(int level) const {
  for (const auto& l : levels)
    if (l.level == level) return &l;
  return nullptr;
}

FanoutState fanout_build(CkSystem& sys, const Schedule& s, const Schedule& t, int level_cap,
                         bool relaxed, std::optional<std::size_t> w0_rank) {
  auto& store = sys.store();
  const int agents = store.signature().agents;
  if (agents < 2) throw PreconditionError("the fanout construction needs at least two agents");
  const auto gl = sys.gen_level(store.caps().lazy_level);
  if (!gl.level) throw PreconditionError("formula is not generative within the cap: " + gl.reason);
  if (s.first() != t.first()) throw PreconditionError("inf T must equal inf S");
  for (auto m : t.members_upto(static_cast<std::uint64_t>(level_cap)))
    if (!s.contains(m)) throw PreconditionError("T is not a subset of S at " + std::to_string(m));

  FanoutState st;
  st.s_text = s.to_string();
  st.t_text = t.to_string();
  st.relaxed = relaxed;
  st.gen = *gl.level;
  st.conditions = check_schedule_conditions(s, sys, level_cap);
  if (!relaxed && !st.conditions.all_pass())
    throw PreconditionError("schedule conditions do not all pass within the cap; use relaxed mode");

  const int t0 = static_cast<int>(t.first());
  const int src_level = st.gen + 2;
  if (t0 < src_level)
    throw PreconditionError("inf T = " + std::to_string(t0) + " is below gen(f)+2 = " +
                            std::to_string(src_level));
  if (level_cap < t0) throw InputError("level cap below inf T");
  st.origin_level = t0;

  const auto& src = sys.level(src_level);
  if (w0_rank) {
    if (*w0_rank >= src.size()) throw InputError("w0 rank out of range");
    st.w0_source = src[*w0_rank];
    st.w0_mode = "given";
  } else {
    // all agents generative, else no singleton possibility set and not a
    // cut point of the origin level, else no singleton, else the first atom
    const auto lift = [&](AtomId v) {
      for (int k = src_level; k < t0; ++k) v = sys.least_info_extension(v);
      return v;
    };
    const KripkeStructure* origin = nullptr;
    try {
      origin = &sys.structure(t0);
    } catch (const CapExceeded&) {
    }
    const auto keeps_connected = [&](AtomId w) {
      if (!origin) return true;
      TruthSet rest(origin->size());
      rest.set();
      rest.reset(*sys.rank(w));
      return rest.none() || is_connected(restrict(*origin, rest));
    };
    static const char* const modes[] = {"first-atom", "no-singleton-block", "no-singleton-block-not-cut",
                                        "generative-all-agents"};
    st.w0_source = src.front();
    int best = 0;
    for (AtomId v : src) {
      bool all = true, wide = true;
      for (int j = 0; j < agents; ++j) {
        all = all && sys.classify_atom(v, j) == BlockClass::Generative;
        wide = wide && sys.block(v, j).size() >= 2;
      }
      const int score = all ? 3 : (wide ? (keeps_connected(lift(v)) ? 2 : 1) : 0);
      if (score > best) {
        best = score;
        st.w0_source = v;
        if (all) break;
      }
    }
    st.w0_mode = modes[best];
  }
  AtomId w0 = st.w0_source;
  for (int k = src_level; k < t0; ++k) w0 = sys.least_info_extension(w0);
  st.w0 = w0;
  st.levels.push_back({t0, true, {}, {w0}, {}});

  for (int i = t0 + 1; i <= level_cap; ++i) {
    const FanoutLevel& prev = st.levels.back();
    const auto both = merged(prev.a, prev.b);
    FanoutLevel cur;
    cur.level = i;
    cur.in_t = t.contains(static_cast<std::uint64_t>(i));
    std::vector<std::vector<AtomId>> choices(agents);
    for (AtomId w : both) {
      const bool in_a = member(prev.a, w);
      for (int j = 0; j < agents; ++j) {
        const auto& f = sys.block(w, j);
        choices[j].clear();
        if (in_a || meets(f, prev.a)) {
          for (AtomId u : f)
            if (member(both, u)) choices[j].push_back(u);
        } else {
          choices[j] = f;
        }
      }
      const std::string why = store.validate_extension(w, choices);
      if (!why.empty()) {
        st.counterexample = "level " + std::to_string(i) + ": gamma of " + atom_str(w) + " invalid: " + why;
        return st;
      }
      cur.gamma.emplace_back(w, store.extend(w, choices));
      ++st.gamma_checked;
    }
    if (cur.in_t) {
      for (const auto& g : cur.gamma) cur.a.push_back(g.second);
      std::vector<AtomId> boundary;
      for (AtomId b : prev.b)
        for (int j = 0; j < agents; ++j) {
          const auto& f = sys.block(b, j);
          if (meets(f, prev.a)) continue;
          for (AtomId u : f)
            if (!member(both, u)) boundary.push_back(u);
        }
      for (AtomId u : sorted_unique(std::move(boundary))) cur.b.push_back(sys.least_info_extension(u));
    } else {
      for (const auto& g : cur.gamma) (member(prev.a, g.first) ? cur.a : cur.b).push_back(g.second);
    }
    cur.a = sorted_unique(std::move(cur.a));
    cur.b = sorted_unique(std::move(cur.b));
    std::vector<AtomId> common;
    std::set_intersection(cur.a.begin(), cur.a.end(), cur.b.begin(), cur.b.end(),
                          std::back_inserter(common));
    if (!common.empty())
      st.notes.push_back("level " + std::to_string(i) + ": " + std::to_string(common.size()) +
                         " atoms in both A and B");
    st.levels.push_back(std::move(cur));
  }
  return st;
}

namespace {

std::optional<const KripkeStructure*> try_structure(CkSystem& sys, int i) {
  try {
    return &sys.structure(i);
  } catch (const CapExceeded&) {
    return std::nullopt;
  }
}

std::vector<std::size_t> ranks_of(CkSystem& sys, const std::vector<AtomId>& atoms) {
  std::vector<std::size_t> out;
  for (AtomId a : atoms) out.push_back(*sys.rank(a));
  return out;
}

// Multi-source BFS restricted to allowed points; unreachable stays SIZE_MAX.
std::vector<std::size_t> bfs(const KripkeStructure& k, const std::vector<std::size_t>& sources,
                             const TruthSet& allowed) {
  std::vector<std::size_t> dist(k.size(), SIZE_MAX);
  std::deque<std::size_t> q;
  for (auto s : sources)
    if (allowed[s] && dist[s] == SIZE_MAX) {
      dist[s] = 0;
      q.push_back(s);
    }
  while (!q.empty()) {
    const auto x = q.front();
    q.pop_front();
    for (int j = 0; j < k.num_agents(); ++j)
      for (auto y : k.block_members(j, k.block_of(j, x)))
        if (allowed[y] && dist[y] == SIZE_MAX) {
          dist[y] = dist[x] + 1;
          q.push_back(y);
        }
  }
  return dist;
}

std::vector<int> t_levels(const FanoutState& st) {
  std::vector<int> out;
  for (const auto& l : st.levels)
    if (l.in_t) out.push_back(l.level);
  return out;
}

}  // namespace

FanoutReport fanout_checks(CkSystem& sys, const FanoutState& st) {
  auto& store = sys.store();
  const int agents = store.signature().agents;
  FanoutReport rep;
  rep.validity = st.counterexample ? Verdict::Fail
                                   : (st.gamma_checked > 0 ? Verdict::Pass : Verdict::Unknown);
  const auto tl = t_levels(st);
  const auto next_t = [&](int i) -> std::optional<int> {
    auto it = std::upper_bound(tl.begin(), tl.end(), i);
    if (it == tl.end()) return std::nullopt;
    return *it;
  };

  // The lineage gamma_i(w0).
  std::map<int, AtomId> center;
  center[st.origin_level] = st.w0;
  for (std::size_t k = 1; k < st.levels.size(); ++k) {
    const AtomId c = gamma_of(st.levels[k], center[st.levels[k - 1].level]);
    if (c == kNoAtom) break;
    center[st.levels[k].level] = c;
  }

  for (const auto& lvl : st.levels) {
    const int i = lvl.level;
    {
      std::vector<AtomId> common;
      std::set_intersection(lvl.a.begin(), lvl.a.end(), lvl.b.begin(), lvl.b.end(),
                            std::back_inserter(common));
      rep.disjoint.push_back({i, common.empty() ? Verdict::Pass : Verdict::Fail,
                              std::to_string(common.size()) + " shared atoms"});
    }

    if (i > st.origin_level) {
      int k = -1;
      for (int x : tl)
        if (x <= i) k = x;
      const FanoutLevel* before = st.at(k - 1);
      std::size_t pairs = 0, bad = 0;
      std::string first_bad;
      for (int j = 0; j < agents; ++j) {
        std::map<ChoiceId, std::vector<AtomId>> a_by_block;
        for (AtomId a : lvl.a) a_by_block[store.choice_id(a, j)].push_back(a);
        for (AtomId b : lvl.b) {
          auto it = a_by_block.find(store.choice_id(b, j));
          if (it == a_by_block.end()) continue;
          for (AtomId a : it->second) {
            ++pairs;
            bool ok = before != nullptr;
            if (ok) {
              const AtomId bp = store.project(a, k - 1);
              ok = member(before->b, bp) && !meets(sys.block(bp, j), before->a);
            }
            if (!ok) {
              if (bad++ == 0)
                first_bad = " first: a=" + atom_str(a) + " b=" + atom_str(b) + " agent " + std::to_string(j);
            }
          }
        }
      }
      rep.lemma5.push_back({i, bad ? Verdict::Fail : Verdict::Pass,
                            std::to_string(pairs) + " adjacent A/B pairs, " + std::to_string(bad) +
                                " violations" + first_bad});
    }

    const auto ks = try_structure(sys, i);
    if (!ks) {
      rep.lemma6.push_back({i, Verdict::Unknown, "level beyond cap"});
      rep.growth.push_back({i, Verdict::Unknown, "level beyond cap"});
      if (lvl.in_t) rep.lemma7.push_back({i, Verdict::Unknown, "level beyond cap"});
      continue;
    }
    const KripkeStructure& k = **ks;
    TruthSet outside_b(k.size());
    outside_b.set();
    for (auto r : ranks_of(sys, lvl.b)) outside_b.reset(r);
    if (outside_b.none()) {
      rep.lemma6.push_back({i, Verdict::Pass, "B covers the level"});
    } else {
      const bool conn = is_connected(restrict(k, outside_b));
      rep.lemma6.push_back({i, conn ? Verdict::Pass : Verdict::Fail,
                            std::to_string(outside_b.count()) + " atoms outside B"});
    }

    // pi_i(B_{n_T(i)}) when that level was built.
    std::vector<AtomId> shadow;
    const auto n1 = next_t(i);
    const FanoutLevel* up = n1 ? st.at(*n1) : nullptr;
    if (up)
      for (AtomId b : up->b) shadow.push_back(store.project(b, i));
    shadow = sorted_unique(std::move(shadow));

    {
      const std::size_t m = static_cast<std::size_t>(
          std::count_if(tl.begin(), tl.end(), [&](int x) { return x >= 1 && x <= i; }));
      auto c = center.find(i);
      if (c == center.end()) {
        rep.growth.push_back({i, Verdict::Unknown, "lineage of w0 not built"});
      } else {
        TruthSet all(k.size());
        all.set();
        const auto dist = bfs(k, {*sys.rank(c->second)}, all);
        std::size_t worst = 0;
        for (const std::vector<AtomId>* set : {&lvl.b, static_cast<const std::vector<AtomId>*>(&shadow)})
          for (auto r : ranks_of(sys, *set)) worst = std::max(worst, dist[r]);
        rep.growth.push_back({i, worst <= m ? Verdict::Pass : Verdict::Fail,
                              "max distance " + (worst == SIZE_MAX ? std::string("inf") : std::to_string(worst)) +
                                  ", bound " + std::to_string(m) + (up ? "" : ", next T level not built")});
      }
    }

    if (lvl.in_t) {
      if (!up || shadow.empty()) {
        rep.lemma7.push_back({i, Verdict::Unknown, up ? "empty shadow of the next B" : "next T level not built"});
      } else {
        const auto dist = bfs(k, ranks_of(sys, shadow), outside_b);
        std::size_t held = 0, violated = 0, unresolved = 0;
        const auto& atoms = sys.level(i);
        for (std::size_t r = 0; r < atoms.size(); ++r) {
          if (dist[r] == SIZE_MAX || dist[r] == 0) continue;
          // walk l = 1..k over n_T^{l+1}(i)
          bool found = false, beyond = false;
          int lv = *n1;
          AtomId ext = atoms[r];
          int cur = i;
          for (std::size_t l = 1; l <= dist[r] && !found; ++l) {
            const auto nx = next_t(lv);
            if (!nx || !st.at(*nx)) {
              beyond = true;
              break;
            }
            lv = *nx;
            while (cur < lv) {
              ext = sys.least_info_extension(ext);
              ++cur;
            }
            found = member(st.at(lv)->b, ext);
          }
          if (found)
            ++held;
          else if (beyond)
            ++unresolved;
          else
            ++violated;
        }
        Verdict v = violated ? Verdict::Fail : (held ? Verdict::Pass : Verdict::Unknown);
        rep.lemma7.push_back({i, v,
                              std::to_string(held) + " escaped, " + std::to_string(violated) +
                                  " trapped, " + std::to_string(unresolved) + " unresolved at horizon"});
      }
    }
  }

  try {
    std::set<AtomId> reached;
    for (const auto& lvl : st.levels)
      for (AtomId a : lvl.a) reached.insert(store.project(a, st.origin_level));
    for (AtomId w : sys.level(st.origin_level))
      (reached.count(w) ? rep.density_resolved : rep.density_unresolved) += 1;
  } catch (const CapExceeded&) {
  }

  for (const auto& lvl : st.levels) {
    if (!lvl.in_t || lvl.level == st.origin_level) continue;
    std::size_t best = 0;
    for (int j = 0; j < agents; ++j) {
      std::map<ChoiceId, std::size_t> count;
      for (AtomId a : lvl.a) best = std::max(best, ++count[store.choice_id(a, j)]);
    }
    rep.block_sizes.emplace_back(lvl.level, best);
  }
  if (rep.block_sizes.size() >= 2) {
    bool inc = true;
    for (std::size_t x = 1; x < rep.block_sizes.size(); ++x)
      inc &= rep.block_sizes[x].second > rep.block_sizes[x - 1].second;
    rep.block_sizes_increase = inc ? Verdict::Pass : Verdict::Fail;
  }
  return rep;
}

KripkeStructure prefix_structure(CkSystem& sys, const FanoutState& st, int level) {
  const FanoutLevel* lvl = st.at(level);
  if (!lvl) throw InputError("level " + std::to_string(level) + " was not built");
  return sys.store().structure_on(merged(lvl->a, lvl->b));
}

}  // namespace s5::alien
