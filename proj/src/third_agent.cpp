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

#include "s5/third_agent.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "s5/error.hpp"

namespace s5::alien {

namespace {

AtomId no_information(AtomStore& store, AtomId v) {
  std::vector<std::vector<AtomId>> m;
  for (int j = 0; j < store.signature().agents; ++j) m.push_back(store.possibility_set(v, j));
  return store.extend(v, m);
}

}  // namespace

std::uint64_t no_information_stages(AtomStore& store, AtomId w) {
  const int level = store.level(w);
  if (level > 63) throw CapExceeded("stage mask limited to 63 levels");
  std::uint64_t mask = 0;
  for (int i = 1; i <= level; ++i)
    if (store.project(w, i) == no_information(store, store.project(w, i - 1)))
      mask |= std::uint64_t{1} << (i - 1);
  return mask;
}

KripkeStructure third_agent_structure(AtomStore& store, int level) {
  if (store.signature().agents != 2)
    throw PreconditionError("the third-agent structure extends a two-agent signature");
  const auto& atoms = store.omega_level(level);
  const KripkeStructure& base = store.level_structure(level);
  std::vector<Partition> parts;
  for (int j = 0; j < 2; ++j) parts.push_back(base.partition(j));
  std::map<std::uint64_t, int> ids;
  Partition third;
  for (AtomId w : atoms) {
    auto [it, fresh] = ids.emplace(no_information_stages(store, w), static_cast<int>(ids.size()));
    third.push_back(it->second);
  }
  parts.push_back(std::move(third));
  std::vector<std::uint64_t> val;
  for (std::size_t p = 0; p < base.size(); ++p) val.push_back(base.valuation(p));
  return KripkeStructure(base.num_props(), std::move(val), std::move(parts));
}

GoodSubsetReport good_subset_check(AtomStore& store, int level, const std::vector<AtomId>& a) {
  GoodSubsetReport rep;
  if (a.empty()) return rep;
  for (AtomId x : a)
    if (store.level(x) != level) throw InputError("atom outside the requested level");
  std::vector<AtomId> members(a.begin(), a.end());
  std::sort(members.begin(), members.end());
  const auto in_a = [&](AtomId x) { return std::binary_search(members.begin(), members.end(), x); };
  const int agents = store.signature().agents;
  for (int j = 0; j < agents; ++j) {
    std::set<std::vector<AtomId>> seen;
    for (AtomId x : members) {
      const auto& block = store.possibility_set(x, j);
      if (!seen.insert(block).second) continue;
      ++rep.blocks_met;
      std::map<AtomId, bool> fiber_met;  // fiber key -> met by A
      for (AtomId u : block) {
        const AtomId key = level == 0 ? u : store.base(u);
        fiber_met[key] = fiber_met[key] || in_a(u);
      }
      for (const auto& [key, met] : fiber_met)
        if (!met && rep.good) {
          rep.good = false;
          rep.agent = j;
          rep.block_member = x;
          rep.missed_fiber = key;
        }
    }
  }
  return rep;
}

}  // namespace s5::alien
