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

#ifndef S5_THIRD_AGENT_HPP
#define S5_THIRD_AGENT_HPP

#include <optional>
#include <vector>

#include "s5/canonical.hpp"

namespace s5::alien {

/// Omega_level of the store's two-agent signature plus a third partition
/// separating atoms by the set of stages i in 1..level at which the atom's
/// level-i projection is a no-information extension. Points follow
/// omega_level(level).
KripkeStructure third_agent_structure(AtomStore& store, int level);

/// Stage mask of one atom: bit i-1 set iff project(w, i) = p_i(project(w, i-1)).
std::uint64_t no_information_stages(AtomStore& store, AtomId w);

struct GoodSubsetReport {
  bool good = true;
  std::size_t blocks_met = 0;
  // first failure: agent, a member of the block, and a fiber the set misses
  std::optional<int> agent;
  AtomId block_member = kNoAtom;
  AtomId missed_fiber = kNoAtom;
};

/// Finite surrogate of goodness at one level: every possibility set of
/// Omega_level that meets A meets it in every fiber over level-1.
/// At level 0 blocks are all of Omega_0 and fibers are single atoms.
GoodSubsetReport good_subset_check(AtomStore& store, int level, const std::vector<AtomId>& a);

}  // namespace s5::alien

#endif  // S5_THIRD_AGENT_HPP
