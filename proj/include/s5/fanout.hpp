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

#ifndef S5_FANOUT_HPP
#define S5_FANOUT_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "s5/cells.hpp"

namespace s5::alien {

struct FanoutLevel {
  int level = 0;
  bool in_t = false;
  std::vector<AtomId> a;  // sorted
  std::vector<AtomId> b;  // sorted
  // gamma from level-1 atoms of A u B to this level, sorted by source
  std::vector<std::pair<AtomId, AtomId>> gamma;
};

struct FanoutState {
  std::string s_text;
  std::string t_text;
  bool relaxed = true;
  int gen = -1;
  int origin_level = -1;
  AtomId w0_source = kNoAtom;  // atom of Omega^f_{gen+2}
  std::string w0_mode;         // how w0_source was picked
  AtomId w0 = kNoAtom;
  ScheduleConditions conditions;
  std::vector<FanoutLevel> levels;  // origin_level, origin_level+1, ...
  std::size_t gamma_checked = 0;
  std::optional<std::string> counterexample;  // set when an extension was invalid
  std::vector<std::string> notes;             // configurations left unresolved

  const FanoutLevel* at(int level) const;
  int top_level() const { return levels.empty() ? -1 : levels.back().level; }
};

/// Builds A_i, B_i and gamma_i for origin_level <= i <= level_cap. Strict
/// mode refuses to run unless all four schedule conditions pass within
/// the cap; relaxed mode records them and proceeds.
///
/// w0 is grown from an atom of Omega^f_{gen+2}: the one at w0_rank when
/// given, otherwise the first atom generative for every agent, else the
/// first with no singleton possibility set whose lift is not a cut point
/// of the origin level, else the first with no singleton, else the first.
FanoutState fanout_build(CkSystem& sys, const Schedule& s, const Schedule& t, int level_cap,
                         bool relaxed, std::optional<std::size_t> w0_rank = std::nullopt);

struct LevelCheck {
  int level = 0;
  Verdict verdict = Verdict::Unknown;
  std::string detail;
};

struct FanoutReport {
  Verdict validity = Verdict::Unknown;
  std::vector<LevelCheck> lemma5;    // adjacency traces to an A-free B ancestor
  std::vector<LevelCheck> lemma6;    // Omega^f_i minus B_i connected
  std::vector<LevelCheck> lemma7;    // escape at the next-next T level
  std::vector<LevelCheck> growth;    // B_i and pi(B_{n_T(i)}) near gamma_i(w0)
  std::vector<LevelCheck> disjoint;  // A_i and B_i disjoint
  // density proxy over the atoms of Omega^f at the origin level
  std::size_t density_resolved = 0;
  std::size_t density_unresolved = 0;
  // largest number of A-atoms sharing one block, per T level
  std::vector<std::pair<int, std::size_t>> block_sizes;
  Verdict block_sizes_increase = Verdict::Unknown;
};

FanoutReport fanout_checks(CkSystem& sys, const FanoutState& state);

/// The built cell prefix at one level as a Kripke structure on A_i u B_i.
KripkeStructure prefix_structure(CkSystem& sys, const FanoutState& state, int level);

}  // namespace s5::alien

#endif  // S5_FANOUT_HPP
