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

#ifndef S5_CELLS_HPP
#define S5_CELLS_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "s5/ck.hpp"
#include "s5/schedule.hpp"

namespace s5::alien {

enum class Verdict { Pass, Fail, Unknown };
const char* to_string(Verdict v);

struct AlienatedPath {
  AtomId origin = kNoAtom;
  std::vector<int> levels;     // schedule members visited, increasing
  std::vector<AtomId> atoms;   // atoms[k] lives on levels[k]
  AtomId at(int level) const;  // kNoAtom when the level was not visited
};

struct Lemma4Report {
  bool holds = true;
  int level = 0;
  std::size_t checked = 0;
  // Atoms of Omega^f_{i+1} (by rank) where some agent generative for the
  // atom still knows g at the least-information extension.
  std::vector<std::size_t> witness_mismatch;
  std::vector<std::size_t> failures;
};

struct Lemma2Sample {
  int early_level = 0;
  int late_level = 0;
  std::optional<std::size_t> early;
  std::optional<std::size_t> late;
  bool holds = false;
};

struct SeparationCandidate {
  std::string via;   // which schedule carries the Lemma 3 side: "T" or "S"
  int m = 0;
  int l = 0;
  bool e_l_g_on_lemma3_path = false;
  bool e_g_on_lemma4_path = true;
  bool certified = false;
  std::string skipped;  // nonempty when a cap prevented the check
};

struct SeparationReport {
  bool found = false;
  int lower_bound = 0;
  int m = -1;
  int l = 0;
  std::string via;
  int horizon = 0;
  std::vector<SeparationCandidate> candidates;
};

struct ConditionResult {
  Verdict verdict = Verdict::Unknown;
  std::string detail;
};

struct ScheduleConditions {
  ConditionResult c1, c2, c3, c4;
  bool all_pass() const;
};

/// Alienated extensions and the separation formulas g^f_i for one
/// semantically closed formula. Theory-map images phi^{Omega^f_i}_n are
/// computed once per (i, n) and shared.
class Alienation {
 public:
  explicit Alienation(CkSystem& sys);
  CkSystem& system() { return sys_; }

  /// Level-n theories of every point of the Omega^f_i structure, in the
  /// order of sys.level(i).
  const std::vector<AtomId>& image(int i, int n);
  AtomId theory_hop(AtomId w, int n);
  /// Hops i -> n_S(i) from w (level(w) in S) until the target level is
  /// passed or reached; target must itself be in S to be visited.
  AlienatedPath extend(const Schedule& s, AtomId w, int target);

  /// Disjunction of the characteristic formulas of image(i, i+1).
  Formula g_formula(int i);
  /// alpha of g over Omega^f_{i+1} is exactly image(i, i+1).
  bool g_exact(int i);

  bool lemma3_check(int i, int l);
  /// E^l g_i at every given atom (atoms of level >= i+l+1).
  bool lemma3_holds_on(const std::vector<AtomId>& atoms, int i, int l);
  /// Requires i >= gen(f); gen is computed up to the lazy cap.
  Lemma4Report lemma4_check(int i);

  Lemma2Sample lemma2_check(const Schedule& s, AtomId b, AtomId d, int late_level);

  SeparationReport separation_witness(const Schedule& s, const Schedule& t, AtomId w, int horizon);

  std::optional<int> gen_level();

 private:
  CkSystem& sys_;
  std::map<std::pair<int, int>, std::vector<AtomId>> images_;
  std::map<int, Formula> g_;
  std::optional<std::optional<int>> gen_;
};

ScheduleConditions check_schedule_conditions(const Schedule& s, CkSystem& sys, int horizon);

}  // namespace s5::alien

#endif  // S5_CELLS_HPP
