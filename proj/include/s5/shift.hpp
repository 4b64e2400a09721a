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

#ifndef S5_SHIFT_HPP
#define S5_SHIFT_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "s5/kripke.hpp"

namespace s5::shift {

/// Points of a window of size 2n are bitmasks over Z/2n; bit k set means
/// the symbol at position k is 'a'.
using Word = std::uint32_t;

constexpr int kMaxHalfWidth = 6;

Word sigma(Word y, int n);  // (sigma y)^i = y^{-i}
Word tau(Word y, int n);    // (tau y)^i = y^{1-i}
Word flip0(Word y);         // switches the symbol at position 0
/// (shift y)^i = y^{i-1}
Word circular_shift(Word y, int n);

/// Agents: 0 sigma-orbits, 1 tau-orbits, 2 (optional) flip-orbits. One
/// proposition, true iff position 0 holds 'a'.
KripkeStructure build_shift_structure(int n, bool include_pi);

struct SeparationProfile {
  std::size_t points = 0;
  std::vector<std::size_t> fibers;      // distinct depth-d theories, d = 0..depth
  std::optional<int> separating_depth;  // first depth with one point per fiber
  int stabilization = 0;                // index of the last refine step
  std::size_t stable_classes = 0;
  std::optional<bool> refine_matches_theory;  // set when stabilization <= depth
};

SeparationProfile theory_separation_profile(const KripkeStructure& k, int depth);

}  // namespace s5::shift

#endif  // S5_SHIFT_HPP
