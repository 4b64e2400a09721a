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

#ifndef S5_SCHEDULE_HPP
#define S5_SCHEDULE_HPP

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace s5::alien {

/// An infinite (or, for tests, finite) increasing set of levels, stored as
/// an explicit prefix plus a rule generating the tail.
///
/// Text form "prefix:rule", e.g. "0,5,11:+gap". Rules:
///   +k    arithmetic, step k
///   +gap  each gap one larger than the previous one
///   *k    geometric, factor k
///   pow2  next power of two
///   (empty) the set is exactly the prefix
/// A whole schedule may also be "beta(<inner text>)" or "all" (every natural).
class Schedule {
 public:
  enum class Rule { Finite, Step, Gap, Factor, Pow2 };

  static Schedule parse(std::string_view text);
  static Schedule naturals();
  static Schedule finite(std::vector<std::uint64_t> members);
  static Schedule with_rule(std::vector<std::uint64_t> prefix, Rule rule, std::uint64_t k = 0);
  /// {0,1,2,4,8,...} together with 2^i+1 .. 2^{i+1}-1 for every i in inner.
  static Schedule beta(const Schedule& inner);

  bool is_finite() const;
  std::uint64_t first() const;
  bool contains(std::uint64_t n) const;
  /// n_S(i): least member strictly above i. Throws CapExceeded when a finite
  /// schedule has no such member or the value would overflow.
  std::uint64_t next(std::uint64_t i) const;
  std::uint64_t next_pow(std::uint64_t i, int times) const;
  /// Members <= horizon, increasing.
  std::vector<std::uint64_t> members_upto(std::uint64_t horizon) const;
  std::string to_string() const;

 private:
  Schedule() = default;
  std::uint64_t tail_after(std::uint64_t last, std::uint64_t prev_gap) const;

  std::vector<std::uint64_t> prefix_;
  Rule rule_ = Rule::Finite;
  std::uint64_t k_ = 0;
  std::shared_ptr<const Schedule> beta_of_;
};

}  // namespace s5::alien

#endif  // S5_SCHEDULE_HPP
