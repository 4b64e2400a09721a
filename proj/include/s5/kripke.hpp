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

#ifndef S5_KRIPKE_HPP
#define S5_KRIPKE_HPP

#include <boost/dynamic_bitset.hpp>

#include <cstddef>
#include <cstdint>
#include <optional>
#include <unordered_map>
#include <vector>

#include "s5/formula.hpp"

namespace s5 {

using TruthSet = boost::dynamic_bitset<>;
using Partition = std::vector<int>;  // point -> class id

/// A finite multi-agent S5 structure. Each agent's partition is stored as a
/// point-to-block array; block ids are renumbered densely in order of first
/// occurrence so that equal partitions have equal arrays.
class KripkeStructure {
 public:
  KripkeStructure(int num_props, std::vector<std::uint64_t> valuation,
                  std::vector<Partition> partitions);

  std::size_t size() const { return valuation_.size(); }
  int num_props() const { return num_props_; }
  int num_agents() const { return static_cast<int>(blocks_of_.size()); }
  Signature signature() const { return {num_props_, num_agents()}; }

  std::uint64_t valuation(std::size_t point) const { return valuation_[point]; }
  bool holds(std::size_t point, int prop) const { return (valuation_[point] >> prop) & 1U; }

  int block_of(int agent, std::size_t point) const { return blocks_of_[agent][point]; }
  const Partition& partition(int agent) const { return blocks_of_[agent]; }
  std::size_t num_blocks(int agent) const { return members_[agent].size(); }
  const std::vector<int>& block_members(int agent, int block) const {
    return members_[agent][block];
  }
  const std::vector<int>& block_containing(int agent, std::size_t point) const {
    return members_[agent][blocks_of_[agent][point]];
  }

  bool operator==(const KripkeStructure& other) const {
    return num_props_ == other.num_props_ && valuation_ == other.valuation_ &&
           blocks_of_ == other.blocks_of_;
  }

 private:
  int num_props_;
  std::vector<std::uint64_t> valuation_;
  std::vector<Partition> blocks_of_;
  std::vector<std::vector<std::vector<int>>> members_;
};

/// Truth-set evaluation with a per-session memo keyed by formula structure.
/// Not thread safe; use one evaluator per thread.
class Evaluator {
 public:
  explicit Evaluator(const KripkeStructure& k) : k_(k) {}
  const TruthSet& alpha(const Formula& f);
  bool holds(std::size_t point, const Formula& f) { return alpha(f).test(point); }
  std::size_t memo_size() const { return memo_.size(); }

 private:
  const KripkeStructure& k_;
  std::unordered_map<Formula, TruthSet> memo_;
};

TruthSet alpha(const KripkeStructure& k, const Formula& f);

/// Meet of all agent partitions, as sorted classes ordered by smallest member.
std::vector<std::vector<int>> cells(const KripkeStructure& k);
Partition cell_ids(const KripkeStructure& k);
bool is_connected(const KripkeStructure& k);

/// BFS distances from one point; nullopt marks unreachable points.
std::vector<std::optional<std::size_t>> distances_from(const KripkeStructure& k,
                                                       std::size_t source);
std::optional<std::size_t> adjacency_distance(const KripkeStructure& k, std::size_t s,
                                              std::size_t t);
/// Maximum pairwise distance; nullopt when disconnected.
std::optional<std::size_t> diameter(const KripkeStructure& k);
/// Minimum eccentricity; nullopt when disconnected.
std::optional<std::size_t> radius(const KripkeStructure& k);

/// Substructure on the given points, in the given order. Point i of the result
/// is points[i] of the input.
KripkeStructure restrict(const KripkeStructure& k, const std::vector<int>& points);
KripkeStructure restrict(const KripkeStructure& k, const TruthSet& points);

/// R_0 groups by valuation; R_{i+1} additionally separates points whose
/// blocks meet different R_i classes. Returns R_0 .. R_s where R_s is the
/// first class assignment equal to its successor.
std::vector<Partition> refine(const KripkeStructure& k);
std::size_t num_classes(const Partition& p);

/// Points whose whole cell lies inside alpha(k, f).
TruthSet common_knowledge_points(const KripkeStructure& k, const Formula& f);

std::vector<int> to_indices(const TruthSet& s);

}  // namespace s5

#endif  // S5_KRIPKE_HPP
