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

#ifndef S5_CANONICAL_HPP
#define S5_CANONICAL_HPP

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "s5/formula.hpp"
#include "s5/kripke.hpp"

namespace s5 {

using AtomId = std::uint32_t;
using ChoiceId = std::uint32_t;
inline constexpr AtomId kNoAtom = 0xffffffffU;

struct Caps {
  int full_level = 2;   // highest level that may be enumerated in full
  int lazy_level = 6;   // highest level reachable by per-atom operations
  std::uint64_t budget = 5'000'000;  // max atoms per enumeration and in the store
};

/// Hash-consed registry of atoms of the canonical finite models.
///
/// A level-0 atom is a valuation. A level-(i+1) atom is a level-i base w
/// together with one set M^j of level-i atoms per agent: the atoms agent j
/// considers possible. Every interned atom has passed validate_extension, so
/// equal atoms always share one id.
///
/// Two level-i atoms (i >= 1) lie in the same j-block exactly when their M^j
/// coincide; at level 0 each agent has the single block Omega_0.
///
/// The store is append-only but not synchronized. Share it read-only or
/// give each thread its own store.
class AtomStore {
 public:
  explicit AtomStore(Signature sig, Caps caps = {});

  const Signature& signature() const { return sig_; }
  const Caps& caps() const { return caps_; }
  std::size_t size() const { return atoms_.size(); }

  // --- construction -------------------------------------------------------
  AtomId level0(std::uint64_t valuation);
  /// Interns (base, M^0 .. M^{|J|-1}). Sets need not be sorted. Throws
  /// PreconditionError naming the violated condition when invalid.
  AtomId extend(AtomId base, const std::vector<std::vector<AtomId>>& choices);
  AtomId extend_ids(AtomId base, const std::vector<ChoiceId>& choices);
  /// Empty string when (base, choices) is a valid extension, else the reason.
  std::string validate_extension(AtomId base, const std::vector<std::vector<AtomId>>& choices) const;
  ChoiceId intern_choice(std::vector<AtomId> members);

  // --- access -------------------------------------------------------------
  int level(AtomId a) const { return atoms_.at(a).level; }
  AtomId base(AtomId a) const { return atoms_.at(a).base; }
  std::uint64_t valuation(AtomId a) const { return atoms_.at(a).val; }
  ChoiceId choice_id(AtomId a, int agent) const { return atoms_.at(a).choices.at(agent); }
  const std::vector<ChoiceId>& choice_ids(AtomId a) const { return atoms_.at(a).choices; }
  const std::vector<AtomId>& choices(AtomId a, int agent) const {
    return choice_sets_[choice_id(a, agent)];
  }
  const std::vector<AtomId>& choice_set(ChoiceId c) const { return choice_sets_.at(c); }
  /// Iterated base: project(a, level(a)) == a.
  AtomId project(AtomId a, int k) const;
  /// Position in the canonical order of omega_level(level(a)); requires the
  /// level to have been enumerated.
  std::optional<std::size_t> rank(AtomId a) const;

  // --- enumeration --------------------------------------------------------
  /// All atoms of Omega_i in canonical order (valuation at level 0, then by
  /// base rank and the ranks of each M^j).
  const std::vector<AtomId>& omega_level(int i);
  std::uint64_t omega_count(int i);
  /// Members of the j-block containing w, sorted by id.
  const std::vector<AtomId>& possibility_set(AtomId w, int agent);
  /// All valid M^j for extending w. Each returned set is a choice id.
  const std::vector<ChoiceId>& valid_choices(AtomId w, int agent);
  /// Same count as valid_choices(w, agent).size(), computed without
  /// enumerating; saturates at UINT64_MAX.
  std::uint64_t count_valid_choices(AtomId w, int agent);
  std::uint64_t count_extensions(AtomId w);
  std::vector<AtomId> extensions(AtomId w);
  /// Subsets M of `block` that contain w and meet every fiber of w's
  /// M^agent (at level 0: contain w). `block` must be sorted and lie inside
  /// w's agent-block.
  std::vector<ChoiceId> valid_subsets(AtomId w, int agent, const std::vector<AtomId>& block);
  std::uint64_t count_valid_subsets(AtomId w, int agent, const std::vector<AtomId>& block) const;

  // --- structures and evaluation -----------------------------------------
  /// Kripke structure on same-level atoms, point i = atoms[i], j-blocks by
  /// equality of M^j (one block at level 0), valuation from level 0.
  KripkeStructure structure_on(const std::vector<AtomId>& atoms) const;
  const KripkeStructure& level_structure(int i);
  /// Evaluation of f on the Omega_i structure; returns a sorted atom list in
  /// canonical order.
  std::vector<AtomId> alpha_on_level(int i, const Formula& f);
  /// Local evaluation: K_j g holds at v iff g holds at every member of
  /// M^j(v). Requires depth(f) <= level(v).
  bool holds(AtomId v, const Formula& f);
  Formula characteristic_formula(AtomId w);
  bool is_tautology(const Formula& f);

  /// Connectivity of Omega_i without materializing it: every atom of level i
  /// joins its (agent, M) block nodes in a union-find. Returns the number of
  /// atoms visited and whether one component remains.
  struct Census {
    std::uint64_t atoms = 0;
    std::uint64_t block_nodes = 0;
    bool connected = false;
  };
  Census connectivity_census(int i);

  void check_budget(std::uint64_t count, const char* what) const;

 private:
  struct Atom {
    int level;
    AtomId base;
    std::uint64_t val;
    std::vector<ChoiceId> choices;
  };
  struct VecHash {
    std::size_t operator()(const std::vector<std::uint32_t>& v) const noexcept;
  };
  struct LevelCache {
    std::unique_ptr<KripkeStructure> structure;
    std::unique_ptr<Evaluator> evaluator;
  };

  AtomId intern(Atom atom, std::vector<std::uint32_t> key);
  void check_lazy(int level) const;
  std::uint64_t fiber_count(AtomId u, int skip_agent);
  bool level_ranked(int i) const { return i < static_cast<int>(omega_.size()) && omega_done_[i]; }

  Signature sig_;
  Caps caps_;
  std::vector<Atom> atoms_;
  std::unordered_map<std::vector<std::uint32_t>, AtomId, VecHash> atom_index_;
  std::vector<std::vector<AtomId>> choice_sets_;
  std::unordered_map<std::vector<std::uint32_t>, ChoiceId, VecHash> choice_index_;

  std::vector<std::vector<AtomId>> omega_;
  std::vector<bool> omega_done_;
  std::unordered_map<AtomId, std::size_t> rank_;
  std::map<std::pair<int, std::uint64_t>, std::vector<AtomId>> blocks_;  // (agent, choice or -1 at level 0)
  std::map<std::pair<AtomId, int>, std::vector<ChoiceId>> valid_;
  std::map<std::pair<AtomId, int>, std::uint64_t> valid_count_;
  std::map<int, LevelCache> level_cache_;
  std::unordered_map<Formula, std::unordered_map<AtomId, bool>> local_memo_;
  std::vector<std::optional<Formula>> char_memo_;
};

/// phi^K_0 .. phi^K_i for every point of k: result[l][s] is the level-l atom
/// of point s. Every produced atom is validated on interning.
std::vector<std::vector<AtomId>> theory_levels(AtomStore& store, const KripkeStructure& k, int i);
std::vector<AtomId> theory_map(AtomStore& store, const KripkeStructure& k, int i);
AtomId theory_map(AtomStore& store, const KripkeStructure& k, std::size_t point, int i);

std::string describe(const AtomStore& store, AtomId a);

}  // namespace s5

#endif  // S5_CANONICAL_HPP
