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

#ifndef S5_CK_HPP
#define S5_CK_HPP

#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "s5/canonical.hpp"

namespace s5 {

enum class Closure { Closed, NotClosed, Empty };
enum class BlockClass { Neither, ProtoGenerative, Generative };

const char* to_string(Closure c);
const char* to_string(BlockClass c);

struct GenLevel {
  std::optional<int> level;
  std::string reason;  // set when level is empty: "uniquely extending", "empty", "cap"
  int scanned_to = -1;
};

struct Generativity {
  enum class Value { Generative, NotGenerative, Unknown };
  Value value = Value::Unknown;
  std::string reason;
  std::string provenance;  // "proven-necessity" or "assumed-sufficiency"; empty when unknown
};
const char* to_string(Generativity::Value v);

/// The common-knowledge view of one formula f of depth d: the restricted
/// levels Omega^f_i (i >= d) with their restricted blocks, closure and
/// generativity classification. Levels are built on demand and cached;
/// level d comes from full evaluation on Omega_d, later levels from
/// restricted extensions, so they reach beyond the full-enumeration cap.
class CkSystem {
 public:
  CkSystem(AtomStore& store, Formula f);

  AtomStore& store() { return store_; }
  const Formula& formula() const { return f_; }
  int depth() const { return d_; }

  Closure closure();
  bool semantically_closed() { return closure() == Closure::Closed; }
  /// Largest semantically closed subset of alpha(f) on Omega_d, found by
  /// repeatedly discarding atoms whose restricted block misses a fiber.
  /// Common knowledge of f is consistent exactly when it is nonempty.
  std::vector<AtomId> closed_core();
  bool ck_nonempty() { return !closed_core().empty(); }
  /// Restriction of Omega_d to alpha(f) is connected. Requires closure.
  bool has_dense_cell();

  /// Omega^f_i in canonical order.
  const std::vector<AtomId>& level(int i);
  std::uint64_t level_size(int i) { return level(i).size(); }
  bool contains(AtomId w);
  std::optional<std::size_t> rank(AtomId w);
  /// The member of the restricted j-partition containing w, sorted by id.
  const std::vector<AtomId>& block(AtomId w, int agent);
  /// Restricted blocks of level i for one agent, in order of first member.
  std::vector<std::vector<AtomId>> blocks(int i, int agent);
  const KripkeStructure& structure(int i);

  std::uint64_t count_restricted_extensions(AtomId w);
  std::vector<AtomId> restricted_extensions(AtomId w);
  /// p^f_{i+1}(w): every M^j is the full restricted block of w.
  AtomId least_info_extension(AtomId w);

  /// Groups the block by level-(i-1) fiber (a single fiber at level 0).
  BlockClass classify_block(int i, const std::vector<AtomId>& block);
  BlockClass classify_atom(AtomId w, int agent);

  GenLevel gen_level(int cap);
  Generativity is_generative(int cap);

 private:
  struct Level {
    std::vector<AtomId> atoms;
    std::unordered_map<AtomId, std::size_t> rank;
    std::vector<std::map<ChoiceId, std::vector<AtomId>>> blocks;  // per agent
    std::unique_ptr<KripkeStructure> structure;
  };
  void require_member(AtomId w, const char* what);
  Level& level_data(int i);
  void install(int i, std::vector<AtomId> atoms);

  AtomStore& store_;
  Formula f_;
  int d_;
  std::optional<Closure> closure_;
  std::map<int, Level> levels_;
};

struct CkImplication {
  bool shown = false;
  int level = -1;      // the witnessing exponent when shown
  int checked_to = -1; // highest exponent tested
};

/// Bounded search for i <= i_cap with E^i f -> g a tautology. Stops early
/// when the needed depth exceeds the full-enumeration cap.
CkImplication ck_implies(AtomStore& store, const Formula& f, const Formula& g, int i_cap);

}  // namespace s5

#endif  // S5_CK_HPP
