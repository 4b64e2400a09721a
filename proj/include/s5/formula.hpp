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

#ifndef S5_FORMULA_HPP
#define S5_FORMULA_HPP

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace s5 {

/// The fixed vocabulary of a workspace: |X| primitive propositions and |J|
/// agents, both indexed densely from zero.
struct Signature {
  int props = 1;
  int agents = 2;

  bool operator==(const Signature&) const = default;
};

void validate_signature(const Signature& sig);

/// An immutable formula over the core connectives (proposition, negation,
/// conjunction, knowledge). Derived connectives are expanded on construction.
///
/// Copies share structure. Equality and hashing are structural; the hash is
/// computed once per node.
class Formula {
 public:
  enum class Kind : std::uint8_t { Prop, Not, And, Know };

  static Formula prop(int index);
  static Formula negate(Formula f);
  static Formula conj(Formula lhs, Formula rhs);
  static Formula know(int agent, Formula f);

  Kind kind() const { return node_->kind; }
  /// Proposition index for Prop, agent index for Know, -1 otherwise.
  int index() const { return node_->index; }
  const Formula& child(std::size_t i = 0) const { return node_->children[i]; }
  int depth() const { return node_->depth; }
  std::size_t hash() const { return node_->hash; }
  /// Identity of the underlying node; stable while any copy is alive.
  const void* id() const { return node_.get(); }

  friend bool operator==(const Formula& a, const Formula& b);
  friend bool operator!=(const Formula& a, const Formula& b) { return !(a == b); }

 private:
  struct Node {
    Kind kind;
    int index;
    int depth;
    std::size_t hash;
    std::vector<Formula> children;
  };
  explicit Formula(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  static Formula make(Kind kind, int index, std::vector<Formula> children);

  std::shared_ptr<const Node> node_;
};

// Derived connectives. All of them expand to the core four.
Formula disj(Formula lhs, Formula rhs);     // !(!a & !b)
Formula implies(Formula lhs, Formula rhs);  // !(a & !b)
Formula iff(Formula lhs, Formula rhs);
/// The tautology p0 | !p0.
Formula top();
/// !top().
Formula bottom();
/// Left-folded conjunction; top() when empty.
Formula conjunction(std::span<const Formula> fs);
/// !(conjunction of negations); a single element is returned unchanged,
/// bottom() when empty.
Formula disjunction(std::span<const Formula> fs);
/// Everybody knows: K0 f & K1 f & ... over all agents.
Formula everybody_knows(const Formula& f, int num_agents);
/// E^n f, with E^0 f = f.
Formula e_power(const Formula& f, int n, int num_agents);

int depth(const Formula& f);
/// Number of nodes of the tree (shared subtrees counted per occurrence).
std::size_t tree_size(const Formula& f);

/// Throws InputError if f mentions a proposition or agent outside sig.
void check_vocabulary(const Formula& f, const Signature& sig);

/// Grammar, loosest to tightest:
///   f  := d ['->' f]          (right associative)
///   d  := c {'|' c}
///   c  := u {'&' u}
///   u  := '!' u | 'K'<n> u | 'E' u | 'p'<n> | '(' f ')'
/// Throws ParseError carrying the byte offset of the problem.
Formula parse(std::string_view text, const Signature& sig);

/// Prints the core form with minimal parentheses; parse(render(f)) == f.
std::string render(const Formula& f);

}  // namespace s5

template <>
struct std::hash<s5::Formula> {
  std::size_t operator()(const s5::Formula& f) const noexcept { return f.hash(); }
};

#endif  // S5_FORMULA_HPP
