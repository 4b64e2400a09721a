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

#include "s5/formula.hpp"

#include <boost/container_hash/hash.hpp>

#include <cctype>
#include <string>

#include "s5/error.hpp"

namespace s5 {

void validate_signature(const Signature& sig) {
  if (sig.props < 1 || sig.props > 16)
    throw InputError("number of propositions must be in [1, 16]");
  if (sig.agents < 1 || sig.agents > 8)
    throw InputError("number of agents must be in [1, 8]");
}

Formula Formula::make(Kind kind, int index, std::vector<Formula> children) {
  int d = 0;
  std::size_t h = static_cast<std::size_t>(kind);
  boost::hash_combine(h, index);
  for (const auto& c : children) {
    d = std::max(d, c.depth());
    boost::hash_combine(h, c.hash());
  }
  if (kind == Kind::Know) ++d;
  auto node = std::make_shared<const Node>(Node{kind, index, d, h, std::move(children)});
  return Formula(std::move(node));
}

Formula Formula::prop(int index) {
  if (index < 0) throw InputError("negative proposition index");
  return make(Kind::Prop, index, {});
}

Formula Formula::negate(Formula f) { return make(Kind::Not, -1, {std::move(f)}); }

Formula Formula::conj(Formula lhs, Formula rhs) {
  return make(Kind::And, -1, {std::move(lhs), std::move(rhs)});
}

Formula Formula::know(int agent, Formula f) {
  if (agent < 0) throw InputError("negative agent index");
  return make(Kind::Know, agent, {std::move(f)});
}

bool operator==(const Formula& a, const Formula& b) {
  if (a.node_ == b.node_) return true;
  if (a.node_->hash != b.node_->hash || a.node_->kind != b.node_->kind ||
      a.node_->index != b.node_->index || a.node_->depth != b.node_->depth)
    return false;
  const auto& ca = a.node_->children;
  const auto& cb = b.node_->children;
  for (std::size_t i = 0; i < ca.size(); ++i)
    if (!(ca[i] == cb[i])) return false;
  return true;
}

Formula disj(Formula lhs, Formula rhs) {
  return Formula::negate(
      Formula::conj(Formula::negate(std::move(lhs)), Formula::negate(std::move(rhs))));
}

Formula implies(Formula lhs, Formula rhs) {
  return Formula::negate(Formula::conj(std::move(lhs), Formula::negate(std::move(rhs))));
}

Formula iff(Formula lhs, Formula rhs) { return Formula::conj(implies(lhs, rhs), implies(rhs, lhs)); }

Formula top() {
  static const Formula t = disj(Formula::prop(0), Formula::negate(Formula::prop(0)));
  return t;
}

Formula bottom() {
  static const Formula b = Formula::negate(top());
  return b;
}

Formula conjunction(std::span<const Formula> fs) {
  if (fs.empty()) return top();
  Formula acc = fs[0];
  for (std::size_t i = 1; i < fs.size(); ++i) acc = Formula::conj(acc, fs[i]);
  return acc;
}

Formula disjunction(std::span<const Formula> fs) {
  if (fs.empty()) return bottom();
  if (fs.size() == 1) return fs[0];
  std::vector<Formula> negs;
  negs.reserve(fs.size());
  for (const auto& f : fs) negs.push_back(Formula::negate(f));
  return Formula::negate(conjunction(negs));
}

Formula everybody_knows(const Formula& f, int num_agents) {
  if (num_agents < 1) throw InputError("everybody-knows needs at least one agent");
  Formula acc = Formula::know(0, f);
  for (int j = 1; j < num_agents; ++j) acc = Formula::conj(acc, Formula::know(j, f));
  return acc;
}

Formula e_power(const Formula& f, int n, int num_agents) {
  if (n < 0) throw InputError("negative exponent");
  Formula acc = f;
  for (int k = 0; k < n; ++k) acc = everybody_knows(acc, num_agents);
  return acc;
}

int depth(const Formula& f) { return f.depth(); }

std::size_t tree_size(const Formula& f) {
  std::size_t n = 1;
  switch (f.kind()) {
    case Formula::Kind::Prop:
      break;
    case Formula::Kind::Not:
    case Formula::Kind::Know:
      n += tree_size(f.child());
      break;
    case Formula::Kind::And:
      n += tree_size(f.child(0)) + tree_size(f.child(1));
      break;
  }
  return n;
}

void check_vocabulary(const Formula& f, const Signature& sig) {
  switch (f.kind()) {
    case Formula::Kind::Prop:
      if (f.index() >= sig.props)
        throw InputError("proposition p" + std::to_string(f.index()) + " outside vocabulary");
      return;
    case Formula::Kind::Know:
      if (f.index() >= sig.agents)
        throw InputError("agent K" + std::to_string(f.index()) + " outside roster");
      check_vocabulary(f.child(), sig);
      return;
    case Formula::Kind::Not:
      check_vocabulary(f.child(), sig);
      return;
    case Formula::Kind::And:
      check_vocabulary(f.child(0), sig);
      check_vocabulary(f.child(1), sig);
      return;
  }
}

namespace {

class Parser {
 public:
  Parser(std::string_view text, const Signature& sig) : text_(text), sig_(sig) {}

  Formula run() {
    Formula f = implication();
    skip_ws();
    if (pos_ != text_.size()) {
      if (text_[pos_] == ')') throw ParseError(pos_, "unbalanced ')'");
      throw ParseError(pos_, "unexpected character '" + std::string(1, text_[pos_]) + "'");
    }
    return f;
  }

 private:
  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(std::string_view tok) {
    skip_ws();
    if (text_.substr(pos_, tok.size()) == tok) {
      pos_ += tok.size();
      return true;
    }
    return false;
  }

  int number(const char* what) {
    std::size_t start = pos_;
    long value = 0;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
      value = value * 10 + (text_[pos_] - '0');
      if (value > 1'000'000) throw ParseError(start, std::string(what) + " index too large");
      ++pos_;
    }
    if (pos_ == start) throw ParseError(start, std::string("expected ") + what + " index");
    return static_cast<int>(value);
  }

  Formula implication() {
    Formula lhs = disjunct();
    if (accept("->")) return implies(lhs, implication());
    return lhs;
  }

  Formula disjunct() {
    Formula acc = conjunct();
    while (accept("|")) acc = disj(acc, conjunct());
    return acc;
  }

  Formula conjunct() {
    Formula acc = unary();
    while (accept("&")) acc = Formula::conj(acc, unary());
    return acc;
  }

  Formula unary() {
    skip_ws();
    if (pos_ >= text_.size()) throw ParseError(pos_, "unexpected end of input");
    std::size_t start = pos_;
    char c = text_[pos_];
    if (c == '!') {
      ++pos_;
      return Formula::negate(unary());
    }
    if (c == 'K') {
      ++pos_;
      int agent = number("agent");
      if (agent >= sig_.agents)
        throw ParseError(start, "unknown agent K" + std::to_string(agent));
      return Formula::know(agent, unary());
    }
    if (c == 'E') {
      ++pos_;
      return everybody_knows(unary(), sig_.agents);
    }
    if (c == 'p') {
      ++pos_;
      int prop = number("proposition");
      if (prop >= sig_.props)
        throw ParseError(start, "unknown proposition p" + std::to_string(prop));
      return Formula::prop(prop);
    }
    if (c == '(') {
      ++pos_;
      Formula inner = implication();
      if (!accept(")")) throw ParseError(start, "unbalanced '('");
      return inner;
    }
    throw ParseError(pos_, "unexpected character '" + std::string(1, c) + "'");
  }

  std::string_view text_;
  const Signature& sig_;
  std::size_t pos_ = 0;
};

void render_into(const Formula& f, std::string& out);

void render_operand(const Formula& f, std::string& out) {
  if (f.kind() == Formula::Kind::And) {
    out += '(';
    render_into(f, out);
    out += ')';
  } else {
    render_into(f, out);
  }
}

void render_into(const Formula& f, std::string& out) {
  switch (f.kind()) {
    case Formula::Kind::Prop:
      out += 'p';
      out += std::to_string(f.index());
      return;
    case Formula::Kind::Not:
      out += '!';
      render_operand(f.child(), out);
      return;
    case Formula::Kind::Know:
      out += 'K';
      out += std::to_string(f.index());
      out += ' ';
      render_operand(f.child(), out);
      return;
    case Formula::Kind::And:
      render_into(f.child(0), out);
      out += " & ";
      render_operand(f.child(1), out);
      return;
  }
}

}  // namespace

Formula parse(std::string_view text, const Signature& sig) {
  validate_signature(sig);
  return Parser(text, sig).run();
}

std::string render(const Formula& f) {
  std::string out;
  render_into(f, out);
  return out;
}

}  // namespace s5
