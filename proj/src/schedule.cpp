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

#include "s5/schedule.hpp"

#include <algorithm>
#include <charconv>
#include <limits>

#include "s5/error.hpp"

namespace s5::alien {

namespace {

constexpr std::uint64_t kLimit = std::uint64_t{1} << 62;

std::uint64_t to_number(std::string_view s, std::size_t offset) {
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty())
    throw ParseError(offset, "expected a natural number in schedule");
  return v;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
  while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
  return s;
}

bool is_pow2(std::uint64_t n) { return n != 0 && (n & (n - 1)) == 0; }

int floor_log2(std::uint64_t n) { return 63 - __builtin_clzll(n); }

}  // namespace

Schedule Schedule::naturals() { return with_rule({0}, Rule::Step, 1); }

Schedule Schedule::finite(std::vector<std::uint64_t> members) {
  return with_rule(std::move(members), Rule::Finite);
}

Schedule Schedule::with_rule(std::vector<std::uint64_t> prefix, Rule rule, std::uint64_t k) {
  if (prefix.empty() && rule != Rule::Finite)
    throw InputError("schedule prefix must be nonempty");
  for (std::size_t i = 1; i < prefix.size(); ++i)
    if (prefix[i] <= prefix[i - 1]) throw InputError("schedule prefix must be strictly increasing");
  if (!prefix.empty() && prefix.back() >= kLimit) throw CapExceeded("schedule horizon overflow");
  if ((rule == Rule::Step && k == 0) || (rule == Rule::Factor && k < 2))
    throw InputError("schedule rule parameter out of range");
  if (rule == Rule::Gap && prefix.size() < 2)
    throw InputError("'+gap' needs at least two prefix members");
  Schedule s;
  s.prefix_ = std::move(prefix);
  s.rule_ = rule;
  s.k_ = k;
  return s;
}

Schedule Schedule::beta(const Schedule& inner) {
  Schedule s;
  s.beta_of_ = std::make_shared<const Schedule>(inner);
  return s;
}

Schedule Schedule::parse(std::string_view text) {
  const std::string_view t = trim(text);
  if (t == "all") return naturals();
  if (t.empty() || t == "{}") return finite({});
  if (t.starts_with("beta(")) {
    if (!t.ends_with(")")) throw ParseError(text.size(), "unbalanced 'beta('");
    return beta(parse(t.substr(5, t.size() - 6)));
  }
  const auto colon = t.find(':');
  const std::string_view head = trim(t.substr(0, colon));
  const std::string_view rule =
      colon == std::string_view::npos ? std::string_view{} : trim(t.substr(colon + 1));
  std::vector<std::uint64_t> prefix;
  std::size_t pos = 0;
  while (pos <= head.size()) {
    auto comma = head.find(',', pos);
    if (comma == std::string_view::npos) comma = head.size();
    prefix.push_back(to_number(trim(head.substr(pos, comma - pos)), pos));
    pos = comma + 1;
  }
  const std::size_t rule_at = colon == std::string_view::npos ? t.size() : colon + 1;
  if (rule.empty()) return with_rule(std::move(prefix), Rule::Finite);
  if (rule == "+gap") return with_rule(std::move(prefix), Rule::Gap);
  if (rule == "pow2") return with_rule(std::move(prefix), Rule::Pow2);
  if (rule[0] == '+') return with_rule(std::move(prefix), Rule::Step, to_number(rule.substr(1), rule_at + 1));
  if (rule[0] == '*') return with_rule(std::move(prefix), Rule::Factor, to_number(rule.substr(1), rule_at + 1));
  throw ParseError(rule_at, "unknown schedule rule '" + std::string(rule) + "'");
}

bool Schedule::is_finite() const { return !beta_of_ && rule_ == Rule::Finite; }

std::uint64_t Schedule::first() const {
  if (beta_of_) return 0;
  if (prefix_.empty()) throw PreconditionError("empty schedule has no first member");
  return prefix_.front();
}

std::uint64_t Schedule::tail_after(std::uint64_t last, std::uint64_t prev_gap) const {
  std::uint64_t out = 0;
  switch (rule_) {
    case Rule::Finite:
      throw CapExceeded("schedule tail exhausted after " + std::to_string(last));
    case Rule::Step:
      out = last + k_;
      break;
    case Rule::Gap:
      out = last + prev_gap + 1;
      break;
    case Rule::Factor:
      out = std::max(last * k_, last + 1);
      break;
    case Rule::Pow2:
      out = last == 0 ? 1 : std::uint64_t{1} << (floor_log2(last) + 1);
      break;
  }
  if (out >= kLimit) throw CapExceeded("schedule horizon overflow");
  return out;
}

bool Schedule::contains(std::uint64_t n) const {
  if (beta_of_) {
    if (n <= 2 || is_pow2(n)) return true;
    return beta_of_->contains(static_cast<std::uint64_t>(floor_log2(n)));
  }
  if (prefix_.empty()) return false;
  if (n <= prefix_.back()) return std::binary_search(prefix_.begin(), prefix_.end(), n);
  if (rule_ == Rule::Finite) return false;
  const auto m = members_upto(n);
  return !m.empty() && m.back() == n;
}

std::uint64_t Schedule::next(std::uint64_t i) const {
  if (i >= kLimit) throw CapExceeded("schedule horizon overflow");
  if (beta_of_) {
    for (std::uint64_t n = i + 1;; ++n)
      if (contains(n)) return n;
  }
  if (auto it = std::upper_bound(prefix_.begin(), prefix_.end(), i); it != prefix_.end())
    return *it;
  if (rule_ == Rule::Finite) tail_after(i, 0);
  std::uint64_t last = prefix_.back();
  std::uint64_t gap = prefix_.size() >= 2 ? last - prefix_[prefix_.size() - 2] : 0;
  while (last <= i) {
    std::uint64_t nxt = tail_after(last, gap);
    gap = nxt - last;
    last = nxt;
  }
  return last;
}

std::uint64_t Schedule::next_pow(std::uint64_t i, int times) const {
  for (int t = 0; t < times; ++t) i = next(i);
  return i;
}

std::vector<std::uint64_t> Schedule::members_upto(std::uint64_t horizon) const {
  std::vector<std::uint64_t> out;
  if (beta_of_) {
    for (std::uint64_t n = 0; n <= horizon; ++n)
      if (contains(n)) out.push_back(n);
    return out;
  }
  for (auto v : prefix_)
    if (v <= horizon) out.push_back(v);
  if (rule_ == Rule::Finite || prefix_.back() > horizon) return out;
  std::uint64_t last = prefix_.back();
  std::uint64_t gap = prefix_.size() >= 2 ? last - prefix_[prefix_.size() - 2] : 0;
  while (true) {
    std::uint64_t nxt = tail_after(last, gap);
    if (nxt > horizon) break;
    out.push_back(nxt);
    gap = nxt - last;
    last = nxt;
  }
  return out;
}

std::string Schedule::to_string() const {
  if (beta_of_) return "beta(" + beta_of_->to_string() + ")";
  if (prefix_.empty()) return "{}";
  std::string out;
  for (std::size_t i = 0; i < prefix_.size(); ++i)
    out += (i ? "," : "") + std::to_string(prefix_[i]);
  switch (rule_) {
    case Rule::Finite:
      break;
    case Rule::Step:
      out += ":+" + std::to_string(k_);
      break;
    case Rule::Gap:
      out += ":+gap";
      break;
    case Rule::Factor:
      out += ":*" + std::to_string(k_);
      break;
    case Rule::Pow2:
      out += ":pow2";
      break;
  }
  return out;
}

}  // namespace s5::alien
