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

#include "s5/kripke.hpp"

#include <boost/pending/disjoint_sets.hpp>

#include <algorithm>
#include <deque>
#include <map>

#include "s5/error.hpp"

namespace s5 {

namespace {

Partition renumber(const std::vector<int>& raw) {
  std::unordered_map<int, int> ids;
  Partition out(raw.size());
  for (std::size_t i = 0; i < raw.size(); ++i) {
    auto [it, fresh] = ids.emplace(raw[i], static_cast<int>(ids.size()));
    out[i] = it->second;
  }
  return out;
}

}  // namespace

KripkeStructure::KripkeStructure(int num_props, std::vector<std::uint64_t> valuation,
                                 std::vector<Partition> partitions)
    : num_props_(num_props), valuation_(std::move(valuation)) {
  if (num_props < 1 || num_props > 64) throw InputError("num_props must be in [1, 64]");
  if (valuation_.empty()) throw InputError("a structure needs at least one point");
  if (partitions.empty()) throw InputError("a structure needs at least one agent");
  const std::uint64_t mask = num_props == 64 ? ~0ULL : ((1ULL << num_props) - 1);
  for (auto v : valuation_)
    if (v & ~mask) throw InputError("valuation mentions a proposition outside the vocabulary");
  for (auto& p : partitions) {
    if (p.size() != valuation_.size())
      throw InputError("partition length differs from point count");
    blocks_of_.push_back(renumber(p));
  }
  members_.resize(blocks_of_.size());
  for (std::size_t j = 0; j < blocks_of_.size(); ++j) {
    for (std::size_t s = 0; s < size(); ++s) {
      auto b = static_cast<std::size_t>(blocks_of_[j][s]);
      if (members_[j].size() <= b) members_[j].resize(b + 1);
      members_[j][b].push_back(static_cast<int>(s));
    }
  }
}

const TruthSet& Evaluator::alpha(const Formula& f) {
  if (auto it = memo_.find(f); it != memo_.end()) return it->second;
  const std::size_t n = k_.size();
  TruthSet out(n);
  switch (f.kind()) {
    case Formula::Kind::Prop:
      if (f.index() >= k_.num_props())
        throw InputError("proposition p" + std::to_string(f.index()) + " outside vocabulary");
      for (std::size_t s = 0; s < n; ++s) out[s] = k_.holds(s, f.index());
      break;
    case Formula::Kind::Not:
      out = alpha(f.child());
      out.flip();
      break;
    case Formula::Kind::And: {
      out = alpha(f.child(0));
      out &= alpha(f.child(1));
      break;
    }
    case Formula::Kind::Know: {
      const int j = f.index();
      if (j >= k_.num_agents())
        throw InputError("agent K" + std::to_string(j) + " outside roster");
      const TruthSet inner = alpha(f.child());
      for (std::size_t b = 0; b < k_.num_blocks(j); ++b) {
        const auto& mem = k_.block_members(j, static_cast<int>(b));
        bool all = std::all_of(mem.begin(), mem.end(), [&](int s) { return inner.test(s); });
        if (all)
          for (int s : mem) out.set(s);
      }
      break;
    }
  }
  return memo_.emplace(f, std::move(out)).first->second;
}

TruthSet alpha(const KripkeStructure& k, const Formula& f) {
  Evaluator ev(k);
  return ev.alpha(f);
}

Partition cell_ids(const KripkeStructure& k) {
  const std::size_t n = k.size();
  boost::disjoint_sets_with_storage<> uf(n);
  for (int j = 0; j < k.num_agents(); ++j)
    for (std::size_t b = 0; b < k.num_blocks(j); ++b) {
      const auto& mem = k.block_members(j, static_cast<int>(b));
      for (std::size_t m = 1; m < mem.size(); ++m) uf.union_set(mem[0], mem[m]);
    }
  std::vector<int> roots(n);
  for (std::size_t s = 0; s < n; ++s) roots[s] = static_cast<int>(uf.find_set(s));
  return renumber(roots);
}

std::vector<std::vector<int>> cells(const KripkeStructure& k) {
  Partition ids = cell_ids(k);
  std::vector<std::vector<int>> out(num_classes(ids));
  for (std::size_t s = 0; s < ids.size(); ++s) out[ids[s]].push_back(static_cast<int>(s));
  return out;
}

bool is_connected(const KripkeStructure& k) { return num_classes(cell_ids(k)) == 1; }

std::vector<std::optional<std::size_t>> distances_from(const KripkeStructure& k,
                                                       std::size_t source) {
  std::vector<std::optional<std::size_t>> dist(k.size());
  std::vector<std::vector<bool>> seen_block(k.num_agents());
  for (int j = 0; j < k.num_agents(); ++j) seen_block[j].assign(k.num_blocks(j), false);
  std::deque<std::size_t> queue{source};
  dist[source] = 0;
  while (!queue.empty()) {
    std::size_t s = queue.front();
    queue.pop_front();
    for (int j = 0; j < k.num_agents(); ++j) {
      int b = k.block_of(j, s);
      if (seen_block[j][b]) continue;
      seen_block[j][b] = true;
      for (int t : k.block_members(j, b))
        if (!dist[t]) {
          dist[t] = *dist[s] + 1;
          queue.push_back(t);
        }
    }
  }
  return dist;
}

std::optional<std::size_t> adjacency_distance(const KripkeStructure& k, std::size_t s,
                                              std::size_t t) {
  if (s >= k.size() || t >= k.size()) throw InputError("point index out of range");
  return distances_from(k, s)[t];
}

namespace {

std::optional<std::size_t> eccentricity(const KripkeStructure& k, std::size_t s) {
  std::size_t ecc = 0;
  for (const auto& d : distances_from(k, s)) {
    if (!d) return std::nullopt;
    ecc = std::max(ecc, *d);
  }
  return ecc;
}

}  // namespace

std::optional<std::size_t> diameter(const KripkeStructure& k) {
  std::size_t best = 0;
  for (std::size_t s = 0; s < k.size(); ++s) {
    auto e = eccentricity(k, s);
    if (!e) return std::nullopt;
    best = std::max(best, *e);
  }
  return best;
}

std::optional<std::size_t> radius(const KripkeStructure& k) {
  std::optional<std::size_t> best;
  for (std::size_t s = 0; s < k.size(); ++s) {
    auto e = eccentricity(k, s);
    if (!e) return std::nullopt;
    if (!best || *e < *best) best = e;
  }
  return best;
}

KripkeStructure restrict(const KripkeStructure& k, const std::vector<int>& points) {
  if (points.empty()) throw PreconditionError("restriction to an empty point set");
  std::vector<std::uint64_t> val;
  val.reserve(points.size());
  for (int s : points) {
    if (s < 0 || static_cast<std::size_t>(s) >= k.size())
      throw InputError("restriction point out of range");
    val.push_back(k.valuation(s));
  }
  std::vector<Partition> parts(k.num_agents());
  for (int j = 0; j < k.num_agents(); ++j)
    for (int s : points) parts[j].push_back(k.block_of(j, s));
  return KripkeStructure(k.num_props(), std::move(val), std::move(parts));
}

KripkeStructure restrict(const KripkeStructure& k, const TruthSet& points) {
  return restrict(k, to_indices(points));
}

std::size_t num_classes(const Partition& p) {
  int m = -1;
  for (int c : p) m = std::max(m, c);
  return static_cast<std::size_t>(m + 1);
}

std::vector<Partition> refine(const KripkeStructure& k) {
  const std::size_t n = k.size();
  std::vector<int> raw(n);
  for (std::size_t s = 0; s < n; ++s) raw[s] = static_cast<int>(k.valuation(s));
  std::vector<Partition> seq{renumber(raw)};
  while (true) {
    const Partition& cur = seq.back();
    // Per agent and block, the sorted set of current classes it meets.
    std::vector<std::vector<std::vector<int>>> seen(k.num_agents());
    for (int j = 0; j < k.num_agents(); ++j) {
      seen[j].resize(k.num_blocks(j));
      for (std::size_t b = 0; b < k.num_blocks(j); ++b) {
        auto& v = seen[j][b];
        for (int s : k.block_members(j, static_cast<int>(b))) v.push_back(cur[s]);
        std::sort(v.begin(), v.end());
        v.erase(std::unique(v.begin(), v.end()), v.end());
      }
    }
    std::map<std::vector<int>, int> ids;
    Partition next(n);
    for (std::size_t s = 0; s < n; ++s) {
      std::vector<int> key{cur[s]};
      for (int j = 0; j < k.num_agents(); ++j) {
        const auto& v = seen[j][k.block_of(j, s)];
        key.push_back(-1);
        key.insert(key.end(), v.begin(), v.end());
      }
      auto [it, fresh] = ids.emplace(std::move(key), static_cast<int>(ids.size()));
      next[s] = it->second;
    }
    next = renumber(next);
    if (next == cur) break;
    seq.push_back(std::move(next));
  }
  return seq;
}

TruthSet common_knowledge_points(const KripkeStructure& k, const Formula& f) {
  const TruthSet a = alpha(k, f);
  TruthSet out(k.size());
  for (const auto& cell : cells(k)) {
    bool all = std::all_of(cell.begin(), cell.end(), [&](int s) { return a.test(s); });
    if (all)
      for (int s : cell) out.set(s);
  }
  return out;
}

std::vector<int> to_indices(const TruthSet& s) {
  std::vector<int> out;
  for (auto i = s.find_first(); i != TruthSet::npos; i = s.find_next(i))
    out.push_back(static_cast<int>(i));
  return out;
}

}  // namespace s5
