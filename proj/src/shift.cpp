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

#include "s5/shift.hpp"

#include <map>
#include <set>

#include "s5/canonical.hpp"
#include "s5/error.hpp"

namespace s5::shift {

namespace {

int wrap(int i, int n) { return ((i % (2 * n)) + 2 * n) % (2 * n); }

Word permute(Word y, int n, int (*src)(int, int)) {
  Word out = 0;
  for (int i = 0; i < 2 * n; ++i)
    if (y >> wrap(src(i, n), n) & 1u) out |= Word{1} << i;
  return out;
}

void check_width(int n) {
  if (n < 1) throw InputError("window half-width must be at least 1");
  if (n > kMaxHalfWidth)
    throw CapExceeded("window half-width " + std::to_string(n) + " above " +
                      std::to_string(kMaxHalfWidth));
}

}  // namespace

Word sigma(Word y, int n) {
  return permute(y, n, [](int i, int) { return -i; });
}

Word tau(Word y, int n) {
  return permute(y, n, [](int i, int) { return 1 - i; });
}

Word flip0(Word y) { return y ^ 1u; }

Word circular_shift(Word y, int n) {
  return permute(y, n, [](int i, int) { return i - 1; });
}

KripkeStructure build_shift_structure(int n, bool include_pi) {
  check_width(n);
  const Word count = Word{1} << (2 * n);
  std::vector<std::uint64_t> val(count);
  std::vector<Partition> parts(include_pi ? 3 : 2, Partition(count));
  for (Word y = 0; y < count; ++y) {
    val[y] = y & 1u;
    parts[0][y] = static_cast<int>(std::min(y, sigma(y, n)));
    parts[1][y] = static_cast<int>(std::min(y, tau(y, n)));
    if (include_pi) parts[2][y] = static_cast<int>(std::min(y, flip0(y)));
  }
  return KripkeStructure(1, std::move(val), std::move(parts));
}

SeparationProfile theory_separation_profile(const KripkeStructure& k, int depth) {
  if (depth < 0) throw InputError("negative depth");
  SeparationProfile out;
  out.points = k.size();
  AtomStore store(k.signature(), Caps{0, std::max(depth, 1), Caps{}.budget});
  const auto levels = theory_levels(store, k, depth);
  for (int d = 0; d <= depth; ++d) {
    const std::set<AtomId> distinct(levels[d].begin(), levels[d].end());
    out.fibers.push_back(distinct.size());
    if (!out.separating_depth && distinct.size() == k.size()) out.separating_depth = d;
  }
  const auto chain = refine(k);
  out.stabilization = static_cast<int>(chain.size()) - 1;
  out.stable_classes = num_classes(chain.back());
  if (out.stabilization <= depth) {
    // same equivalence on points: equal atoms iff equal classes
    const auto& atoms = levels[out.stabilization];
    const auto& cls = chain.back();
    std::map<AtomId, int> a2c;
    std::map<int, AtomId> c2a;
    bool ok = true;
    for (std::size_t p = 0; p < k.size() && ok; ++p) {
      auto [ia, fa] = a2c.emplace(atoms[p], cls[p]);
      auto [ic, fc] = c2a.emplace(cls[p], atoms[p]);
      ok = ia->second == cls[p] && ic->second == atoms[p];
    }
    out.refine_matches_theory = ok;
  }
  return out;
}

}  // namespace s5::shift
