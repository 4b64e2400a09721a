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

#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <set>
#include <tuple>

#include "generators.hpp"
#include "oracles.hpp"
#include "s5/canonical.hpp"
#include "s5/error.hpp"

namespace s5 {
namespace {

const Signature kSig{1, 2};

Formula P(int i) { return Formula::prop(i); }
Formula K(int j, Formula f) { return Formula::know(j, std::move(f)); }

std::set<AtomId> as_set(const std::vector<AtomId>& v) { return {v.begin(), v.end()}; }

TEST(Omega, LevelZeroIsAllValuations) {
  AtomStore store(Signature{3, 2});
  EXPECT_EQ(store.omega_level(0).size(), 8U);
  AtomStore small(kSig);
  EXPECT_EQ(small.omega_level(0).size(), 2U);
}

TEST(Omega, LevelOneMatchesSmallStructureTheories) {
  AtomStore store(kSig);
  std::set<AtomId> seen = testing::omega1_oracle(store, 4);
  EXPECT_EQ(seen.size(), 8U);
  EXPECT_EQ(as_set(store.omega_level(1)), seen);
}

TEST(Omega, LevelTwoMatchesCombinatorialCount) {
  EXPECT_EQ(testing::omega2_oracle(kSig), 128U);
  AtomStore store(kSig);
  EXPECT_EQ(store.omega_level(2).size(), 128U);
  EXPECT_EQ(store.omega_count(2), 128U);
}

TEST(Omega, CountsForOtherSignatures) {
  for (Signature sig : {Signature{1, 3}, Signature{1, 1}}) {
    AtomStore store(sig, Caps{1, 3, 50'000'000});
    EXPECT_EQ(store.omega_count(2), testing::omega2_oracle(sig)) << sig.props << "," << sig.agents;
  }
}

TEST(Omega, FullEnumerationCapEnforced) {
  AtomStore store(kSig);
  EXPECT_THROW(store.omega_level(3), CapExceeded);
}

TEST(Omega, EveryAtomValid) {
  AtomStore store(kSig);
  for (int i = 1; i <= 2; ++i)
    for (AtomId a : store.omega_level(i)) {
      std::vector<std::vector<AtomId>> ch;
      for (int j = 0; j < 2; ++j) ch.push_back(store.choices(a, j));
      EXPECT_EQ(store.validate_extension(store.base(a), ch), "");
    }
}

TEST(Omega, ConnectedAtEveryEnumeratedLevel) {
  AtomStore store(kSig);
  for (int i = 0; i <= 2; ++i) {
    EXPECT_TRUE(is_connected(store.level_structure(i))) << i;
    auto c = store.connectivity_census(i);
    EXPECT_TRUE(c.connected);
    EXPECT_EQ(c.atoms, store.omega_count(i));
  }
}

TEST(Omega, CanonicalOrderIndependentOfHistory) {
  AtomStore fresh(kSig);
  AtomStore used(kSig);
  std::mt19937 rng(testing::kSeed);
  for (int n = 0; n < 30; ++n) theory_map(used, testing::random_kripke(rng, kSig, 5), 2);
  using Key = std::tuple<int, std::uint64_t, std::size_t, std::vector<std::vector<std::size_t>>>;
  auto key = [](AtomStore& s, AtomId a) {
    std::vector<std::vector<std::size_t>> ms;
    if (s.level(a) > 0)
      for (int j = 0; j < 2; ++j) {
        std::vector<std::size_t> r;
        for (AtomId u : s.choices(a, j)) r.push_back(*s.rank(u));
        std::sort(r.begin(), r.end());
        ms.push_back(r);
      }
    std::size_t br = s.level(a) > 0 ? *s.rank(s.base(a)) : 0;
    return Key{s.level(a), s.valuation(a), br, ms};
  };
  for (int i = 0; i <= 2; ++i) {
    const auto& a = fresh.omega_level(i);
    const auto& b = used.omega_level(i);
    ASSERT_EQ(a.size(), b.size());
    for (std::size_t x = 0; x < a.size(); ++x) EXPECT_EQ(key(fresh, a[x]), key(used, b[x]));
  }
}

TEST(Extensions, LevelZeroAtomHasFour) {
  AtomStore store(kSig);
  for (AtomId w : store.omega_level(0)) {
    EXPECT_EQ(store.extensions(w).size(), 4U);
    EXPECT_EQ(store.count_extensions(w), 4U);
  }
}

TEST(Extensions, SizeFourBlockHasSixChoices) {
  AtomStore store(kSig);
  int found = 0;
  for (AtomId w : store.omega_level(1)) {
    if (store.possibility_set(w, 1).size() != 4) continue;
    ++found;
    EXPECT_EQ(store.valid_choices(w, 1).size(), 6U);
    EXPECT_EQ(store.count_valid_choices(w, 1), 6U);
  }
  EXPECT_EQ(found, 4);
}

TEST(Extensions, ProjectionAdjunction) {
  AtomStore store(kSig);
  for (int i = 0; i <= 1; ++i)
    for (AtomId w : store.omega_level(i)) {
      std::set<AtomId> fiber;
      for (AtomId v : store.omega_level(i + 1))
        if (store.project(v, i) == w) fiber.insert(v);
      EXPECT_EQ(as_set(store.extensions(w)), fiber);
    }
}

TEST(Extensions, InvalidChoicesRejected) {
  AtomStore store(kSig);
  AtomId x = store.level0(1);
  AtomId nx = store.level0(0);
  EXPECT_NE(store.validate_extension(x, {{nx}, {x}}), "");
  EXPECT_THROW(store.extend(x, {{nx}, {x}}), PreconditionError);
  AtomId w = store.extend(x, {{x}, {x, nx}});
  EXPECT_EQ(store.project(w, 0), x);
  // agent 1 must keep both level-0 fibers
  EXPECT_NE(store.validate_extension(w, {store.possibility_set(w, 0), {w}}), "");
}

TEST(Project, Examples) {
  AtomStore store(kSig);
  for (AtomId w : store.omega_level(1)) {
    EXPECT_EQ(store.project(w, 1), w);
    for (AtomId v : store.extensions(w)) EXPECT_EQ(store.project(v, 1), w);
  }
  EXPECT_THROW(store.project(store.omega_level(1)[0], 2), PreconditionError);
}

TEST(PossibilitySet, Examples) {
  AtomStore store(kSig);
  std::vector<AtomId> both = store.omega_level(0);
  std::sort(both.begin(), both.end());
  for (AtomId w : store.omega_level(1)) {
    if (store.choices(w, 1) == both) EXPECT_EQ(store.possibility_set(w, 1).size(), 4U);
    const auto& f = store.possibility_set(w, 0);
    EXPECT_TRUE(std::binary_search(f.begin(), f.end(), w));
  }
}

TEST(PossibilitySet, ProjectsOntoChoice) {
  AtomStore store(kSig);
  for (int i = 1; i <= 2; ++i)
    for (AtomId w : store.omega_level(i))
      for (int j = 0; j < 2; ++j) {
        std::set<AtomId> proj;
        for (AtomId v : store.possibility_set(w, j)) proj.insert(store.project(v, i - 1));
        EXPECT_EQ(proj, as_set(store.choices(w, j)));
      }
}

// Blocks are the theory-map fibers: each level structure maps to itself.
TEST(PossibilitySet, BlocksAreTheoryFibers) {
  AtomStore store(kSig);
  for (int i = 1; i <= 2; ++i) {
    const auto& atoms = store.omega_level(i);
    EXPECT_EQ(theory_map(store, store.level_structure(i), i), atoms);
  }
}

TEST(Characteristic, LevelZero) {
  AtomStore store(kSig);
  EXPECT_EQ(render(store.characteristic_formula(store.level0(1))), "p0");
  EXPECT_EQ(store.alpha_on_level(0, store.characteristic_formula(store.level0(0))),
            std::vector<AtomId>{store.level0(0)});
}

TEST(Characteristic, SingletonsThroughLevelTwo) {
  AtomStore store(kSig);
  for (int i = 1; i <= 2; ++i)
    for (AtomId w : store.omega_level(i)) {
      Formula f = store.characteristic_formula(w);
      EXPECT_LE(depth(f), i);
      EXPECT_EQ(store.alpha_on_level(i, f), std::vector<AtomId>{w});
    }
}

TEST(Characteristic, DisjunctionOverSubsets) {
  AtomStore store(kSig);
  const auto& omega = store.omega_level(1);
  for (unsigned mask = 0; mask < (1U << omega.size()); ++mask) {
    std::vector<Formula> parts;
    std::vector<AtomId> expect;
    for (std::size_t x = 0; x < omega.size(); ++x)
      if (mask >> x & 1U) {
        parts.push_back(store.characteristic_formula(omega[x]));
        expect.push_back(omega[x]);
      }
    EXPECT_EQ(store.alpha_on_level(1, disjunction(parts)), expect) << mask;
  }
}

TEST(AlphaOnLevel, KnowsAtom) {
  AtomStore store(kSig);
  AtomId x = store.level0(1);
  auto a = store.alpha_on_level(1, K(0, P(0)));
  ASSERT_EQ(a.size(), 2U);
  for (AtomId w : a) EXPECT_EQ(store.choices(w, 0), std::vector<AtomId>{x});
  EXPECT_EQ(store.alpha_on_level(2, top()), store.omega_level(2));
  EXPECT_THROW(store.alpha_on_level(0, K(0, P(0))), PreconditionError);
}

TEST(AlphaOnLevel, StabilityUnderProjection) {
  AtomStore store(kSig);
  std::mt19937 rng(testing::kSeed + 2);
  for (int n = 0; n < 50; ++n) {
    Formula f = testing::random_formula(rng, kSig, 1, 6);
    auto a1 = as_set(store.alpha_on_level(1, f));
    std::vector<AtomId> pre;
    for (AtomId v : store.omega_level(2))
      if (a1.count(store.project(v, 1))) pre.push_back(v);
    EXPECT_EQ(store.alpha_on_level(2, f), pre) << render(f);
  }
}

TEST(AlphaOnLevel, LocalEvaluationAgrees) {
  AtomStore store(kSig);
  std::mt19937 rng(testing::kSeed + 3);
  for (int n = 0; n < 50; ++n) {
    Formula f = testing::random_formula(rng, kSig, 2, 7);
    auto a = as_set(store.alpha_on_level(2, f));
    for (AtomId v : store.omega_level(2)) ASSERT_EQ(store.holds(v, f), a.count(v) == 1);
  }
}

TEST(Tautology, Examples) {
  AtomStore store(kSig);
  EXPECT_TRUE(store.is_tautology(implies(K(0, P(0)), P(0))));
  EXPECT_FALSE(store.is_tautology(P(0)));
  EXPECT_FALSE(store.is_tautology(implies(K(0, P(0)), K(1, P(0)))));
  EXPECT_TRUE(store.is_tautology(implies(K(1, P(0)), K(1, K(1, P(0))))));
}

}  // namespace
}  // namespace s5
