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

#include <map>
#include <random>
#include <set>

#include "generators.hpp"
#include "s5/ck.hpp"
#include "s5/error.hpp"

namespace s5 {
namespace {

const Signature kSig{1, 2};

Formula P(int i) { return Formula::prop(i); }
Formula K(int j, Formula f) { return Formula::know(j, std::move(f)); }
Formula F(const char* text) { return parse(text, kSig); }

const char* kF1 = "K0 p0 | K0 !p0";
const char* kF2 = "E p0";

std::set<AtomId> as_set(const std::vector<AtomId>& v) { return {v.begin(), v.end()}; }

// Closure of alpha(f) on Omega_1, straight from the definition.
bool closed_oracle(AtomStore& store, const Formula& f) {
  auto a = as_set(store.alpha_on_level(1, f));
  if (a.empty()) return false;
  for (AtomId w : a)
    for (int j = 0; j < 2; ++j) {
      std::set<AtomId> met, met_in_a;
      for (AtomId v : store.possibility_set(w, j)) {
        met.insert(store.project(v, 0));
        if (a.count(v)) met_in_a.insert(store.project(v, 0));
      }
      if (met != met_in_a) return false;
    }
  return true;
}

TEST(Closure, Examples) {
  AtomStore store(kSig);
  EXPECT_EQ(CkSystem(store, top()).closure(), Closure::Closed);
  EXPECT_EQ(CkSystem(store, P(0)).closure(), Closure::Closed);
  EXPECT_EQ(CkSystem(store, F("p0 & !p0")).closure(), Closure::Empty);
  Formula f = F("K0 p0 & !K1 p0 & !K1 !p0");
  EXPECT_EQ(CkSystem(store, f).semantically_closed(), closed_oracle(store, f));
  EXPECT_FALSE(CkSystem(store, f).semantically_closed());
  EXPECT_TRUE(CkSystem(store, F(kF1)).semantically_closed());
  EXPECT_TRUE(CkSystem(store, F(kF2)).semantically_closed());
}

TEST(Closure, RandomDepthOneAgainstDefinition) {
  AtomStore store(kSig);
  std::mt19937 rng(testing::kSeed);
  int closed = 0;
  for (int n = 0; n < 150; ++n) {
    Formula f = testing::random_formula(rng, kSig, 1, 7);
    if (depth(f) != 1) continue;
    CkSystem sys(store, f);
    bool oracle = closed_oracle(store, f);
    EXPECT_EQ(sys.semantically_closed(), oracle) << render(f);
    closed += oracle;
  }
  EXPECT_GT(closed, 0);
}

// A nonempty closed core is a finite model of common knowledge of f; an
// empty one is consistent with E f having no level-2 witness or not.
TEST(CkNonempty, CoreIsAModel) {
  AtomStore store(kSig);
  std::mt19937 rng(testing::kSeed + 1);
  EXPECT_TRUE(CkSystem(store, top()).ck_nonempty());
  EXPECT_FALSE(CkSystem(store, F("p0 & !p0")).ck_nonempty());
  for (int n = 0; n < 120; ++n) {
    Formula f = testing::random_formula(rng, kSig, 1, 7);
    if (depth(f) != 1) continue;
    CkSystem sys(store, f);
    auto core = sys.closed_core();
    if (core.empty()) continue;
    EXPECT_FALSE(store.alpha_on_level(2, e_power(f, 1, 2)).empty());
    std::vector<int> idx;
    for (AtomId w : core) idx.push_back(static_cast<int>(*store.rank(w)));
    KripkeStructure k = restrict(store.level_structure(1), idx);
    EXPECT_TRUE(common_knowledge_points(k, f).all()) << render(f);
    EXPECT_EQ(theory_map(store, k, 1), core);
  }
}

TEST(CkNonempty, NotClosedButConsistent) {
  AtomStore store(kSig);
  CkSystem sys(store, F("K0 p0 | K1 p0"));
  EXPECT_FALSE(sys.semantically_closed());
  EXPECT_TRUE(sys.ck_nonempty());
}

TEST(DenseCell, Examples) {
  AtomStore store(kSig);
  EXPECT_TRUE(CkSystem(store, top()).has_dense_cell());
  CkSystem single(store, F(kF2));
  EXPECT_EQ(single.level(1).size(), 1U);
  EXPECT_TRUE(single.has_dense_cell());
  AtomStore two(Signature{2, 2});
  CkSystem sep(two, parse("(p0 & p1) | (!p0 & !p1)", two.signature()));
  ASSERT_EQ(sep.level(0).size(), 2U);
  std::vector<int> idx;
  for (AtomId w : sep.level(0)) idx.push_back(static_cast<int>(*two.rank(w)));
  EXPECT_EQ(sep.has_dense_cell(), is_connected(restrict(two.level_structure(0), idx)));
  EXPECT_THROW(CkSystem(store, F("K0 p0 & !K1 p0 & !K1 !p0")).has_dense_cell(),
               PreconditionError);
}

TEST(RestrictedLevels, MatchIteratedEverybodyKnows) {
  AtomStore store(kSig);
  for (const char* text : {kF1, kF2, "p0 | !p0", "p0", "K1 p0 | K1 !p0"}) {
    Formula f = F(text);
    CkSystem sys(store, f);
    if (!sys.semantically_closed()) continue;
    for (int i = sys.depth(); i <= 2; ++i)
      EXPECT_EQ(sys.level(i), store.alpha_on_level(i, e_power(f, i - sys.depth(), 2)))
          << text << " " << i;
  }
}

TEST(RestrictedLevels, TautologyIsEverything) {
  AtomStore store(kSig);
  CkSystem sys(store, top());
  for (int i = 0; i <= 2; ++i) EXPECT_EQ(sys.level(i), store.omega_level(i));
  for (AtomId w : store.omega_level(1))
    EXPECT_EQ(as_set(sys.restricted_extensions(w)), as_set(store.extensions(w)));
}

TEST(RestrictedLevels, FractionShrinks) {
  AtomStore store(kSig);
  CkSystem sys(store, F(kF1));
  double prev = 2.0;
  for (int i = 1; i <= 2; ++i) {
    double frac = static_cast<double>(sys.level_size(i)) / store.omega_count(i);
    EXPECT_LE(frac, prev);
    prev = frac;
  }
}

TEST(RestrictedExtensions, CountsAgainstLevelTwoFilter) {
  AtomStore store(kSig);
  for (const char* text : {kF1, kF2}) {
    Formula f = F(text);
    CkSystem sys(store, f);
    auto level2 = as_set(store.alpha_on_level(2, e_power(f, 1, 2)));
    for (AtomId w : sys.level(1)) {
      std::size_t expect = 0;
      for (AtomId v : store.omega_level(2))
        if (store.project(v, 1) == w && level2.count(v)) ++expect;
      auto ext = sys.restricted_extensions(w);
      EXPECT_EQ(ext.size(), expect);
      EXPECT_EQ(sys.count_restricted_extensions(w), expect);
      for (AtomId v : ext) EXPECT_EQ(store.project(v, 1), w);
    }
  }
}

TEST(RestrictedExtensions, NonemptyForClosedFormulas) {
  AtomStore store(kSig);
  std::mt19937 rng(testing::kSeed + 2);
  for (int n = 0; n < 80; ++n) {
    Formula f = testing::random_formula(rng, kSig, 1, 6);
    CkSystem sys(store, f);
    if (!sys.semantically_closed()) continue;
    for (int i = sys.depth(); i <= 2; ++i)
      for (AtomId w : sys.level(i)) ASSERT_GE(sys.count_restricted_extensions(w), 1U);
  }
  EXPECT_THROW(CkSystem(store, F(kF2)).restricted_extensions(store.omega_level(1)[0]),
               PreconditionError);
}

TEST(LeastInfo, TautologyLevelZero) {
  AtomStore store(kSig);
  CkSystem sys(store, top());
  auto omega0 = store.omega_level(0);
  std::sort(omega0.begin(), omega0.end());
  for (AtomId w : omega0) {
    AtomId p = sys.least_info_extension(w);
    for (int j = 0; j < 2; ++j) EXPECT_EQ(store.choices(p, j), omega0);
  }
}

TEST(LeastInfo, EqualsTheoryMapOfRestrictedLevel) {
  AtomStore store(kSig);
  for (const char* text : {"p0 | !p0", kF1, kF2}) {
    CkSystem sys(store, F(text));
    for (int i = sys.depth(); i <= 2; ++i) {
      auto image = theory_map(store, sys.structure(i), i + 1);
      const auto& atoms = sys.level(i);
      for (std::size_t x = 0; x < atoms.size(); ++x)
        EXPECT_EQ(sys.least_info_extension(atoms[x]), image[x]) << text << " " << i;
    }
  }
}

TEST(Classify, Examples) {
  AtomStore store(kSig);
  CkSystem sys(store, top());
  CkSystem single(store, F(kF2));
  AtomId lone = single.level(1).at(0);
  EXPECT_EQ(single.classify_block(1, {lone}), BlockClass::Neither);
  int generative = 0;
  for (const auto& b : sys.blocks(1, 1))
    if (b.size() == 4) {
      EXPECT_EQ(sys.classify_block(1, b), BlockClass::Generative);
      ++generative;
    }
  EXPECT_EQ(generative, 1);
  // dropping one atom leaves fibers of sizes 2 and 1
  for (const auto& b : sys.blocks(1, 1))
    if (b.size() == 4) {
      std::vector<AtomId> cut(b.begin() + 1, b.end());
      EXPECT_EQ(sys.classify_block(1, cut), BlockClass::ProtoGenerative);
    }
}

// Every restricted block against the fiber-count definition.
TEST(Classify, AgreesWithFiberCounts) {
  AtomStore store(kSig);
  for (auto [text, lo, hi] : {std::tuple{"p0 | !p0", 1, 2}, std::tuple{kF1, 1, 3}}) {
    CkSystem sys(store, F(text));
    for (int i = lo; i <= hi; ++i)
      for (int j = 0; j < 2; ++j)
        for (const auto& b : sys.blocks(i, j)) {
          std::map<AtomId, int> fibers;
          for (AtomId v : b) ++fibers[store.project(v, i - 1)];
          bool some = false, all = true;
          for (const auto& [u, c] : fibers) {
            some |= c >= 2;
            all &= c >= 2;
          }
          BlockClass expect = all ? BlockClass::Generative
                                  : some ? BlockClass::ProtoGenerative : BlockClass::Neither;
          EXPECT_EQ(sys.classify_block(i, b), expect);
        }
  }
}

TEST(GenLevel, Examples) {
  AtomStore store(kSig);
  EXPECT_EQ(CkSystem(store, top()).gen_level(2).level, 0);
  EXPECT_EQ(CkSystem(store, F(kF1)).gen_level(3).level, 1);
  GenLevel unique = CkSystem(store, F(kF2)).gen_level(3);
  EXPECT_FALSE(unique.level);
  EXPECT_EQ(unique.reason, "uniquely extending");
  EXPECT_EQ(CkSystem(store, F("p0 & !p0")).gen_level(3).reason, "empty");
}

TEST(GenLevel, GenerativityPersistsUpward) {
  AtomStore store(kSig, Caps{2, 4, 5'000'000});
  for (auto [text, top_level] : {std::pair{"p0 | !p0", 2}, std::pair{kF1, 3}}) {
    CkSystem sys(store, F(text));
    int gen = *sys.gen_level(top_level).level;
    for (int i = gen; i <= top_level; ++i)
      for (AtomId w : sys.level(i)) {
        bool some = false;
        for (int j = 0; j < 2; ++j) some |= sys.classify_atom(w, j) == BlockClass::Generative;
        EXPECT_TRUE(some) << text << " " << i;
      }
  }
}

TEST(Generativity, Examples) {
  AtomStore store(kSig);
  Generativity t = CkSystem(store, top()).is_generative(2);
  EXPECT_EQ(t.value, Generativity::Value::Generative);
  EXPECT_EQ(t.provenance, "assumed-sufficiency");
  Generativity e = CkSystem(store, F("p0 & !p0")).is_generative(2);
  EXPECT_EQ(e.value, Generativity::Value::NotGenerative);
  EXPECT_EQ(e.reason, "empty");
  Generativity u = CkSystem(store, F(kF2)).is_generative(2);
  EXPECT_EQ(u.value, Generativity::Value::NotGenerative);
  EXPECT_EQ(u.reason, "unique extension");
  EXPECT_EQ(u.provenance, "proven-necessity");
  // every atom of the E p0 levels knows its single block
  CkSystem sys(store, F(kF2));
  for (int j = 0; j < 2; ++j)
    for (AtomId w : sys.level(1)) EXPECT_EQ(store.choices(w, j).size(), 1U);
}

TEST(CkImplies, Examples) {
  AtomStore store(kSig);
  Formula f = P(0);
  CkImplication a = ck_implies(store, f, e_power(f, 1, 2), 3);
  EXPECT_TRUE(a.shown);
  EXPECT_EQ(a.level, 1);
  CkImplication b = ck_implies(store, top(), P(0), 3);
  EXPECT_FALSE(b.shown);
  EXPECT_GE(b.checked_to, 2);
  CkImplication c = ck_implies(store, f, e_power(f, 2, 2), 3);
  EXPECT_TRUE(c.shown);
  EXPECT_EQ(c.level, 2);
}

}  // namespace
}  // namespace s5
