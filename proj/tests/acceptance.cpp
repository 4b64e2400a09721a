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

// Acceptance run: one PASS/FAIL line per criterion. Exit status is nonzero
// when any criterion fails.

#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>

#include <json.hpp>

#include "generators.hpp"
#include "oracles.hpp"
#include "s5/cells.hpp"
#include "s5/fanout.hpp"
#include "s5/shift.hpp"

#ifndef S5CELLS_CLI
#define S5CELLS_CLI "s5cells"
#endif
#ifndef S5CELLS_TESTS_DIR
#define S5CELLS_TESTS_DIR "tests"
#endif

namespace {

using namespace s5;
using Clock = std::chrono::steady_clock;

// Wall-clock limits in seconds.
constexpr double kLimitOmega = 10.0;
constexpr double kLimitConnectivity = 30.0;
constexpr double kLimitStability = 60.0;
constexpr double kLimitLemmas = 300.0;
constexpr double kLimitShift = 10.0;

const Signature kSig{1, 2};
const char* kF1 = "K0 p0 | K0 !p0";
const char* kF2 = "E p0";

int failures = 0;

struct Check {
  bool ok = true;
  std::ostringstream detail;
  void require(bool cond, const std::string& what) {
    if (!cond) {
      if (!ok) detail << "; ";
      detail << what;
      ok = false;
    }
  }
};

template <class Fn>
void criterion(int number, const char* name, double limit, Fn&& body) {
  Check c;
  const auto t0 = Clock::now();
  try {
    body(c);
  } catch (const std::exception& e) {
    c.require(false, std::string("exception: ") + e.what());
  }
  const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
  if (limit > 0 && secs > limit) {
    std::ostringstream m;
    m << "took " << secs << " s, limit " << limit << " s";
    c.require(false, m.str());
  }
  failures += !c.ok;
  std::printf("%s %2d %s (%.2f s)%s%s\n", c.ok ? "PASS" : "FAIL", number, name, secs,
              c.ok ? "" : ": ", c.ok ? "" : c.detail.str().c_str());
  std::fflush(stdout);
}

std::set<AtomId> as_set(const std::vector<AtomId>& v) { return {v.begin(), v.end()}; }

void omega_counts(Check& c) {
  for (int props : {1, 2}) {
    AtomStore store(Signature{props, 2});
    c.require(store.omega_level(0).size() == (1U << props), "|Omega_0| != 2^|X|");
  }
  AtomStore store(kSig);
  const auto seen = testing::omega1_oracle(store, 4);
  c.require(seen.size() == 8 && as_set(store.omega_level(1)) == seen,
            "Omega_1 differs from the small-structure theories");
  const auto want2 = testing::omega2_oracle(kSig);
  c.require(want2 == 128 && store.omega_level(2).size() == want2,
            "|Omega_2| differs from the combinatorial count");
}

void connectivity(Check& c) {
  for (int agents : {2, 3}) {
    AtomStore store(Signature{1, agents});
    for (int i = 0; i <= 2; ++i) {
      bool conn = false;
      if (agents == 3 && i == 2) {
        auto census = store.connectivity_census(i);
        conn = census.connected && census.atoms == testing::omega2_oracle(store.signature());
      } else {
        conn = is_connected(store.level_structure(i));
      }
      c.require(conn, "Omega_" + std::to_string(i) + " not connected at |J|=" +
                          std::to_string(agents));
    }
  }
}

void stability(Check& c) {
  AtomStore store(kSig);
  std::mt19937 rng(testing::kSeed);
  for (int n = 0; n < 50; ++n) {
    const Formula f = testing::random_formula(rng, kSig, 1, 6);
    const auto a1 = as_set(store.alpha_on_level(1, f));
    std::vector<AtomId> pre;
    for (AtomId v : store.omega_level(2))
      if (a1.count(store.project(v, 1))) pre.push_back(v);
    c.require(store.alpha_on_level(2, f) == pre, "preimage mismatch for " + render(f));
  }
}

void characteristic(Check& c) {
  AtomStore store(kSig);
  for (int i = 0; i <= 1; ++i)
    for (AtomId w : store.omega_level(i))
      c.require(store.alpha_on_level(i, store.characteristic_formula(w)) == std::vector<AtomId>{w},
                "level " + std::to_string(i) + " atom not isolated");
  std::mt19937 rng(testing::kSeed);
  const auto& omega2 = store.omega_level(2);
  for (int n = 0; n < 20; ++n) {
    const AtomId w = omega2[testing::uniform(rng, 0, static_cast<int>(omega2.size()) - 1)];
    c.require(store.alpha_on_level(2, store.characteristic_formula(w)) == std::vector<AtomId>{w},
              "level 2 atom not isolated");
  }
}

void s5_axioms(Check& c) {
  std::mt19937 rng(testing::kSeed + 1);
  const Signature sig{2, 2};
  for (int n = 0; n < 100; ++n) {
    const KripkeStructure k = testing::random_kripke(rng, sig, 6);
    const Formula f = testing::random_formula(rng, sig, 2, 6);
    const Formula g = testing::random_formula(rng, sig, 2, 6);
    for (int j = 0; j < sig.agents; ++j) {
      const Formula kf = Formula::know(j, f);
      const Formula nkf = Formula::negate(kf);
      const Formula axioms[] = {
          implies(Formula::conj(kf, Formula::know(j, implies(f, g))), Formula::know(j, g)),
          implies(kf, f),
          implies(kf, Formula::know(j, kf)),
          implies(nkf, Formula::know(j, nkf)),
      };
      for (int a = 0; a < 4; ++a)
        c.require(alpha(k, axioms[a]).all(), "axiom " + std::to_string(a + 2) + " fails");
    }
  }
}

void least_information(Check& c) {
  AtomStore store(kSig);
  for (const char* text : {"p0 | !p0", kF1, kF2}) {
    CkSystem sys(store, parse(text, kSig));
    c.require(sys.semantically_closed(), std::string(text) + " not closed");
    for (int i = sys.depth(); i <= 1; ++i) {
      const auto image = theory_map(store, sys.structure(i), i + 1);
      const auto& atoms = sys.level(i);
      for (std::size_t x = 0; x < atoms.size(); ++x)
        c.require(sys.least_info_extension(atoms[x]) == image[x],
                  std::string(text) + " differs at level " + std::to_string(i));
    }
  }
}

void lemmas_3_4(Check& c) {
  AtomStore store(kSig);
  CkSystem sys(store, top());
  alien::Alienation al(sys);
  c.require(al.lemma3_check(0, 1), "lemma3(top, 0, 1) false");
  const auto gen = al.gen_level();
  c.require(gen.has_value(), "gen level of top unknown");
  if (!gen) return;
  const auto rep = al.lemma4_check(*gen);
  c.require(rep.holds && rep.checked > 0, "lemma4(top, gen) false");
  // replace one image atom by a sibling that differs in one possibility set
  auto atoms = al.image(0, 2);
  const AtomId v = atoms[0];
  for (AtomId u : store.extensions(store.base(v))) {
    int differ = 0;
    for (int j = 0; j < 2; ++j) differ += store.choice_id(u, j) != store.choice_id(v, j);
    if (differ == 1) {
      atoms[0] = u;
      break;
    }
  }
  c.require(atoms[0] != v, "no mutant found");
  c.require(!al.lemma3_holds_on(atoms, 0, 1), "mutation not detected");
}

void lemma_2(Check& c) {
  AtomStore store(kSig);
  CkSystem top_sys(store, top());
  CkSystem f1(store, parse(kF1, kSig));
  alien::Alienation at(top_sys);
  alien::Alienation a1(f1);
  std::mt19937 rng(testing::kSeed + 2);
  int checked = 0;
  for (int n = 0; n < 4; ++n) {
    const auto& l1 = top_sys.level(1);
    const AtomId b = l1[testing::uniform(rng, 0, static_cast<int>(l1.size()) - 1)];
    const AtomId d = l1[testing::uniform(rng, 0, static_cast<int>(l1.size()) - 1)];
    c.require(at.lemma2_check(alien::Schedule::naturals(), b, d, 2).holds, "top pair grows");
    ++checked;
  }
  for (const char* sched : {"1:+1", "1,2:+2"}) {
    for (int n = 0; n < 3; ++n) {
      const AtomId b = f1.level(1)[testing::uniform(rng, 0, 3)];
      const AtomId d = f1.level(2)[testing::uniform(rng, 0, 7)];
      const auto s = a1.lemma2_check(alien::Schedule::parse(sched), b, d, 4);
      c.require(s.holds, std::string("f1 pair grows under ") + sched);
      ++checked;
    }
  }
  c.require(checked == 10, "expected 10 pairs");
}

void fanout(Check& c) {
  AtomStore store(kSig);
  CkSystem sys(store, parse(kF1, kSig));
  const auto s = alien::Schedule::parse("3:+1");
  const auto st = alien::fanout_build(sys, s, s, 5, true);
  c.require(!st.counterexample, "invalid extension during the build");
  const auto r = alien::fanout_checks(sys, st);
  c.require(r.validity == alien::Verdict::Pass, "gamma images not validated");
  c.require(!r.lemma5.empty(), "no Lemma 5 checks");
  for (const auto& l : r.lemma5)
    c.require(l.verdict == alien::Verdict::Pass, "Lemma 5 at level " + std::to_string(l.level));
  int lowest = 0;
  for (const auto& l : r.lemma6) {
    if (lowest == 2) break;
    c.require(l.verdict == alien::Verdict::Pass, "Lemma 6 at level " + std::to_string(l.level));
    ++lowest;
  }
  c.require(lowest == 2, "fewer than two Lemma 6 levels");
  c.require(r.block_sizes_increase == alien::Verdict::Pass, "possibility-set sizes do not grow");
  c.require(!st.conditions.all_pass(), "schedule conditions unexpectedly pass");
}

void shift_example(Check& c) {
  using namespace s5::shift;
  for (int n = 1; n <= 3; ++n) {
    for (Word y = 0; y < (Word{1} << (2 * n)); ++y)
      if (tau(sigma(y, n), n) != circular_shift(y, n)) c.require(false, "tau sigma != shift");
    for (bool pi : {false, true}) {
      const KripkeStructure k = build_shift_structure(n, pi);
      for (int j = 0; j < k.num_agents(); ++j)
        for (std::size_t b = 0; b < k.num_blocks(j); ++b)
          if (k.block_members(j, static_cast<int>(b)).size() > 2) c.require(false, "block above 2");
      const auto p = theory_separation_profile(k, 2 * n + 1);
      c.require(p.refine_matches_theory.value_or(false),
                "refine fixpoint differs from theory fibers at n=" + std::to_string(n));
    }
  }
}

std::string quote(const std::string& s) {
  std::string out = "'";
  for (char ch : s) out += ch == '\'' ? std::string("'\\''") : std::string(1, ch);
  return out + "'";
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void determinism(Check& c) {
  const std::filesystem::path tests(S5CELLS_TESTS_DIR);
  const auto cases = nlohmann::json::parse(slurp(tests / "cli" / "commands.json"));
  const auto tmp = std::filesystem::temp_directory_path() /
                   ("s5cells-acceptance-" + std::to_string(::getpid()));
  std::filesystem::create_directories(tmp);
  std::size_t compared = 0;
  for (const auto& cs : cases) {
    std::string cmd = quote(S5CELLS_CLI);
    for (const auto& a : cs["args"]) {
      std::string arg = a.get<std::string>();
      if (arg.starts_with("@")) arg = (tests / arg.substr(1)).string();
      cmd += " " + quote(arg);
    }
    std::string runs[2];
    for (int r = 0; r < 2; ++r) {
      const auto out = tmp / ("out" + std::to_string(r));
      const auto err = tmp / ("err" + std::to_string(r));
      const int status = std::system((cmd + " >" + quote(out) + " 2>" + quote(err)).c_str());
      runs[r] = std::to_string(WIFEXITED(status) ? WEXITSTATUS(status) : -1) + "\n" + slurp(out) +
                "\n" + slurp(err);
    }
    c.require(runs[0] == runs[1], "output differs for " + cs["name"].get<std::string>());
    c.require(runs[0].size() > 2, "no output for " + cs["name"].get<std::string>());
    ++compared;
  }
  std::filesystem::remove_all(tmp);
  c.require(compared == cases.size() && compared > 0, "no CLI cases run");
}

}  // namespace

int main() {
  criterion(1, "omega enumeration matches oracles", kLimitOmega, omega_counts);
  criterion(2, "Omega_i connected for i <= 2, |J| in {2,3}", kLimitConnectivity, connectivity);
  criterion(3, "stability on 50 random depth-1 formulas", kLimitStability, stability);
  criterion(4, "characteristic formulas isolate their atoms", 0, characteristic);
  criterion(5, "S5 axioms 2-5 on 100 random pairs", 0, s5_axioms);
  criterion(6, "least-information extension equals theory map", 0, least_information);
  criterion(7, "separation lemmas at desk scale with mutation", kLimitLemmas, lemmas_3_4);
  criterion(8, "alienated distances do not grow on 10 pairs", 0, lemma_2);
  criterion(9, "fanout builder invariants on the demo formula", 0, fanout);
  criterion(10, "shift example for n <= 3", kLimitShift, shift_example);
  criterion(11, "CLI output is byte-identical across runs", 0, determinism);
  std::printf("%d of 11 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
