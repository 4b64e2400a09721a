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

#include "s5/cells.hpp"

#include <cmath>

#include "s5/error.hpp"

namespace s5::alien {

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Pass:
      return "pass";
    case Verdict::Fail:
      return "fail";
    case Verdict::Unknown:
      return "unknown";
  }
  return "?";
}

AtomId AlienatedPath::at(int level) const {
  for (std::size_t k = 0; k < levels.size(); ++k)
    if (levels[k] == level) return atoms[k];
  return kNoAtom;
}

bool ScheduleConditions::all_pass() const {
  return c1.verdict == Verdict::Pass && c2.verdict == Verdict::Pass &&
         c3.verdict == Verdict::Pass && c4.verdict == Verdict::Pass;
}

Alienation::Alienation(CkSystem& sys) : sys_(sys) {
  if (!sys_.semantically_closed())
    throw PreconditionError("alienated extensions need a semantically closed formula");
}

std::optional<int> Alienation::gen_level() {
  if (!gen_) gen_ = sys_.gen_level(sys_.store().caps().lazy_level).level;
  return *gen_;
}

const std::vector<AtomId>& Alienation::image(int i, int n) {
  if (n < i) throw PreconditionError("theory map target below the source level");
  const std::pair<int, int> key{i, n};
  if (auto it = images_.find(key); it != images_.end()) return it->second;
  auto img = theory_map(sys_.store(), sys_.structure(i), n);
  return images_.emplace(key, std::move(img)).first->second;
}

AtomId Alienation::theory_hop(AtomId w, int n) {
  auto r = sys_.rank(w);
  if (!r) throw PreconditionError("atom " + std::to_string(w) + " is not in the restricted level");
  return image(sys_.store().level(w), n)[*r];
}

AlienatedPath Alienation::extend(const Schedule& s, AtomId w, int target) {
  const int i = sys_.store().level(w);
  if (!s.contains(static_cast<std::uint64_t>(i)))
    throw PreconditionError("origin level " + std::to_string(i) + " is not in the schedule");
  if (!sys_.contains(w)) throw PreconditionError("origin atom is not in the restricted level");
  AlienatedPath p;
  p.origin = w;
  p.levels.push_back(i);
  p.atoms.push_back(w);
  while (true) {
    const auto n = static_cast<int>(s.next(static_cast<std::uint64_t>(p.levels.back())));
    if (n > target) break;
    p.atoms.push_back(theory_hop(p.atoms.back(), n));
    p.levels.push_back(n);
  }
  return p;
}

Formula Alienation::g_formula(int i) {
  if (auto it = g_.find(i); it != g_.end()) return it->second;
  std::vector<Formula> parts;
  for (AtomId a : image(i, i + 1)) parts.push_back(sys_.store().characteristic_formula(a));
  Formula g = disjunction(parts);
  g_.emplace(i, g);
  return g;
}

bool Alienation::g_exact(int i) {
  const Formula g = g_formula(i);
  std::vector<AtomId> img = image(i, i + 1);
  std::sort(img.begin(), img.end());
  for (AtomId v : sys_.level(i + 1)) {
    const bool in = std::binary_search(img.begin(), img.end(), v);
    if (sys_.store().holds(v, g) != in) return false;
  }
  return true;
}

bool Alienation::lemma3_holds_on(const std::vector<AtomId>& atoms, int i, int l) {
  const Formula e = e_power(g_formula(i), l, sys_.store().signature().agents);
  for (AtomId a : atoms) {
    if (sys_.store().level(a) < i + l + 1)
      throw PreconditionError("atom below the depth of E^l g");
    if (!sys_.store().holds(a, e)) return false;
  }
  return true;
}

bool Alienation::lemma3_check(int i, int l) {
  if (l < 0) throw InputError("negative exponent");
  return lemma3_holds_on(image(i, i + l + 1), i, l);
}

Lemma4Report Alienation::lemma4_check(int i) {
  const auto gen = gen_level();
  if (!gen) throw PreconditionError("generative level unknown within the cap");
  if (i < *gen)
    throw PreconditionError("level " + std::to_string(i) + " is below gen(f) = " +
                            std::to_string(*gen));
  auto& store = sys_.store();
  const int agents = store.signature().agents;
  const Formula g = g_formula(i);
  Lemma4Report rep;
  rep.level = i;
  const auto& next = sys_.level(i + 1);
  for (std::size_t r = 0; r < next.size(); ++r) {
    const AtomId w = next[r];
    const AtomId v = sys_.least_info_extension(w);
    bool some_fails = false;
    bool mismatch = false;
    for (int j = 0; j < agents; ++j) {
      const bool kj = store.holds(v, Formula::know(j, g));
      some_fails |= !kj;
      if (kj && sys_.classify_atom(w, j) == BlockClass::Generative) mismatch = true;
    }
    ++rep.checked;
    if (!some_fails) {
      rep.holds = false;
      rep.failures.push_back(r);
    }
    if (mismatch) rep.witness_mismatch.push_back(r);
  }
  return rep;
}

Lemma2Sample Alienation::lemma2_check(const Schedule& s, AtomId b, AtomId d, int late_level) {
  auto& store = sys_.store();
  Lemma2Sample out;
  out.early_level = std::max(store.level(b), store.level(d));
  out.late_level = late_level;
  if (late_level <= out.early_level || !s.contains(static_cast<std::uint64_t>(late_level)) ||
      !s.contains(static_cast<std::uint64_t>(out.early_level)))
    throw PreconditionError("late level must be a later schedule member");
  const auto pb = extend(s, b, late_level);
  const auto pd = extend(s, d, late_level);
  const auto dist = [&](int lvl) {
    const AtomId x = pb.at(lvl), y = pd.at(lvl);
    auto rx = sys_.rank(x), ry = sys_.rank(y);
    if (!rx || !ry) throw PreconditionError("alienated path left the restricted level");
    return adjacency_distance(sys_.structure(lvl), *rx, *ry);
  };
  out.early = dist(out.early_level);
  out.late = dist(late_level);
  out.holds = !out.early || (out.late && *out.late <= *out.early);
  return out;
}

SeparationReport Alienation::separation_witness(const Schedule& s, const Schedule& t, AtomId w,
                                                int horizon) {
  auto& store = sys_.store();
  const int o = store.level(w);
  if (!s.contains(static_cast<std::uint64_t>(o)) || !t.contains(static_cast<std::uint64_t>(o)))
    throw PreconditionError("origin level must belong to both schedules");
  const auto gen = gen_level();
  if (!gen) throw PreconditionError("generative level unknown within the cap");
  const int agents = store.signature().agents;
  SeparationReport rep;
  rep.horizon = horizon;
  const std::pair<const Schedule*, const Schedule*> roles[] = {{&t, &s}, {&s, &t}};
  for (int role = 0; role < 2; ++role) {
    const Schedule& y = *roles[role].first;   // carries Lemma 3
    const Schedule& x = *roles[role].second;  // carries Lemma 4
    for (auto mu : y.members_upto(static_cast<std::uint64_t>(horizon))) {
      const int m = static_cast<int>(mu);
      if (m < o || m < *gen || m + 2 > horizon) continue;
      if (y.contains(mu + 1) || !x.contains(mu + 1) || !x.contains(mu + 2)) continue;
      SeparationCandidate c;
      c.via = role == 0 ? "T" : "S";
      c.m = m;
      try {
        const int n = static_cast<int>(y.next(mu));
        if (n > horizon) continue;
        c.l = n - m - 1;
        const AtomId ay = extend(y, w, n).at(n);
        const AtomId ax = extend(x, w, m + 2).at(m + 2);
        const Formula g = g_formula(m);
        c.e_l_g_on_lemma3_path = store.holds(ay, e_power(g, c.l, agents));
        c.e_g_on_lemma4_path = store.holds(ax, everybody_knows(g, agents));
        c.certified = c.e_l_g_on_lemma3_path && !c.e_g_on_lemma4_path;
      } catch (const CapExceeded& e) {
        c.skipped = e.what();
      }
      if (c.certified && (!rep.found || c.l > rep.lower_bound)) {
        rep.found = true;
        rep.lower_bound = c.l;
        rep.m = c.m;
        rep.l = c.l;
        rep.via = c.via;
      }
      rep.candidates.push_back(std::move(c));
    }
  }
  return rep;
}

ScheduleConditions check_schedule_conditions(const Schedule& s, CkSystem& sys, int horizon) {
  ScheduleConditions out;
  const auto gl = sys.gen_level(sys.store().caps().lazy_level);
  const auto members = s.members_upto(static_cast<std::uint64_t>(horizon));
  if (!gl.level) {
    out.c1 = {Verdict::Unknown, "gen(f) unknown within the cap"};
  } else if (members.empty()) {
    out.c1 = {Verdict::Unknown, "no schedule member within the horizon"};
  } else {
    const auto need = static_cast<std::uint64_t>(*gl.level + 8);
    out.c1 = {members.front() > need ? Verdict::Pass : Verdict::Fail,
              "inf S = " + std::to_string(members.front()) + ", gen(f)+8 = " + std::to_string(need)};
  }
  if (members.size() < 2) {
    out.c2 = {Verdict::Unknown, "fewer than two members within the horizon"};
  } else {
    bool ok = members[1] - members[0] >= 5;
    std::string gaps;
    for (std::size_t k = 1; k < members.size(); ++k) {
      const auto gap = members[k] - members[k - 1];
      gaps += (k > 1 ? "," : "") + std::to_string(gap);
      if (k >= 2 && gap <= members[k - 1] - members[k - 2]) ok = false;
    }
    out.c2 = {ok ? Verdict::Pass : Verdict::Fail, "gaps " + gaps};
  }
  bool any_fail3 = false, any_unknown3 = false, any_fail4 = false, any_unknown4 = false;
  std::string d3, d4;
  for (std::size_t k = 0; k < members.size(); ++k) {
    const auto i = members[k];
    std::uint64_t n = 0;
    try {
      n = s.next(i);
    } catch (const CapExceeded&) {
      any_unknown3 = any_unknown4 = true;
      continue;
    }
    if (n > static_cast<std::uint64_t>(horizon)) {
      any_unknown3 = any_unknown4 = true;
      continue;
    }
    try {
      const auto diam = diameter(sys.structure(static_cast<int>(n)));
      const std::size_t bound = 2 * (k + 1) + 3;
      const bool ok = !diam || *diam > bound;
      any_fail3 |= !ok;
      d3 += "diam(" + std::to_string(n) + ")=" + (diam ? std::to_string(*diam) : "inf") +
            " vs " + std::to_string(bound) + "; ";
    } catch (const CapExceeded&) {
      any_unknown3 = true;
      d3 += "diam(" + std::to_string(n) + ") beyond cap; ";
    } catch (const PreconditionError&) {
      any_unknown3 = true;
      d3 += "level " + std::to_string(n) + " below the depth; ";
    }
    try {
      const double size = static_cast<double>(sys.level(static_cast<int>(i)).size());
      const double lhs = std::pow(2.0, (static_cast<double>(n) - static_cast<double>(i) - 1.0) / 2.0);
      const bool ok = lhs > size;
      any_fail4 |= !ok;
      d4 += "2^((" + std::to_string(n) + "-" + std::to_string(i) + "-1)/2) vs |level " +
            std::to_string(i) + "|=" + std::to_string(static_cast<std::uint64_t>(size)) + "; ";
    } catch (const CapExceeded&) {
      any_unknown4 = true;
      d4 += "|level " + std::to_string(i) + "| beyond cap; ";
    } catch (const PreconditionError&) {
      any_unknown4 = true;
      d4 += "level " + std::to_string(i) + " below the depth; ";
    }
  }
  const auto verdict = [](bool fail, bool unknown, bool any) {
    if (fail) return Verdict::Fail;
    if (unknown || !any) return Verdict::Unknown;
    return Verdict::Pass;
  };
  out.c3 = {verdict(any_fail3, any_unknown3, !d3.empty()), d3};
  out.c4 = {verdict(any_fail4, any_unknown4, !d4.empty()), d4};
  return out;
}

}  // namespace s5::alien
