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

// s5cells: command-line front end for the s5cells library.

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "s5/canonical.hpp"
#include "s5/cells.hpp"
#include "s5/ck.hpp"
#include "s5/error.hpp"
#include "s5/fanout.hpp"
#include "s5/formula.hpp"
#include "s5/kripke.hpp"
#include "s5/kripke_io.hpp"
#include "s5/schedule.hpp"
#include "s5/shift.hpp"
#include "s5/third_agent.hpp"

using nlohmann::json;
using namespace s5;
using namespace s5::alien;

namespace {

struct Config {
  int props = 1;
  int agents = 2;
  int full_cap = Caps{}.full_level;
  int lazy_cap = Caps{}.lazy_level;
  std::uint64_t budget = Caps{}.budget;
  std::string format = "json";
};

struct Output {
  json doc;
  std::optional<std::string> dot;
};

AtomStore make_store(const Config& cfg) {
  Signature sig{cfg.props, cfg.agents};
  validate_signature(sig);
  if (cfg.full_cap < 0 || cfg.lazy_cap < cfg.full_cap)
    throw InputError("caps must satisfy 0 <= full cap <= lazy cap");
  return AtomStore(sig, Caps{cfg.full_cap, cfg.lazy_cap, cfg.budget});
}

void flatten(const json& j, const std::string& prefix, std::ostream& out) {
  if (j.is_object()) {
    for (const auto& [k, v] : j.items()) flatten(v, prefix.empty() ? k : prefix + "." + k, out);
  } else if (j.is_array() && !j.empty() && (j.front().is_object() || j.front().is_array())) {
    for (std::size_t i = 0; i < j.size(); ++i) flatten(j[i], prefix + "[" + std::to_string(i) + "]", out);
  } else {
    out << prefix << " = " << (j.is_string() ? j.get<std::string>() : j.dump()) << "\n";
  }
}

void emit(const Output& o, const Config& cfg, const std::string& cmd) {
  if (cfg.format == "json") {
    std::cout << o.doc.dump(2) << "\n";
  } else if (cfg.format == "text") {
    flatten(o.doc, "", std::cout);
  } else {
    if (!o.dot) throw InputError("dot output is not available for '" + cmd + "'");
    std::cout << *o.dot;
  }
}

json opt_size(const std::optional<std::size_t>& v) { return v ? json(*v) : json(nullptr); }
json opt_int(const std::optional<int>& v) { return v ? json(*v) : json(nullptr); }

json verdict_json(const ConditionResult& c) {
  return {{"verdict", to_string(c.verdict)}, {"detail", c.detail}};
}

json checks_json(const std::vector<LevelCheck>& v) {
  json out = json::array();
  for (const auto& c : v) out.push_back({{"level", c.level}, {"verdict", to_string(c.verdict)}, {"detail", c.detail}});
  return out;
}

// Atom with canonical coordinates: rank inside Omega^f_level when sys is
// given, else inside Omega_level when that level is enumerated.
json atom_json(AtomStore& store, CkSystem* sys, AtomId a) {
  json j{{"id", a}, {"level", store.level(a)}, {"val", store.valuation(a)}};
  std::optional<std::size_t> r;
  if (sys) {
    try {
      r = sys->rank(a);
    } catch (const CapExceeded&) {
    }
  } else {
    r = store.rank(a);
  }
  j["rank"] = opt_size(r);
  if (store.level(a) > 0) {
    j["base"] = store.base(a);
    json m = json::array();
    for (int k = 0; k < store.signature().agents; ++k) m.push_back(store.choices(a, k));
    j["choices"] = m;
  }
  return j;
}

KripkeStructure model_or_level(const std::string& model, std::optional<int> level, AtomStore& store) {
  if (!model.empty()) return load_kripke(model);
  if (!level) throw InputError("give --model or --level");
  return store.level_structure(*level);
}

Output cmd_parse(const Config& cfg, const std::string& text) {
  const Formula f = parse(text, Signature{cfg.props, cfg.agents});
  return {{{"command", "parse"}, {"input", text}, {"formula", render(f)}, {"depth", depth(f)},
           {"size", tree_size(f)}},
          std::nullopt};
}

Output cmd_eval(const Config& cfg, const std::string& text, const std::string& model,
                std::optional<int> level) {
  AtomStore store = make_store(cfg);
  const KripkeStructure k = model_or_level(model, level, store);
  const Formula f = parse(text, k.signature());
  const auto idx = to_indices(alpha(k, f));
  const auto ck = to_indices(common_knowledge_points(k, f));
  return {{{"command", "eval"}, {"formula", render(f)}, {"points", k.size()}, {"count", idx.size()},
           {"truth_set", idx}, {"common_knowledge", ck}},
          std::nullopt};
}

Output cmd_refine(const Config& cfg, const std::string& model, std::optional<int> level) {
  AtomStore store = make_store(cfg);
  const KripkeStructure k = model_or_level(model, level, store);
  const auto chain = refine(k);
  json steps = json::array();
  for (std::size_t s = 0; s < chain.size(); ++s)
    steps.push_back({{"step", s}, {"classes", num_classes(chain[s])}, {"partition", chain[s]}});
  return {{{"command", "refine"}, {"points", k.size()}, {"stabilization", chain.size() - 1},
           {"steps", steps}},
          std::nullopt};
}

Output cmd_omega(const Config& cfg, int level, bool stats, bool atoms, bool census,
                 const std::string& text) {
  AtomStore store = make_store(cfg);
  json doc{{"command", "omega"}, {"level", level}};
  std::optional<CkSystem> sys;
  if (!text.empty()) {
    sys.emplace(store, parse(text, store.signature()));
    doc["formula"] = render(sys->formula());
  }
  Output out;
  if (sys) {
    doc["count"] = sys->level_size(level);
  } else {
    doc["count"] = store.omega_count(level);
  }
  if (census) {
    const auto c = store.connectivity_census(level);
    doc["census"] = {{"atoms", c.atoms}, {"block_nodes", c.block_nodes}, {"connected", c.connected}};
  }
  if (stats || atoms || cfg.format == "dot") {
    const KripkeStructure& k = sys ? sys->structure(level) : store.level_structure(level);
    if (stats) {
      json blocks = json::array();
      for (int j = 0; j < k.num_agents(); ++j) blocks.push_back(k.num_blocks(j));
      doc["stats"] = {{"blocks", blocks},
                      {"connected", is_connected(k)},
                      {"cells", cells(k).size()},
                      {"diameter", opt_size(diameter(k))},
                      {"radius", opt_size(radius(k))}};
    }
    if (atoms) {
      json list = json::array();
      const auto& members = sys ? sys->level(level) : store.omega_level(level);
      for (AtomId a : members) list.push_back(atom_json(store, sys ? &*sys : nullptr, a));
      doc["atoms"] = list;
    }
    out.dot = to_dot(k);
  }
  out.doc = doc;
  return out;
}

Output cmd_classify(const Config& cfg, const std::string& text, std::optional<int> cap) {
  AtomStore store = make_store(cfg);
  CkSystem sys(store, parse(text, store.signature()));
  const int gen_cap = cap.value_or(cfg.lazy_cap);
  json doc{{"command", "classify"}, {"formula", render(sys.formula())}, {"depth", sys.depth()}};
  doc["closure"] = to_string(sys.closure());
  doc["semantically_closed"] = sys.semantically_closed();
  doc["closed_core_size"] = sys.closed_core().size();
  doc["ck_nonempty"] = sys.ck_nonempty();
  doc["dense"] = sys.semantically_closed() ? json(sys.has_dense_cell()) : json(nullptr);
  const auto gl = sys.gen_level(gen_cap);
  doc["gen_level"] = {{"level", opt_int(gl.level)}, {"reason", gl.reason}, {"scanned_to", gl.scanned_to}};
  const auto g = sys.is_generative(gen_cap);
  doc["generative"] = {{"value", to_string(g.value)}, {"reason", g.reason}, {"provenance", g.provenance}};
  json levels = json::array();
  std::optional<int> truncated;
  if (sys.semantically_closed()) {
    for (int i = sys.depth(); i <= gen_cap; ++i) {
      try {
        levels.push_back({{"level", i}, {"size", sys.level_size(i)}});
      } catch (const CapExceeded&) {
        truncated = i;
        break;
      }
    }
  }
  doc["levels"] = levels;
  doc["levels_truncated_at"] = opt_int(truncated);
  return {doc, std::nullopt};
}

AtomId pick(CkSystem& sys, int level, std::size_t index) {
  const auto& atoms = sys.level(level);
  if (index >= atoms.size())
    throw InputError("index " + std::to_string(index) + " out of range for level " +
                     std::to_string(level) + " (" + std::to_string(atoms.size()) + " atoms)");
  return atoms[index];
}

Output cmd_extend(const Config& cfg, const std::string& text, int level, std::size_t index,
                  std::optional<int> to) {
  AtomStore store = make_store(cfg);
  CkSystem sys(store, parse(text, store.signature()));
  if (!sys.semantically_closed()) throw PreconditionError("formula is not semantically closed");
  Alienation al(sys);
  const int target = to.value_or(level + 1);
  if (target < level) throw InputError("--to below --level");
  AtomId w = pick(sys, level, index);
  json steps = json::array();
  for (int i = level; i <= target; ++i) {
    json s = atom_json(store, &sys, w);
    if (i < target) {
      s["restricted_extensions"] = sys.count_restricted_extensions(w);
      const AtomId next = sys.least_info_extension(w);
      s["theory_map_agrees"] = al.theory_hop(w, i + 1) == next;
      w = next;
    }
    steps.push_back(s);
  }
  return {{{"command", "extend"}, {"formula", render(sys.formula())}, {"path", steps}}, std::nullopt};
}

Output cmd_alienate(const Config& cfg, const std::string& text, const std::string& sched, int level,
                    std::size_t index, int target, const std::vector<std::string>& l3,
                    const std::vector<int>& l4) {
  AtomStore store = make_store(cfg);
  CkSystem sys(store, parse(text, store.signature()));
  Alienation al(sys);
  const Schedule s = Schedule::parse(sched);
  const auto path = al.extend(s, pick(sys, level, index), target);
  json pj = json::array();
  bool coherent = true;
  for (std::size_t k = 0; k < path.atoms.size(); ++k) {
    pj.push_back(atom_json(store, &sys, path.atoms[k]));
    if (k > 0) coherent &= store.project(path.atoms[k], path.levels[k - 1]) == path.atoms[k - 1];
  }
  json doc{{"command", "alienate"}, {"formula", render(sys.formula())}, {"schedule", s.to_string()},
           {"levels", path.levels}, {"path", pj}, {"coherent", coherent}};
  json lemma3 = json::array();
  for (const auto& item : l3) {
    const auto comma = item.find(',');
    if (comma == std::string::npos) throw InputError("--lemma3 expects i,l");
    const int i = std::stoi(item.substr(0, comma)), l = std::stoi(item.substr(comma + 1));
    lemma3.push_back({{"i", i}, {"l", l}, {"holds", al.lemma3_check(i, l)}, {"g_exact", al.g_exact(i)}});
  }
  doc["lemma3"] = lemma3;
  json lemma4 = json::array();
  for (int i : l4) {
    const auto r = al.lemma4_check(i);
    lemma4.push_back({{"i", i}, {"holds", r.holds}, {"checked", r.checked}, {"failures", r.failures},
                      {"witness_mismatch", r.witness_mismatch}});
  }
  doc["lemma4"] = lemma4;
  return {doc, std::nullopt};
}

Output cmd_separate(const Config& cfg, const std::string& text, const std::string& s_text,
                    const std::string& t_text, int level, std::size_t index, int horizon) {
  AtomStore store = make_store(cfg);
  CkSystem sys(store, parse(text, store.signature()));
  Alienation al(sys);
  const Schedule s = Schedule::parse(s_text), t = Schedule::parse(t_text);
  const auto rep = al.separation_witness(s, t, pick(sys, level, index), horizon);
  json cands = json::array();
  for (const auto& c : rep.candidates)
    cands.push_back({{"via", c.via}, {"m", c.m}, {"l", c.l}, {"e_l_g_on_lemma3_path", c.e_l_g_on_lemma3_path},
                     {"e_g_on_lemma4_path", c.e_g_on_lemma4_path}, {"certified", c.certified},
                     {"skipped", c.skipped}});
  return {{{"command", "separate"},
           {"formula", render(sys.formula())},
           {"S", s.to_string()},
           {"T", t.to_string()},
           {"horizon", horizon},
           {"found", rep.found},
           {"lower_bound", rep.lower_bound},
           {"m", rep.m},
           {"l", rep.l},
           {"via", rep.via},
           {"candidates", cands}},
          std::nullopt};
}

Output cmd_fanout(const Config& cfg, const std::string& text, const std::string& s_text,
                  const std::string& t_text, int cap, bool strict, std::optional<std::size_t> w0,
                  std::optional<int> export_level) {
  AtomStore store = make_store(cfg);
  CkSystem sys(store, parse(text, store.signature()));
  const Schedule s = Schedule::parse(s_text);
  const Schedule t = Schedule::parse(t_text.empty() ? s_text : t_text);
  const auto st = fanout_build(sys, s, t, cap, !strict, w0);
  const auto rep = fanout_checks(sys, st);
  json levels = json::array();
  for (const auto& l : st.levels)
    levels.push_back({{"level", l.level}, {"in_T", l.in_t}, {"A", l.a.size()}, {"B", l.b.size()},
                      {"gamma", l.gamma.size()}});
  json sizes = json::array();
  for (const auto& [l, n] : rep.block_sizes) sizes.push_back({{"level", l}, {"size", n}});
  json doc{{"command", "fanout"},
           {"formula", render(sys.formula())},
           {"S", st.s_text},
           {"T", st.t_text},
           {"mode", st.relaxed ? "relaxed" : "strict"},
           {"gen", st.gen},
           {"origin_level", st.origin_level},
           {"w0", {{"source_rank", *sys.rank(st.w0_source)}, {"source_level", st.gen + 2},
                   {"mode", st.w0_mode}, {"atom", atom_json(store, &sys, st.w0)}}},
           {"conditions", {{"c1", verdict_json(st.conditions.c1)}, {"c2", verdict_json(st.conditions.c2)},
                           {"c3", verdict_json(st.conditions.c3)}, {"c4", verdict_json(st.conditions.c4)}}},
           {"levels", levels},
           {"gamma_checked", st.gamma_checked},
           {"counterexample", st.counterexample ? json(*st.counterexample) : json(nullptr)},
           {"notes", st.notes},
           {"checks",
            {{"validity", to_string(rep.validity)},
             {"lemma5", checks_json(rep.lemma5)},
             {"lemma6", checks_json(rep.lemma6)},
             {"lemma7", checks_json(rep.lemma7)},
             {"growth", checks_json(rep.growth)},
             {"disjoint", checks_json(rep.disjoint)},
             {"density", {{"resolved", rep.density_resolved}, {"unresolved_at_horizon", rep.density_unresolved}}},
             {"block_sizes", sizes},
             {"block_sizes_increase", to_string(rep.block_sizes_increase)}}}};
  Output out;
  if (export_level) {
    const KripkeStructure k = prefix_structure(sys, st, *export_level);
    doc["prefix"] = {{"level", *export_level}, {"truncated", true}, {"structure", to_json(k)}};
    out.dot = to_dot(k);
  }
  out.doc = doc;
  return out;
}

Output cmd_shift(int n, bool pi, std::optional<int> depth_opt, bool with_structure) {
  const KripkeStructure k = shift::build_shift_structure(n, pi);
  const int depth = depth_opt.value_or(2 * n + 1);
  bool shift_ok = true;
  for (shift::Word y = 0; y < k.size(); ++y)
    shift_ok &= shift::tau(shift::sigma(y, n), n) == shift::circular_shift(y, n);
  std::size_t max_block = 0;
  for (int j = 0; j < k.num_agents(); ++j)
    for (std::size_t b = 0; b < k.num_blocks(j); ++b)
      max_block = std::max(max_block, k.block_members(j, static_cast<int>(b)).size());
  const auto p = shift::theory_separation_profile(k, depth);
  json doc{{"command", "shift"},
           {"n", n},
           {"pi", pi},
           {"points", k.size()},
           {"agents", k.num_agents()},
           {"max_block", max_block},
           {"cells", cells(k).size()},
           {"tau_sigma_is_shift", shift_ok},
           {"profile",
            {{"depth", depth},
             {"fibers", p.fibers},
             {"separating_depth", opt_int(p.separating_depth)},
             {"stabilization", p.stabilization},
             {"stable_classes", p.stable_classes},
             {"refine_matches_theory",
              p.refine_matches_theory ? json(*p.refine_matches_theory) : json(nullptr)}}}};
  if (with_structure) doc["structure"] = to_json(k);
  return {doc, to_dot(k)};
}

Output cmd_tautology(const Config& cfg, const std::string& text) {
  AtomStore store = make_store(cfg);
  const Formula f = parse(text, store.signature());
  return {{{"command", "tautology"}, {"formula", render(f)}, {"depth", depth(f)},
           {"tautology", store.is_tautology(f)}},
          std::nullopt};
}

int exit_code(ErrorKind k) {
  switch (k) {
    case ErrorKind::Parse:
      return 2;
    case ErrorKind::Cap:
      return 3;
    case ErrorKind::Precondition:
      return 4;
    case ErrorKind::Input:
      return 1;
  }
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"s5cells: canonical S5 models, common knowledge and cell constructions"};
  app.require_subcommand(1);
  app.fallthrough();
  Config cfg;
  app.add_option("--props", cfg.props, "number of primitive propositions")->envname("S5CELLS_PROPS");
  app.add_option("--agents", cfg.agents, "number of agents")->envname("S5CELLS_AGENTS");
  app.add_option("--full-cap", cfg.full_cap, "highest fully enumerated level")->envname("S5CELLS_FULL_CAP");
  app.add_option("--lazy-cap", cfg.lazy_cap, "highest level for per-atom work")->envname("S5CELLS_LAZY_CAP");
  app.add_option("--budget", cfg.budget, "atom budget")->envname("S5CELLS_BUDGET");
  app.add_option("--format", cfg.format, "json, text or dot")->check(CLI::IsMember({"json", "text", "dot"}));

  std::string formula, model, sched, s_text, t_text;
  std::optional<int> level_opt, to, cap_opt, depth_opt, export_level;
  std::optional<std::size_t> w0;
  int level = 0, target = 0, horizon = 0, cap = 0, n = 1;
  std::size_t index = 0;
  bool stats = false, atoms = false, census = false, strict = false, pi = false, with_structure = false;
  std::vector<std::string> lemma3;
  std::vector<int> lemma4;
  std::function<Output()> run;
  const auto or_top = [&] { return formula.empty() ? std::string("p0 | !p0") : formula; };

  auto* c_parse = app.add_subcommand("parse", "parse and normalize a formula");
  c_parse->add_option("-f,--formula", formula)->required();
  c_parse->callback([&] { run = [&] { return cmd_parse(cfg, formula); }; });

  auto* c_eval = app.add_subcommand("eval", "truth set of a formula on a model or on Omega_i");
  c_eval->add_option("-f,--formula", formula)->required();
  c_eval->add_option("--model", model, "kripke JSON file");
  c_eval->add_option("--level", level_opt, "use the Omega_i structure instead of a model");
  c_eval->callback([&] { run = [&] { return cmd_eval(cfg, formula, model, level_opt); }; });

  auto* c_refine = app.add_subcommand("refine", "partition refinement R_0, R_1, ...");
  c_refine->add_option("--model", model, "kripke JSON file");
  c_refine->add_option("--level", level_opt, "use the Omega_i structure instead of a model");
  c_refine->callback([&] { run = [&] { return cmd_refine(cfg, model, level_opt); }; });

  auto* c_omega = app.add_subcommand("omega", "enumerate Omega_i or Omega^f_i");
  c_omega->add_option("--level", level)->required();
  c_omega->add_option("-f,--formula", formula, "restrict to Omega^f");
  c_omega->add_flag("--stats", stats, "blocks, connectivity, diameter, radius");
  c_omega->add_flag("--atoms", atoms, "list the atoms");
  c_omega->add_flag("--census", census, "streaming connectivity census");
  c_omega->callback([&] { run = [&] { return cmd_omega(cfg, level, stats, atoms, census, formula); }; });

  auto* c_classify = app.add_subcommand("classify", "closure, density and generativity of a formula");
  c_classify->add_option("-f,--formula", formula)->required();
  c_classify->add_option("--gen-cap", cap_opt, "highest level scanned for gen(f)");
  c_classify->callback([&] { run = [&] { return cmd_classify(cfg, formula, cap_opt); }; });

  auto* c_extend = app.add_subcommand("extend", "least-information extensions of one atom");
  c_extend->add_option("-f,--formula", formula, "default: the tautology p0 | !p0");
  c_extend->add_option("--level", level)->required();
  c_extend->add_option("--index", index)->required();
  c_extend->add_option("--to", to, "target level (default level+1)");
  c_extend->callback([&] { run = [&] { return cmd_extend(cfg, or_top(), level, index, to); }; });

  auto* c_alien = app.add_subcommand("alienate", "alienated extension along a schedule");
  c_alien->add_option("-f,--formula", formula, "default: the tautology p0 | !p0");
  c_alien->add_option("--schedule", sched)->required();
  c_alien->add_option("--level", level)->required();
  c_alien->add_option("--index", index)->required();
  c_alien->add_option("--target", target)->required();
  c_alien->add_option("--lemma3", lemma3, "check E^l g_i on the image, given as i,l");
  c_alien->add_option("--lemma4", lemma4, "check E g_i fails on least-information extensions");
  c_alien->callback([&] {
    run = [&] { return cmd_alienate(cfg, or_top(), sched, level, index, target, lemma3, lemma4); };
  });

  auto* c_sep = app.add_subcommand("separate", "separation witness between two alienated paths");
  c_sep->add_option("-f,--formula", formula)->required();
  c_sep->add_option("--S", s_text)->required();
  c_sep->add_option("--T", t_text)->required();
  c_sep->add_option("--level", level)->required();
  c_sep->add_option("--index", index)->required();
  c_sep->add_option("--horizon", horizon)->required();
  c_sep->callback([&] {
    run = [&] { return cmd_separate(cfg, formula, s_text, t_text, level, index, horizon); };
  });

  auto* c_fan = app.add_subcommand("fanout", "finite-fanout A/B construction and its checks");
  c_fan->add_option("-f,--formula", formula)->required();
  c_fan->add_option("--schedule", s_text, "S")->required();
  c_fan->add_option("--T", t_text, "T (default S)");
  c_fan->add_option("--cap", cap, "last level to build")->required();
  c_fan->add_flag("--strict", strict, "refuse unless the schedule conditions pass");
  c_fan->add_option("--w0", w0, "rank in Omega^f_{gen+2} of the atom w0 grows from");
  c_fan->add_option("--export-level", export_level, "include the built prefix at this level");
  c_fan->callback([&] {
    run = [&] { return cmd_fanout(cfg, formula, s_text, t_text, cap, strict, w0, export_level); };
  });

  auto* c_shift = app.add_subcommand("shift", "circular Bernoulli-shift window structures");
  c_shift->add_option("--n", n, "half-width of the window")->required();
  c_shift->add_flag("--pi", pi, "add the third agent switching position 0");
  c_shift->add_option("--depth", depth_opt, "theory depth (default 2n+1)");
  c_shift->add_flag("--structure", with_structure, "include the structure JSON");
  c_shift->callback([&] { run = [&] { return cmd_shift(n, pi, depth_opt, with_structure); }; });

  auto* c_taut = app.add_subcommand("tautology", "is the formula true on all of Omega_depth");
  c_taut->add_option("-f,--formula", formula)->required();
  c_taut->callback([&] { run = [&] { return cmd_tautology(cfg, formula); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  const std::string cmd = app.get_subcommands().front()->get_name();
  try {
    emit(run(), cfg, cmd);
  } catch (const Error& e) {
    json err{{"kind", to_string(e.kind())}, {"message", e.what()}, {"command", cmd}};
    if (const auto* pe = dynamic_cast<const ParseError*>(&e)) err["position"] = pe->position();
    std::cerr << json{{"error", err}}.dump() << "\n";
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    std::cerr << json{{"error", {{"kind", "internal"}, {"message", e.what()}, {"command", cmd}}}}.dump() << "\n";
    return 1;
  }
  return 0;
}
