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

#include "s5/kripke_io.hpp"

#include <fstream>
#include <sstream>

#include "s5/error.hpp"

namespace s5 {

using nlohmann::json;

json to_json(const KripkeStructure& k) {
  json points = json::array();
  for (std::size_t s = 0; s < k.size(); ++s) {
    json val = json::array();
    for (int p = 0; p < k.num_props(); ++p) val.push_back(k.holds(s, p));
    points.push_back({{"id", s}, {"val", val}});
  }
  json parts = json::array();
  for (int j = 0; j < k.num_agents(); ++j) parts.push_back(k.partition(j));
  return {{"num_props", k.num_props()},
          {"agents", k.num_agents()},
          {"points", points},
          {"partitions", parts}};
}

KripkeStructure kripke_from_json(const json& doc) {
  try {
    const int props = doc.at("num_props").get<int>();
    const int agents = doc.at("agents").get<int>();
    const auto& points = doc.at("points");
    if (!points.is_array() || points.empty()) throw InputError("'points' must be a nonempty array");
    std::vector<std::uint64_t> val(points.size());
    std::vector<bool> seen(points.size(), false);
    for (const auto& p : points) {
      auto id = p.at("id").get<std::size_t>();
      if (id >= points.size() || seen[id]) throw InputError("point ids must be 0..n-1, each once");
      seen[id] = true;
      const auto& bits = p.at("val");
      if (bits.size() != static_cast<std::size_t>(props))
        throw InputError("point " + std::to_string(id) + " has a valuation of the wrong length");
      std::uint64_t v = 0;
      for (int q = 0; q < props; ++q)
        if (bits[q].get<bool>()) v |= 1ULL << q;
      val[id] = v;
    }
    auto parts = doc.at("partitions").get<std::vector<Partition>>();
    if (parts.size() != static_cast<std::size_t>(agents))
      throw InputError("'partitions' must have one entry per agent");
    return KripkeStructure(props, std::move(val), std::move(parts));
  } catch (const json::exception& e) {
    throw InputError(std::string("malformed structure JSON: ") + e.what());
  }
}

KripkeStructure load_kripke(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  json doc;
  try {
    in >> doc;
  } catch (const json::parse_error& e) {
    throw ParseError(e.byte, std::string("invalid JSON in ") + path);
  }
  return kripke_from_json(doc);
}

std::string to_dot(const KripkeStructure& k, const std::vector<std::string>& labels) {
  static const char* colors[] = {"red", "blue", "darkgreen", "orange", "purple",
                                 "brown", "magenta", "gray"};
  std::ostringstream out;
  out << "graph kripke {\n";
  for (std::size_t s = 0; s < k.size(); ++s) {
    std::string label;
    if (s < labels.size()) {
      label = labels[s];
    } else {
      for (int p = 0; p < k.num_props(); ++p)
        label += (k.holds(s, p) ? "" : "!") + std::string("p") + std::to_string(p) + " ";
      if (!label.empty()) label.pop_back();
    }
    out << "  n" << s << " [label=\"" << s << ": " << label << "\"];\n";
  }
  for (int j = 0; j < k.num_agents(); ++j)
    for (std::size_t b = 0; b < k.num_blocks(j); ++b) {
      const auto& mem = k.block_members(j, static_cast<int>(b));
      for (std::size_t x = 0; x < mem.size(); ++x)
        for (std::size_t y = x + 1; y < mem.size(); ++y)
          out << "  n" << mem[x] << " -- n" << mem[y] << " [color=" << colors[j % 8]
              << ", label=\"" << j << "\"];\n";
    }
  out << "}\n";
  return out.str();
}

}  // namespace s5
