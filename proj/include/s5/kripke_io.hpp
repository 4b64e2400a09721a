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

#ifndef S5_KRIPKE_IO_HPP
#define S5_KRIPKE_IO_HPP

#include <json.hpp>

#include <string>
#include <vector>

#include "s5/kripke.hpp"

namespace s5 {

// {"num_props": n, "agents": m,
//  "points": [{"id": k, "val": [bool, ...]}, ...],
//  "partitions": [[block id per point], ...]}
nlohmann::json to_json(const KripkeStructure& k);
KripkeStructure kripke_from_json(const nlohmann::json& doc);
KripkeStructure load_kripke(const std::string& path);

/// Graphviz export. Optional labels replace the valuation text of each node.
std::string to_dot(const KripkeStructure& k, const std::vector<std::string>& labels = {});

}  // namespace s5

#endif  // S5_KRIPKE_IO_HPP
