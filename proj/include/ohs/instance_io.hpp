// Copyright 2026 The ohs Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Instance files:
//   {"n": int, "weighted": bool, "costs": ["p/q", ...],
//    "sets": [[int, ...], ...], "order": [int, ...]}
// "order" is optional and defaults to the given order. "costs" may be
// omitted for unweighted instances. Any extra keys (e.g. "geometry") are
// carried through untouched by readers that do not understand them.

#pragma once

#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "ohs/core.hpp"

namespace ohs {

struct InstanceFile {
  SetSystem system;
  ArrivalStream stream;
  nlohmann::json extra = nlohmann::json::object();
};

inline nlohmann::json to_json(const SetSystem& system,
                              const ArrivalStream* stream = nullptr) {
  nlohmann::json j;
  j["n"] = system.n();
  j["weighted"] = system.weighted();
  auto costs = nlohmann::json::array();
  for (const auto& c : system.costs()) costs.push_back(c.str());
  j["costs"] = std::move(costs);
  j["sets"] = system.sets();
  if (stream) j["order"] = stream->order();
  return j;
}

inline InstanceFile instance_from_json(const nlohmann::json& j) {
  if (!j.contains("n") || !j.contains("sets"))
    throw InvalidInstance("instance JSON needs 'n' and 'sets'");
  auto n = j.at("n").get<std::size_t>();
  bool weighted = j.value("weighted", false);
  std::vector<Rational> costs(n, Rational(1));
  if (j.contains("costs")) {
    const auto& jc = j.at("costs");
    if (jc.size() != n) throw InvalidInstance("'costs' length differs from n");
    for (std::size_t e = 0; e < n; ++e) {
      costs[e] = jc[e].is_string() ? Rational::parse(jc[e].get<std::string>())
                                   : Rational(jc[e].get<std::int64_t>());
    }
  }
  auto sets = j.at("sets").get<std::vector<ElementSet>>();
  InstanceFile out{SetSystem(std::move(costs), std::move(sets), weighted),
                   ArrivalStream{}, nlohmann::json::object()};
  if (j.contains("order"))
    out.stream = ArrivalStream(j.at("order").get<std::vector<std::size_t>>());
  else
    out.stream = ArrivalStream::identity(out.system.m());
  if (out.stream.size() != out.system.m())
    throw InvalidInstance("'order' length differs from number of sets");
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (it.key() == "n" || it.key() == "weighted" || it.key() == "costs" ||
        it.key() == "sets" || it.key() == "order")
      continue;
    out.extra[it.key()] = it.value();
  }
  return out;
}

inline InstanceFile read_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open instance file " + path);
  return instance_from_json(nlohmann::json::parse(in));
}

inline void write_json_file(const std::string& path, const nlohmann::json& j) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << j.dump(2) << '\n';
}

}  // namespace ohs
