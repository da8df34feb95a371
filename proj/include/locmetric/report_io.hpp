// Copyright 2026 The locmetric Authors
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

#pragma once

#include <iomanip>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "locmetric/format.hpp"
#include "locmetric/verify.hpp"

namespace locmetric {

/// One line per report:
///   sphere t=0.6 triangle            samples=10000 max_violation=0 tol=1e-09 PASS seed=1
inline void write_text(std::ostream& os, const std::vector<AxiomReport>& reports) {
  for (const auto& r : reports) {
    std::ostringstream name;
    name << std::left << std::setw(24) << axiom_name(r.axiom);
    std::string status(status_name(r.status()));
    for (auto& ch : status) ch = static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
    os << r.suite << " t=" << format_number(r.t) << ' ' << name.str() << " samples=" << r.samples
       << " max_violation=" << format_number(r.max_violation, 6) << " tol=" << format_number(r.tolerance, 6)
       << ' ' << status << " seed=" << r.seed;
    if (r.inconclusive > 0) os << " inconclusive=" << r.inconclusive;
    if (r.status() != Status::Pass && r.witness) {
      os << " witness_index=" << r.witness->index << " witness_seed=" << r.witness->seed;
    }
    os << '\n';
  }
}

inline nlohmann::json to_record(const AxiomReport& r) {
  nlohmann::json j;
  j["suite"] = r.suite;
  j["id"] = std::string(axiom_name(r.axiom));
  j["t"] = r.t;
  j["samples"] = r.samples;
  j["inconclusive"] = r.inconclusive;
  j["max_violation"] = r.max_violation;
  j["tolerance"] = r.tolerance;
  j["pass"] = r.pass();
  j["status"] = std::string(status_name(r.status()));
  j["seed"] = r.seed;
  if (r.witness) {
    nlohmann::json w;
    w["index"] = r.witness->index;
    w["seed"] = r.witness->seed;
    w["t"] = r.witness->t;
    auto& pts = w["points"] = nlohmann::json::array();
    for (const auto& p : r.witness->points) pts.push_back({p.x, p.y, p.z});
    j["witness"] = std::move(w);
  }
  return j;
}

/// JSON Lines: one record per axiom report.
inline void write_records(std::ostream& os, const std::vector<AxiomReport>& reports) {
  for (const auto& r : reports) os << to_record(r).dump() << '\n';
}

}  // namespace locmetric
