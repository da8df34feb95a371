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

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "locmetric/format.hpp"
#include "locmetric/geometry.hpp"
#include "locmetric/parallel.hpp"
#include "locmetric/report_io.hpp"
#include "locmetric/rho.hpp"
#include "locmetric/sphere_metric.hpp"
#include "locmetric/verify.hpp"

namespace locmetric::cli {

/// Process exit codes.
enum ExitCode : int {
  kOk = 0,
  kVerificationFailed = 1,
  kUsage = 2,
  kNotConverged = 3,
  kInconclusive = 4,
  kIoError = 5,
};

enum class Format { Csv, Records, Text };

struct RunConfig {
  std::vector<double> t_values{0.6};
  Point3 p{};
  Point3 q{1.0, 0.0, 0.0};
  double d_min = 0.0;
  double d_max = 10.0;
  double d_step = 0.5;
  double tol = 1e-6;
  double sphere_tol = 1e-9;
  double grid = 1e-2;
  int n_cap = 0;
  std::size_t samples = 10'000;
  std::size_t space_samples = 200;
  double box = 20.0;
  std::uint64_t seed = 1;
  unsigned threads = 1;
  std::string out;
  Format format = Format::Text;
  /// Replace d_t by a broken metric in the sphere suite (harness self-test).
  bool inject_fault = false;
};

/// Environment variable naming the default output directory.
inline constexpr const char* kOutDirEnv = "LOCMETRIC_OUT_DIR";

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline void validate(const RunConfig& c) {
  if (c.t_values.empty()) throw UsageError("at least one t value is required");
  for (double t : c.t_values) {
    if (!(t > 0.0 && t <= 1.0)) throw UsageError("t must lie in (0, 1], got " + format_number(t));
  }
  if (!(c.tol > 0.0)) throw UsageError("--tol must be positive");
  if (!(c.sphere_tol > 0.0)) throw UsageError("--sphere-tol must be positive");
  if (!(c.grid > 0.0)) throw UsageError("--grid must be positive");
  if (!(c.d_step > 0.0)) throw UsageError("--d-step must be positive");
  if (!(c.d_min >= 0.0) || !(c.d_max >= c.d_min)) throw UsageError("need 0 <= --d-min <= --d-max");
  if (!(c.box > 0.0)) throw UsageError("--box must be positive");
  if (c.n_cap < 0) throw UsageError("--ncap must be nonnegative");
  if (c.samples < 1 || c.space_samples < 1) throw UsageError("sample counts must be positive");
}

inline RhoOptions rho_options(const RunConfig& c) {
  RhoOptions o;
  o.tol = c.tol;
  o.grid = c.grid;
  o.n_cap = c.n_cap;
  return o;
}

inline std::string witness_string(const StepProfile& w) {
  std::string s = "[";
  for (std::size_t i = 0; i < w.lengths.size(); ++i) {
    if (i > 0) s += ',';
    s += format_number(w.lengths[i]);
  }
  return s + "]";
}

/// Prints the bracket for rho_t(p, q) for each t.
inline int cmd_dist(const RunConfig& c, std::ostream& os) {
  validate(c);
  int code = kOk;
  for (double t : c.t_values) {
    const IntervalEstimate e = rho(make_param(t), c.p, c.q, rho_options(c));
    if (!e.converged) code = kNotConverged;
    if (c.format == Format::Records) {
      nlohmann::json j{{"t", t},          {"d_E", e.distance},  {"lo", e.lo},
                       {"hi", e.hi},      {"converged", e.converged},
                       {"witness", e.witness.lengths}};
      os << j.dump() << '\n';
    } else {
      os << "t=" << format_number(t) << " d_E=" << format_number(e.distance) << " lo=" << format_number(e.lo)
         << " hi=" << format_number(e.hi) << " width=" << format_number(e.width(), 3)
         << " converged=" << (e.converged ? "yes" : "no") << " witness=" << witness_string(e.witness)
         << '\n';
    }
  }
  return code;
}

/// D values d_min, d_min + step, ... up to d_max, computed by index.
inline std::vector<double> distance_grid(const RunConfig& c) {
  std::vector<double> ds;
  const auto n = static_cast<std::size_t>(std::floor((c.d_max - c.d_min) / c.d_step + 1e-9));
  for (std::size_t i = 0; i <= n; ++i) ds.push_back(c.d_min + static_cast<double>(i) * c.d_step);
  return ds;
}

/// Table of brackets over (t, D), sorted by t then D. Rows are computed in
/// parallel and written in order, so the output depends only on the config.
inline int cmd_profile(const RunConfig& c, std::ostream& os) {
  validate(c);
  std::vector<double> ts = c.t_values;
  std::sort(ts.begin(), ts.end());
  ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
  const std::vector<double> ds = distance_grid(c);
  struct Row {
    double t;
    double d;
    IntervalEstimate e;
  };
  std::vector<Row> rows(ts.size() * ds.size());
  const RhoOptions ro = rho_options(c);
  parallel_for(rows.size(), c.threads, [&](std::size_t i) {
    const double t = ts[i / ds.size()];
    const double d = ds[i % ds.size()];
    rows[i] = {t, d, rho_of_distance(make_param(t), d, ro)};
  });
  int code = kOk;
  if (c.format != Format::Records) os << "t,D,lo,hi,lower_envelope,upper_envelope,witness_steps\n";
  for (const Row& r : rows) {
    if (!r.e.converged) code = kNotConverged;
    if (c.format == Format::Records) {
      nlohmann::json j{{"t", r.t},  {"D", r.d}, {"lo", r.e.lo}, {"hi", r.e.hi}, {"lower_envelope", r.t * r.d},
                       {"upper_envelope", r.d}, {"witness_steps", r.e.witness.steps()}};
      os << j.dump() << '\n';
    } else {
      os << format_number(r.t) << ',' << format_number(r.d) << ',' << format_number(r.e.lo) << ','
         << format_number(r.e.hi) << ',' << format_number(r.t * r.d) << ',' << format_number(r.d) << ','
         << r.e.witness.steps() << '\n';
    }
  }
  return code;
}

/// d_t with the antipodal chord dropped beyond the threshold: 2t flat. It
/// jumps at c_star and violates the triangle inequality.
inline double broken_sphere_distance(const Param& param, const SpherePoint& a, const SpherePoint& b) {
  const double c = chord(a, b);
  return c <= param.c_star() ? c : 2.0 * param.t();
}

/// Runs the sphere and space suites for each t.
inline int cmd_verify(const RunConfig& c, std::ostream& os) {
  validate(c);
  std::vector<AxiomReport> all;
  for (double t : c.t_values) {
    const Param param = make_param(t);
    SphereSuiteOptions so;
    so.samples = c.samples;
    so.seed = c.seed;
    so.tol = c.sphere_tol;
    so.threads = c.threads;
    if (c.inject_fault) so.distance = broken_sphere_distance;
    auto sphere = run_sphere_suite(param, so);

    SpaceSuiteOptions sp;
    sp.samples = c.space_samples;
    sp.box = c.box;
    sp.seed = c.seed;
    sp.tol = c.tol;
    sp.threads = c.threads;
    sp.rho = rho_options(c);
    auto space = run_space_suite(param, sp);
    all.insert(all.end(), sphere.begin(), sphere.end());
    all.insert(all.end(), space.begin(), space.end());
  }
  if (c.format == Format::Records) {
    write_records(os, all);
  } else {
    write_text(os, all);
  }
  bool failed = false;
  bool inconclusive = false;
  for (const auto& r : all) {
    failed = failed || r.status() == Status::Fail;
    inconclusive = inconclusive || r.status() == Status::Inconclusive;
  }
  if (failed) return kVerificationFailed;
  return inconclusive ? kInconclusive : kOk;
}

/// Resolves the output destination: --out if given, else a file named
/// `default_name` under $LOCMETRIC_OUT_DIR if set, else `fallback`.
inline int with_output(const RunConfig& c, const std::string& default_name, std::ostream& fallback,
                       std::ostream& err, const std::function<int(std::ostream&)>& body) {
  std::filesystem::path path = c.out;
  if (path.empty()) {
    if (const char* dir = std::getenv(kOutDirEnv); dir != nullptr && *dir != '\0') {
      path = std::filesystem::path(dir) / default_name;
    }
  }
  if (path.empty()) return body(fallback);
  std::ostringstream buffer;
  const int code = body(buffer);
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) {
    err << "error: cannot open " << path.string() << " for writing\n";
    return kIoError;
  }
  file << buffer.str();
  file.flush();
  if (!file) {
    err << "error: write to " << path.string() << " failed\n";
    return kIoError;
  }
  return code;
}

}  // namespace locmetric::cli
