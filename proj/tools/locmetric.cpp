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

#include <array>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "locmetric/cli.hpp"

namespace {

using locmetric::cli::ExitCode;
using locmetric::cli::Format;
using locmetric::cli::RunConfig;

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"locmetric: brackets and verification for the deformed sphere and space metrics"};
  app.fallthrough();
  app.require_subcommand(1);
  app.set_config("--config", "", "key=value configuration file; command-line flags take precedence");

  RunConfig cfg;
  double t_single = 0.0;
  std::vector<double> t_list;
  std::array<double, 3> p{0, 0, 0};
  std::array<double, 3> q{1, 0, 0};
  std::string format = "text";

  app.add_option("--t", t_single, "deformation parameter in (0, 1]");
  app.add_option("--t-list", t_list, "comma separated t values")->delimiter(',');
  app.add_option("--p", p, "first point (dist)");
  app.add_option("--q", q, "second point (dist)");
  app.add_option("--d-min", cfg.d_min, "smallest distance (profile)");
  app.add_option("--d-max", cfg.d_max, "largest distance (profile)");
  app.add_option("--d-step", cfg.d_step, "distance step (profile)");
  app.add_option("--tol", cfg.tol, "bracket width target and space-suite tolerance");
  app.add_option("--sphere-tol", cfg.sphere_tol, "sphere-suite tolerance");
  app.add_option("--grid", cfg.grid, "starting search resolution");
  app.add_option("--ncap", cfg.n_cap, "step cap for search witnesses (0 = automatic)");
  app.add_option("--samples", cfg.samples, "sphere-suite samples");
  app.add_option("--space-samples", cfg.space_samples, "space-suite samples");
  app.add_option("--box", cfg.box, "side of the sampling box (space suite)");
  app.add_option("--seed", cfg.seed, "RNG seed");
  app.add_option("--threads", cfg.threads, "worker threads (0 = all cores)");
  app.add_option("--out", cfg.out, "output file (default: stdout or $LOCMETRIC_OUT_DIR)");
  app.add_option("--format", format, "csv | records | text")
      ->check(CLI::IsMember({"csv", "records", "text"}));
  app.add_flag("--inject-fault", cfg.inject_fault, "replace d_t with a broken metric (self-test)")
      ->group("");

  auto* dist = app.add_subcommand("dist", "bracket rho_t(p, q)");
  auto* profile = app.add_subcommand("profile", "table of rho_t brackets over t and D");
  auto* verify = app.add_subcommand("verify", "run the sphere and space verification suites");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? ExitCode::kOk : ExitCode::kUsage;
  }

  if (!t_list.empty()) {
    cfg.t_values = t_list;
  } else if (app.count("--t") > 0) {
    cfg.t_values = {t_single};
  }
  cfg.p = {p[0], p[1], p[2]};
  cfg.q = {q[0], q[1], q[2]};
  cfg.format = format == "csv" ? Format::Csv : format == "records" ? Format::Records : Format::Text;

  try {
    locmetric::cli::validate(cfg);
    if (dist->parsed()) {
      return locmetric::cli::with_output(cfg, "dist.txt", std::cout, std::cerr,
                                         [&](std::ostream& os) { return locmetric::cli::cmd_dist(cfg, os); });
    }
    if (profile->parsed()) {
      return locmetric::cli::with_output(cfg, "profile.csv", std::cout, std::cerr, [&](std::ostream& os) {
        return locmetric::cli::cmd_profile(cfg, os);
      });
    }
    if (verify->parsed()) {
      return locmetric::cli::with_output(cfg, "verify.txt", std::cout, std::cerr, [&](std::ostream& os) {
        return locmetric::cli::cmd_verify(cfg, os);
      });
    }
  } catch (const locmetric::cli::UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return ExitCode::kUsage;
  } catch (const locmetric::DomainError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return ExitCode::kUsage;
  }
  return ExitCode::kUsage;
}
