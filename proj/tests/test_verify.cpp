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

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "locmetric/report_io.hpp"
#include "locmetric/verify.hpp"

namespace {

using namespace locmetric;

const AxiomReport& Find(const std::vector<AxiomReport>& rs, Axiom a) {
  auto it = std::find_if(rs.begin(), rs.end(), [a](const AxiomReport& r) { return r.axiom == a; });
  EXPECT_NE(it, rs.end());
  return *it;
}

double SquaredChord(const Param&, const SpherePoint& a, const SpherePoint& b) {
  const double c = chord(a, b);
  return c * c;
}

double Broken(const Param& p, const SpherePoint& a, const SpherePoint& b) {
  const double c = chord(a, b);
  return c <= p.c_star() ? c : 2.0 * p.t();
}

TEST(SphereSuiteTest, PassesAtTOne) {
  SphereSuiteOptions o;
  o.samples = 5000;
  const auto reports = run_sphere_suite(make_param(1.0), o);
  ASSERT_EQ(kSphereAxioms.size(), reports.size());
  for (const auto& r : reports) {
    EXPECT_TRUE(r.pass()) << axiom_name(r.axiom);
    EXPECT_LE(r.max_violation, 1e-12) << axiom_name(r.axiom);
  }
}

TEST(SphereSuiteTest, PassesAtHalfWithManySamples) {
  SphereSuiteOptions o;
  o.samples = 100'000;
  const auto reports = run_sphere_suite(make_param(0.5), o);
  for (const auto& r : reports) {
    EXPECT_TRUE(r.pass()) << axiom_name(r.axiom) << " " << r.max_violation;
    EXPECT_GT(r.samples, 0u) << axiom_name(r.axiom);
  }
  EXPECT_EQ(100'000u, Find(reports, Axiom::Triangle).samples);
}

TEST(SphereSuiteTest, BrokenMetricFailsTriangleWithReplayableWitness) {
  const Param p = make_param(0.6);
  SphereSuiteOptions o;
  o.samples = 20'000;
  o.distance = Broken;
  const auto reports = run_sphere_suite(p, o);
  const AxiomReport& tri = Find(reports, Axiom::Triangle);
  EXPECT_EQ(Status::Fail, tri.status());
  ASSERT_TRUE(tri.witness.has_value());
  const auto replay = sphere_sample(p, o, tri.witness->index);
  EXPECT_NEAR(tri.max_violation, replay[2].violation, 1e-12);
  ASSERT_EQ(3u, tri.witness->points.size());
  const SpherePoint P(tri.witness->points[0]);
  const SpherePoint Q(tri.witness->points[1]);
  const SpherePoint R(tri.witness->points[2]);
  const double v = std::max({Broken(p, P, R) - Broken(p, P, Q) - Broken(p, Q, R),
                             Broken(p, P, Q) - Broken(p, P, R) - Broken(p, R, Q),
                             Broken(p, Q, R) - Broken(p, Q, P) - Broken(p, P, R)});
  EXPECT_NEAR(tri.max_violation, v, 1e-12);
  EXPECT_FALSE(all_pass(reports));
}

TEST(SphereSuiteTest, SquaredChordFailsTriangle) {
  SphereSuiteOptions o;
  o.samples = 5000;
  o.distance = SquaredChord;
  const auto reports = run_sphere_suite(make_param(0.6), o);
  EXPECT_EQ(Status::Fail, Find(reports, Axiom::Triangle).status());
}

TEST(SphereSuiteTest, IndependentOfThreadCount) {
  SphereSuiteOptions o;
  o.samples = 3000;
  o.seed = 42;
  const auto a = run_sphere_suite(make_param(0.7), o);
  o.threads = 4;
  const auto b = run_sphere_suite(make_param(0.7), o);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(to_record(a[i]).dump(), to_record(b[i]).dump());
  }
}

TEST(SphereSuiteTest, RejectsZeroSamples) {
  SphereSuiteOptions o;
  o.samples = 0;
  EXPECT_THROW(run_sphere_suite(make_param(0.5), o), RangeError);
}

TEST(SpaceSuiteTest, PassesForSeveralT) {
  for (double t : {0.3, 0.6, 0.9}) {
    SpaceSuiteOptions o;
    o.samples = 200;
    o.seed = 5;
    const auto reports = run_space_suite(make_param(t), o);
    ASSERT_EQ(kSpaceAxioms.size(), reports.size());
    for (const auto& r : reports) {
      EXPECT_TRUE(r.pass()) << t << " " << axiom_name(r.axiom) << " " << r.max_violation;
    }
  }
}

TEST(SpaceSuiteTest, ExhaustedBudgetIsInconclusive) {
  SpaceSuiteOptions o;
  o.samples = 20;
  o.rho.budget = 1;
  const auto reports = run_space_suite(make_param(0.6), o);
  EXPECT_EQ(Status::Inconclusive, Find(reports, Axiom::Symmetry).status());
  EXPECT_FALSE(all_pass(reports));
}

TEST(SpaceSuiteTest, IndependentOfThreadCount) {
  SpaceSuiteOptions o;
  o.samples = 60;
  const auto a = run_space_suite(make_param(0.45), o);
  o.threads = 3;
  const auto b = run_space_suite(make_param(0.45), o);
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(to_record(a[i]).dump(), to_record(b[i]).dump());
  }
}

TEST(ReportStatusTest, Rules) {
  AxiomReport r;
  r.tolerance = 1e-9;
  EXPECT_EQ(Status::Pass, r.status());
  r.inconclusive = 1;
  EXPECT_EQ(Status::Inconclusive, r.status());
  r.max_violation = 1e-6;
  EXPECT_EQ(Status::Fail, r.status());
  r.max_violation = std::nan("");
  EXPECT_EQ(Status::Fail, r.status());
}

TEST(ReportIoTest, RecordsRoundTrip) {
  SphereSuiteOptions o;
  o.samples = 100;
  o.distance = Broken;
  const auto reports = run_sphere_suite(make_param(0.6), o);
  std::ostringstream os;
  write_records(os, reports);
  std::istringstream is(os.str());
  std::string line;
  std::size_t n = 0;
  while (std::getline(is, line)) {
    const auto j = nlohmann::json::parse(line);
    const AxiomReport& r = reports[n++];
    EXPECT_EQ("sphere", j["suite"]);
    EXPECT_EQ(std::string(axiom_name(r.axiom)), j["id"]);
    EXPECT_EQ(r.pass(), j["pass"]);
    EXPECT_EQ(r.samples, j["samples"].get<std::size_t>());
    EXPECT_DOUBLE_EQ(r.max_violation, j["max_violation"].get<double>());
    EXPECT_EQ(r.witness.has_value(), j.contains("witness"));
  }
  EXPECT_EQ(reports.size(), n);
}

TEST(ReportIoTest, TextHasOneLinePerReport) {
  SphereSuiteOptions o;
  o.samples = 50;
  const auto reports = run_sphere_suite(make_param(0.6), o);
  std::ostringstream os;
  write_text(os, reports);
  const std::string s = os.str();
  EXPECT_EQ(reports.size(), static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n')));
  EXPECT_NE(std::string::npos, s.find("sphere t=0.6 triangle"));
  EXPECT_NE(std::string::npos, s.find("PASS"));
}

}  // namespace
