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
#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "locmetric/geometry.hpp"
#include "locmetric/parallel.hpp"
#include "locmetric/rho.hpp"
#include "locmetric/rng.hpp"
#include "locmetric/sphere_metric.hpp"

namespace locmetric {

enum class Axiom {
  Identity,
  Symmetry,
  Triangle,
  LocallyEuclidean,
  Squeeze,
  ChordDependence,
  SmallValue,
  ExactBelowTwoT,
  Isometry,
  Embedding,
  Convergence,
};

inline constexpr std::string_view axiom_name(Axiom a) {
  switch (a) {
    case Axiom::Identity: return "identity";
    case Axiom::Symmetry: return "symmetry";
    case Axiom::Triangle: return "triangle";
    case Axiom::LocallyEuclidean: return "locally_euclidean";
    case Axiom::Squeeze: return "squeeze";
    case Axiom::ChordDependence: return "chord_dependence";
    case Axiom::SmallValue: return "small_value_euclidean";
    case Axiom::ExactBelowTwoT: return "corollary5";
    case Axiom::Isometry: return "isometry";
    case Axiom::Embedding: return "embedding_independence";
    case Axiom::Convergence: return "convergence";
  }
  return "unknown";
}

enum class Status { Pass, Fail, Inconclusive };

inline constexpr std::string_view status_name(Status s) {
  switch (s) {
    case Status::Pass: return "pass";
    case Status::Fail: return "fail";
    case Status::Inconclusive: return "inconclusive";
  }
  return "unknown";
}

/// Sample that produced the largest violation; replayable from `seed`.
struct Witness {
  std::vector<Point3> points;
  double t = 0.0;
  std::uint64_t seed = 0;
  std::size_t index = 0;
};

struct AxiomReport {
  std::string suite;
  Axiom axiom = Axiom::Identity;
  double t = 0.0;
  std::size_t samples = 0;
  std::size_t inconclusive = 0;
  double max_violation = 0.0;
  double tolerance = 0.0;
  std::uint64_t seed = 0;
  std::optional<Witness> witness;

  /// A violated check fails outright; otherwise any unresolved sample makes
  /// the report inconclusive.
  Status status() const {
    if (max_violation > tolerance || std::isnan(max_violation)) return Status::Fail;
    if (inconclusive > 0) return Status::Inconclusive;
    return Status::Pass;
  }
  bool pass() const { return status() == Status::Pass; }
};

/// One axiom's outcome on a single sample.
struct Observation {
  bool counted = false;
  bool inconclusive = false;
  double violation = 0.0;
  std::vector<Point3> points;
};

template <std::size_t N>
using SampleOutcome = std::array<Observation, N>;

namespace detail {

template <std::size_t N>
std::vector<AxiomReport> merge_outcomes(std::string_view suite, const std::array<Axiom, N>& axioms,
                                        const std::array<double, N>& tolerances, double t,
                                        std::uint64_t seed,
                                        const std::vector<SampleOutcome<N>>& outcomes) {
  std::vector<AxiomReport> reports(N);
  for (std::size_t a = 0; a < N; ++a) {
    reports[a].suite = std::string(suite);
    reports[a].axiom = axioms[a];
    reports[a].t = t;
    reports[a].tolerance = tolerances[a];
    reports[a].seed = seed;
  }
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    for (std::size_t a = 0; a < N; ++a) {
      const Observation& obs = outcomes[i][a];
      if (!obs.counted) continue;
      AxiomReport& r = reports[a];
      ++r.samples;
      if (obs.inconclusive) ++r.inconclusive;
      const bool worse = std::isnan(obs.violation) || obs.violation > r.max_violation;
      if (worse || (!r.witness && obs.violation >= r.max_violation)) {
        r.max_violation = std::isnan(obs.violation) ? obs.violation : std::max(r.max_violation, obs.violation);
        r.witness = Witness{obs.points, t, stream_seed(seed, i), i};
      }
    }
  }
  return reports;
}

inline Point3 random_in_box(Rng& rng, double side) {
  const double h = 0.5 * side;
  return {rng.uniform(-h, h), rng.uniform(-h, h), rng.uniform(-h, h)};
}

// Point of S^2 at central angle theta from p, in a random direction.
inline SpherePoint at_angle(const SpherePoint& p, double theta, Rng& rng) {
  const auto [e1, e2] = perpendicular_basis(p.vec());
  const double phi = rng.uniform(0.0, 2.0 * std::numbers::pi);
  const Point3 dir = e1 * std::cos(phi) + e2 * std::sin(phi);
  return SpherePoint(p.vec() * std::cos(theta) + dir * std::sin(theta));
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Sphere suite

/// Distance on S^2 under test; defaults to d_t.
using SphereDistance = std::function<double(const Param&, const SpherePoint&, const SpherePoint&)>;

struct SphereSuiteOptions {
  std::size_t samples = 10'000;
  std::uint64_t seed = 1;
  double tol = 1e-9;
  unsigned threads = 1;
  int embeddings = 10;
  SphereDistance distance;
};

inline constexpr std::array<Axiom, 9> kSphereAxioms{
    Axiom::Identity,        Axiom::Symmetry,   Axiom::Triangle, Axiom::LocallyEuclidean, Axiom::Squeeze,
    Axiom::ChordDependence, Axiom::SmallValue, Axiom::Isometry, Axiom::Embedding};

/// Evaluates every sphere check on sample `index`. A third of the samples put
/// Q near the antipode of P and a third put the chord PQ near c_star, so
/// both branches and the switch between them are exercised.
inline SampleOutcome<9> sphere_sample(const Param& param, const SphereSuiteOptions& options,
                                      std::size_t index) {
  const SphereDistance dist = options.distance
                                  ? options.distance
                                  : SphereDistance([](const Param& pr, const SpherePoint& a,
                                                      const SpherePoint& b) { return d_t_sphere(pr, a, b); });
  Rng rng(stream_seed(options.seed, index));
  const double t = param.t();
  SampleOutcome<9> out;

  const SpherePoint P(random_unit_vector(rng));
  const SpherePoint Q = [&] {
    switch (index % 3) {
      case 0: return SpherePoint(random_unit_vector(rng));
      case 1: return detail::at_angle(P, std::numbers::pi - rng.uniform(0.0, 0.6), rng);
      default: {
        const double c = std::clamp(param.c_star() + rng.uniform(-0.05, 0.05), 0.0, 2.0);
        return detail::at_angle(P, angle_of_chord(c), rng);
      }
    }
  }();
  const SpherePoint R = index % 2 == 0 ? SpherePoint(random_unit_vector(rng))
                                       : SpherePoint(Q.vec() + random_vector(rng, rng.uniform(0.0, 0.3)));
  auto pts = [](std::initializer_list<SpherePoint> ps) {
    std::vector<Point3> v;
    for (const auto& s : ps) v.push_back(s.vec());
    return v;
  };

  const double dPQ = dist(param, P, Q);
  const double dQP = dist(param, Q, P);
  const double dPR = dist(param, P, R);
  const double dQR = dist(param, Q, R);
  const double dRQ = dist(param, R, Q);
  const double dRP = dist(param, R, P);
  const double cPQ = chord(P, Q);

  {
    double v = std::abs(dist(param, P, P));
    if (cPQ > 1e-12 && !(dPQ > 0.0)) v = std::max(v, cPQ);
    out[0] = {true, false, v, pts({P, Q})};
  }
  out[1] = {true, false, std::abs(dPQ - dQP), pts({P, Q})};
  {
    const double v = std::max({dPR - dPQ - dQR, dPQ - dPR - dRQ, dQR - dQP - dPR, 0.0});
    out[2] = {true, false, v, pts({P, Q, R})};
  }
  {
    // Local Euclidean property with radius t: pairs inside the d_t-ball of radius t about P.
    auto in_ball = [&] {
      const double c = t * std::cbrt(rng.uniform());
      return detail::at_angle(P, angle_of_chord(std::min(c, 2.0)), rng);
    };
    const SpherePoint A = in_ball();
    const SpherePoint B = in_ball();
    if (dist(param, P, A) < t && dist(param, P, B) < t) {
      out[3] = {true, false, std::abs(dist(param, A, B) - chord(A, B)), pts({P, A, B})};
    }
  }
  out[4] = {true, false, std::max({t * cPQ - dPQ, dPQ - cPQ, 0.0}), pts({P, Q})};
  {
    const SpherePoint A(random_unit_vector(rng));
    const SpherePoint B = detail::at_angle(A, central_angle(P, Q), rng);
    out[5] = {true, false, std::abs(dist(param, A, B) - dPQ), pts({P, Q, A, B})};
  }
  if (dPQ < 2.0 * t - 1e-9) out[6] = {true, false, std::abs(dPQ - cPQ), pts({P, Q})};
  {
    const Isometry iso = random_linear_isometry(rng);
    out[7] = {true, false, std::abs(dist(param, iso.apply(P), iso.apply(Q)) - dPQ), pts({P, Q})};
  }
  {
    const Point3 x = detail::random_in_box(rng, 10.0);
    const double pick = rng.uniform();
    const double c = pick < 0.05 ? 2.0 : pick < 0.1 ? 0.0 : rng.uniform(0.0, 2.0);
    const Point3 y = x + random_vector(rng, c);
    const double c_actual = std::min(distance(x, y), 2.0);
    const double reference = chord_cost(param, c_actual);
    double lo = reference;
    double hi = reference;
    for (int e = 0; e < options.embeddings; ++e) {
      Rng erng(stream_seed(stream_seed(options.seed, index), static_cast<std::uint64_t>(e)));
      const double v = d_t_pair(param, x, y, erng);
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    out[8] = {true, false, hi - lo, {x, y}};
  }
  return out;
}

/// Samples the sphere metric and reports each property: identity, symmetry,
/// triangle inequality, the local Euclidean property with radius t, the
/// squeeze t c <= d_t <= c, chord dependence, Euclidean values below 2t,
/// isometry invariance and independence of the sphere embedding used for
/// pairs of R^3.
inline std::vector<AxiomReport> run_sphere_suite(const Param& param, const SphereSuiteOptions& options) {
  if (options.samples < 1) throw RangeError("run_sphere_suite: need at least one sample");
  std::vector<SampleOutcome<9>> outcomes(options.samples);
  parallel_for(options.samples, options.threads,
               [&](std::size_t i) { outcomes[i] = sphere_sample(param, options, i); });
  std::array<double, 9> tol;
  tol.fill(options.tol);
  return detail::merge_outcomes("sphere", kSphereAxioms, tol, param.t(), options.seed, outcomes);
}

// ---------------------------------------------------------------------------
// Space suite

struct SpaceSuiteOptions {
  std::size_t samples = 1000;
  double box = 20.0;
  std::uint64_t seed = 1;
  double tol = 1e-5;
  unsigned threads = 1;
  /// Bracket agreement required between a pair and its isometric image.
  double isometry_tol = 1e-9;
  std::vector<double> convergence_ts{0.9, 0.99, 0.999};
  /// Evaluator settings; `tol` is overwritten with the suite tolerance.
  RhoOptions rho{};
};

inline constexpr std::array<Axiom, 8> kSpaceAxioms{Axiom::Identity,  Axiom::Symmetry,   Axiom::Triangle,
                                                   Axiom::LocallyEuclidean, Axiom::Squeeze,
                                                   Axiom::ExactBelowTwoT, Axiom::Isometry, Axiom::Convergence};

inline std::array<double, 8> space_tolerances(const SpaceSuiteOptions& o) {
  return {o.tol, o.tol, 3.0 * o.tol, 2.0 * o.tol, o.tol, o.tol, o.isometry_tol, o.tol};
}

/// Space checks on sample `index`, all phrased on brackets: a claim passes
/// only if it holds for the worst values consistent with the brackets.
inline SampleOutcome<8> space_sample(const Param& param, const SpaceSuiteOptions& options,
                                     std::size_t index) {
  Rng rng(stream_seed(options.seed, index));
  RhoOptions ro = options.rho;
  ro.tol = options.tol;
  const double t = param.t();
  auto eval = [&](const Point3& a, const Point3& b) { return rho(param, a, b, ro); };
  SampleOutcome<8> out;

  const Point3 P = detail::random_in_box(rng, options.box);
  // Half the samples place Q within 4 of P, where the bracket shape varies most.
  const Point3 Q = index % 2 == 0 ? detail::random_in_box(rng, options.box)
                                  : P + random_vector(rng, rng.uniform(0.0, 4.0));
  const Point3 R = detail::random_in_box(rng, options.box);
  const double D = distance(P, Q);

  const IntervalEstimate pq = eval(P, Q);
  const IntervalEstimate qp = eval(Q, P);
  const IntervalEstimate qr = eval(Q, R);
  const IntervalEstimate pr = eval(P, R);
  const IntervalEstimate pp = eval(P, P);

  {
    double v = pp.hi;
    if (D > options.tol && !(pq.lo > 0.0)) v = std::max(v, D);
    out[0] = {true, false, v, {P, Q}};
  }
  out[1] = {true, !(pq.converged && qp.converged), std::abs(pq.lo - qp.lo) + std::abs(pq.hi - qp.hi), {P, Q}};
  out[2] = {true, !(pq.converged && qr.converged && pr.converged),
            std::max(0.0, pr.lo - pq.hi - qr.hi), {P, Q, R}};
  {
    auto in_ball = [&] { return P + random_vector(rng, t * std::cbrt(rng.uniform())); };
    const Point3 A = in_ball();
    const Point3 B = in_ball();
    const IntervalEstimate pa = eval(P, A);
    const IntervalEstimate pb = eval(P, B);
    if (pa.hi < t && pb.hi < t) {
      const IntervalEstimate ab = eval(A, B);
      const double dab = distance(A, B);
      out[3] = {true, !ab.converged, std::max(std::abs(ab.lo - dab), std::abs(ab.hi - dab)), {P, A, B}};
    }
  }
  out[4] = {true, !pq.converged, std::max({t * D - pq.lo, pq.hi - D, pq.lo - pq.hi, 0.0}), {P, Q}};
  {
    const double d = rng.uniform(0.0, std::max(0.0, 2.0 * t - 1e-6));
    const Point3 S = P + random_vector(rng, d);
    const IntervalEstimate ps = eval(P, S);
    const double ds = distance(P, S);
    if (ds < 2.0 * t - 1e-6) {
      out[5] = {true, !ps.converged, std::max({ps.width(), ps.lo - ds, ds - ps.hi, 0.0}), {P, S}};
    }
  }
  {
    const Isometry iso = random_isometry(rng, options.box);
    const IntervalEstimate img = eval(iso.apply(P), iso.apply(Q));
    out[6] = {true, !(img.converged && pq.converged), std::abs(img.lo - pq.lo) + std::abs(img.hi - pq.hi),
              {P, Q}};
  }
  {
    double v = 0.0;
    bool unresolved = false;
    for (double tc : options.convergence_ts) {
      const IntervalEstimate e = rho(make_param(tc), P, Q, ro);
      unresolved = unresolved || !e.converged;
      v = std::max({v, (D - e.hi) - (1.0 - tc) * D, e.hi - D});
    }
    out[7] = {!options.convergence_ts.empty(), unresolved, v, {P, Q}};
  }
  return out;
}

/// Samples point triples in a box and checks the space metric through its
/// certified brackets: identity, symmetry, triangle (lo(P,R) against
/// hi(P,Q) + hi(Q,R)), the local Euclidean property on the ball of radius
/// t, the envelope t D <= rho <= D, exact Euclidean values below 2t,
/// isometry invariance and the convergence rate as t approaches 1.
inline std::vector<AxiomReport> run_space_suite(const Param& param, const SpaceSuiteOptions& options) {
  if (options.samples < 1) throw RangeError("run_space_suite: need at least one sample");
  if (!(options.box > 0.0)) throw RangeError("run_space_suite: box must be positive");
  std::vector<SampleOutcome<8>> outcomes(options.samples);
  parallel_for(options.samples, options.threads,
               [&](std::size_t i) { outcomes[i] = space_sample(param, options, i); });
  return detail::merge_outcomes("space", kSpaceAxioms, space_tolerances(options), param.t(), options.seed,
                                outcomes);
}

inline bool all_pass(const std::vector<AxiomReport>& reports) {
  return std::all_of(reports.begin(), reports.end(), [](const AxiomReport& r) { return r.pass(); });
}

}  // namespace locmetric
