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
#include <cmath>
#include <functional>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "locmetric/errors.hpp"
#include "locmetric/geometry.hpp"
#include "locmetric/sphere_metric.hpp"

namespace locmetric {

/// Steps may exceed 2 by this much before being rejected.
inline constexpr double kStepSlack = 1e-12;

/// X_0 ... X_n with every consecutive Euclidean step in [0, 2].
class Chain {
 public:
  explicit Chain(std::vector<Point3> points) : points_(std::move(points)) {
    if (points_.size() < 2) throw ChainStepError("chain needs at least one step");
    for (std::size_t i = 1; i < points_.size(); ++i) {
      if (!points_[i].finite()) throw ChainStepError("chain point is not finite");
      if (distance(points_[i - 1], points_[i]) > 2.0 + kStepSlack) {
        throw ChainStepError("chain step " + std::to_string(i) + " longer than 2");
      }
    }
  }

  std::span<const Point3> points() const { return points_; }
  std::size_t steps() const { return points_.size() - 1; }
  const Point3& front() const { return points_.front(); }
  const Point3& back() const { return points_.back(); }

  std::vector<double> step_lengths() const {
    std::vector<double> out(steps());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = distance(points_[i], points_[i + 1]);
    return out;
  }

  Chain reversed() const { return Chain(std::vector<Point3>(points_.rbegin(), points_.rend())); }

 private:
  std::vector<Point3> points_;
};

/// Step lengths of a chain together with the separation of its endpoints.
/// All cost information of a chain lives here, since d_t depends only on the
/// chord of each step.
struct StepProfile {
  std::vector<double> lengths;
  double target = 0.0;

  std::size_t steps() const { return lengths.size(); }
  double total() const { return std::accumulate(lengths.begin(), lengths.end(), 0.0); }
};

namespace detail {
inline double clamp_step(double c) {
  if (c > 2.0 + kStepSlack || !(c >= 0.0)) throw ChainStepError("step outside [0, 2]");
  return std::min(c, 2.0);
}
inline double closure_slack(double target) { return 1e-12 * (1.0 + target); }
}  // namespace detail

inline double profile_cost(const Param& param, std::span<const double> lengths) {
  double sum = 0.0;
  for (double c : lengths) sum += chord_cost(param, detail::clamp_step(c));
  return sum;
}

inline double profile_cost(const Param& param, const StepProfile& profile) {
  return profile_cost(param, profile.lengths);
}

/// Sum of d_t over consecutive steps.
inline double chain_cost(const Param& param, const Chain& chain) {
  const auto pts = chain.points();
  double sum = 0.0;
  for (std::size_t i = 1; i < pts.size(); ++i) {
    sum += chord_cost(param, detail::clamp_step(distance(pts[i - 1], pts[i])));
  }
  return sum;
}

/// Whether some chain from P to Q with |PQ| = target has these step lengths:
/// the steps and the closing side must form a closed polygon. A single step
/// has to land exactly.
inline bool realizable(const StepProfile& profile) {
  const auto& c = profile.lengths;
  const double target = profile.target;
  if (c.empty() || !(target >= 0.0)) return false;
  for (double x : c) {
    if (!(x >= 0.0 && x <= 2.0 + kStepSlack)) return false;
  }
  const double slack = detail::closure_slack(target);
  if (c.size() == 1) return std::abs(c[0] - target) <= slack;
  const double sum = profile.total();
  const double longest = *std::max_element(c.begin(), c.end());
  return target <= sum + slack && longest <= target + (sum - longest) + slack;
}

namespace detail {

// Planar frame: origin p, first axis toward q.
struct PlaneFrame {
  Point3 origin;
  Point3 e1;
  Point3 e2;
  Point3 at(double u, double v) const { return origin + e1 * u + e2 * v; }
};

struct Vec2 {
  double u = 0.0;
  double v = 0.0;
};

// Places the third vertex X of a triangle with |AX| = ra, |BX| = rb, on the
// left of A->B. Degenerate bases fall back to the reference direction `dir`.
inline Vec2 triangle_apex(Vec2 a, Vec2 b, double ra, double rb, Vec2 dir) {
  const double du = b.u - a.u;
  const double dv = b.v - a.v;
  const double base = std::hypot(du, dv);
  if (base <= 1e-300) return {a.u + ra * dir.u, a.v + ra * dir.v};
  const double eu = du / base;
  const double ev = dv / base;
  // Factored forms keep short bases from amplifying rounding.
  const double along = std::clamp((ra - rb) * (ra + rb) / (2.0 * base) + 0.5 * base, -ra, ra);
  const double off = std::sqrt(std::max(0.0, (ra - along) * (ra + along)));
  return {a.u + eu * along - ev * off, a.v + ev * along + eu * off};
}

}  // namespace detail

/// Builds a planar chain from p to q with the profile's step lengths, in the
/// given order. Working backward from q, each step's start point is placed so
/// the remaining prefix can still reach it: prefix sums bound the reachable
/// distances to the interval [max(0, 2 * longest - sum), sum].
inline Chain realize_chain(const StepProfile& profile, const Point3& p, const Point3& q) {
  if (!realizable(profile)) throw RealizationError("realize_chain: profile is not realizable");
  const double target = distance(p, q);
  if (std::abs(target - profile.target) > 1e-9) {
    throw RealizationError("realize_chain: endpoint separation does not match profile target");
  }
  const auto& c = profile.lengths;
  const std::size_t n = c.size();
  if (n == 1) return Chain({p, q});

  detail::PlaneFrame frame;
  frame.origin = p;
  if (target > 0.0) {
    frame.e1 = (q - p) * (1.0 / target);
  } else {
    frame.e1 = {1, 0, 0};
  }
  frame.e2 = perpendicular_basis(frame.e1)[0];

  std::vector<double> prefix_sum(n + 1, 0.0);
  std::vector<double> prefix_max(n + 1, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    prefix_sum[i + 1] = prefix_sum[i] + c[i];
    prefix_max[i + 1] = std::max(prefix_max[i], c[i]);
  }

  std::vector<detail::Vec2> plane(n + 1);
  plane[n] = {target, 0.0};
  // plane[j] has to sit at distance `reach` from the origin.
  for (std::size_t j = n - 1; j >= 1; --j) {
    const detail::Vec2 end = plane[j + 1];
    const double end_dist = std::hypot(end.u, end.v);
    const double step = c[j];
    const double reach_hi = prefix_sum[j];
    const double reach_lo = std::max(0.0, 2.0 * prefix_max[j] - prefix_sum[j]);
    const double ring_lo = std::abs(end_dist - step);
    const double ring_hi = end_dist + step;
    double reach = std::min(reach_hi, ring_hi);
    reach = std::max(reach, std::max(reach_lo, ring_lo));
    reach = std::min(reach, ring_hi);
    const detail::Vec2 dir = end_dist > 1e-300 ? detail::Vec2{end.u / end_dist, end.v / end_dist}
                                               : detail::Vec2{1.0, 0.0};
    // Apex of the triangle (origin, end, X) with |OX| = reach, |X end| = step.
    plane[j] = detail::triangle_apex({0.0, 0.0}, end, reach, step, dir);
    if (j == 1) break;
  }
  plane[0] = {0.0, 0.0};

  std::vector<Point3> pts(n + 1);
  pts[0] = p;
  pts[n] = q;
  for (std::size_t i = 1; i < n; ++i) pts[i] = frame.at(plane[i].u, plane[i].v);
  return Chain(std::move(pts));
}

/// A constructive upper bound on rho_t together with the profile attaining it.
struct Bound {
  double cost = 0.0;
  StepProfile witness;
};

/// Deterministic preference among witnesses of equal cost: fewer steps, then
/// the lexicographically smaller length vector (lengths sorted descending).
inline bool witness_less(const StepProfile& a, const StepProfile& b) {
  if (a.steps() != b.steps()) return a.steps() < b.steps();
  std::vector<double> sa = a.lengths;
  std::vector<double> sb = b.lengths;
  std::sort(sa.begin(), sa.end(), std::greater<>());
  std::sort(sb.begin(), sb.end(), std::greater<>());
  return sa < sb;
}

inline bool bound_better(const Bound& a, const Bound& b, double tie = 1e-12) {
  if (a.cost < b.cost - tie) return true;
  if (b.cost < a.cost - tie) return false;
  return witness_less(a.witness, b.witness);
}

/// Straight-segment chain cut into m + 1 equal pieces, m = floor(D). Every
/// piece is shorter than 1 < c_star, so the cost is D itself.
inline Bound subdivision_upper_bound(const Param& param, double target) {
  if (!(target >= 0.0) || !std::isfinite(target)) throw RangeError("subdivision: bad distance");
  const auto pieces = static_cast<std::size_t>(std::floor(target)) + 1;
  Bound b;
  b.witness.target = target;
  b.witness.lengths.assign(pieces, target / static_cast<double>(pieces));
  b.cost = profile_cost(param, b.witness);
  return b;
}

namespace detail {

// Remainder r >= 0 covered along the segment: one step if that is allowed and
// cheapest, otherwise equal pieces below 1.
inline void append_remainder(const Param& param, double r, std::vector<double>& lengths,
                             double& cost) {
  if (r <= 0.0) return;
  if (r <= 2.0 && chord_cost(param, r) <= r) {
    lengths.push_back(r);
    cost += chord_cost(param, r);
    return;
  }
  const auto pieces = static_cast<std::size_t>(std::floor(r)) + 1;
  for (std::size_t i = 0; i < pieces; ++i) lengths.push_back(r / static_cast<double>(pieces));
  cost += r;
}

}  // namespace detail

/// Chains built from full steps of length 2 (cost 2t each, the cheapest cost
/// per unit of progress):
///   - k full steps along PQ plus the remainder D - 2k, for k = 0 .. floor(D/2);
///   - j > D/2 full steps that overshoot and fold back, for
///     j = ceil(D/2), ceil(D/2) + 1. Two or more full steps fold onto any
///     shorter target; a single full step needs a return step of 2 - D.
inline Bound shortcut_upper_bound(const Param& param, double target) {
  if (!(target >= 0.0) || !std::isfinite(target)) throw RangeError("shortcut: bad distance");
  const double two_t = 2.0 * param.t();
  Bound best = subdivision_upper_bound(param, target);
  if (target == 0.0) return best;

  auto consider = [&](Bound cand) {
    if (realizable(cand.witness) && bound_better(cand, best)) best = std::move(cand);
  };

  const auto kmax = static_cast<long>(std::floor(target / 2.0));
  for (long k = 0; k <= kmax; ++k) {
    Bound cand;
    cand.witness.target = target;
    cand.witness.lengths.assign(static_cast<std::size_t>(k), 2.0);
    cand.cost = two_t * static_cast<double>(k);
    detail::append_remainder(param, target - 2.0 * static_cast<double>(k), cand.witness.lengths,
                             cand.cost);
    if (cand.witness.lengths.empty()) continue;
    consider(std::move(cand));
  }

  const auto jmin = static_cast<long>(std::floor(target / 2.0)) + 1;
  for (long j = jmin; j <= jmin + 1; ++j) {
    Bound cand;
    cand.witness.target = target;
    cand.witness.lengths.assign(static_cast<std::size_t>(j), 2.0);
    cand.cost = two_t * static_cast<double>(j);
    if (j == 1) {
      const double back = 2.0 - target;
      cand.witness.lengths.push_back(back);
      cand.cost += chord_cost(param, back);
    }
    consider(std::move(cand));
  }
  return best;
}

}  // namespace locmetric
