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
#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include "locmetric/chain.hpp"
#include "locmetric/geometry.hpp"
#include "locmetric/rng.hpp"
#include "locmetric/sphere_metric.hpp"

namespace locmetric {

struct McOptions {
  std::size_t samples = 100'000;
  std::uint64_t seed = 1;
  /// Number of best random chains handed to local refinement.
  std::size_t refine_top = 16;
  std::size_t refine_iters = 4000;
  /// Walks may take up to ceil(D/2) + max_extra_steps steps.
  int max_extra_steps = 6;
};

struct McResult {
  double best_cost = std::numeric_limits<double>::infinity();
  std::optional<Chain> best_chain;
  std::size_t valid_samples = 0;
  Point3 p;
  Point3 q;
};

namespace detail {

inline double checked_chain_cost(const Param& param, const std::vector<Point3>& pts) {
  double sum = 0.0;
  for (std::size_t i = 1; i < pts.size(); ++i) {
    const double c = distance(pts[i - 1], pts[i]);
    if (c > 2.0 + kStepSlack) return std::numeric_limits<double>::infinity();
    sum += chord_cost(param, std::min(c, 2.0));
  }
  return sum;
}

// Random walk from p that closes on q once q is within reach. Step lengths
// mix exact full steps, long steps and uniform steps; directions mix the
// exact bearing to q with Gaussian-perturbed (non-planar) bearings.
inline std::optional<std::vector<Point3>> random_walk_chain(const Param& param, const Point3& p,
                                                            const Point3& q, int max_steps, Rng& rng) {
  std::vector<Point3> pts{p};
  for (;;) {
    const Point3 x = pts.back();
    const double rem = distance(x, q);
    const int taken = static_cast<int>(pts.size()) - 1;
    if (rem <= 2.0 && (taken + 1 >= max_steps || rng.bernoulli(0.5))) {
      pts.push_back(q);
      return pts;
    }
    if (taken + 1 >= max_steps) return std::nullopt;
    const double pick = rng.uniform();
    const double len = pick < 0.4   ? 2.0
                       : pick < 0.7 ? rng.uniform(param.c_star(), 2.0)
                                    : rng.uniform(0.0, 2.0);
    Point3 dir = rem > 0.0 ? (q - x) * (1.0 / rem) : random_unit_vector(rng);
    if (!rng.bernoulli(0.35)) {
      const double sigma = rng.uniform(0.0, 1.5);
      const Point3 noisy = dir + Point3{rng.normal(), rng.normal(), rng.normal()} * sigma;
      const double n = norm(noisy);
      dir = n > 1e-12 ? noisy * (1.0 / n) : random_unit_vector(rng);
    }
    pts.push_back(x + dir * len);
  }
}

inline Point3 unit_or(const Point3& v, const Point3& fallback) {
  const double n = norm(v);
  return n > 1e-300 ? v * (1.0 / n) : fallback;
}

// Greedy local search over interior points: Gaussian moves, projections onto
// the step-length-2 spheres of either neighbour, projection onto the line
// through both neighbours, and point deletion. Only improving valid moves
// are kept.
inline double refine_chain(const Param& param, std::vector<Point3>& pts, std::size_t iters, Rng& rng) {
  double cost = checked_chain_cost(param, pts);
  double sigma = 0.1;
  for (std::size_t it = 0; it < iters && pts.size() > 2; ++it) {
    const auto i = static_cast<std::size_t>(rng.uniform_int(1, static_cast<int>(pts.size()) - 2));
    const Point3 prev = pts[i - 1];
    const Point3 next = pts[i + 1];
    const Point3 old = pts[i];
    const int move = rng.uniform_int(0, 4);
    if (move == 4) {
      if (distance(prev, next) > 2.0) continue;
      std::vector<Point3> shorter = pts;
      shorter.erase(shorter.begin() + static_cast<std::ptrdiff_t>(i));
      const double c = checked_chain_cost(param, shorter);
      if (c < cost) {
        pts = std::move(shorter);
        cost = c;
      }
      continue;
    }
    Point3 cand;
    switch (move) {
      case 0:
        cand = old + Point3{rng.normal(), rng.normal(), rng.normal()} * sigma;
        break;
      case 1:
        cand = prev + unit_or(old - prev, unit_or(next - prev, {1, 0, 0})) * 2.0;
        break;
      case 2:
        cand = next + unit_or(old - next, unit_or(prev - next, {1, 0, 0})) * 2.0;
        break;
      default: {
        const Point3 axis = next - prev;
        const double len2 = dot(axis, axis);
        cand = len2 > 0.0 ? prev + axis * (dot(old - prev, axis) / len2) : prev;
        break;
      }
    }
    pts[i] = cand;
    const double c = checked_chain_cost(param, pts);
    if (c < cost) {
      cost = c;
      if (move == 0) sigma = std::min(1.0, sigma * 1.5);
    } else {
      pts[i] = old;
      if (move == 0) sigma = std::max(1e-9, sigma * 0.97);
    }
  }
  return cost;
}

}  // namespace detail

/// Best chain cost found among random literal chains in R^3 from p to q with
/// |pq| = D, followed by local refinement of the best few. The direction of
/// pq is drawn from the seed. Every returned cost belongs to an actual chain,
/// so it can never undercut rho_t.
inline McResult monte_carlo_chain_search(const Param& param, double target, const McOptions& options) {
  if (!(target >= 0.0) || !std::isfinite(target)) throw RangeError("monte_carlo: bad distance");
  if (options.samples < 1) throw RangeError("monte_carlo: need at least one sample");
  McResult result;
  {
    Rng setup(stream_seed(options.seed, 0xfeedULL));
    result.p = Point3{};
    result.q = random_unit_vector(setup) * target;
  }
  struct Scored {
    double cost;
    std::vector<Point3> pts;
  };
  std::vector<Scored> top;
  const int base_steps = static_cast<int>(std::ceil(target / 2.0));
  for (std::size_t s = 0; s < options.samples; ++s) {
    Rng rng(stream_seed(options.seed, s));
    const int max_steps = std::max(1, base_steps + rng.uniform_int(0, options.max_extra_steps));
    auto pts = detail::random_walk_chain(param, result.p, result.q, max_steps, rng);
    if (!pts) continue;
    const double c = detail::checked_chain_cost(param, *pts);
    if (!std::isfinite(c)) continue;
    ++result.valid_samples;
    if (top.size() < options.refine_top || c < top.back().cost) {
      Scored entry{c, std::move(*pts)};
      auto pos = std::upper_bound(top.begin(), top.end(), entry.cost,
                                  [](double v, const Scored& e) { return v < e.cost; });
      top.insert(pos, std::move(entry));
      if (top.size() > std::max<std::size_t>(options.refine_top, 1)) top.pop_back();
    }
  }
  for (std::size_t k = 0; k < top.size(); ++k) {
    Rng rng(stream_seed(options.seed ^ 0x5eedf00dULL, k));
    auto pts = top[k].pts;
    const double c = detail::refine_chain(param, pts, options.refine_iters, rng);
    if (c < result.best_cost) {
      result.best_cost = c;
      result.best_chain.emplace(std::move(pts));
    }
  }
  return result;
}

}  // namespace locmetric
