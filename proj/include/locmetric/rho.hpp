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
#include <cstddef>
#include <limits>
#include <map>
#include <mutex>
#include <optional>
#include <queue>
#include <shared_mutex>
#include <tuple>
#include <vector>

#include "locmetric/chain.hpp"
#include "locmetric/errors.hpp"
#include "locmetric/geometry.hpp"
#include "locmetric/sphere_metric.hpp"

namespace locmetric {

/// Certified bracket lo <= rho_t <= hi at endpoint separation `distance`.
/// `witness` is a realizable profile whose cost is `hi`.
struct IntervalEstimate {
  double distance = 0.0;
  double lo = 0.0;
  double hi = 0.0;
  StepProfile witness;
  bool converged = true;
  double grid = 0.0;
  int n_cap = 0;
  /// Some search witness was discarded for exceeding n_cap.
  bool capped = false;
  std::size_t work = 0;

  double width() const { return hi - lo; }
  bool operator==(const IntervalEstimate& o) const {
    return distance == o.distance && lo == o.lo && hi == o.hi && witness.lengths == o.witness.lengths &&
           converged == o.converged;
  }
};

struct DpOptions {
  /// Finest interval width of the max-step search.
  double grid = 1e-3;
  /// Step cap for search witnesses; 0 selects ceil(D/2) + 4.
  int n_cap = 0;
  /// Maximum number of search intervals evaluated.
  std::size_t budget = 4'000'000;
};

inline int default_n_cap(double target) { return static_cast<int>(std::ceil(target / 2.0)) + 4; }

namespace detail {

// Shortfall that Euclidean-branch steps must cover once q + 1 steps of length
// m (m the longest step) are placed: the profile closes iff the rest sums to
// at least |D - m|.
inline double shortfall(double target, double m, int q) {
  return std::max(0.0, std::abs(target - m) - q * m);
}

// min of the convex piecewise-linear shortfall over [a, b]: endpoints and kinks.
inline double min_shortfall(double target, double a, double b, int q) {
  double best = std::min(shortfall(target, a, q), shortfall(target, b, q));
  for (double kink : {target, target / (q + 1.0)}) {
    if (kink > a && kink < b) best = std::min(best, shortfall(target, kink, q));
  }
  return best;
}

inline StepProfile long_step_profile(const Param& param, double target, double m, int q) {
  StepProfile prof;
  prof.target = target;
  prof.lengths.assign(static_cast<std::size_t>(q + 1), m);
  const double rest = shortfall(target, m, q);
  if (rest > 0.0) {
    const auto pieces = static_cast<std::size_t>(std::floor(rest / param.c_star())) + 1;
    prof.lengths.insert(prof.lengths.end(), pieces, rest / static_cast<double>(pieces));
  }
  return prof;
}

}  // namespace detail

/// Brackets rho_t at separation D.
///
/// Upper bound: the best of the subdivision chain, the shortcut chains and a
/// branch-and-bound search over profiles, each a realizable witness.
///
/// Lower bound: every realizable profile with longest step m > c_star costs at
/// least (q + 1) f(m) + shortfall(m, q) for some q >= 0, where f is
/// chord_cost. On the antipodal branch f decreases, so other long steps can
/// be lengthened to m without raising cost or breaking closure, and steps on
/// the Euclidean branch cost exactly their length. Profiles without long
/// steps cost at least D. The search splits [c_star, 2] for every q and
/// bounds each interval [a, b] below by (q + 1) f(b) + min shortfall; an
/// interval is discarded once its bound reaches the best witness, and stops
/// splitting at width `grid`. The result also never drops below t D.
inline IntervalEstimate rho_profile_dp(const Param& param, double target,
                                       const DpOptions& options = {}) {
  if (!(target >= 0.0) || !std::isfinite(target)) throw RangeError("rho_profile_dp: bad distance");
  if (!(options.grid > 0.0)) throw RangeError("rho_profile_dp: grid must be positive");
  IntervalEstimate est;
  est.distance = target;
  est.grid = options.grid;
  est.n_cap = options.n_cap > 0 ? options.n_cap : default_n_cap(target);
  if (target == 0.0) {
    est.witness = {{0.0}, 0.0};
    return est;
  }

  Bound best = shortcut_upper_bound(param, target);
  {
    Bound sub = subdivision_upper_bound(param, target);
    if (bound_better(sub, best)) best = std::move(sub);
  }
  // Exact family minima: all steps on the Euclidean branch, or one step.
  double lower = target;
  if (target <= 2.0) lower = std::min(lower, chord_cost(param, target));

  const double cs = param.c_star();
  const double two_t = 2.0 * param.t();
  if (cs < 2.0) {
    struct Cell {
      double lb;
      double a;
      double b;
      int q;
      bool operator>(const Cell& o) const {
        return std::tie(lb, q, a) > std::tie(o.lb, o.q, o.a);
      }
    };
    std::priority_queue<Cell, std::vector<Cell>, std::greater<>> open;
    auto value = [&](double m, int q) {
      return (q + 1) * chord_cost(param, m) + detail::shortfall(target, m, q);
    };
    auto try_point = [&](double m, int q) {
      Bound cand;
      cand.cost = value(m, q);
      if (cand.cost > best.cost + 1e-12) return;
      cand.witness = detail::long_step_profile(param, target, m, q);
      if (static_cast<int>(cand.witness.steps()) > est.n_cap) {
        est.capped = true;
        return;
      }
      if (bound_better(cand, best)) best = std::move(cand);
    };
    auto push = [&](double a, double b, int q) {
      if (++est.work > options.budget) {
        throw ResourceError("rho_profile_dp: search budget exhausted");
      }
      const double lb = (q + 1) * chord_cost(param, b) + detail::min_shortfall(target, a, b, q);
      try_point(b, q);
      if (lb < best.cost) open.push({lb, a, b, q});
    };

    const int qmax = static_cast<int>(std::ceil(best.cost / two_t));
    for (int q = 0; q <= qmax; ++q) push(cs, 2.0, q);

    double leaf_lower = std::numeric_limits<double>::infinity();
    while (!open.empty()) {
      const Cell cell = open.top();
      open.pop();
      if (cell.lb >= best.cost) break;
      if (cell.b - cell.a <= options.grid) {
        leaf_lower = std::min(leaf_lower, cell.lb);
        continue;
      }
      const double mid = 0.5 * (cell.a + cell.b);
      push(cell.a, mid, cell.q);
      push(mid, cell.b, cell.q);
    }
    lower = std::min(lower, leaf_lower);
  }

  est.hi = best.cost;
  est.witness = std::move(best.witness);
  est.lo = std::min(est.hi, std::max(param.t() * target, std::min(lower, est.hi)));
  return est;
}

/// Literal dynamic program over grid step lengths {0, h, ..., 2}: the cheapest
/// realizable profile with at most n_cap steps whose lengths are grid
/// multiples. The longest step M is enumerated; the remaining steps (each
/// <= M) must sum to at least |D - M|, which is solved as an unbounded
/// knapsack over (step count, saturated coverage). Returns nullopt when no
/// grid profile closes.
inline std::optional<Bound> grid_profile_dp(const Param& param, double target, double h, int n_cap,
                                            std::size_t budget = 200'000'000) {
  if (!(target >= 0.0) || !std::isfinite(target)) throw RangeError("grid_profile_dp: bad distance");
  if (!(h > 0.0 && h <= 2.0)) throw RangeError("grid_profile_dp: grid outside (0, 2]");
  if (n_cap < 1) throw RangeError("grid_profile_dp: n_cap must be positive");
  const auto G = static_cast<std::size_t>(std::ceil(2.0 / h - 1e-9));
  const double step = 2.0 / static_cast<double>(G);
  const std::size_t K = static_cast<std::size_t>(n_cap - 1);
  const auto S = static_cast<std::size_t>(std::ceil(std::max(target, 2.0) / step)) + 1;
  const double work = static_cast<double>(G + 1) * static_cast<double>(K + 1) * static_cast<double>(S + 1);
  if (work > static_cast<double>(budget)) {
    throw ResourceError("grid_profile_dp: state space exceeds budget");
  }
  const double slack = 1e-12 * (1.0 + target);
  auto length_of = [&](std::size_t i) { return std::min(2.0, static_cast<double>(i) * step); };
  std::vector<double> cost(G + 1);
  for (std::size_t i = 0; i <= G; ++i) cost[i] = chord_cost(param, length_of(i));
  auto need_units = [&](std::size_t M) {
    const double need = std::abs(target - length_of(M)) - slack;
    if (need <= 0.0) return std::size_t{0};
    return std::min(S, static_cast<std::size_t>(std::ceil(need / step - 1e-9)));
  };

  constexpr double kInf = std::numeric_limits<double>::infinity();
  std::optional<Bound> best;
  auto offer = [&](double c, std::vector<double> lengths) {
    Bound b{c, StepProfile{std::move(lengths), target}};
    if (!best || bound_better(b, *best)) best = std::move(b);
  };

  const auto single = static_cast<std::size_t>(std::llround(target / step));
  if (single <= G && std::abs(length_of(single) - target) <= slack) {
    offer(cost[single], {length_of(single)});
  }
  if (K == 0) return best;

  // table[k][s]: cheapest k steps among the lengths added so far with
  // coverage min(sum, S) == s.
  std::vector<std::vector<double>> table(K + 1, std::vector<double>(S + 1, kInf));
  table[0][0] = 0.0;
  std::size_t best_M = 0;
  std::size_t best_k = 0;
  double best_cost = kInf;
  for (std::size_t M = 0; M <= G; ++M) {
    for (std::size_t k = 1; k <= K; ++k) {
      const auto& prev = table[k - 1];
      auto& cur = table[k];
      for (std::size_t s = 0; s <= S; ++s) {
        if (prev[s] == kInf) continue;
        const std::size_t s2 = std::min(S, s + M);
        cur[s2] = std::min(cur[s2], prev[s] + cost[M]);
      }
    }
    const std::size_t need = need_units(M);
    for (std::size_t k = 1; k <= K; ++k) {
      const double rest = *std::min_element(table[k].begin() + static_cast<std::ptrdiff_t>(need),
                                            table[k].end());
      if (rest == kInf) continue;
      if (cost[M] + rest < best_cost - 1e-12) {
        best_cost = cost[M] + rest;
        best_M = M;
        best_k = k;
      }
    }
  }
  if (best_cost == kInf) return best;
  if (best && best->cost <= best_cost + 1e-12) return best;

  // Second pass restricted to lengths <= best_M, with parents for backtracking.
  struct Parent {
    std::size_t item = 0;
    std::size_t prev = 0;
  };
  std::vector<std::vector<double>> t2(best_k + 1, std::vector<double>(S + 1, kInf));
  std::vector<std::vector<Parent>> parent(best_k + 1, std::vector<Parent>(S + 1));
  t2[0][0] = 0.0;
  for (std::size_t M = 0; M <= best_M; ++M) {
    for (std::size_t k = 1; k <= best_k; ++k) {
      for (std::size_t s = 0; s <= S; ++s) {
        if (t2[k - 1][s] == kInf) continue;
        const std::size_t s2 = std::min(S, s + M);
        const double c = t2[k - 1][s] + cost[M];
        if (c < t2[k][s2]) {
          t2[k][s2] = c;
          parent[k][s2] = {M, s};
        }
      }
    }
  }
  const std::size_t need = need_units(best_M);
  std::size_t s = need;
  for (std::size_t j = need; j <= S; ++j) {
    if (t2[best_k][j] < t2[best_k][s]) s = j;
  }
  std::vector<double> lengths{length_of(best_M)};
  for (std::size_t k = best_k; k >= 1; --k) {
    lengths.push_back(length_of(parent[k][s].item));
    s = parent[k][s].prev;
  }
  const double found = profile_cost(param, lengths);
  offer(found, std::move(lengths));
  return best;
}

/// Memo of brackets keyed by (t, D, grid, n_cap). Lookups take a shared lock;
/// inserts take an exclusive one.
class BracketCache {
 public:
  using Key = std::tuple<double, double, double, int>;

  std::optional<IntervalEstimate> find(const Key& key) const {
    std::shared_lock lock(mutex_);
    auto it = entries_.find(key);
    if (it == entries_.end()) return std::nullopt;
    return it->second;
  }

  void insert(const Key& key, const IntervalEstimate& est) {
    std::unique_lock lock(mutex_);
    entries_.emplace(key, est);
  }

  std::size_t size() const {
    std::shared_lock lock(mutex_);
    return entries_.size();
  }

 private:
  mutable std::shared_mutex mutex_;
  std::map<Key, IntervalEstimate> entries_;
};

inline IntervalEstimate rho_profile_dp(const Param& param, double target, const DpOptions& options,
                                       BracketCache* cache) {
  if (cache == nullptr) return rho_profile_dp(param, target, options);
  const BracketCache::Key key{param.t(), target, options.grid, options.n_cap};
  if (auto hit = cache->find(key)) return *hit;
  IntervalEstimate est = rho_profile_dp(param, target, options);
  cache->insert(key, est);
  return est;
}

struct RhoOptions {
  double tol = 1e-6;
  /// Starting grid; refined by a factor 8 per round.
  double grid = 1e-2;
  int n_cap = 0;
  std::size_t budget = 4'000'000;
  int max_refinements = 12;
};

/// rho_t(p, q). Refines the search until hi - lo <= tol; if the budget or the
/// refinement limit is hit first, returns the tightest bracket found with
/// converged == false.
inline IntervalEstimate rho_of_distance(const Param& param, double target, const RhoOptions& options = {},
                                        BracketCache* cache = nullptr) {
  if (!(options.tol > 0.0)) throw RangeError("rho: tolerance must be positive");
  DpOptions dp{options.grid, options.n_cap > 0 ? options.n_cap : default_n_cap(target), options.budget};
  std::optional<IntervalEstimate> last;
  for (int round = 0; round <= options.max_refinements; ++round) {
    try {
      last = rho_profile_dp(param, target, dp, cache);
    } catch (const ResourceError&) {
      break;
    }
    if (last->width() <= options.tol) {
      last->converged = true;
      return *last;
    }
    dp.grid /= 8.0;
    if (last->capped) dp.n_cap *= 2;
  }
  if (!last) {
    IntervalEstimate env;
    env.distance = target;
    const Bound sub = subdivision_upper_bound(param, target);
    env.lo = param.t() * target;
    env.hi = sub.cost;
    env.witness = sub.witness;
    last = env;
  }
  last->converged = false;
  return *last;
}

inline IntervalEstimate rho(const Param& param, const Point3& p, const Point3& q,
                            const RhoOptions& options = {}, BracketCache* cache = nullptr) {
  return rho_of_distance(param, distance(p, q), options, cache);
}

}  // namespace locmetric
