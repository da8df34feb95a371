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

#include <cmath>
#include <numbers>
#include <string>

#include "locmetric/errors.hpp"
#include "locmetric/geometry.hpp"
#include "locmetric/rng.hpp"

namespace locmetric {

/// Deformation parameter t in (0, 1] with its derived constants.
///
/// `alpha` is the threshold half-angle arcsin((sqrt(2 - t^2) - t) / 2): pairs
/// whose central angle exceeds pi - 2 alpha are measured through the antipode.
/// `c_star` = 2 cos(alpha) is the same threshold expressed as a chord; it
/// equals t + sqrt(2 - t^2), which is where the two branches of the sphere
/// metric meet.
class Param {
 public:
  static Param make(double t) {
    if (!(t > 0.0 && t <= 1.0)) {
      throw DomainError("deformation parameter t must lie in (0, 1], got " + std::to_string(t));
    }
    const double s = std::sqrt(2.0 - t * t);
    const double alpha = std::asin(std::max(0.0, 0.5 * (s - t)));
    return Param(t, alpha, std::min(2.0, 2.0 * std::cos(alpha)));
  }

  double t() const { return t_; }
  double alpha() const { return alpha_; }
  double c_star() const { return c_star_; }
  /// pi - 2 alpha
  double angle_threshold() const { return std::numbers::pi - 2.0 * alpha_; }

  bool operator==(const Param&) const = default;

 private:
  Param(double t, double alpha, double c_star) : t_(t), alpha_(alpha), c_star_(c_star) {}

  double t_;
  double alpha_;
  double c_star_;
};

inline Param make_param(double t) { return Param::make(t); }

/// d_t as a function of the chord: c up to c_star, then 2t + sqrt(4 - c^2),
/// the antipodal chord plus 2t. Continuous at c_star, decreasing to 2t at 2.
inline double chord_cost(const Param& param, double c) {
  if (!(c >= 0.0 && c <= 2.0)) throw RangeError("chord_cost: chord outside [0, 2]");
  if (c <= param.c_star()) return c;
  return 2.0 * param.t() + std::sqrt((2.0 - c) * (2.0 + c));
}

/// The metric d_t on S^2, evaluated from the central angle. Ties at the
/// threshold angle take the Euclidean branch.
inline double d_t_sphere(const Param& param, const SpherePoint& p, const SpherePoint& q) {
  if (central_angle(p, q) <= param.angle_threshold()) return chord(p, q);
  return 2.0 * param.t() + chord(antipode(p), q);
}

/// d_t between two points of R^3 at distance at most 2: both are pulled back
/// through a randomly drawn unit sphere containing them.
inline double d_t_pair(const Param& param, const Point3& x, const Point3& y, Rng& rng) {
  if (distance(x, y) > 2.0 + 1e-12) throw ChainStepError("d_t_pair: points more than 2 apart");
  const SphereEmbedding emb = unit_sphere_through(x, y, rng);
  return d_t_sphere(param, emb.pull_back(x), emb.pull_back(y));
}

}  // namespace locmetric
