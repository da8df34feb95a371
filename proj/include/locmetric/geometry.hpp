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
#include <numbers>
#include <stdexcept>
#include <string>

#include "locmetric/errors.hpp"
#include "locmetric/rng.hpp"

namespace locmetric {

/// A position in R^3. Lengths are measured in radii of the unit sphere.
struct Point3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  constexpr Point3() = default;
  constexpr Point3(double x_, double y_, double z_) : x(x_), y(y_), z(z_) {}

  bool finite() const { return std::isfinite(x) && std::isfinite(y) && std::isfinite(z); }

  constexpr Point3 operator+(const Point3& o) const { return {x + o.x, y + o.y, z + o.z}; }
  constexpr Point3 operator-(const Point3& o) const { return {x - o.x, y - o.y, z - o.z}; }
  constexpr Point3 operator-() const { return {-x, -y, -z}; }
  constexpr Point3 operator*(double s) const { return {x * s, y * s, z * s}; }
  friend constexpr Point3 operator*(double s, const Point3& p) { return p * s; }
  constexpr bool operator==(const Point3&) const = default;
};

constexpr double dot(const Point3& a, const Point3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }

constexpr Point3 cross(const Point3& a, const Point3& b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

inline double norm(const Point3& a) { return std::hypot(a.x, a.y, a.z); }

/// Euclidean distance d_E.
inline double distance(const Point3& p, const Point3& q) { return norm(q - p); }

/// Unit vector; the point of S^2 (centered at the origin) it designates.
class SpherePoint {
 public:
  /// Normalizes `v`. Throws RangeError for a zero or non-finite vector.
  explicit SpherePoint(const Point3& v) {
    const double n = norm(v);
    if (!v.finite() || !(n > 0.0) || !std::isfinite(n)) {
      throw RangeError("SpherePoint: vector must be finite and nonzero");
    }
    u_ = v * (1.0 / n);
  }
  SpherePoint(double x, double y, double z) : SpherePoint(Point3{x, y, z}) {}

  const Point3& vec() const { return u_; }
  bool operator==(const SpherePoint&) const = default;

 private:
  Point3 u_;
};

inline double chord(const SpherePoint& p, const SpherePoint& q) { return distance(p.vec(), q.vec()); }

/// Angle at the origin between p and q, in [0, pi]. atan2 of the cross and dot
/// products keeps full precision near 0 and near pi.
inline double central_angle(const SpherePoint& p, const SpherePoint& q) {
  return std::atan2(norm(cross(p.vec(), q.vec())), dot(p.vec(), q.vec()));
}

inline SpherePoint antipode(const SpherePoint& p) { return SpherePoint(-p.vec()); }

/// Chord length 2 sin(theta/2) of a central angle in [0, pi].
inline double chord_of_angle(double theta) {
  if (!(theta >= 0.0 && theta <= std::numbers::pi)) {
    throw RangeError("chord_of_angle: angle outside [0, pi]");
  }
  return 2.0 * std::sin(0.5 * theta);
}

/// Central angle subtending a chord in [0, 2].
inline double angle_of_chord(double c) {
  if (!(c >= 0.0 && c <= 2.0)) throw RangeError("angle_of_chord: chord outside [0, 2]");
  const double h = 0.5 * c;
  return 2.0 * std::atan2(h, std::sqrt((1.0 - h) * (1.0 + h)));
}

/// Row-major 3x3 matrix.
using Mat3 = std::array<std::array<double, 3>, 3>;

inline constexpr Mat3 identity_mat3() { return {{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}}; }

inline Point3 mul(const Mat3& m, const Point3& v) {
  return {m[0][0] * v.x + m[0][1] * v.y + m[0][2] * v.z,
          m[1][0] * v.x + m[1][1] * v.y + m[1][2] * v.z,
          m[2][0] * v.x + m[2][1] * v.y + m[2][2] * v.z};
}

inline Point3 mul_transposed(const Mat3& m, const Point3& v) {
  return {m[0][0] * v.x + m[1][0] * v.y + m[2][0] * v.z,
          m[0][1] * v.x + m[1][1] * v.y + m[2][1] * v.z,
          m[0][2] * v.x + m[1][2] * v.y + m[2][2] * v.z};
}

inline double determinant(const Mat3& m) {
  return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
         m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
         m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
}

/// max |(R^T R - I)_ij|
inline double orthogonality_defect(const Mat3& m) {
  double worst = 0.0;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      double s = 0.0;
      for (int k = 0; k < 3; ++k) s += m[k][i] * m[k][j];
      worst = std::max(worst, std::abs(s - (i == j ? 1.0 : 0.0)));
    }
  }
  return worst;
}

/// x -> R x + shift with R orthogonal.
struct Isometry {
  Mat3 rotation = identity_mat3();
  Point3 shift{};

  static Isometry identity() { return {}; }
  static Isometry translation(const Point3& v) { return {identity_mat3(), v}; }

  Point3 apply(const Point3& p) const { return mul(rotation, p) + shift; }
  SpherePoint apply(const SpherePoint& p) const { return SpherePoint(mul(rotation, p.vec())); }
};

inline Point3 apply(const Isometry& iso, const Point3& p) { return iso.apply(p); }

/// Orthonormal basis (e1, e2) of the plane perpendicular to the unit vector n.
inline std::array<Point3, 2> perpendicular_basis(const Point3& n) {
  const Point3 helper = std::abs(n.x) < 0.6 ? Point3{1, 0, 0}
                        : std::abs(n.y) < 0.6 ? Point3{0, 1, 0}
                                              : Point3{0, 0, 1};
  Point3 e1 = cross(n, helper);
  e1 = e1 * (1.0 / norm(e1));
  const Point3 e2 = cross(n, e1);
  return {e1, e2};
}

inline Point3 random_unit_vector(Rng& rng) {
  for (;;) {
    const Point3 g{rng.normal(), rng.normal(), rng.normal()};
    const double n = norm(g);
    if (n > 1e-12) return g * (1.0 / n);
  }
}

/// Uniformly oriented vector of the given length.
inline Point3 random_vector(Rng& rng, double length) { return random_unit_vector(rng) * length; }

/// Haar-distributed rotation: Gram-Schmidt on a Gaussian matrix, rows taken
/// as the orthonormal frame. With `allow_reflection` the determinant is -1
/// with probability 1/2.
inline Mat3 random_orthogonal(Rng& rng, bool allow_reflection = true) {
  Point3 a = random_unit_vector(rng);
  Point3 b{rng.normal(), rng.normal(), rng.normal()};
  b = b - a * dot(a, b);
  while (norm(b) < 1e-9) {
    b = Point3{rng.normal(), rng.normal(), rng.normal()};
    b = b - a * dot(a, b);
  }
  b = b * (1.0 / norm(b));
  Point3 c = cross(a, b);
  if (allow_reflection && rng.bernoulli(0.5)) c = -c;
  return {{{a.x, a.y, a.z}, {b.x, b.y, b.z}, {c.x, c.y, c.z}}};
}

/// Random rotation or reflection, followed by a translation with coordinates
/// uniform in [-box, box].
inline Isometry random_isometry(Rng& rng, double box = 10.0) {
  Isometry iso;
  iso.rotation = random_orthogonal(rng, true);
  iso.shift = {rng.uniform(-box, box), rng.uniform(-box, box), rng.uniform(-box, box)};
  return iso;
}

/// Isometry fixing the origin; it maps S^2 onto itself.
inline Isometry random_linear_isometry(Rng& rng) {
  Isometry iso;
  iso.rotation = random_orthogonal(rng, true);
  return iso;
}

/// An isometric embedding u -> center + R u of the unit sphere into R^3.
struct SphereEmbedding {
  Point3 center;
  Mat3 frame = identity_mat3();

  Point3 embed(const SpherePoint& u) const { return center + mul(frame, u.vec()); }
  /// Inverse on the embedded sphere; points off it are radially projected.
  SpherePoint pull_back(const Point3& p) const { return SpherePoint(mul_transposed(frame, p - center)); }
};

/// Unit sphere through x and y. For d_E(x, y) < 2 the center is drawn from
/// the circle of admissible centers and the frame is a random rotation, so
/// repeated calls yield different embeddings. Chord 2 forces the midpoint.
inline SphereEmbedding unit_sphere_through(const Point3& x, const Point3& y, Rng& rng) {
  const double d = distance(x, y);
  if (d > 2.0 + 1e-12) {
    throw NoEmbeddingError("unit_sphere_through: points more than 2 apart");
  }
  SphereEmbedding emb;
  emb.frame = random_orthogonal(rng, false);
  if (d == 0.0) {
    emb.center = x + random_unit_vector(rng);
    return emb;
  }
  const Point3 mid = (x + y) * 0.5;
  const Point3 axis = (y - x) * (1.0 / d);
  const double half = std::min(1.0, 0.5 * d);
  const double radius = std::sqrt((1.0 - half) * (1.0 + half));
  const auto [e1, e2] = perpendicular_basis(axis);
  const double phi = rng.uniform(0.0, 2.0 * std::numbers::pi);
  emb.center = mid + (e1 * std::cos(phi) + e2 * std::sin(phi)) * radius;
  return emb;
}

}  // namespace locmetric
