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

#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "locmetric/geometry.hpp"

namespace {

using namespace locmetric;
constexpr double kPi = std::numbers::pi;

TEST(DistanceTest, TrivialValues) {
  EXPECT_EQ(0.0, distance({0, 0, 0}, {0, 0, 0}));
  EXPECT_DOUBLE_EQ(5.0, distance({0, 0, 0}, {3, 4, 0}));
  EXPECT_DOUBLE_EQ(2.0, distance({1, 0, 0}, {-1, 0, 0}));
  const Point3 a{0.3, -1.7, 2.2};
  const Point3 b{-4.1, 0.5, 9.0};
  EXPECT_EQ(distance(a, b), distance(b, a));
}

TEST(CentralAngleTest, TrivialValues) {
  const SpherePoint p(0.2, -0.4, 0.9);
  EXPECT_EQ(0.0, central_angle(p, p));
  EXPECT_DOUBLE_EQ(kPi, central_angle(p, antipode(p)));
  EXPECT_DOUBLE_EQ(kPi / 2, central_angle(SpherePoint(1, 0, 0), SpherePoint(0, 1, 0)));
}

TEST(CentralAngleTest, StableNearZeroAndPi) {
  for (double eps : {1e-4, 1e-7, 1e-10}) {
    const SpherePoint a(1, 0, 0);
    const SpherePoint b(std::cos(eps), std::sin(eps), 0);
    EXPECT_NEAR(eps, central_angle(a, b), 1e-15) << eps;
    const SpherePoint c(-std::cos(eps), std::sin(eps), 0);
    EXPECT_NEAR(kPi - eps, central_angle(a, c), 1e-15) << eps;
  }
}

TEST(ChordAngleTest, Examples) {
  EXPECT_DOUBLE_EQ(2.0, chord_of_angle(kPi));
  EXPECT_EQ(0.0, chord_of_angle(0.0));
  EXPECT_NEAR(kPi / 2, angle_of_chord(std::sqrt(2.0)), 1e-15);
  EXPECT_DOUBLE_EQ(kPi, angle_of_chord(2.0));
}

TEST(ChordAngleTest, RangeErrors) {
  EXPECT_THROW(chord_of_angle(-1e-9), RangeError);
  EXPECT_THROW(chord_of_angle(3.2), RangeError);
  EXPECT_THROW(angle_of_chord(2.0 + 1e-12), RangeError);
  EXPECT_THROW(angle_of_chord(-0.1), RangeError);
  EXPECT_THROW(angle_of_chord(std::nan("")), RangeError);
}

TEST(ChordAngleTest, MutuallyInverseAndMonotoneOnGrid) {
  constexpr int kN = 10'000;
  double prev_c = -1.0;
  double prev_a = -1.0;
  for (int i = 0; i <= kN; ++i) {
    const double theta = kPi * i / kN;
    const double c = 2.0 * i / kN;
    EXPECT_NEAR(theta, angle_of_chord(chord_of_angle(theta)), 1e-12);
    EXPECT_NEAR(c, chord_of_angle(angle_of_chord(c)), 1e-12);
    EXPECT_GE(chord_of_angle(theta), prev_c);
    EXPECT_GE(angle_of_chord(c), prev_a);
    prev_c = chord_of_angle(theta);
    prev_a = angle_of_chord(c);
  }
}

TEST(SpherePointTest, NormalizesAndRejectsDegenerate) {
  const SpherePoint p(3, 4, 12);
  EXPECT_NEAR(1.0, norm(p.vec()), 1e-15);
  EXPECT_THROW(SpherePoint(0, 0, 0), RangeError);
  EXPECT_THROW(SpherePoint(std::nan(""), 0, 1), RangeError);
}

TEST(AntipodeTest, Examples) {
  const SpherePoint n(0, 0, 1);
  EXPECT_EQ(Point3(0, 0, -1), antipode(n).vec());
  Rng rng(7);
  for (int i = 0; i < 100; ++i) {
    const SpherePoint p(random_unit_vector(rng));
    EXPECT_LE(distance(p.vec(), antipode(antipode(p)).vec()), 1e-15);
    EXPECT_DOUBLE_EQ(kPi, central_angle(p, antipode(p)));
  }
}

TEST(UnitSphereThroughTest, AntipodalPairForcesMidpoint) {
  Rng rng(1);
  const auto emb = unit_sphere_through({1, 0, 0}, {-1, 0, 0}, rng);
  EXPECT_NEAR(0.0, norm(emb.center), 1e-15);
}

TEST(UnitSphereThroughTest, CoincidentPoints) {
  Rng rng(2);
  const Point3 x{0.5, 0.5, -3};
  const auto emb = unit_sphere_through(x, x, rng);
  EXPECT_NEAR(1.0, distance(emb.center, x), 1e-12);
}

TEST(UnitSphereThroughTest, MatchesDirectSolutionOfSphereConstraints) {
  // |c| = 1 and |c - (0,0,1)| = 1 force c_z = 1/2 and c_x^2 + c_y^2 = 3/4.
  Rng rng(3);
  for (int i = 0; i < 20; ++i) {
    const auto emb = unit_sphere_through({0, 0, 0}, {0, 0, 1}, rng);
    EXPECT_NEAR(0.5, emb.center.z, 1e-12);
    EXPECT_NEAR(0.75, emb.center.x * emb.center.x + emb.center.y * emb.center.y, 1e-12);
    EXPECT_NEAR(1.0, distance(emb.center, {0, 0, 0}), 1e-12);
    EXPECT_NEAR(1.0, distance(emb.center, {0, 0, 1}), 1e-12);
  }
}

TEST(UnitSphereThroughTest, RandomPairsLieOnReturnedSphereAndPullBack) {
  Rng rng(4);
  for (int i = 0; i < 10'000; ++i) {
    const Point3 x{rng.uniform(-5, 5), rng.uniform(-5, 5), rng.uniform(-5, 5)};
    const Point3 y = x + random_vector(rng, rng.uniform(0.0, 2.0));
    const auto emb = unit_sphere_through(x, y, rng);
    ASSERT_NEAR(1.0, distance(emb.center, x), 1e-10);
    ASSERT_NEAR(1.0, distance(emb.center, y), 1e-10);
    ASSERT_NEAR(0.0, distance(emb.embed(emb.pull_back(x)), x), 1e-10);
    ASSERT_NEAR(0.0, distance(emb.embed(emb.pull_back(y)), y), 1e-10);
  }
}

TEST(UnitSphereThroughTest, SamplesDifferentCenters) {
  Rng rng(5);
  const auto a = unit_sphere_through({0, 0, 0}, {1, 0, 0}, rng);
  const auto b = unit_sphere_through({0, 0, 0}, {1, 0, 0}, rng);
  EXPECT_GT(distance(a.center, b.center), 1e-6);
}

TEST(UnitSphereThroughTest, TooFarApartThrows) {
  Rng rng(6);
  EXPECT_THROW(unit_sphere_through({0, 0, 0}, {2.001, 0, 0}, rng), NoEmbeddingError);
  EXPECT_NO_THROW(unit_sphere_through({0, 0, 0}, {2.0 + 1e-13, 0, 0}, rng));
}

TEST(IsometryTest, IdentityAndTranslation) {
  const Point3 p{1.5, -2, 7};
  EXPECT_EQ(p, apply(Isometry::identity(), p));
  const Point3 v{0.25, 3, -1};
  EXPECT_EQ(p + v, apply(Isometry::translation(v), p));
}

TEST(IsometryTest, RandomIsometriesAreOrthogonalAndPreserveDistance) {
  Rng rng(8);
  int reflections = 0;
  for (int i = 0; i < 10'000; ++i) {
    const Isometry iso = random_isometry(rng);
    ASSERT_LE(orthogonality_defect(iso.rotation), 1e-12);
    const double det = determinant(iso.rotation);
    ASSERT_NEAR(1.0, std::abs(det), 1e-12);
    if (det < 0) ++reflections;
    const Point3 p{rng.uniform(-10, 10), rng.uniform(-10, 10), rng.uniform(-10, 10)};
    const Point3 q{rng.uniform(-10, 10), rng.uniform(-10, 10), rng.uniform(-10, 10)};
    const double d = distance(p, q);
    ASSERT_LE(std::abs(distance(iso.apply(p), iso.apply(q)) - d), 1e-9 * (1.0 + d));
  }
  EXPECT_GT(reflections, 4000);
  EXPECT_LT(reflections, 6000);
}

}  // namespace
