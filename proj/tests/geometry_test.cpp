// SPDX-License-Identifier: Apache-2.0
#include "support.hpp"

#include <gtest/gtest.h>

#include <set>

using namespace tetpd;
using tetpd::test::unit_simplex;

TEST(SignedVolume, UnitSimplex) { EXPECT_NEAR(signed_volume(unit_simplex()), 1.0 / 6.0, 1e-15); }

TEST(SignedVolume, CoplanarPointsAreFlat) {
  const Tetrahedron t{{Point3(0, 0, 0), Point3(1, 0, 0), Point3(0, 1, 0), Point3(1, 1, 0)}};
  EXPECT_EQ(signed_volume(t), 0.0);
}

TEST(SignedVolume, ScalesCubically) {
  Tetrahedron t = unit_simplex();
  for (auto& v : t.vertices) v *= 2.0;
  EXPECT_NEAR(signed_volume(t), 8.0 / 6.0, 1e-14);
}

TEST(SignedVolume, SwappingTwoVerticesFlipsSign) {
  Tetrahedron t = unit_simplex();
  std::swap(t[1], t[2]);
  EXPECT_NEAR(signed_volume(t), -1.0 / 6.0, 1e-15);
}

TEST(Intersects, IdenticalTetrahedra) { EXPECT_TRUE(intersects(unit_simplex(), unit_simplex())); }

TEST(Intersects, FarApart) {
  const auto a = unit_simplex();
  EXPECT_FALSE(intersects(a, a.translated(Vector3(10, 0, 0))));
}

TEST(Intersects, ShiftedCopyOverlaps) {
  const auto [a, b] = tetpd::test::shifted_simplex_pair();
  EXPECT_TRUE(intersects(a, b));
}

TEST(Intersects, ExactTouchIsNotIntersecting) {
  const auto a = unit_simplex();
  EXPECT_FALSE(intersects(a, a.translated(Vector3(1, 0, 0))));
  EXPECT_FALSE(intersects(a, a.translated(Vector3(-1, 0, 0))));
}

TEST(Intersects, RejectsDegenerateInput) {
  const Tetrahedron flat{{Point3(0, 0, 0), Point3(1, 0, 0), Point3(0, 1, 0), Point3(1, 1, 0)}};
  EXPECT_THROW(intersects(flat, unit_simplex()), DegenerateTetrahedron);
  EXPECT_THROW(intersects(unit_simplex(), flat), DegenerateTetrahedron);
}

TEST(Intersects, SymmetricAndTranslationInvariant) {
  std::mt19937_64 rng(11);
  int hits = 0;
  for (int i = 0; i < 2000; ++i) {
    const auto a = random_tet(rng);
    const auto b = random_tet(rng);
    const bool ab = intersects(a, b);
    hits += ab ? 1 : 0;
    EXPECT_EQ(ab, intersects(b, a));
    const Vector3 t = tetpd::test::random_vector(rng, 50.0);
    EXPECT_EQ(ab, intersects(a.translated(t), b.translated(t)));
  }
  EXPECT_GT(hits, 100);
  EXPECT_LT(hits, 1900);
}

TEST(Intersects, WitnessAxisSeparates) {
  std::mt19937_64 rng(12);
  for (int i = 0; i < 500; ++i) {
    const auto a = random_tet(rng);
    const auto b = random_tet(rng);
    const auto w = separating_witness(a, b);
    if (!w) continue;
    const Vector3 n = separating_axes(a, b)[*w];
    const Interval ia = project(a, n);
    const Interval ib = project(b, n);
    EXPECT_TRUE(ia.hi <= ib.lo + 1e-9 || ib.hi <= ia.lo + 1e-9);
  }
}

TEST(Intersects, AgreesWithBruteForceAxes) {
  std::mt19937_64 rng(13);
  for (int i = 0; i < 500; ++i) {
    const auto a = random_tet(rng);
    const auto b = random_tet(rng);
    EXPECT_EQ(intersects(a, b), !oracle::verify_separation(a, b, 1e-9));
  }
}

TEST(RandomTet, StaysInCubeWithMinimumVolume) {
  std::mt19937_64 rng(1);
  for (int i = 0; i < 200; ++i) {
    const auto t = random_tet(rng);
    for (const auto& v : t.vertices) {
      EXPECT_GE(v.minCoeff(), 0.0);
      EXPECT_LE(v.maxCoeff(), 10.0);
    }
    EXPECT_GE(std::abs(signed_volume(t)), 0.1);
  }
}

TEST(RandomTet, SameSeedSameTetrahedron) {
  std::mt19937_64 r1(1), r2(1);
  EXPECT_EQ(random_tet(r1), random_tet(r2));
}

TEST(RandomTet, RetryCapExhaustion) {
  std::mt19937_64 rng(1);
  EXPECT_THROW(random_tet(rng, 10.0, 1e6, 50), GenerationFailure);
  EXPECT_THROW(random_tet(rng, 0.0), std::invalid_argument);
}

TEST(RandomIntersectingPair, Seed7Intersects) {
  std::mt19937_64 rng(7);
  const auto p = random_intersecting_pair(rng);
  EXPECT_TRUE(intersects(p.a, p.b));
}

TEST(RandomIntersectingPair, ThousandDistinctIntersectingPairs) {
  std::set<std::vector<double>> seen;
  for (std::uint64_t i = 0; i < 1000; ++i) {
    const auto p = generate_pair(2024, i);
    ASSERT_TRUE(intersects(p.a, p.b));
    EXPECT_GE(std::abs(signed_volume(p.a)), 0.1);
    EXPECT_GE(std::abs(signed_volume(p.b)), 0.1);
    std::vector<double> key;
    for (const auto* t : {&p.a, &p.b})
      for (const auto& v : t->vertices) key.insert(key.end(), {v.x(), v.y(), v.z()});
    seen.insert(key);
  }
  EXPECT_EQ(seen.size(), 1000u);
}

TEST(RandomIntersectingPair, CentroidSlideProducesIntersectingPairs) {
  GenerationOptions opt;
  opt.strategy = PairStrategy::centroid_slide;
  std::mt19937_64 rng(3);
  for (int i = 0; i < 100; ++i) {
    const auto p = random_intersecting_pair(rng, opt);
    EXPECT_TRUE(intersects(p.a, p.b));
    EXPECT_GE(std::abs(signed_volume(p.b)), 0.1);
  }
}
