// SPDX-License-Identifier: Apache-2.0
#include "support.hpp"

#include <gtest/gtest.h>

using namespace tetpd;
using tetpd::test::kShiftDepth;
using tetpd::test::unit_simplex;

TEST(ProjectedLength, AxisAligned) {
  const auto t = unit_simplex();
  const auto l = projected_length(t.vertices, Vector3(1, 0, 0));
  EXPECT_DOUBLE_EQ(l.length, 1.0);
  EXPECT_EQ(l.support, (std::pair<int, int>{1, 0}));
}

TEST(ProjectedLength, Diagonal) {
  EXPECT_NEAR(projected_length(unit_simplex().vertices, Vector3(1, 1, 1).normalized()).length,
              1.0 / std::sqrt(3.0), 1e-15);
}

TEST(ProjectedLength, RepeatedPoint) {
  const std::vector<Point3> pts(3, Point3(1, 2, 3));
  EXPECT_EQ(projected_length(pts, Vector3(0, 0, 1)).length, 0.0);
  EXPECT_EQ(projected_length(std::span<const Point3>{}, Vector3(0, 0, 1)).length, 0.0);
}

TEST(ProjectedOverlap, FormulaMatchesDepthWithoutContainment) {
  const auto [a, b] = tetpd::test::shifted_simplex_pair();
  const Vector3 n = Vector3(1, 1, 1).normalized();
  const auto o = projected_overlap(a, b, n);
  EXPECT_NEAR(o.overlap, kShiftDepth, 1e-15);
  EXPECT_NEAR(o.depth, kShiftDepth, 1e-15);
  EXPECT_EQ(o.push_sign, 1);
}

TEST(RigidPd, ShiftedSimplex) {
  const auto [a, b] = tetpd::test::shifted_simplex_pair();
  const auto r = rigid_pd(a, b);
  EXPECT_NEAR(r.value, kShiftDepth, 1e-12);
  EXPECT_TRUE(r.direction.isApprox(Vector3(1, 1, 1).normalized(), 1e-12));
  EXPECT_EQ(r.ranked.front().group, 0);
  EXPECT_EQ(r.ranked.size(), 44u);
}

TEST(RigidPd, IdenticalTetrahedra) {
  const auto a = unit_simplex();
  const auto r = rigid_pd(a, a);
  double expected = std::numeric_limits<double>::infinity();
  for (const auto& c : enumerate_candidates(a, a))
    expected = std::min(expected, projected_length(a.vertices, c.direction).length);
  EXPECT_NEAR(r.value, expected, 1e-12);
}

TEST(RigidPd, RejectsDisjointPair) {
  const auto a = unit_simplex();
  EXPECT_THROW(rigid_pd(a, a.translated(Vector3(5, 0, 0))), NotIntersecting);
}

TEST(RigidPd, RankingIsAscendingByDepth) {
  for (std::uint64_t i = 0; i < 100; ++i) {
    const auto p = generate_pair(41, i);
    const auto r = rigid_pd(p.a, p.b);
    for (std::size_t k = 1; k < r.ranked.size(); ++k)
      EXPECT_LE(r.ranked[k - 1].depth, r.ranked[k].depth + 1e-12);
    EXPECT_DOUBLE_EQ(r.value, r.ranked.front().depth);
  }
}

TEST(RigidPd, TranslationAlongResultSeparates) {
  for (std::uint64_t i = 0; i < 300; ++i) {
    const auto p = generate_pair(42, i);
    const auto r = rigid_pd(p.a, p.b);
    EXPECT_FALSE(intersects(p.a, p.b.translated(1.01 * r.value * r.direction)));
    EXPECT_TRUE(intersects(p.a, p.b.translated(0.99 * r.value * r.direction)));
  }
}

TEST(RigidPd, NoSampledDirectionIsShallower) {
  for (std::uint64_t i = 0; i < 300; ++i) {
    const auto p = generate_pair(43, i);
    EXPECT_GE(oracle::sampled_direction_lower_bound(p.a, p.b, 200, i), rigid_pd(p.a, p.b).value - 1e-9);
  }
}
