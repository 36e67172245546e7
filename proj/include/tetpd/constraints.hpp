// SPDX-License-Identifier: Apache-2.0
//! \file tetpd/constraints.hpp
//! Linear non-penetration constraints for one contact candidate.
#pragma once

#include "tetpd/directions.hpp"

#include <Eigen/Core>

#include <string>
#include <vector>

namespace tetpd {

enum class Relation { equal, less_equal, greater_equal };

/// coefficients . x  (relation)  rhs
struct ConstraintRow {
  Eigen::VectorXd coefficients;
  double rhs = 0.0;
  Relation relation = Relation::equal;

  bool is_constant(double tol = 0.0) const {
    return coefficients.lpNorm<Eigen::Infinity>() <= tol;
  }

  /// Signed violation at x (positive means violated).
  double violation(const Eigen::Ref<const Eigen::VectorXd>& x) const {
    const double lhs = coefficients.dot(x);
    switch (relation) {
      case Relation::equal: return std::abs(lhs - rhs);
      case Relation::less_equal: return lhs - rhs;
      case Relation::greater_equal: return rhs - lhs;
    }
    return 0.0;
  }
};

struct LinearConstraintSet {
  int num_unknowns = 0;
  /// Rows that reference at least one unknown.
  std::vector<ConstraintRow> rows;
  /// Rows that only involve fixed data; evaluated at build time.
  std::vector<ConstraintRow> constant_rows;
  bool feasible = true;
  std::string diagnostic;

  std::size_t rows_before_elimination() const { return rows.size() + constant_rows.size(); }

  double max_violation(const Eigen::Ref<const Eigen::VectorXd>& x) const {
    double worst = 0.0;
    for (const auto& r : rows) worst = std::max(worst, r.violation(x));
    return worst;
  }
};

/// Unknown layout for the deformable/deformable system.
namespace case2 {
inline constexpr int kUnknowns = 25;
inline constexpr int a_offset(int vertex) { return 3 * vertex; }
inline constexpr int b_offset(int vertex) { return 12 + 3 * vertex; }
inline constexpr int kPlane = 24;
}  // namespace case2

namespace detail {

inline void check_candidate(const ContactCandidate& c) {
  const bool ok = [&] {
    switch (c.kind) {
      case ContactKind::FV:
        return c.constrained_a.size() == 3 && c.constrained_b.empty();
      case ContactKind::VF:
        return c.constrained_a.empty() && c.constrained_b.size() == 3;
      case ContactKind::EE:
        return c.constrained_a.size() == 2 && c.constrained_b.size() == 2;
    }
    return false;
  }();
  if (!ok || c.constrained_a.size() + c.free_a.size() != 4 ||
      c.constrained_b.size() + c.free_b.size() != 4 ||
      std::abs(c.direction.norm() - 1.0) > 1e-9)
    throw std::invalid_argument("constraints: malformed contact candidate");
}

}  // namespace detail

/// Both tetrahedra deform; unknowns are A's 12 coordinates, B's 12
/// coordinates and the plane offset t = n . p_s. Eight rows, in the order
/// C_s equalities, C_p equalities, F_s (<=), F_p (>=).
inline LinearConstraintSet build_case2(const ContactCandidate& c,
                                       const Tetrahedron& a_rest,
                                       const Tetrahedron& b_rest) {
  detail::check_candidate(c);
  require_nondegenerate(a_rest, "build_case2");
  require_nondegenerate(b_rest, "build_case2");
  const Vector3& n = c.direction;

  LinearConstraintSet set;
  set.num_unknowns = case2::kUnknowns;
  auto row = [&](int offset, Relation rel) {
    ConstraintRow r;
    r.coefficients = Eigen::VectorXd::Zero(case2::kUnknowns);
    r.coefficients.segment<3>(offset) = n;
    r.coefficients(case2::kPlane) = -1.0;
    r.relation = rel;
    set.rows.push_back(std::move(r));
  };
  for (int v : c.constrained_a) row(case2::a_offset(v), Relation::equal);
  for (int v : c.constrained_b) row(case2::b_offset(v), Relation::equal);
  for (int v : c.free_a) row(case2::a_offset(v), Relation::less_equal);
  for (int v : c.free_b) row(case2::b_offset(v), Relation::greater_equal);
  return set;
}

/// A is static, B deforms; unknowns are B's 12 coordinates. The separating
/// plane is anchored on a contact vertex: s_0 of A's face (FV), p_0 of B's
/// face (VF), or the static edge of A (EE). Rows that involve only A are
/// evaluated here; a violated one marks the candidate infeasible.
inline LinearConstraintSet build_case1(const ContactCandidate& c,
                                       const Tetrahedron& a_static,
                                       const Tetrahedron& b_rest,
                                       double tolerance = 1e-9) {
  detail::check_candidate(c);
  require_nondegenerate(a_static, "build_case1");
  require_nondegenerate(b_rest, "build_case1");
  const Vector3& n = c.direction;

  LinearConstraintSet set;
  set.num_unknowns = 12;

  auto zero = [] { return Eigen::VectorXd::Zero(12); };
  // n . p_v  rel  rhs
  auto b_row = [&](int v, Relation rel, double rhs) {
    ConstraintRow r{zero(), rhs, rel};
    r.coefficients.segment<3>(3 * v) = n;
    set.rows.push_back(std::move(r));
  };
  // n . p_v - n . p_anchor  rel  0
  auto b_rel_row = [&](int v, int anchor, Relation rel) {
    ConstraintRow r{zero(), 0.0, rel};
    r.coefficients.segment<3>(3 * v) += n;
    r.coefficients.segment<3>(3 * anchor) -= n;
    set.rows.push_back(std::move(r));
  };
  // 0  rel  rhs, with rhs folded from fixed A data
  auto const_row = [&](Relation rel, double rhs) {
    set.constant_rows.push_back(ConstraintRow{zero(), rhs, rel});
  };

  switch (c.kind) {
    case ContactKind::FV: {
      const double t = n.dot(a_static[c.constrained_a[0]]);
      for (std::size_t k = 1; k < c.constrained_a.size(); ++k)
        const_row(Relation::equal, n.dot(a_static[c.constrained_a[k]]) - t);
      for (int v : c.free_a) const_row(Relation::greater_equal, n.dot(a_static[v]) - t);
      for (int v : c.free_b) b_row(v, Relation::greater_equal, t);
      break;
    }
    case ContactKind::VF: {
      const int anchor = c.constrained_b[0];
      for (std::size_t k = 1; k < c.constrained_b.size(); ++k)
        b_rel_row(c.constrained_b[k], anchor, Relation::equal);
      for (int v : c.free_a) {
        ConstraintRow r{zero(), n.dot(a_static[v]), Relation::greater_equal};
        r.coefficients.segment<3>(3 * anchor) = n;
        set.rows.push_back(std::move(r));
      }
      for (int v : c.free_b) b_rel_row(v, anchor, Relation::greater_equal);
      break;
    }
    case ContactKind::EE: {
      const double t = n.dot(a_static[c.constrained_a[0]]);
      const_row(Relation::equal, n.dot(a_static[c.constrained_a[1]]) - t);
      for (int v : c.constrained_b) b_row(v, Relation::equal, t);
      for (int v : c.free_a) const_row(Relation::greater_equal, n.dot(a_static[v]) - t);
      for (int v : c.free_b) b_row(v, Relation::greater_equal, t);
      break;
    }
  }

  double scale = 1.0;
  for (const auto& v : a_static.vertices) scale = std::max(scale, v.cwiseAbs().maxCoeff());
  for (const auto& r : set.constant_rows) {
    const double excess = r.violation(Eigen::VectorXd::Zero(12));
    if (excess > tolerance * scale) {
      set.feasible = false;
      set.diagnostic = "static vertex of A violates the separating plane by " +
                       std::to_string(excess);
      break;
    }
  }
  return set;
}

}  // namespace tetpd
