// SPDX-License-Identifier: Apache-2.0
//! \file tetpd/oracle.hpp
//! Slow, independent verifiers for tests and `tetpd check`. Nothing here is
//! used by the solvers, and nothing here calls the solvers' numerics: the SAT
//! test, axis depths and QP reference are re-derived from scratch.
#pragma once

#include "tetpd/geometry.hpp"
#include "tetpd/qp.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/QR>

#include <cmath>
#include <limits>
#include <random>
#include <vector>

namespace tetpd::oracle {

namespace detail {

inline std::pair<double, double> extent(const Tetrahedron& t, const Vector3& n) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (int i = 0; i < 4; ++i) {
    const double s = t.vertices[static_cast<std::size_t>(i)].dot(n);
    lo = std::min(lo, s);
    hi = std::max(hi, s);
  }
  return {lo, hi};
}

/// Translation of b along +/-n needed to separate the projections (<= 0 when
/// already separated).
inline double axis_depth(const Tetrahedron& a, const Tetrahedron& b, const Vector3& n) {
  const auto [alo, ahi] = extent(a, n);
  const auto [blo, bhi] = extent(b, n);
  return std::min(ahi - blo, bhi - alo);
}

inline std::vector<Vector3> brute_axes(const Tetrahedron& a, const Tetrahedron& b) {
  std::vector<Vector3> axes;
  auto push = [&](const Vector3& v, double scale) {
    if (v.norm() > 1e-12 * scale) axes.push_back(v.normalized());
  };
  std::vector<Vector3> edges_a, edges_b;
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j) {
      edges_a.push_back(a.vertices[static_cast<std::size_t>(j)] - a.vertices[static_cast<std::size_t>(i)]);
      edges_b.push_back(b.vertices[static_cast<std::size_t>(j)] - b.vertices[static_cast<std::size_t>(i)]);
    }
  for (const auto* edges : {&edges_a, &edges_b})
    for (std::size_t i = 0; i < edges->size(); ++i)
      for (std::size_t j = i + 1; j < edges->size(); ++j)
        push((*edges)[i].cross((*edges)[j]), (*edges)[i].norm() * (*edges)[j].norm());
  for (const auto& ea : edges_a)
    for (const auto& eb : edges_b) push(ea.cross(eb), ea.norm() * eb.norm());
  return axes;
}

}  // namespace detail

/// True when the two (possibly deformed) tetrahedra are separated, or touch
/// within `tolerance`, along some candidate SAT axis. Axes are all pairwise
/// cross products of each tetrahedron's own edges (face planes) and of
/// edges across the two.
inline bool verify_separation(const Tetrahedron& a_def, const Tetrahedron& b_def,
                              double tolerance = 1e-7) {
  for (const auto& n : detail::brute_axes(a_def, b_def))
    if (detail::axis_depth(a_def, b_def, n) <= tolerance) return true;
  return false;
}

/// Minimum axis depth over `samples` uniformly random unit directions. Each
/// axis depth is the length of some separating translation, so the result
/// never drops below the true penetration depth. +inf when samples == 0.
inline double sampled_direction_lower_bound(const Tetrahedron& a, const Tetrahedron& b,
                                            int samples, std::uint64_t seed = 0x5eed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i < samples; ++i) {
    Vector3 n(gauss(rng), gauss(rng), gauss(rng));
    if (n.norm() < 1e-12) continue;
    n.normalize();
    best = std::min(best, detail::axis_depth(a, b, n));
  }
  return best;
}

struct ReferenceResult {
  double value = std::numeric_limits<double>::infinity();
  Eigen::VectorXd x;
  bool converged = false;
  long iterations = 0;
};

/// Euclidean projection onto {A_eq x = b_eq, A_in x >= b_in} by enumerating
/// every subset of inequalities treated as equalities and keeping the nearest
/// feasible candidate. Exponential in the inequality count; fine for <= 12.
class PolyhedronProjector {
 public:
  explicit PolyhedronProjector(const qp::QpProblem& p) : p_(p) {
    const auto n = p.num_variables();
    const auto mi = p.ineq_matrix.rows();
    if (mi > 16) throw std::invalid_argument("PolyhedronProjector: too many inequalities");
    for (unsigned mask = 0; mask < (1u << mi); ++mask) {
      std::vector<Eigen::Index> rows;
      for (Eigen::Index j = 0; j < mi; ++j)
        if (mask & (1u << j)) rows.push_back(j);
      const auto me = p.eq_matrix.rows();
      const auto m = me + static_cast<Eigen::Index>(rows.size());
      Face face;
      if (m == 0) {
        face.projector = Eigen::MatrixXd::Identity(n, n);
        face.offset = Eigen::VectorXd::Zero(n);
        faces_.push_back(std::move(face));
        continue;
      }
      Eigen::MatrixXd A(m, n);
      Eigen::VectorXd b(m);
      if (me > 0) {
        A.topRows(me) = p.eq_matrix;
        b.head(me) = p.eq_rhs;
      }
      for (std::size_t k = 0; k < rows.size(); ++k) {
        A.row(me + static_cast<Eigen::Index>(k)) = p.ineq_matrix.row(rows[k]);
        b(me + static_cast<Eigen::Index>(k)) = p.ineq_rhs(rows[k]);
      }
      const Eigen::MatrixXd pinv = A.completeOrthogonalDecomposition().pseudoInverse();
      face.offset = pinv * b;
      if ((A * face.offset - b).lpNorm<Eigen::Infinity>() > 1e-10) continue;  // inconsistent
      face.projector = Eigen::MatrixXd::Identity(n, n) - pinv * A;
      faces_.push_back(std::move(face));
    }
  }

  bool empty() const { return faces_.empty(); }

  /// Nearest feasible point; empty vector if the polyhedron is empty.
  Eigen::VectorXd operator()(const Eigen::VectorXd& v) const {
    double best = std::numeric_limits<double>::infinity();
    Eigen::VectorXd out;
    for (const auto& f : faces_) {
      Eigen::VectorXd x = f.projector * v + f.offset;
      if (p_.max_violation(x) > 1e-10) continue;
      const double dist = (x - v).squaredNorm();
      if (dist < best) {
        best = dist;
        out = std::move(x);
      }
    }
    return out;
  }

 private:
  struct Face {
    Eigen::MatrixXd projector;
    Eigen::VectorXd offset;
  };
  const qp::QpProblem& p_;
  std::vector<Face> faces_;
};

/// Projected gradient with constant step 1/L and exact projection.
inline ReferenceResult projected_gradient_reference(const qp::QpProblem& p,
                                                    long max_iterations = 1'000'000) {
  ReferenceResult out;
  const PolyhedronProjector project(p);
  Eigen::VectorXd x = project(Eigen::VectorXd::Zero(p.num_variables()));
  if (x.size() == 0) return out;  // infeasible

  const double lipschitz =
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(p.hessian, Eigen::EigenvaluesOnly)
          .eigenvalues()
          .maxCoeff();
  const double step = lipschitz > 0.0 ? 1.0 / lipschitz : 1.0;

  for (out.iterations = 0; out.iterations < max_iterations; ++out.iterations) {
    const Eigen::VectorXd grad = p.hessian * x + p.linear;
    Eigen::VectorXd next = project(x - step * grad);
    const double moved = (next - x).lpNorm<Eigen::Infinity>();
    x = std::move(next);
    if (moved <= 1e-14 * (1.0 + x.lpNorm<Eigen::Infinity>())) {
      out.converged = true;
      break;
    }
  }
  out.value = p.objective(x);
  out.x = std::move(x);
  return out;
}

}  // namespace tetpd::oracle
