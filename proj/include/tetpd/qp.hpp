// SPDX-License-Identifier: Apache-2.0
//! \file tetpd/qp.hpp
//! Dense convex QP solver for the small per-candidate problems.
//!
//!   minimize    1/2 x^T H x + g^T x + c
//!   subject to  A_eq x  = b_eq
//!               A_in x >= b_in
//!
//! H may be singular as long as it is positive definite on the null space of
//! A_eq. Equalities are eliminated through an orthonormal null-space basis;
//! the reduced strictly convex problem is solved with the Goldfarb-Idnani
//! dual active-set method, and the result is certified by its KKT residuals.
#pragma once

#include <Eigen/Cholesky>
#include <Eigen/Core>
#include <Eigen/QR>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace tetpd::qp {

struct QpProblem {
  Eigen::MatrixXd hessian;
  Eigen::VectorXd linear;
  double constant = 0.0;
  Eigen::MatrixXd eq_matrix;
  Eigen::VectorXd eq_rhs;
  Eigen::MatrixXd ineq_matrix;
  Eigen::VectorXd ineq_rhs;

  Eigen::Index num_variables() const { return linear.size(); }

  double objective(const Eigen::Ref<const Eigen::VectorXd>& x) const {
    return 0.5 * x.dot(hessian * x) + linear.dot(x) + constant;
  }

  /// Largest equality residual or inequality shortfall at x.
  double max_violation(const Eigen::Ref<const Eigen::VectorXd>& x) const {
    double worst = 0.0;
    if (eq_matrix.rows() > 0)
      worst = (eq_matrix * x - eq_rhs).lpNorm<Eigen::Infinity>();
    if (ineq_matrix.rows() > 0)
      worst = std::max(worst, (ineq_rhs - ineq_matrix * x).maxCoeff());
    return worst;
  }

  void validate() const {
    const auto n = num_variables();
    if (hessian.rows() != n || hessian.cols() != n)
      throw std::invalid_argument("qp: Hessian dimension mismatch");
    if (eq_matrix.rows() != eq_rhs.size() || (eq_matrix.rows() > 0 && eq_matrix.cols() != n))
      throw std::invalid_argument("qp: equality dimension mismatch");
    if (ineq_matrix.rows() != ineq_rhs.size() ||
        (ineq_matrix.rows() > 0 && ineq_matrix.cols() != n))
      throw std::invalid_argument("qp: inequality dimension mismatch");
    if ((hessian - hessian.transpose()).lpNorm<Eigen::Infinity>() > 1e-12)
      throw std::invalid_argument("qp: Hessian not symmetric");
    if (!hessian.allFinite() || !linear.allFinite() || !eq_matrix.allFinite() ||
        !eq_rhs.allFinite() || !ineq_matrix.allFinite() || !ineq_rhs.allFinite())
      throw std::invalid_argument("qp: non-finite problem data");
  }
};

enum class Status { optimal, infeasible, max_iterations };

struct KktResiduals {
  double stationarity = 0.0;     // |H x + g - A_eq^T l_eq - A_in^T l_in|_inf
  double primal = 0.0;           // max constraint violation
  double dual = 0.0;             // max(0, -l_in)
  double complementarity = 0.0;  // max |l_in_j * slack_j|

  double max() const { return std::max({stationarity, primal, dual, complementarity}); }
};

struct QpSolution {
  Status status = Status::infeasible;
  Eigen::VectorXd x;
  double objective = std::numeric_limits<double>::infinity();
  std::vector<int> active_set;  // indices into the inequality rows
  Eigen::VectorXd eq_multipliers;
  Eigen::VectorXd ineq_multipliers;
  KktResiduals kkt;
  int iterations = 0;
};

inline KktResiduals kkt_residuals(const QpProblem& p, const Eigen::VectorXd& x,
                                  const Eigen::VectorXd& l_eq, const Eigen::VectorXd& l_in) {
  KktResiduals r;
  Eigen::VectorXd grad = p.hessian * x + p.linear;
  if (p.eq_matrix.rows() > 0) grad -= p.eq_matrix.transpose() * l_eq;
  if (p.ineq_matrix.rows() > 0) grad -= p.ineq_matrix.transpose() * l_in;
  r.stationarity = grad.lpNorm<Eigen::Infinity>();
  r.primal = p.max_violation(x);
  if (p.ineq_matrix.rows() > 0) {
    const Eigen::VectorXd slack = p.ineq_matrix * x - p.ineq_rhs;
    r.dual = std::max(0.0, -l_in.minCoeff());
    r.complementarity = l_in.cwiseProduct(slack).lpNorm<Eigen::Infinity>();
  }
  return r;
}

namespace detail {

/// Goldfarb-Idnani on  min 1/2 y^T G y + a^T y  s.t.  C y >= d, G > 0.
struct DualActiveSet {
  const Eigen::MatrixXd& G;
  const Eigen::VectorXd& a;
  const Eigen::MatrixXd& C;
  const Eigen::VectorXd& d;
  double feas_tol;
  int max_iter;

  Eigen::VectorXd y;
  std::vector<int> active;
  Eigen::VectorXd u;  // multipliers of `active`
  int iterations = 0;

  Status run() {
    const Eigen::LLT<Eigen::MatrixXd> chol(G);
    if (chol.info() != Eigen::Success)
      throw std::domain_error("qp: Hessian not positive definite on the equality subspace");
    y = chol.solve(-a);
    active.clear();
    u.resize(0);
    const Eigen::Index m = C.rows();
    std::vector<bool> is_active(static_cast<std::size_t>(m), false);

    while (true) {
      // Most violated inactive constraint.
      int p = -1;
      double worst = -feas_tol;
      for (Eigen::Index j = 0; j < m; ++j) {
        if (is_active[static_cast<std::size_t>(j)]) continue;
        const double s = C.row(j).dot(y) - d(j);
        const double scaled = s / std::max(1.0, C.row(j).norm());
        if (scaled < worst) {
          worst = scaled;
          p = static_cast<int>(j);
        }
      }
      if (p < 0) return Status::optimal;

      const Eigen::VectorXd np = C.row(p).transpose();
      double up = 0.0;
      while (true) {
        if (++iterations > max_iter) return Status::max_iterations;
        const auto k = static_cast<Eigen::Index>(active.size());
        Eigen::MatrixXd N(C.cols(), k);
        for (Eigen::Index i = 0; i < k; ++i) N.col(i) = C.row(active[static_cast<std::size_t>(i)]).transpose();

        const Eigen::VectorXd Ginv_np = chol.solve(np);
        Eigen::VectorXd r(k);
        Eigen::VectorXd z;
        if (k > 0) {
          const Eigen::MatrixXd Ginv_N = chol.solve(N);
          const Eigen::MatrixXd M = N.transpose() * Ginv_N;
          r = M.ldlt().solve(N.transpose() * Ginv_np);
          z = Ginv_np - Ginv_N * r;
        } else {
          z = Ginv_np;
        }

        // Largest dual step keeping active multipliers nonnegative.
        double t1 = std::numeric_limits<double>::infinity();
        Eigen::Index drop = -1;
        for (Eigen::Index i = 0; i < k; ++i) {
          if (r(i) > 1e-14) {
            const double ratio = u(i) / r(i);
            if (ratio < t1) {
              t1 = ratio;
              drop = i;
            }
          }
        }

        const double curvature = z.dot(np);
        const bool dependent = curvature <= 1e-14 * np.squaredNorm();
        if (dependent) {
          if (drop < 0) return Status::infeasible;
          u -= t1 * r;
          up += t1;
          remove(drop, is_active);
          continue;
        }

        const double slack = np.dot(y) - d(p);
        const double t2 = -slack / curvature;
        const double t = std::min(t1, t2);
        y += t * z;
        if (k > 0) u -= t * r;
        up += t;

        if (t2 <= t1) {
          active.push_back(p);
          is_active[static_cast<std::size_t>(p)] = true;
          u.conservativeResize(k + 1);
          u(k) = up;
          break;
        }
        remove(drop, is_active);
      }
    }
  }

  void remove(Eigen::Index i, std::vector<bool>& is_active) {
    is_active[static_cast<std::size_t>(active[static_cast<std::size_t>(i)])] = false;
    active.erase(active.begin() + i);
    const Eigen::Index k = u.size();
    Eigen::VectorXd next(k - 1);
    next << u.head(i), u.tail(k - 1 - i);
    u = next;
  }
};

}  // namespace detail

/// Solves the QP. Deterministic for identical inputs. Infeasibility and
/// iteration exhaustion are reported through the status, never clamped.
inline QpSolution solve(const QpProblem& p, double tol = 1e-9) {
  p.validate();
  const Eigen::Index n = p.num_variables();
  const Eigen::Index me = p.eq_matrix.rows();
  const Eigen::Index mi = p.ineq_matrix.rows();

  QpSolution sol;

  // x = x0 + Z y with A_eq Z = 0.
  Eigen::VectorXd x0 = Eigen::VectorXd::Zero(n);
  Eigen::MatrixXd Z = Eigen::MatrixXd::Identity(n, n);
  if (me > 0) {
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(p.eq_matrix.transpose());
    qr.setThreshold(1e-12);
    const Eigen::Index rank = qr.rank();
    x0 = p.eq_matrix.completeOrthogonalDecomposition().solve(p.eq_rhs);
    if ((p.eq_matrix * x0 - p.eq_rhs).lpNorm<Eigen::Infinity>() > tol) {
      sol.status = Status::infeasible;
      return sol;
    }
    const Eigen::MatrixXd Q = qr.householderQ();
    Z = Q.rightCols(n - rank);
  }

  const Eigen::MatrixXd G = Z.transpose() * p.hessian * Z;
  const Eigen::VectorXd a = Z.transpose() * (p.hessian * x0 + p.linear);
  const Eigen::MatrixXd C = mi > 0 ? Eigen::MatrixXd(p.ineq_matrix * Z) : Eigen::MatrixXd(0, Z.cols());
  const Eigen::VectorXd d = mi > 0 ? Eigen::VectorXd(p.ineq_rhs - p.ineq_matrix * x0) : Eigen::VectorXd(0);

  Eigen::VectorXd y;
  std::vector<int> active;
  Eigen::VectorXd u;
  if (Z.cols() == 0) {
    y.resize(0);
    if (mi > 0 && (p.ineq_rhs - p.ineq_matrix * x0).maxCoeff() > tol) {
      sol.status = Status::infeasible;
      return sol;
    }
    sol.status = Status::optimal;
  } else {
    detail::DualActiveSet gi{G, a, C, d, 0.1 * tol, 50 * static_cast<int>(mi + 1), {}, {}, {}};
    sol.status = gi.run();
    sol.iterations = gi.iterations;
    if (sol.status != Status::optimal) return sol;
    y = std::move(gi.y);
    active = std::move(gi.active);
    u = std::move(gi.u);
  }

  sol.x = Z.cols() > 0 ? Eigen::VectorXd(x0 + Z * y) : x0;
  sol.objective = p.objective(sol.x);
  sol.active_set = active;
  sol.ineq_multipliers = Eigen::VectorXd::Zero(mi);
  for (std::size_t i = 0; i < active.size(); ++i)
    sol.ineq_multipliers(active[i]) = u(static_cast<Eigen::Index>(i));

  Eigen::VectorXd rhs = p.hessian * sol.x + p.linear;
  if (mi > 0) rhs -= p.ineq_matrix.transpose() * sol.ineq_multipliers;
  sol.eq_multipliers = me > 0
                           ? Eigen::VectorXd(p.eq_matrix.transpose().completeOrthogonalDecomposition().solve(rhs))
                           : Eigen::VectorXd(0);
  sol.kkt = kkt_residuals(p, sol.x, sol.eq_multipliers, sol.ineq_multipliers);
  return sol;
}

}  // namespace tetpd::qp
