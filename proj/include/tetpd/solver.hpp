// SPDX-License-Identifier: Apache-2.0
//! \file tetpd/solver.hpp
//! Deformable penetration depth: one QP per candidate direction, global
//! minimum over candidates, and the rigid-PD-seeded accelerated mode.
#pragma once

#include "tetpd/constraints.hpp"
#include "tetpd/metric.hpp"
#include "tetpd/qp.hpp"
#include "tetpd/rigid_pd.hpp"

#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace tetpd {

enum class Mode { static_deformable, deformable_deformable, accelerated };

inline std::string_view to_string(Mode m) {
  switch (m) {
    case Mode::static_deformable: return "stat-def";
    case Mode::deformable_deformable: return "def-def";
    case Mode::accelerated: return "accel";
  }
  return "?";
}

/// Thrown when no candidate produced an optimal QP.
class AllCandidatesInfeasible : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class CandidateStatus { optimal, infeasible_geometry, qp_infeasible, qp_failed, not_selected };

struct CandidateOutcome {
  CandidateStatus status = CandidateStatus::not_selected;
  double objective = std::numeric_limits<double>::infinity();
  double kkt_residual = 0.0;
  std::string diagnostic;
};

struct PddResult {
  Mode mode = Mode::deformable_deformable;
  int k = 0;  // accelerated mode only
  double value = 0.0;      // sqrt(objective)
  double objective = 0.0;  // minimal summed object norm
  std::size_t best_index = 0;
  ContactCandidate best;
  Tetrahedron a_deformed, b_deformed;
  double plane_offset = 0.0;  // separating plane n . x = plane_offset
  std::vector<ContactCandidate> candidates;
  std::vector<CandidateOutcome> table;  // parallel to `candidates`
  double max_kkt_residual = 0.0;        // over every optimal candidate QP
  std::optional<RigidPdResult> rigid;   // accelerated mode only
};

namespace detail {

inline qp::QpProblem assemble(const Eigen::MatrixXd& H, const Eigen::VectorXd& g, double c,
                              const LinearConstraintSet& set) {
  qp::QpProblem p;
  p.hessian = H;
  p.linear = g;
  p.constant = c;
  const auto n = static_cast<Eigen::Index>(set.num_unknowns);
  Eigen::Index me = 0;
  Eigen::Index mi = 0;
  for (const auto& r : set.rows) (r.relation == Relation::equal ? me : mi)++;
  p.eq_matrix.resize(me, n);
  p.eq_rhs.resize(me);
  p.ineq_matrix.resize(mi, n);
  p.ineq_rhs.resize(mi);
  me = mi = 0;
  for (const auto& r : set.rows) {
    switch (r.relation) {
      case Relation::equal:
        p.eq_matrix.row(me) = r.coefficients.transpose();
        p.eq_rhs(me++) = r.rhs;
        break;
      case Relation::greater_equal:
        p.ineq_matrix.row(mi) = r.coefficients.transpose();
        p.ineq_rhs(mi++) = r.rhs;
        break;
      case Relation::less_equal:
        p.ineq_matrix.row(mi) = -r.coefficients.transpose();
        p.ineq_rhs(mi++) = -r.rhs;
        break;
    }
  }
  return p;
}

}  // namespace detail

/// QP for one candidate with A static: minimize sigma(b_rest, p).
inline qp::QpProblem case1_problem(const LinearConstraintSet& set, const Tetrahedron& b_rest) {
  const auto obj = objective_quadratic(b_rest);
  return detail::assemble(obj.hessian(), obj.linear, obj.constant, set);
}

/// QP for one candidate with both deforming: minimize
/// sigma(a_rest, s) + sigma(b_rest, p) over (s, p, t).
inline qp::QpProblem case2_problem(const LinearConstraintSet& set, const Tetrahedron& a_rest,
                                   const Tetrahedron& b_rest) {
  const auto oa = objective_quadratic(a_rest);
  const auto ob = objective_quadratic(b_rest);
  Eigen::MatrixXd H = Eigen::MatrixXd::Zero(case2::kUnknowns, case2::kUnknowns);
  Eigen::VectorXd g = Eigen::VectorXd::Zero(case2::kUnknowns);
  H.block<12, 12>(0, 0) = oa.hessian();
  H.block<12, 12>(12, 12) = ob.hessian();
  g.segment<12>(0) = oa.linear;
  g.segment<12>(12) = ob.linear;
  return detail::assemble(H, g, oa.constant + ob.constant, set);
}

namespace detail {

struct CandidateSolve {
  CandidateOutcome outcome;
  Eigen::VectorXd x;
};

inline CandidateSolve solve_case1(const ContactCandidate& c, const Tetrahedron& a,
                                  const Tetrahedron& b) {
  CandidateSolve out;
  const auto set = build_case1(c, a, b);
  if (!set.feasible) {
    out.outcome.status = CandidateStatus::infeasible_geometry;
    out.outcome.diagnostic = set.diagnostic;
    return out;
  }
  const auto sol = qp::solve(case1_problem(set, b));
  if (sol.status != qp::Status::optimal) {
    out.outcome.status = sol.status == qp::Status::infeasible ? CandidateStatus::qp_infeasible
                                                              : CandidateStatus::qp_failed;
    return out;
  }
  out.outcome.status = CandidateStatus::optimal;
  out.outcome.objective = std::max(0.0, sol.objective);
  out.outcome.kkt_residual = sol.kkt.max();
  out.x = sol.x;
  return out;
}

inline CandidateSolve solve_case2(const ContactCandidate& c, const Tetrahedron& a,
                                  const Tetrahedron& b) {
  CandidateSolve out;
  const auto sol = qp::solve(case2_problem(build_case2(c, a, b), a, b));
  if (sol.status != qp::Status::optimal) {
    out.outcome.status = sol.status == qp::Status::infeasible ? CandidateStatus::qp_infeasible
                                                              : CandidateStatus::qp_failed;
    return out;
  }
  out.outcome.status = CandidateStatus::optimal;
  out.outcome.objective = std::max(0.0, sol.objective);
  out.outcome.kkt_residual = sol.kkt.max();
  out.x = sol.x;
  return out;
}

inline void require_intersecting(const Tetrahedron& a, const Tetrahedron& b, const char* what) {
  if (!intersects(a, b)) throw NotIntersecting(std::string(what) + ": tetrahedra do not intersect");
}

/// Runs the candidates in `selected` (all when empty) and keeps the smallest
/// objective; ties break by candidate order.
template <class SolveFn>
PddResult reduce(Mode mode, const Tetrahedron& a, const Tetrahedron& b,
                 std::vector<ContactCandidate> candidates, const std::vector<std::size_t>& selected,
                 SolveFn&& solve_one) {
  PddResult res;
  res.mode = mode;
  res.table.resize(candidates.size());

  std::vector<std::size_t> order = selected;
  if (order.empty())
    for (std::size_t i = 0; i < candidates.size(); ++i) order.push_back(i);
  std::sort(order.begin(), order.end());

  double best = std::numeric_limits<double>::infinity();
  Eigen::VectorXd best_x;
  for (std::size_t i : order) {
    auto s = solve_one(candidates[i], a, b);
    if (s.outcome.status == CandidateStatus::optimal) {
      res.max_kkt_residual = std::max(res.max_kkt_residual, s.outcome.kkt_residual);
      if (s.outcome.objective < best - 1e-12) {
        best = s.outcome.objective;
        best_x = s.x;
        res.best_index = i;
      }
    }
    res.table[i] = std::move(s.outcome);
  }
  if (!std::isfinite(best))
    throw AllCandidatesInfeasible("no candidate direction produced an optimal QP");

  res.objective = best;
  res.value = std::sqrt(best);
  res.best = candidates[res.best_index];
  res.candidates = std::move(candidates);

  const Vector3& n = res.best.direction;
  if (mode == Mode::static_deformable) {
    res.a_deformed = a;
    res.b_deformed = unflatten(best_x);
    res.plane_offset = res.best.kind == ContactKind::VF
                           ? n.dot(res.b_deformed[res.best.constrained_b[0]])
                           : n.dot(a[res.best.constrained_a[0]]);
  } else {
    res.a_deformed = unflatten(best_x.segment<12>(0));
    res.b_deformed = unflatten(best_x.segment<12>(12));
    res.plane_offset = best_x(case2::kPlane);
  }
  return res;
}

}  // namespace detail

/// A stays at rest; only B deforms.
inline PddResult pdd_static_deformable(const Tetrahedron& a, const Tetrahedron& b) {
  detail::require_intersecting(a, b, "pdd_static_deformable");
  return detail::reduce(Mode::static_deformable, a, b, enumerate_candidates(a, b), {},
                        detail::solve_case1);
}

/// Both tetrahedra deform; the separating plane offset is a free variable.
inline PddResult pdd_deformable_deformable(const Tetrahedron& a, const Tetrahedron& b) {
  detail::require_intersecting(a, b, "pdd_deformable_deformable");
  return detail::reduce(Mode::deformable_deformable, a, b, enumerate_candidates(a, b), {},
                        detail::solve_case2);
}

/// Deformable/deformable restricted to the k directions with the smallest
/// rigid penetration depth.
inline PddResult pdd_accelerated(const Tetrahedron& a, const Tetrahedron& b, int k = 1) {
  if (k < 1) throw std::invalid_argument("pdd_accelerated: k must be >= 1");
  detail::require_intersecting(a, b, "pdd_accelerated");
  auto candidates = enumerate_candidates(a, b);
  auto rigid = rigid_pd(a, b, candidates);
  std::vector<std::size_t> selected;
  const auto take = std::min<std::size_t>(static_cast<std::size_t>(k), rigid.ranked.size());
  for (std::size_t i = 0; i < take; ++i)
    selected.insert(selected.end(), rigid.ranked[i].candidates.begin(),
                    rigid.ranked[i].candidates.end());
  auto res = detail::reduce(Mode::accelerated, a, b, std::move(candidates), selected,
                            detail::solve_case2);
  res.k = k;
  res.rigid = std::move(rigid);
  return res;
}

}  // namespace tetpd
