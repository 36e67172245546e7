// SPDX-License-Identifier: Apache-2.0
//! \file tetpd/metric.hpp
//! Object-norm distance between two configurations of one linearly deforming
//! tetrahedron.
#pragma once

#include "tetpd/geometry.hpp"

#include <Eigen/Core>

namespace tetpd {

/// Four vertex positions (12 scalars). Vertex order is the barycentric
/// correspondence between rest and deformed states.
using Configuration = Tetrahedron;

/// Per-vertex displacements d_i = p_i - r_i.
struct DisplacementTet {
  std::array<Vector3, 4> d;

  static DisplacementTet between(const Configuration& rest,
                                 const Configuration& deformed) {
    DisplacementTet out;
    for (std::size_t i = 0; i < 4; ++i) out.d[i] = deformed[i] - rest[i];
    return out;
  }
};

/// Volume-averaged squared displacement, closed form:
///   sigma = (1/10) * sum_{i >= j} d_i . d_j
inline double object_norm(const Configuration& q0, const Configuration& q1) {
  const auto disp = DisplacementTet::between(q0, q1);
  double sum = 0.0;
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j <= i; ++j) sum += disp.d[i].dot(disp.d[j]);
  return sum / 10.0;
}

/// Same quantity as object_norm() evaluated as 6 * integral over the unit
/// simplex of |D b + d_0|^2, using the symmetric 4-point rule that is exact
/// for quadratics.
inline double object_norm_quadrature(const Configuration& q0,
                                     const Configuration& q1) {
  const auto disp = DisplacementTet::between(q0, q1);
  Eigen::Matrix3d D;
  for (int c = 0; c < 3; ++c) D.col(c) = disp.d[static_cast<std::size_t>(c + 1)] - disp.d[0];

  const double alpha = (5.0 - std::sqrt(5.0)) / 20.0;
  const double beta = (5.0 + 3.0 * std::sqrt(5.0)) / 20.0;
  // Barycentric (b1, b2, b3) of the four nodes; b0 = 1 - b1 - b2 - b3.
  const std::array<Eigen::Vector3d, 4> nodes{
      Eigen::Vector3d(alpha, alpha, alpha),
      Eigen::Vector3d(beta, alpha, alpha),
      Eigen::Vector3d(alpha, beta, alpha),
      Eigen::Vector3d(alpha, alpha, beta),
  };
  double integral = 0.0;  // each node weighs (1/6)/4
  for (const auto& b : nodes) integral += (D * b + disp.d[0]).squaredNorm() / 24.0;
  return 6.0 * integral;
}

/// sigma(r, p) as a quadratic in the 12 unknown coordinates of p, ordered
/// vertex-major (p0x, p0y, p0z, p1x, ...):
///   sigma = p^T Q p + l^T p + c
/// with Q = (1/20)(I_4 + 1 1^T) (x) I_3.
struct ObjectiveQuadratic {
  Eigen::Matrix<double, 12, 12> quadratic;
  Eigen::Matrix<double, 12, 1> linear;
  double constant = 0.0;

  double evaluate(const Eigen::Matrix<double, 12, 1>& p) const {
    return p.dot(quadratic * p) + linear.dot(p) + constant;
  }

  /// Hessian of sigma, i.e. 2Q.
  Eigen::Matrix<double, 12, 12> hessian() const { return 2.0 * quadratic; }
};

inline Eigen::Matrix<double, 12, 1> flatten(const Configuration& q) {
  Eigen::Matrix<double, 12, 1> out;
  for (int i = 0; i < 4; ++i) out.segment<3>(3 * i) = q[static_cast<std::size_t>(i)];
  return out;
}

inline Configuration unflatten(const Eigen::Ref<const Eigen::VectorXd>& x) {
  Configuration q;
  for (int i = 0; i < 4; ++i) q[static_cast<std::size_t>(i)] = x.segment<3>(3 * i);
  return q;
}

inline ObjectiveQuadratic objective_quadratic(const Configuration& rest) {
  Eigen::Matrix4d block = Eigen::Matrix4d::Identity() + Eigen::Matrix4d::Ones();
  block /= 20.0;
  ObjectiveQuadratic out;
  out.quadratic.setZero();
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      out.quadratic.block<3, 3>(3 * i, 3 * j) = block(i, j) * Eigen::Matrix3d::Identity();
  const auto r = flatten(rest);
  out.linear = -2.0 * out.quadratic * r;
  out.constant = r.dot(out.quadratic * r);
  return out;
}

}  // namespace tetpd
