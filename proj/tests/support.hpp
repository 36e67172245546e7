// SPDX-License-Identifier: Apache-2.0
//! \file tests/support.hpp
//! Fixtures shared by the unit tests.
#pragma once

#include "tetpd/tetpd.hpp"

#include <cmath>
#include <random>

namespace tetpd::test {

inline Tetrahedron unit_simplex() {
  return Tetrahedron{{Point3(0, 0, 0), Point3(1, 0, 0), Point3(0, 1, 0), Point3(0, 0, 1)}};
}

/// The unit simplex and a copy shifted by (0.25, 0.25, 0.25).
inline TetPair shifted_simplex_pair() {
  const auto a = unit_simplex();
  return TetPair{a, a.translated(Vector3(0.25, 0.25, 0.25))};
}

/// Depth of B's deepest vertex behind A's slanted face in the pair above.
inline const double kShiftDepth = 0.25 / std::sqrt(3.0);

inline Tetrahedron random_configuration(std::mt19937_64& rng, double spread = 10.0) {
  std::uniform_real_distribution<double> u(-spread, spread);
  Tetrahedron t;
  for (auto& v : t.vertices) v = Point3(u(rng), u(rng), u(rng));
  return t;
}

inline Vector3 random_vector(std::mt19937_64& rng, double spread = 5.0) {
  std::uniform_real_distribution<double> u(-spread, spread);
  return Vector3(u(rng), u(rng), u(rng));
}

inline double relative_gap(double x, double ref) {
  return std::abs(x - ref) / std::max(std::abs(ref), 1e-300);
}

}  // namespace tetpd::test
