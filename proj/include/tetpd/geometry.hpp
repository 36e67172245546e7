// SPDX-License-Identifier: Apache-2.0
//! \file tetpd/geometry.hpp
//! Tetrahedron primitives, the SAT intersection predicate, and random pair
//! generation.
#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>

#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace tetpd {

using Point3 = Eigen::Vector3d;
using Vector3 = Eigen::Vector3d;

/// Thrown when a solver entry point receives a tetrahedron whose volume is
/// below the degeneracy threshold.
class DegenerateTetrahedron : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Thrown by the penetration solvers when the input pair does not overlap.
class NotIntersecting : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Thrown when a rejection-sampling loop runs out of retries.
class GenerationFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr double kDegenerateVolume = 1e-9;
inline constexpr double kTouchTolerance = 1e-9;

struct Tetrahedron {
  std::array<Point3, 4> vertices;

  const Point3& operator[](std::size_t i) const { return vertices[i]; }
  Point3& operator[](std::size_t i) { return vertices[i]; }

  Point3 centroid() const {
    return 0.25 * (vertices[0] + vertices[1] + vertices[2] + vertices[3]);
  }

  Tetrahedron translated(const Vector3& t) const {
    Tetrahedron out = *this;
    for (auto& v : out.vertices) v += t;
    return out;
  }

  bool operator==(const Tetrahedron&) const = default;
};

struct TetPair {
  Tetrahedron a;
  Tetrahedron b;
};

// Face f is the face opposite vertex f; vertices listed in increasing order.
inline constexpr std::array<std::array<int, 3>, 4> kFaces{{
    {1, 2, 3},
    {0, 2, 3},
    {0, 1, 3},
    {0, 1, 2},
}};

inline constexpr std::array<std::array<int, 2>, 6> kEdges{{
    {0, 1},
    {0, 2},
    {0, 3},
    {1, 2},
    {1, 3},
    {2, 3},
}};

/// The two vertices not on edge e.
inline constexpr std::array<int, 2> edge_complement(int e) {
  const auto [i, j] = kEdges[static_cast<std::size_t>(e)];
  std::array<int, 2> out{};
  int k = 0;
  for (int v = 0; v < 4; ++v)
    if (v != i && v != j) out[static_cast<std::size_t>(k++)] = v;
  return out;
}

/// (1/6) det[v1-v0 | v2-v0 | v3-v0]; positive for right-handed vertex order.
inline double signed_volume(const Tetrahedron& t) {
  const Vector3 e1 = t[1] - t[0];
  const Vector3 e2 = t[2] - t[0];
  const Vector3 e3 = t[3] - t[0];
  return e1.dot(e2.cross(e3)) / 6.0;
}

inline bool is_finite(const Tetrahedron& t) {
  for (const auto& v : t.vertices)
    if (!v.allFinite()) return false;
  return true;
}

inline void require_nondegenerate(const Tetrahedron& t, const char* what) {
  if (!is_finite(t) || std::abs(signed_volume(t)) <= kDegenerateVolume)
    throw DegenerateTetrahedron(std::string(what) + ": degenerate tetrahedron");
}

/// Unit normal of face f pointing away from the opposite vertex.
inline Vector3 outward_face_normal(const Tetrahedron& t, int f) {
  const auto& face = kFaces[static_cast<std::size_t>(f)];
  const Point3& v0 = t[face[0]];
  Vector3 n = (t[face[1]] - v0).cross(t[face[2]] - v0);
  if (n.dot(t[f] - v0) > 0.0) n = -n;
  return n.normalized();
}

inline Vector3 edge_vector(const Tetrahedron& t, int e) {
  const auto& ed = kEdges[static_cast<std::size_t>(e)];
  return t[ed[1]] - t[ed[0]];
}

/// Relative cross-product threshold below which two edges count as parallel.
inline constexpr double kParallelTolerance = 1e-8;

/// Unnormalized axis for an edge pair: e_b x e_a, or, for parallel edges, the
/// component of the offset between the two edge lines perpendicular to them.
/// Empty when the edges are collinear.
inline std::optional<Vector3> edge_pair_axis(const Tetrahedron& a, int edge_a,
                                             const Tetrahedron& b, int edge_b) {
  const Vector3 ea = edge_vector(a, edge_a);
  const Vector3 eb = edge_vector(b, edge_b);
  const Vector3 n = eb.cross(ea);
  const double scale = ea.norm() * eb.norm();
  if (n.norm() >= kParallelTolerance * scale) return n.normalized();

  // Shortest vector from A's edge line to B's edge line.
  const Vector3 u = ea.normalized();
  const Vector3 offset =
      b[kEdges[static_cast<std::size_t>(edge_b)][0]] - a[kEdges[static_cast<std::size_t>(edge_a)][0]];
  const Vector3 perp = offset - offset.dot(u) * u;
  if (perp.norm() <= kParallelTolerance * std::max(ea.norm(), eb.norm()))
    return std::nullopt;
  return perp.normalized();
}

/// Projection interval of a point set onto a unit axis.
struct Interval {
  double lo;
  double hi;
  double length() const { return hi - lo; }
};

inline Interval project(const Tetrahedron& t, const Vector3& n) {
  Interval out{std::numeric_limits<double>::infinity(),
               -std::numeric_limits<double>::infinity()};
  for (const auto& v : t.vertices) {
    const double s = v.dot(n);
    out.lo = std::min(out.lo, s);
    out.hi = std::max(out.hi, s);
  }
  return out;
}

/// L_n(a) + L_n(b) - L_n(a u b): positive iff the projections overlap.
inline double axis_overlap(const Tetrahedron& a, const Tetrahedron& b,
                           const Vector3& n) {
  const Interval ia = project(a, n);
  const Interval ib = project(b, n);
  const double lu = std::max(ia.hi, ib.hi) - std::min(ia.lo, ib.lo);
  return ia.length() + ib.length() - lu;
}

/// All SAT axes for a tetrahedron pair (unit, unsigned): 4 + 4 face normals
/// and one axis per non-collinear edge pair, in enumeration order.
inline std::vector<Vector3> separating_axes(const Tetrahedron& a,
                                            const Tetrahedron& b) {
  std::vector<Vector3> axes;
  axes.reserve(44);
  for (int f = 0; f < 4; ++f) axes.push_back(outward_face_normal(a, f));
  for (int f = 0; f < 4; ++f) axes.push_back(outward_face_normal(b, f));
  for (int ea = 0; ea < 6; ++ea)
    for (int eb = 0; eb < 6; ++eb)
      if (auto n = edge_pair_axis(a, ea, b, eb)) axes.push_back(*n);
  return axes;
}

/// Index into separating_axes() of the first axis whose overlap is at most
/// the tolerance, if any.
inline std::optional<std::size_t> separating_witness(
    const Tetrahedron& a, const Tetrahedron& b,
    double tolerance = kTouchTolerance) {
  const auto axes = separating_axes(a, b);
  for (std::size_t i = 0; i < axes.size(); ++i)
    if (axis_overlap(a, b, axes[i]) <= tolerance) return i;
  return std::nullopt;
}

/// True iff the projections overlap by more than the tolerance on every SAT
/// axis. Exact touching counts as not intersecting.
inline bool intersects(const Tetrahedron& a, const Tetrahedron& b,
                       double tolerance = kTouchTolerance) {
  require_nondegenerate(a, "intersects");
  require_nondegenerate(b, "intersects");
  return !separating_witness(a, b, tolerance).has_value();
}

// ---------------------------------------------------------------------------
// Random generation
// ---------------------------------------------------------------------------

enum class PairStrategy {
  // Keep sampling independent pairs until one intersects.
  rejection,
  // Slide b towards a along the centroid line; see random_intersecting_pair().
  centroid_slide,
};

struct GenerationOptions {
  double cube_side = 10.0;
  double min_volume = 0.1;
  PairStrategy strategy = PairStrategy::rejection;
  // centroid_slide only: position of b on the intersecting part of the
  // centroid segment, from first contact (0) to coincident centroids (1),
  // drawn uniformly from [min, max].
  double min_depth_fraction = 0.0;
  double max_depth_fraction = 1.0;
  int max_retries = 10000;
};

/// Four vertices i.i.d. uniform in [0, cube_side]^3, resampled until
/// |volume| >= min_volume.
inline Tetrahedron random_tet(std::mt19937_64& rng, double cube_side = 10.0,
                              double min_volume = 0.1, int max_retries = 10000) {
  if (!(cube_side > 0.0)) throw std::invalid_argument("random_tet: cube_side must be positive");
  std::uniform_real_distribution<double> coord(0.0, cube_side);
  for (int attempt = 0; attempt < max_retries; ++attempt) {
    Tetrahedron t;
    for (auto& v : t.vertices) {
      const double x = coord(rng);
      const double y = coord(rng);
      const double z = coord(rng);
      v = Point3(x, y, z);
    }
    if (std::abs(signed_volume(t)) >= min_volume) return t;
  }
  throw GenerationFailure("random_tet: retry cap exhausted");
}

namespace detail {

/// Finds by bisection the first-contact position of b sliding along the line
/// joining the centroids, then places b uniformly on the stretch between
/// first contact and coincident centroids.
inline std::optional<TetPair> slide_into_contact(const Tetrahedron& a, const Tetrahedron& b0,
                                                 double u, const GenerationOptions& opt) {
  const Vector3 toward = a.centroid() - b0.centroid();
  const double dist = toward.norm();
  if (dist < 1e-9) return TetPair{a, b0};
  auto at = [&](double lambda) { return b0.translated(lambda * toward); };

  // Bracket [lo, hi] with lo disjoint and hi intersecting. Coincident
  // centroids always intersect since each centroid is interior.
  double lo = 0.0;
  double hi = 1.0;
  if (intersects(a, at(0.0))) {
    hi = 0.0;
    lo = -1.0;
    while (intersects(a, at(lo))) {
      hi = lo;
      lo *= 2.0;
      if (lo < -1e6) return std::nullopt;
    }
  }
  for (int it = 0; it < 200 && (hi - lo) * dist > 1e-13; ++it) {
    const double mid = 0.5 * (lo + hi);
    (intersects(a, at(mid)) ? hi : lo) = mid;
  }
  const double frac = opt.min_depth_fraction + u * (opt.max_depth_fraction - opt.min_depth_fraction);
  TetPair pair{a, at(hi + frac * (1.0 - hi))};
  if (!intersects(pair.a, pair.b)) return std::nullopt;
  return pair;
}

}  // namespace detail

/// A random intersecting pair with both volumes >= min_volume.
inline TetPair random_intersecting_pair(std::mt19937_64& rng, const GenerationOptions& opt = {}) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int attempt = 0; attempt < opt.max_retries; ++attempt) {
    const Tetrahedron a = random_tet(rng, opt.cube_side, opt.min_volume, opt.max_retries);
    const Tetrahedron b = random_tet(rng, opt.cube_side, opt.min_volume, opt.max_retries);
    if (opt.strategy == PairStrategy::rejection) {
      if (intersects(a, b)) return TetPair{a, b};
      continue;
    }
    if (auto pair = detail::slide_into_contact(a, b, unit(rng), opt)) return *pair;
  }
  throw GenerationFailure("random_intersecting_pair: retry cap exhausted");
}

}  // namespace tetpd
