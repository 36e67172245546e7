// SPDX-License-Identifier: Apache-2.0
//! \file tetpd/rigid_pd.hpp
//! Translational penetration depth from projected lengths along the
//! candidate separating directions.
#pragma once

#include "tetpd/directions.hpp"

#include <algorithm>
#include <span>
#include <utility>
#include <vector>

namespace tetpd {

/// Extent of a point set along a unit axis, with the pair of supporting
/// vertices (index of the max projection, index of the min projection).
struct ProjectedLength {
  double length = 0.0;
  std::pair<int, int> support{0, 0};
};

inline ProjectedLength projected_length(std::span<const Point3> points, const Vector3& n) {
  ProjectedLength out;
  if (points.empty()) return out;
  double lo = points[0].dot(n);
  double hi = lo;
  int ilo = 0;
  int ihi = 0;
  for (std::size_t i = 1; i < points.size(); ++i) {
    const double s = points[i].dot(n);
    if (s > hi) {
      hi = s;
      ihi = static_cast<int>(i);
    }
    if (s < lo) {
      lo = s;
      ilo = static_cast<int>(i);
    }
  }
  out.length = hi - lo;
  out.support = {ihi, ilo};
  return out;
}

/// Projections of A, B and A u B on one axis. `overlap` is the projected-length
/// form L_a + L_b - L_union; `depth` is the translation of B along the axis
/// (either sign) needed to separate the projections. They agree unless one
/// projection contains the other, in which case depth > overlap.
struct ProjectedOverlap {
  Vector3 direction = Vector3::Zero();
  ProjectedLength a, b, united;
  double overlap = 0.0;
  double depth = 0.0;
  /// +1 if B must move along +direction to separate, -1 otherwise.
  int push_sign = 1;
};

inline ProjectedOverlap projected_overlap(const Tetrahedron& a, const Tetrahedron& b,
                                          const Vector3& n) {
  ProjectedOverlap out;
  out.direction = n;
  out.a = projected_length(a.vertices, n);
  out.b = projected_length(b.vertices, n);
  std::array<Point3, 8> all;
  std::copy(a.vertices.begin(), a.vertices.end(), all.begin());
  std::copy(b.vertices.begin(), b.vertices.end(), all.begin() + 4);
  out.united = projected_length(all, n);
  out.overlap = out.a.length + out.b.length - out.united.length;

  const Interval ia = project(a, n);
  const Interval ib = project(b, n);
  const double forward = ia.hi - ib.lo;   // move B along +n
  const double backward = ib.hi - ia.lo;  // move B along -n
  out.push_sign = forward <= backward ? 1 : -1;
  out.depth = std::min(forward, backward);
  return out;
}

/// One feature pair in the rigid ranking, with the candidates (one, or two
/// for an undecidable EE pair) that share its direction.
struct RankedDirection {
  int group = -1;
  Vector3 direction = Vector3::Zero();  // translation direction for B
  double depth = 0.0;
  double overlap = 0.0;
  std::vector<std::size_t> candidates;
};

struct RigidPdResult {
  double value = 0.0;
  Vector3 direction = Vector3::Zero();
  std::vector<RankedDirection> ranked;  // ascending depth
};

/// Rigid PD over a precomputed candidate list (see enumerate_candidates()).
inline RigidPdResult rigid_pd(const Tetrahedron& a, const Tetrahedron& b,
                              const std::vector<ContactCandidate>& candidates) {
  if (!intersects(a, b)) throw NotIntersecting("rigid_pd: tetrahedra do not intersect");

  RigidPdResult out;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    const auto& c = candidates[i];
    auto same = std::find_if(out.ranked.begin(), out.ranked.end(),
                             [&](const RankedDirection& r) { return r.group == c.group; });
    if (same != out.ranked.end()) {
      same->candidates.push_back(i);
      continue;
    }
    const auto po = projected_overlap(a, b, c.direction);
    out.ranked.push_back(RankedDirection{c.group, po.push_sign * c.direction, po.depth,
                                         po.overlap, {i}});
  }
  // Stable: ties keep enumeration order.
  std::stable_sort(out.ranked.begin(), out.ranked.end(),
                   [](const RankedDirection& x, const RankedDirection& y) {
                     return x.depth < y.depth - 1e-12;
                   });
  out.value = out.ranked.front().depth;
  out.direction = out.ranked.front().direction;
  return out;
}

inline RigidPdResult rigid_pd(const Tetrahedron& a, const Tetrahedron& b) {
  return rigid_pd(a, b, enumerate_candidates(a, b));
}

}  // namespace tetpd
