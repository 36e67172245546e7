// SPDX-License-Identifier: Apache-2.0
//! \file tetpd/directions.hpp
//! Candidate separating directions between two rest tetrahedra.
#pragma once

#include "tetpd/geometry.hpp"

#include <algorithm>
#include <span>
#include <string_view>
#include <vector>

namespace tetpd {

enum class ContactKind { FV, VF, EE };

inline std::string_view to_string(ContactKind k) {
  switch (k) {
    case ContactKind::FV: return "FV";
    case ContactKind::VF: return "VF";
    case ContactKind::EE: return "EE";
  }
  return "?";
}

/// One separating-direction hypothesis. The direction points from A towards
/// B: after resolution A lies in n.x <= t and B in n.x >= t.
struct ContactCandidate {
  ContactKind kind = ContactKind::FV;
  int face = -1;    // FV: face of A, VF: face of B
  int edge_a = -1;  // EE only
  int edge_b = -1;  // EE only
  // Feature-pair id in [0, 44): FV 0-3, VF 4-7, EE 8 + 6*edge_a + edge_b.
  // Both signs of an undecidable EE pair share the id.
  int group = -1;
  bool undecidable = false;
  bool parallel = false;
  Vector3 direction = Vector3::Zero();
  std::vector<int> constrained_a, constrained_b;
  std::vector<int> free_a, free_b;
};

namespace detail {

inline std::vector<int> complement(const std::vector<int>& in) {
  std::vector<int> out;
  for (int v = 0; v < 4; ++v)
    if (std::find(in.begin(), in.end(), v) == in.end()) out.push_back(v);
  return out;
}

inline std::vector<int> to_vector(std::span<const int> s) { return {s.begin(), s.end()}; }

}  // namespace detail

/// Relative tolerance used to decide on which side of an EE plane A's
/// non-contacting vertices lie.
inline constexpr double kSideTolerance = 1e-12;

/// 4 FV (outward from A), 4 VF (inward to B), then EE candidates in
/// lexicographic (edge_a, edge_b) order. An EE pair whose non-contacting A
/// vertices straddle the plane yields both +n and -n; collinear edge pairs
/// yield nothing.
inline std::vector<ContactCandidate> enumerate_candidates(const Tetrahedron& a,
                                                          const Tetrahedron& b) {
  require_nondegenerate(a, "enumerate_candidates");
  require_nondegenerate(b, "enumerate_candidates");

  std::vector<ContactCandidate> out;
  out.reserve(48);

  for (int f = 0; f < 4; ++f) {
    ContactCandidate c;
    c.kind = ContactKind::FV;
    c.face = f;
    c.group = f;
    c.direction = outward_face_normal(a, f);
    c.constrained_a = detail::to_vector(kFaces[static_cast<std::size_t>(f)]);
    c.free_a = {f};
    c.free_b = {0, 1, 2, 3};
    out.push_back(std::move(c));
  }
  for (int f = 0; f < 4; ++f) {
    ContactCandidate c;
    c.kind = ContactKind::VF;
    c.face = f;
    c.group = 4 + f;
    c.direction = -outward_face_normal(b, f);
    c.constrained_b = detail::to_vector(kFaces[static_cast<std::size_t>(f)]);
    c.free_a = {0, 1, 2, 3};
    c.free_b = {f};
    out.push_back(std::move(c));
  }

  double extent = 0.0;
  for (const auto& t : {a, b})
    for (int e = 0; e < 6; ++e) extent = std::max(extent, edge_vector(t, e).norm());

  for (int ea = 0; ea < 6; ++ea) {
    for (int eb = 0; eb < 6; ++eb) {
      auto axis = edge_pair_axis(a, ea, b, eb);
      if (!axis) continue;

      ContactCandidate c;
      c.kind = ContactKind::EE;
      c.edge_a = ea;
      c.edge_b = eb;
      c.group = 8 + 6 * ea + eb;
      const Vector3 ua = edge_vector(a, ea);
      const Vector3 ub = edge_vector(b, eb);
      c.parallel = ub.cross(ua).norm() < kParallelTolerance * ua.norm() * ub.norm();
      c.constrained_a = detail::to_vector(kEdges[static_cast<std::size_t>(ea)]);
      c.constrained_b = detail::to_vector(kEdges[static_cast<std::size_t>(eb)]);
      c.free_a = detail::complement(c.constrained_a);
      c.free_b = detail::complement(c.constrained_b);

      Vector3 n = *axis;
      const auto& edge = kEdges[static_cast<std::size_t>(ea)];
      const Point3 anchor = 0.5 * (a[edge[0]] + a[edge[1]]);
      const double tol = kSideTolerance * extent;
      bool any_pos = false;
      bool any_neg = false;
      for (int v : c.free_a) {
        const double side = n.dot(a[v] - anchor);
        any_pos |= side > tol;
        any_neg |= side < -tol;
      }
      if (any_pos && any_neg) {
        c.undecidable = true;
        c.direction = n;
        out.push_back(c);
        c.direction = -n;
        out.push_back(std::move(c));
        continue;
      }
      c.direction = any_pos ? Vector3(-n) : n;
      out.push_back(std::move(c));
    }
  }
  return out;
}

}  // namespace tetpd
