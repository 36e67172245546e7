// SPDX-License-Identifier: Apache-2.0
//! \file tetpd/io.hpp
//! JSON encoding of tetrahedra and pairs.
//!
//!   Tetrahedron: [[x,y,z], [x,y,z], [x,y,z], [x,y,z]]   (vertex order kept)
//!   TetPair:     {"a": <Tetrahedron>, "b": <Tetrahedron>}
//!   pairs file:  [<TetPair>, ...]
#pragma once

#include "tetpd/geometry.hpp"

#include "json.hpp"

#include <fstream>
#include <string>
#include <vector>

namespace tetpd {

using json = nlohmann::json;

class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline json to_json(const Point3& p) { return json::array({p.x(), p.y(), p.z()}); }

inline json to_json(const Tetrahedron& t) {
  json out = json::array();
  for (const auto& v : t.vertices) out.push_back(to_json(v));
  return out;
}

inline json to_json(const TetPair& pair) { return json{{"a", to_json(pair.a)}, {"b", to_json(pair.b)}}; }

inline Tetrahedron tetrahedron_from_json(const json& j) {
  if (!j.is_array() || j.size() != 4) throw FormatError("tetrahedron must be an array of 4 points");
  Tetrahedron t;
  for (std::size_t i = 0; i < 4; ++i) {
    const auto& p = j[i];
    if (!p.is_array() || p.size() != 3) throw FormatError("point must be an array of 3 numbers");
    for (std::size_t c = 0; c < 3; ++c) {
      if (!p[c].is_number()) throw FormatError("point coordinates must be numbers");
      t[i](static_cast<Eigen::Index>(c)) = p[c].get<double>();
    }
  }
  if (!is_finite(t)) throw FormatError("non-finite coordinate");
  return t;
}

inline TetPair pair_from_json(const json& j) {
  if (!j.is_object() || !j.contains("a") || !j.contains("b"))
    throw FormatError("pair must be an object with keys \"a\" and \"b\"");
  return TetPair{tetrahedron_from_json(j.at("a")), tetrahedron_from_json(j.at("b"))};
}

inline std::vector<TetPair> pairs_from_json(const json& j) {
  if (!j.is_array()) throw FormatError("pairs file must hold a JSON array");
  std::vector<TetPair> out;
  out.reserve(j.size());
  for (const auto& item : j) out.push_back(pair_from_json(item));
  return out;
}

inline std::vector<TetPair> read_pairs(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open " + path);
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw FormatError(path + ": " + e.what());
  }
  return pairs_from_json(j);
}

inline void write_pairs(const std::string& path, const std::vector<TetPair>& pairs) {
  json j = json::array();
  for (const auto& p : pairs) j.push_back(to_json(p));
  std::ofstream out(path);
  if (!out) throw FormatError("cannot write " + path);
  out << j.dump(1) << '\n';
}

}  // namespace tetpd
