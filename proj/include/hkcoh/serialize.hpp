#pragma once

// JSON encodings. Rationals are strings "p/q" (or "p"); plain JSON integers
// are accepted on input.

#include <string>
#include <vector>

#include <json.hpp>

#include "hkcoh/exactlin.hpp"
#include "hkcoh/hodge.hpp"
#include "hkcoh/quadspace.hpp"

namespace hkcoh {

using Json = nlohmann::json;

inline Json to_json(const Rational& r) { return to_string(r); }

inline Rational rational_from_json(const Json& j) {
  if (j.is_number_integer()) return Rational(std::to_string(j.get<long long>()));
  if (j.is_string()) return parse_rational(j.get<std::string>());
  throw std::invalid_argument("expected a rational as \"p/q\" string or integer, got " + j.dump());
}

inline Json to_json(const Vector& v) {
  Json a = Json::array();
  for (const auto& x : v) a.push_back(to_json(x));
  return a;
}

inline Vector vector_from_json(const Json& j) {
  if (!j.is_array()) throw std::invalid_argument("expected an array of rationals");
  Vector v;
  for (const auto& x : j) v.push_back(rational_from_json(x));
  return v;
}

inline Json to_json(const Matrix& m) {
  Json a = Json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) a.push_back(to_json(m.row(i)));
  return a;
}

inline Matrix matrix_from_json(const Json& j) {
  if (!j.is_array() || j.empty()) throw std::invalid_argument("expected a non-empty array of rows");
  std::vector<Vector> rows;
  for (const auto& r : j) rows.push_back(vector_from_json(r));
  Matrix m(rows.size(), rows.front().size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != m.cols()) throw std::invalid_argument("ragged matrix rows");
    for (std::size_t k = 0; k < m.cols(); ++k) m(i, k) = rows[i][k];
  }
  return m;
}

inline Json to_json(const Signature& s) { return Json::array({s.plus, s.minus}); }

inline Json to_json(const HodgePlane& p) { return Json{{"x", to_json(p.x)}, {"y", to_json(p.y)}}; }

inline HodgePlane plane_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("x") || !j.contains("y")) throw std::invalid_argument("plane needs \"x\" and \"y\"");
  return {vector_from_json(j.at("x")), vector_from_json(j.at("y"))};
}

}  // namespace hkcoh
