// SPDX-License-Identifier: Apache-2.0

#include "nhilbert/codec.hpp"

#include <cmath>
#include <cstdio>

#include "nhilbert/errors.hpp"

namespace nhilbert {

namespace {

template <typename Json>
void write(const Json& j, std::string& out) {
  switch (j.type()) {
    case nlohmann::detail::value_t::object: {
      out += '{';
      bool first = true;
      for (const auto& [key, value] : j.items()) {
        if (!first) out += ',';
        first = false;
        out += Json(key).dump();
        out += ':';
        write(value, out);
      }
      out += '}';
      break;
    }
    case nlohmann::detail::value_t::array: {
      out += '[';
      bool first = true;
      for (const auto& value : j) {
        if (!first) out += ',';
        first = false;
        write(value, out);
      }
      out += ']';
      break;
    }
    case nlohmann::detail::value_t::number_float: {
      const double v = j.template get<double>();
      if (!std::isfinite(v)) {
        out += "null";
        break;
      }
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.17g", v);
      out += buf;
      break;
    }
    default:
      out += j.dump();
  }
}

}  // namespace

nlohmann::json to_json(Scalar s) { return nlohmann::json::array({s.real(), s.imag()}); }

nlohmann::json to_json(const Vector& v) {
  auto out = nlohmann::json::array();
  for (Index i = 0; i < v.size(); ++i) out.push_back(to_json(v(i)));
  return out;
}

nlohmann::json to_json(std::span<const Vector> vs) {
  auto out = nlohmann::json::array();
  for (const auto& v : vs) out.push_back(to_json(v));
  return out;
}

nlohmann::json to_json(const Matrix& m) {
  auto out = nlohmann::json::array();
  for (Index i = 0; i < m.rows(); ++i) out.push_back(to_json(Vector(m.row(i).transpose())));
  return out;
}

Scalar scalar_from_json(const nlohmann::json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    throw Error(ErrorKind::InvalidSpec, "expected [re, im], got " + j.dump());
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

Vector vector_from_json(const nlohmann::json& j) {
  if (!j.is_array() || j.empty()) throw Error(ErrorKind::InvalidSpec, "expected a non-empty vector");
  Vector v(static_cast<Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Index>(i)) = scalar_from_json(j[i]);
  if (!v.allFinite()) throw Error(ErrorKind::InvalidSpec, "non-finite vector entry");
  return v;
}

std::vector<Vector> vectors_from_json(const nlohmann::json& j) {
  if (!j.is_array()) throw Error(ErrorKind::InvalidSpec, "expected a list of vectors");
  std::vector<Vector> out;
  out.reserve(j.size());
  for (const auto& item : j) out.push_back(vector_from_json(item));
  return out;
}

Matrix matrix_from_json(const nlohmann::json& j) {
  const std::vector<Vector> rows = vectors_from_json(j);
  if (rows.empty()) throw Error(ErrorKind::InvalidSpec, "expected a non-empty matrix");
  const Index cols = rows.front().size();
  Matrix m(static_cast<Index>(rows.size()), cols);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != cols) throw Error(ErrorKind::InvalidSpec, "ragged matrix rows");
    m.row(static_cast<Index>(i)) = rows[i].transpose();
  }
  return m;
}

std::string dump_json(const nlohmann::json& j) {
  std::string out;
  write(j, out);
  return out;
}

std::string dump_json(const nlohmann::ordered_json& j) {
  std::string out;
  write(j, out);
  return out;
}

}  // namespace nhilbert
