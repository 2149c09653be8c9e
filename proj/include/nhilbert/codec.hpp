// SPDX-License-Identifier: Apache-2.0

#ifndef NHILBERT_CODEC_HPP_
#define NHILBERT_CODEC_HPP_

#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "nhilbert/kernel.hpp"

namespace nhilbert {

// Scalars are [re, im] pairs; vectors are arrays of scalars; matrices are
// arrays of rows.
nlohmann::json to_json(Scalar s);
nlohmann::json to_json(const Vector& v);
nlohmann::json to_json(std::span<const Vector> vs);
nlohmann::json to_json(const Matrix& m);

// These throw InvalidSpec on malformed input.
Scalar scalar_from_json(const nlohmann::json& j);
Vector vector_from_json(const nlohmann::json& j);
std::vector<Vector> vectors_from_json(const nlohmann::json& j);
Matrix matrix_from_json(const nlohmann::json& j);

// Serializes with every floating-point number printed as %.17g, so doubles
// round-trip exactly. Non-finite numbers become null.
std::string dump_json(const nlohmann::json& j);
std::string dump_json(const nlohmann::ordered_json& j);

}  // namespace nhilbert

#endif  // NHILBERT_CODEC_HPP_
