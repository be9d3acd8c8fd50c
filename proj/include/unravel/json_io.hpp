// Copyright 2026 The Unravel Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <string>

#include <json.hpp>

#include "unravel/hilbert.hpp"

namespace unravel {

using json = nlohmann::json;

// Complex numbers are always [re, im] pairs; matrices are arrays of rows.

json complex_to_json(cplx z);
cplx complex_from_json(const json& j, const std::string& field);

json matrix_to_json(const Eigen::MatrixXcd& m);
/// Throws std::invalid_argument naming `field` on ragged or malformed input.
Eigen::MatrixXcd matrix_from_json(const json& j, const std::string& field);

json vector_to_json(const Eigen::VectorXcd& v);
Eigen::VectorXcd vector_from_json(const json& j, const std::string& field);

/// 64-bit FNV-1a of the compact dump of `j`, as 16 lowercase hex digits.
/// nlohmann::json objects are key-sorted, so equal content hashes equally.
std::string config_hash(const json& j);
std::uint64_t fnv1a64(const std::string& bytes);

}  // namespace unravel
