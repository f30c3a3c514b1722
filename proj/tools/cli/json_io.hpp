// Copyright 2026 The qalg Authors
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
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "qalg/qalg.h"

namespace qalg_cli {

using json = nlohmann::json;

struct MatrixDeleter {
    void operator()(qalg_matrix* p) const { qalg_matrix_free(p); }
};
struct ChannelDeleter {
    void operator()(qalg_channel* p) const { qalg_channel_free(p); }
};
struct PovmDeleter {
    void operator()(qalg_povm* p) const { qalg_povm_free(p); }
};
struct AlgebraDeleter {
    void operator()(qalg_algebra* p) const { qalg_algebra_free(p); }
};
struct StructureDeleter {
    void operator()(qalg_structure* p) const { qalg_structure_free(p); }
};
struct HybridDeleter {
    void operator()(qalg_hybrid* p) const { qalg_hybrid_free(p); }
};

using Matrix = std::unique_ptr<qalg_matrix, MatrixDeleter>;
using Channel = std::unique_ptr<qalg_channel, ChannelDeleter>;
using PovmHandle = std::unique_ptr<qalg_povm, PovmDeleter>;
using Algebra = std::unique_ptr<qalg_algebra, AlgebraDeleter>;
using Structure = std::unique_ptr<qalg_structure, StructureDeleter>;
using Hybrid = std::unique_ptr<qalg_hybrid, HybridDeleter>;

/// Malformed input: unreadable file, invalid JSON, wrong keys or shapes.
class ParseError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// A failing C API call.
class ApiError : public std::runtime_error {
  public:
    ApiError(qalg_status status, const std::string& message)
        : std::runtime_error(message), status_(status) {}
    qalg_status status() const { return status_; }

  private:
    qalg_status status_;
};

/// Throws ApiError carrying qalg_last_error() unless status is QALG_OK.
void check(qalg_status status);

json read_json_file(const std::string& path);
void write_json_file(const std::string& path, const json& j);

Matrix matrix_from_json(const json& j);
json matrix_to_json(const qalg_matrix* m);
/// Accepts a matrix object with one column or a bare list of [re, im] pairs.
Matrix vector_from_json(const json& j);

struct Ensemble {
    std::vector<double> weights;
    std::vector<Matrix> states;
};
Ensemble ensemble_from_json(const json& j);

/// Either Kraus form or a Choi matrix, as found in the file.
struct ChannelInput {
    Channel kraus;
    Matrix choi;
    std::size_t dim_in = 0;
    std::size_t dim_out = 0;

    bool is_choi() const { return choi != nullptr; }
};
ChannelInput channel_from_json(const json& j);
json kraus_to_json(const qalg_channel* ch);
json choi_to_json(const qalg_matrix* choi, std::size_t dim_out, std::size_t dim_in);

PovmHandle povm_from_json(const json& j);
json povm_to_json(const qalg_povm* m);

/// Row-major outputs x inputs matrix from {"pi": [[row], ...]}.
std::vector<double> stochastic_from_json(const json& j, std::size_t& outputs, std::size_t& inputs);

Algebra algebra_from_json(const json& j, const qalg_tolerances& tol);
json structure_to_json(const qalg_structure* s);

std::size_t require_size(const json& j, const char* key);

}  // namespace qalg_cli
