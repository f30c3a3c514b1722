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

#include "json_io.hpp"

#include <fstream>
#include <sstream>

namespace qalg_cli {

void check(qalg_status status) {
    if (status != QALG_OK) throw ApiError(status, qalg_last_error());
}

json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path);
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw ParseError(path + ": " + e.what());
    }
}

void write_json_file(const std::string& path, const json& j) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot write " + path);
    out << j.dump(2) << '\n';
    if (!out) throw ParseError("write failed for " + path);
}

std::size_t require_size(const json& j, const char* key) {
    if (!j.is_object() || !j.contains(key) || !j.at(key).is_number_unsigned()) {
        throw ParseError(std::string("expected a non-negative integer \"") + key + "\"");
    }
    return j.at(key).get<std::size_t>();
}

namespace {

double number(const json& j) {
    if (!j.is_number()) throw ParseError("expected a number");
    return j.get<double>();
}

void read_entry(const json& e, double* out) {
    if (e.is_number()) {
        out[0] = e.get<double>();
        out[1] = 0.0;
        return;
    }
    if (!e.is_array() || e.size() != 2) throw ParseError("matrix entries must be [re, im] pairs");
    out[0] = number(e[0]);
    out[1] = number(e[1]);
}

Matrix make_matrix(std::size_t rows, std::size_t cols, const std::vector<double>& data) {
    qalg_matrix* m = nullptr;
    check(qalg_matrix_create(rows, cols, data.data(), &m));
    return Matrix(m);
}

std::vector<Matrix> matrix_list(const json& j, const char* key) {
    if (!j.contains(key) || !j.at(key).is_array()) {
        throw ParseError(std::string("expected an array \"") + key + "\"");
    }
    std::vector<Matrix> out;
    for (const auto& e : j.at(key)) out.push_back(matrix_from_json(e));
    return out;
}

std::vector<const qalg_matrix*> raw(const std::vector<Matrix>& mats) {
    std::vector<const qalg_matrix*> out;
    for (const auto& m : mats) out.push_back(m.get());
    return out;
}

}  // namespace

Matrix matrix_from_json(const json& j) {
    const std::size_t rows = require_size(j, "rows");
    const std::size_t cols = require_size(j, "cols");
    const json& data = j.contains("data") ? j.at("data") : json();
    if (!data.is_array() || data.size() != rows) throw ParseError("\"data\" must hold one array per row");
    std::vector<double> flat(2 * rows * cols);
    for (std::size_t i = 0; i < rows; ++i) {
        if (!data[i].is_array() || data[i].size() != cols) {
            throw ParseError("row " + std::to_string(i) + " does not have " + std::to_string(cols) + " entries");
        }
        for (std::size_t c = 0; c < cols; ++c) read_entry(data[i][c], &flat[2 * (i * cols + c)]);
    }
    return make_matrix(rows, cols, flat);
}

json matrix_to_json(const qalg_matrix* m) {
    const std::size_t rows = qalg_matrix_rows(m);
    const std::size_t cols = qalg_matrix_cols(m);
    std::vector<double> flat(2 * rows * cols);
    check(qalg_matrix_read(m, flat.data()));
    json data = json::array();
    for (std::size_t i = 0; i < rows; ++i) {
        json row = json::array();
        for (std::size_t c = 0; c < cols; ++c) {
            row.push_back({flat[2 * (i * cols + c)], flat[2 * (i * cols + c) + 1]});
        }
        data.push_back(std::move(row));
    }
    return {{"rows", rows}, {"cols", cols}, {"data", std::move(data)}};
}

Matrix vector_from_json(const json& j) {
    if (j.is_object()) {
        Matrix m = matrix_from_json(j);
        if (qalg_matrix_cols(m.get()) != 1) throw ParseError("state vectors must have one column");
        return m;
    }
    if (!j.is_array()) throw ParseError("expected a state vector");
    std::vector<double> flat(2 * j.size());
    for (std::size_t i = 0; i < j.size(); ++i) read_entry(j[i], &flat[2 * i]);
    return make_matrix(j.size(), 1, flat);
}

Ensemble ensemble_from_json(const json& j) {
    if (!j.contains("items") || !j.at("items").is_array()) throw ParseError("expected an array \"items\"");
    Ensemble out;
    for (const auto& item : j.at("items")) {
        if (!item.is_object() || !item.contains("p") || !item.contains("psi")) {
            throw ParseError("ensemble items need \"p\" and \"psi\"");
        }
        out.weights.push_back(number(item.at("p")));
        out.states.push_back(vector_from_json(item.at("psi")));
    }
    return out;
}

ChannelInput channel_from_json(const json& j) {
    ChannelInput out;
    if (j.contains("choi")) {
        const json& dims = j.contains("dims") ? j.at("dims") : json();
        if (!dims.is_array() || dims.size() != 2 || !dims[0].is_number_unsigned() || !dims[1].is_number_unsigned()) {
            throw ParseError("Choi channels need \"dims\": [dim_out, dim_in]");
        }
        out.dim_out = dims[0].get<std::size_t>();
        out.dim_in = dims[1].get<std::size_t>();
        out.choi = matrix_from_json(j.at("choi"));
        const std::size_t n = out.dim_out * out.dim_in;
        if (qalg_matrix_rows(out.choi.get()) != n || qalg_matrix_cols(out.choi.get()) != n) {
            throw ParseError("Choi matrix must be (dim_out * dim_in) square");
        }
        return out;
    }
    if (!j.contains("kraus")) throw ParseError("channel needs \"kraus\" or \"choi\"");
    out.dim_in = require_size(j, "dim_in");
    out.dim_out = require_size(j, "dim_out");
    const auto kraus = matrix_list(j, "kraus");
    for (const auto& k : kraus) {
        if (qalg_matrix_rows(k.get()) != out.dim_out || qalg_matrix_cols(k.get()) != out.dim_in) {
            throw ParseError("Kraus operators must be dim_out x dim_in");
        }
    }
    const auto ptrs = raw(kraus);
    qalg_channel* ch = nullptr;
    check(qalg_channel_from_kraus(out.dim_in, out.dim_out, ptrs.size(), ptrs.data(), &ch));
    out.kraus = Channel(ch);
    return out;
}

json kraus_to_json(const qalg_channel* ch) {
    json kraus = json::array();
    for (std::size_t i = 0; i < qalg_channel_kraus_count(ch); ++i) {
        qalg_matrix* k = nullptr;
        check(qalg_channel_kraus(ch, i, &k));
        kraus.push_back(matrix_to_json(Matrix(k).get()));
    }
    return {{"dim_in", qalg_channel_dim_in(ch)}, {"dim_out", qalg_channel_dim_out(ch)}, {"kraus", std::move(kraus)}};
}

json choi_to_json(const qalg_matrix* choi, std::size_t dim_out, std::size_t dim_in) {
    return {{"choi", matrix_to_json(choi)}, {"dims", {dim_out, dim_in}}};
}

PovmHandle povm_from_json(const json& j) {
    const auto effects = matrix_list(j, "effects");
    std::vector<std::string> labels;
    if (j.contains("outcomes")) {
        const json& o = j.at("outcomes");
        if (!o.is_array() || o.size() != effects.size()) {
            throw ParseError("\"outcomes\" must label every effect");
        }
        for (const auto& l : o) labels.push_back(l.is_string() ? l.get<std::string>() : l.dump());
    } else {
        for (std::size_t i = 0; i < effects.size(); ++i) labels.push_back(std::to_string(i));
    }
    std::vector<const char*> label_ptrs;
    for (const auto& l : labels) label_ptrs.push_back(l.c_str());
    const auto ptrs = raw(effects);
    for (const auto* e : ptrs) {
        if (qalg_matrix_rows(e) != qalg_matrix_cols(e) || qalg_matrix_rows(e) != qalg_matrix_rows(ptrs.front())) {
            throw ParseError("POVM effects must be square of a common dimension");
        }
    }
    qalg_povm* m = nullptr;
    check(qalg_povm_create(ptrs.size(), label_ptrs.data(), ptrs.data(), &m));
    return PovmHandle(m);
}

json povm_to_json(const qalg_povm* m) {
    json outcomes = json::array();
    json effects = json::array();
    for (std::size_t i = 0; i < qalg_povm_size(m); ++i) {
        outcomes.push_back(qalg_povm_label(m, i));
        qalg_matrix* e = nullptr;
        check(qalg_povm_effect(m, i, &e));
        effects.push_back(matrix_to_json(Matrix(e).get()));
    }
    return {{"outcomes", std::move(outcomes)}, {"effects", std::move(effects)}};
}

std::vector<double> stochastic_from_json(const json& j, std::size_t& outputs, std::size_t& inputs) {
    if (!j.contains("pi") || !j.at("pi").is_array() || j.at("pi").empty()) {
        throw ParseError("expected a nonempty array \"pi\"");
    }
    const json& rows = j.at("pi");
    outputs = rows.size();
    inputs = rows[0].is_array() ? rows[0].size() : 0;
    std::vector<double> out;
    for (const auto& r : rows) {
        if (!r.is_array() || r.size() != inputs) throw ParseError("\"pi\" rows must have equal length");
        for (const auto& v : r) out.push_back(number(v));
    }
    return out;
}

Algebra algebra_from_json(const json& j, const qalg_tolerances& tol) {
    const std::size_t d = require_size(j, "dim");
    const auto gens = matrix_list(j, "generators");
    if (gens.empty()) throw ParseError("algebra needs at least one generator");
    for (const auto& g : gens) {
        if (qalg_matrix_rows(g.get()) != d || qalg_matrix_cols(g.get()) != d) {
            throw ParseError("generators must be dim x dim");
        }
    }
    const auto ptrs = raw(gens);
    qalg_algebra* a = nullptr;
    check(qalg_algebra_generate(ptrs.size(), ptrs.data(), &tol, &a));
    return Algebra(a);
}

json structure_to_json(const qalg_structure* s) {
    qalg_matrix* u = nullptr;
    check(qalg_structure_unitary(s, &u));
    json blocks = json::array();
    for (std::size_t i = 0; i < qalg_structure_block_count(s); ++i) {
        std::size_t m = 0;
        std::size_t n = 0;
        check(qalg_structure_block(s, i, &m, &n));
        blocks.push_back({{"m", m}, {"n", n}});
    }
    return {{"u", matrix_to_json(Matrix(u).get())},
            {"blocks", std::move(blocks)},
            {"d0", qalg_structure_d0(s)},
            {"residual", qalg_structure_residual(s)}};
}

}  // namespace qalg_cli
