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

#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <optional>

#include <CLI11.hpp>

#include "json_io.hpp"

namespace qalg_cli {

namespace {

// Round trips and reconstructions are reported as passing below this.
constexpr double kResidualTolerance = 1e-8;
constexpr double kMixingSlack = 1e-9;

struct Options {
    std::string command;
    std::string kind;
    std::vector<std::string> files;
    std::optional<std::uint64_t> seed;
    std::optional<std::uint64_t> samples;
    std::optional<double> eps_pos;
    std::optional<double> eps_rank;
    std::optional<double> eps_cluster;
    std::string out_file;
    bool bits = false;
    std::vector<std::size_t> dims;
    std::string keep = "first";
    std::string pi_file;
};

struct Report {
    std::string command;
    std::string verdict = "pass";
    json metrics = json::object();
    std::vector<std::string> failures;
    std::optional<std::uint64_t> seed;
    std::optional<json> output;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            verdict = "fail";
            failures.push_back(what);
        }
    }
};

qalg_tolerances tolerances(const Options& o) {
    qalg_tolerances t = qalg_default_tolerances();
    if (o.eps_pos) t.eps_pos = *o.eps_pos;
    if (o.eps_rank) t.eps_rank = *o.eps_rank;
    if (o.eps_cluster) t.eps_cluster = *o.eps_cluster;
    return t;
}

std::uint64_t resolve_seed(const Options& o) {
    if (o.seed) return *o.seed;
    const char* env = std::getenv("QALG_SEED");
    if (env == nullptr || *env == '\0') return 0;
    try {
        std::size_t used = 0;
        const unsigned long long v = std::stoull(env, &used, 10);
        if (used != std::string(env).size()) throw std::invalid_argument(env);
        return v;
    } catch (const std::exception&) {
        throw ParseError(std::string("QALG_SEED is not an unsigned integer: ") + env);
    }
}

Matrix zeros(std::size_t rows, std::size_t cols) {
    qalg_matrix* m = nullptr;
    check(qalg_matrix_create(rows, cols, nullptr, &m));
    return Matrix(m);
}

double frobenius(const qalg_matrix* m) {
    const Matrix z = zeros(qalg_matrix_rows(m), qalg_matrix_cols(m));
    double out = 0.0;
    check(qalg_matrix_distance(m, z.get(), &out));
    return out;
}

double distance(const qalg_matrix* a, const qalg_matrix* b) {
    double out = 0.0;
    check(qalg_matrix_distance(a, b, &out));
    return out;
}

Matrix unit_matrix(std::size_t rows, std::size_t cols, std::size_t i, std::size_t j) {
    std::vector<double> data(2 * rows * cols, 0.0);
    data[2 * (i * cols + j)] = 1.0;
    qalg_matrix* m = nullptr;
    check(qalg_matrix_create(rows, cols, data.data(), &m));
    return Matrix(m);
}

/// Kraus form of the channel; Choi inputs are decomposed (not_cp on failure).
Channel kraus_form(ChannelInput& in, const qalg_tolerances& tol) {
    if (!in.is_choi()) return std::move(in.kraus);
    qalg_channel* ch = nullptr;
    check(qalg_channel_from_choi(in.choi.get(), in.dim_out, in.dim_in, &tol, &ch));
    return Channel(ch);
}

Matrix choi_of(const qalg_channel* ch) {
    qalg_matrix* c = nullptr;
    check(qalg_channel_choi(ch, &c));
    return Matrix(c);
}

double relative_choi_round_trip(const qalg_matrix* choi, std::size_t dim_out, std::size_t dim_in,
                                const qalg_tolerances& tol) {
    qalg_channel* ch = nullptr;
    check(qalg_channel_from_choi(choi, dim_out, dim_in, &tol, &ch));
    const Channel back(ch);
    const Matrix again = choi_of(back.get());
    return distance(choi, again.get()) / std::max(1.0, frobenius(choi));
}

void emit(Report& r, const Options& o, std::ostream& err, json output) {
    if (o.out_file.empty()) {
        r.output = std::move(output);
        return;
    }
    write_json_file(o.out_file, output);
    r.metrics["output_file"] = o.out_file;
    err << "wrote " << o.out_file << '\n';
}

// ---- commands -------------------------------------------------------------

void cmd_check(const Options& o, Report& r) {
    const qalg_tolerances tol = tolerances(o);
    const json in = read_json_file(o.files.at(0));
    r.command = "check " + o.kind;
    if (o.kind == "state" || o.kind == "effect") {
        const Matrix m = matrix_from_json(in);
        if (qalg_matrix_rows(m.get()) != qalg_matrix_cols(m.get())) throw ParseError("matrix must be square");
        if (o.kind == "state") {
            qalg_state_report s{};
            check(qalg_check_state(m.get(), &tol, &s));
            r.metrics["min_eigenvalue"] = s.min_eigenvalue;
            r.metrics["trace_deviation"] = s.trace_deviation;
            r.metrics["hermiticity_residual"] = s.hermiticity_residual;
            r.require(s.valid != 0, "state");
        } else {
            qalg_effect_report e{};
            check(qalg_check_effect(m.get(), &tol, &e));
            r.metrics["min_eigenvalue"] = e.min_eigenvalue;
            r.metrics["max_eigenvalue"] = e.max_eigenvalue;
            r.metrics["hermiticity_residual"] = e.hermiticity_residual;
            r.require(e.valid != 0, "effect");
        }
        return;
    }
    if (o.kind == "povm") {
        const PovmHandle m = povm_from_json(in);
        qalg_povm_report p{};
        check(qalg_povm_check(m.get(), &tol, &p));
        r.metrics["outcomes"] = qalg_povm_size(m.get());
        r.metrics["min_eigenvalue"] = p.min_eigenvalue;
        r.metrics["completeness_residual"] = p.completeness_residual;
        r.require(p.valid != 0, "povm");
        return;
    }
    ChannelInput ch = channel_from_json(in);
    qalg_channel_report c{};
    if (ch.is_choi()) {
        check(qalg_check_choi(ch.choi.get(), ch.dim_out, ch.dim_in, &tol, &c));
    } else {
        check(qalg_channel_check(ch.kraus.get(), &tol, &c));
    }
    r.metrics["cp"] = c.cp != 0;
    r.metrics["tp"] = c.tp != 0;
    r.metrics["unital"] = c.unital != 0;
    r.metrics["min_choi_eigenvalue"] = c.min_choi_eigenvalue;
    r.metrics["tp_residual"] = c.tp_residual;
    r.metrics["unital_residual"] = c.unital_residual;
    r.metrics["hermiticity_residual"] = c.hermiticity_residual;
    r.metrics["kraus_rank"] = c.kraus_rank;
    r.require(c.cp != 0, "cp");
    r.require(c.tp != 0, "tp");
}

void cmd_choi(const Options& o, Report& r, std::ostream& err) {
    const qalg_tolerances tol = tolerances(o);
    ChannelInput in = channel_from_json(read_json_file(o.files.at(0)));
    Matrix choi;
    if (in.is_choi()) {
        choi = std::move(in.choi);
        err << "input is already in Choi form\n";
    } else {
        choi = choi_of(in.kraus.get());
        const double rt = relative_choi_round_trip(choi.get(), in.dim_out, in.dim_in, tol);
        r.metrics["round_trip_residual"] = rt;
        r.require(rt < kResidualTolerance, "round_trip");
    }
    emit(r, o, err, choi_to_json(choi.get(), in.dim_out, in.dim_in));
}

void cmd_kraus(const Options& o, Report& r, std::ostream& err) {
    const qalg_tolerances tol = tolerances(o);
    ChannelInput in = channel_from_json(read_json_file(o.files.at(0)));
    const Matrix choi = in.is_choi() ? std::move(in.choi) : choi_of(in.kraus.get());
    qalg_channel* raw = nullptr;
    check(qalg_channel_from_choi(choi.get(), in.dim_out, in.dim_in, &tol, &raw));
    const Channel ch(raw);
    const Matrix again = choi_of(ch.get());
    const double rt = distance(choi.get(), again.get()) / std::max(1.0, frobenius(choi.get()));
    r.metrics["kraus_count"] = qalg_channel_kraus_count(ch.get());
    r.metrics["round_trip_residual"] = rt;
    r.require(rt < kResidualTolerance, "round_trip");
    emit(r, o, err, kraus_to_json(ch.get()));
}

void cmd_dilate(const Options& o, Report& r, std::ostream& err) {
    const qalg_tolerances tol = tolerances(o);
    ChannelInput in = channel_from_json(read_json_file(o.files.at(0)));
    const Channel ch = kraus_form(in, tol);
    qalg_matrix* raw = nullptr;
    std::size_t dim_env = 0;
    check(qalg_channel_dilate(ch.get(), &raw, &dim_env));
    const Matrix v(raw);
    const std::size_t dim_in = qalg_channel_dim_in(ch.get());
    const std::size_t dim_out = qalg_channel_dim_out(ch.get());

    double iso = 0.0;
    check(qalg_isometry_residual(v.get(), &iso));
    // The dilation must reproduce the channel on every matrix unit |k><l|.
    double action = 0.0;
    for (std::size_t k = 0; k < dim_in; ++k) {
        for (std::size_t l = 0; l < dim_in; ++l) {
            const Matrix e = unit_matrix(dim_in, dim_in, k, l);
            qalg_matrix* a = nullptr;
            qalg_matrix* b = nullptr;
            check(qalg_dilation_apply(v.get(), dim_out, dim_env, e.get(), &a));
            const Matrix via_v(a);
            check(qalg_channel_apply(ch.get(), e.get(), &b));
            const Matrix via_kraus(b);
            action = std::max(action, distance(via_v.get(), via_kraus.get()));
        }
    }
    r.metrics["dim_env"] = dim_env;
    r.metrics["isometry_residual"] = iso;
    r.metrics["action_residual"] = action;
    r.require(iso < kResidualTolerance, "isometry");
    r.require(action < kResidualTolerance, "action");
    emit(r, o, err,
         {{"v", matrix_to_json(v.get())}, {"dim_in", dim_in}, {"dim_out", dim_out}, {"dim_env", dim_env}});
}

void cmd_ptrace(const Options& o, Report& r, std::ostream& err) {
    if (o.dims.size() != 2) throw ParseError("ptrace needs --dims A,B");
    const Matrix z = matrix_from_json(read_json_file(o.files.at(0)));
    const bool keep_second = o.keep == "second";
    qalg_matrix* raw = nullptr;
    check(qalg_partial_trace(z.get(), o.dims[0], o.dims[1], keep_second ? 1 : 0, &raw));
    const Matrix reduced(raw);
    double before = 0.0;
    double after = 0.0;
    double before_im = 0.0;
    double after_im = 0.0;
    check(qalg_matrix_trace(z.get(), &before, &before_im));
    check(qalg_matrix_trace(reduced.get(), &after, &after_im));
    const double dev = std::hypot(before - after, before_im - after_im);
    r.metrics["keep"] = o.keep;
    r.metrics["trace_deviation"] = dev;
    r.require(dev < kResidualTolerance * std::max(1.0, std::hypot(before, before_im)), "trace");
    emit(r, o, err, matrix_to_json(reduced.get()));
}

void cmd_bloch(const Options& o, Report& r, std::ostream& err) {
    const qalg_tolerances tol = tolerances(o);
    const json in = read_json_file(o.files.at(0));
    if (in.contains("r")) {
        const json& v = in.at("r");
        if (!v.is_array() || v.size() != 3) throw ParseError("\"r\" must have three components");
        double b[3];
        for (int i = 0; i < 3; ++i) {
            if (!v[i].is_number()) throw ParseError("\"r\" components must be numbers");
            b[i] = v[i].get<double>();
        }
        qalg_matrix* raw = nullptr;
        check(qalg_bloch_to_density(b, &raw));
        const Matrix rho(raw);
        r.metrics["norm"] = std::sqrt(b[0] * b[0] + b[1] * b[1] + b[2] * b[2]);
        emit(r, o, err, matrix_to_json(rho.get()));
        return;
    }
    const Matrix rho = matrix_from_json(in);
    double b[3];
    check(qalg_density_to_bloch(rho.get(), &tol, b));
    qalg_matrix* raw = nullptr;
    check(qalg_bloch_to_density(b, &raw));
    const Matrix back(raw);
    const double rt = distance(rho.get(), back.get());
    r.metrics["norm"] = std::sqrt(b[0] * b[0] + b[1] * b[1] + b[2] * b[2]);
    r.metrics["round_trip_residual"] = rt;
    r.require(rt < kResidualTolerance, "round_trip");
    emit(r, o, err, {{"r", {b[0], b[1], b[2]}}});
}

void cmd_entropy(const Options& o, Report& r, std::ostream& err) {
    const qalg_tolerances tol = tolerances(o);
    const json in = read_json_file(o.files.at(0));
    const double unit = o.bits ? std::numbers::ln2 : 1.0;
    r.metrics["unit"] = o.bits ? "bits" : "nats";
    Matrix rho;
    if (in.contains("items")) {
        const Ensemble e = ensemble_from_json(in);
        std::vector<const qalg_matrix*> states;
        for (const auto& s : e.states) states.push_back(s.get());
        qalg_matrix* raw = nullptr;
        check(qalg_density_from_ensemble(states.size(), e.weights.data(), states.data(), &raw));
        rho = Matrix(raw);
        double h = 0.0;
        check(qalg_shannon_entropy(e.weights.data(), e.weights.size(), &h));
        double s = 0.0;
        check(qalg_entropy(rho.get(), &tol, &s));
        r.metrics["shannon_entropy"] = h / unit;
        r.metrics["mixing_slack"] = (h - s) / unit;
        r.require(h - s >= -kMixingSlack, "mixing_inequality");
        err << "entropy of the state induced by the ensemble\n";
    } else {
        rho = matrix_from_json(in);
    }
    double s = 0.0;
    check(qalg_entropy(rho.get(), &tol, &s));
    int pure = 0;
    check(qalg_is_pure(rho.get(), &tol, &pure));
    r.metrics["entropy"] = s / unit;
    r.metrics["pure"] = pure != 0;
}

void cmd_decompose(const Options& o, Report& r, std::ostream& err) {
    const qalg_tolerances tol = tolerances(o);
    const std::uint64_t seed = resolve_seed(o);
    r.seed = seed;
    const Algebra a = algebra_from_json(read_json_file(o.files.at(0)), tol);
    qalg_structure* raw = nullptr;
    check(qalg_structure_decompose(a.get(), seed, &tol, &raw));
    const Structure s(raw);
    json out = structure_to_json(s.get());
    json signature = json::array();
    for (const auto& b : out.at("blocks")) signature.push_back({b.at("m"), b.at("n")});
    r.metrics["algebra_dim"] = qalg_algebra_dim(a.get());
    r.metrics["blocks"] = std::move(signature);
    r.metrics["d0"] = qalg_structure_d0(s.get());
    r.metrics["residual"] = qalg_structure_residual(s.get());
    r.require(qalg_structure_residual(s.get()) < kResidualTolerance, "residual");
    emit(r, o, err, std::move(out));
}

void cmd_canonical_state(const Options& o, Report& r, std::ostream& err) {
    if (o.files.size() != 2) throw ParseError("canonical-state needs an algebra file and a state file");
    const qalg_tolerances tol = tolerances(o);
    const std::uint64_t seed = resolve_seed(o);
    r.seed = seed;
    const Algebra a = algebra_from_json(read_json_file(o.files[0]), tol);
    const Matrix state = matrix_from_json(read_json_file(o.files[1]));
    qalg_hybrid* raw = nullptr;
    check(qalg_canonical_state(a.get(), state.get(), seed, &tol, &raw));
    const Hybrid h(raw);

    json blocks = json::array();
    json probabilities = json::array();
    for (std::size_t i = 0; i < qalg_hybrid_block_count(h.get()); ++i) {
        double p = 0.0;
        std::size_t m = 0;
        qalg_matrix* rho = nullptr;
        check(qalg_hybrid_block(h.get(), i, &p, &m, &rho));
        const Matrix rho_i(rho);
        probabilities.push_back(p);
        blocks.push_back({{"p", p}, {"m", m}, {"n", qalg_matrix_rows(rho_i.get())}, {"rho", matrix_to_json(rho_i.get())}});
    }
    const qalg_structure* s = qalg_hybrid_structure(h.get());
    qalg_matrix* u = nullptr;
    check(qalg_structure_unitary(s, &u));
    const Matrix unitary(u);
    double functional = 0.0;
    check(qalg_hybrid_functional_residual(h.get(), a.get(), state.get(), &functional));
    r.metrics["probabilities"] = std::move(probabilities);
    r.metrics["functional_residual"] = functional;
    r.metrics["structure_residual"] = qalg_structure_residual(s);
    r.require(functional < kResidualTolerance, "functional");
    r.require(qalg_structure_residual(s) < kResidualTolerance, "structure");
    emit(r, o, err, {{"blocks", std::move(blocks)}, {"u", matrix_to_json(unitary.get())}, {"d0", qalg_structure_d0(s)}});
}

void cmd_measure(const Options& o, Report& r, std::ostream&) {
    if (o.files.size() != 2) throw ParseError("measure needs a state file and a POVM file");
    const qalg_tolerances tol = tolerances(o);
    const Matrix rho = matrix_from_json(read_json_file(o.files[0]));
    PovmHandle m = povm_from_json(read_json_file(o.files[1]));
    if (qalg_povm_size(m.get()) > 0 && qalg_matrix_rows(rho.get()) != qalg_matrix_cols(rho.get())) {
        throw ParseError("state must be square");
    }
    if (!o.pi_file.empty()) {
        std::size_t outputs = 0;
        std::size_t inputs = 0;
        const auto pi = stochastic_from_json(read_json_file(o.pi_file), outputs, inputs);
        if (inputs != qalg_povm_size(m.get())) throw ParseError("\"pi\" must have one column per outcome");
        qalg_povm* coarse = nullptr;
        check(qalg_povm_coarse_grain(m.get(), pi.data(), outputs, &coarse));
        m = PovmHandle(coarse);
    }
    const std::size_t k = qalg_povm_size(m.get());
    std::vector<double> p(k);
    check(qalg_measure(rho.get(), m.get(), &tol, p.data()));
    json labels = json::array();
    for (std::size_t i = 0; i < k; ++i) labels.push_back(qalg_povm_label(m.get(), i));
    r.metrics["outcomes"] = std::move(labels);
    r.metrics["probabilities"] = p;
    if (o.samples) {
        const std::uint64_t seed = resolve_seed(o);
        r.seed = seed;
        std::vector<std::uint64_t> counts(k, 0);
        check(qalg_sample(rho.get(), m.get(), *o.samples, seed, &tol, counts.data()));
        r.metrics["samples"] = *o.samples;
        r.metrics["counts"] = counts;
    }
}

json to_json(const Report& r) {
    json j = {{"command", r.command}, {"verdict", r.verdict}, {"metrics", r.metrics}};
    if (!r.failures.empty()) j["failures"] = r.failures;
    if (r.seed) {
        j["seed"] = *r.seed;
        j["rng"] = qalg_rng_algorithm();
    }
    if (r.output) j["output"] = *r.output;
    return j;
}

void configure(CLI::App& app, Options& o) {
    app.require_subcommand(1);
    app.fallthrough();
    app.add_option("--seed", o.seed, "Seed for randomized steps (default: $QALG_SEED, else 0)");
    app.add_option("--samples", o.samples, "Number of simulated measurement shots");
    app.add_option("--eps-pos", o.eps_pos, "Positivity tolerance")->check(CLI::PositiveNumber);
    app.add_option("--eps-rank", o.eps_rank, "Rank tolerance")->check(CLI::PositiveNumber);
    app.add_option("--eps-cluster", o.eps_cluster, "Eigenvalue clustering tolerance")->check(CLI::PositiveNumber);
    app.add_option("--out", o.out_file, "Write the resulting object to FILE");
    app.add_flag("--bits", o.bits, "Report entropies in bits");

    auto* chk = app.add_subcommand("check", "Validate a state, effect, POVM or channel");
    chk->add_option("kind", o.kind)->required()->check(CLI::IsMember({"state", "effect", "povm", "channel"}));
    chk->add_option("file", o.files)->required()->expected(1);

    const std::vector<std::pair<const char*, const char*>> single = {
        {"choi", "Choi matrix of a channel"},
        {"kraus", "Kraus operators of a channel"},
        {"dilate", "Minimal Stinespring dilation of a channel"},
        {"bloch", "Qubit density matrix <-> Bloch vector"},
        {"entropy", "von Neumann entropy of a state or ensemble"},
        {"decompose", "Block structure of the *-algebra generated by matrices"},
    };
    for (const auto& [name, help] : single) {
        app.add_subcommand(name, help)->add_option("file", o.files)->required()->expected(1);
    }
    auto* pt = app.add_subcommand("ptrace", "Partial trace of a bipartite operator");
    pt->add_option("file", o.files)->required()->expected(1);
    pt->add_option("--dims", o.dims, "Factor dimensions A,B")->delimiter(',')->expected(2)->required();
    pt->add_option("--keep", o.keep, "Factor to keep")->check(CLI::IsMember({"first", "second"}));

    app.add_subcommand("canonical-state", "Hybrid canonical form of a state on an algebra")
        ->add_option("files", o.files, "ALGEBRA STATE")
        ->required()
        ->expected(2);
    auto* ms = app.add_subcommand("measure", "Born probabilities and sampled counts");
    ms->add_option("files", o.files, "STATE POVM")->required()->expected(2);
    ms->add_option("--pi", o.pi_file, "Coarse-grain the POVM with a stochastic matrix");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    Options o;
    CLI::App app("Finite-dimensional quantum states, channels and matrix algebras", "qalg");
    configure(app, o);
    Report r;
    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        err << app.help();
        return kPass;
    } catch (const CLI::ParseError& e) {
        err << e.what() << '\n';
        out << json{{"command", args.empty() ? "" : args.front()},
                    {"verdict", "fail"},
                    {"error", {{"status", "parse_error"}, {"message", e.what()}}}}
                   .dump(2)
            << '\n';
        return kParseError;
    }
    o.command = app.get_subcommands().front()->get_name();
    r.command = o.command;

    int code = kPass;
    json error;
    try {
        if (o.command == "check") {
            cmd_check(o, r);
        } else if (o.command == "choi") {
            cmd_choi(o, r, err);
        } else if (o.command == "kraus") {
            cmd_kraus(o, r, err);
        } else if (o.command == "dilate") {
            cmd_dilate(o, r, err);
        } else if (o.command == "ptrace") {
            cmd_ptrace(o, r, err);
        } else if (o.command == "bloch") {
            cmd_bloch(o, r, err);
        } else if (o.command == "entropy") {
            cmd_entropy(o, r, err);
        } else if (o.command == "decompose") {
            cmd_decompose(o, r, err);
        } else if (o.command == "canonical-state") {
            cmd_canonical_state(o, r, err);
        } else {
            cmd_measure(o, r, err);
        }
        if (r.verdict != "pass") code = kFail;
    } catch (const ParseError& e) {
        error = {{"status", "parse_error"}, {"message", e.what()}};
        code = kParseError;
    } catch (const ApiError& e) {
        error = {{"status", qalg_status_name(e.status())}, {"message", e.what()}};
        const bool shape = e.status() == QALG_ERR_DIMENSION || e.status() == QALG_ERR_NULL_ARGUMENT;
        code = shape ? kParseError : kFail;
    }
    json report = to_json(r);
    if (!error.is_null()) {
        report["verdict"] = "fail";
        report["error"] = error;
        report.erase("output");
        err << "error: " << error.at("message").get<std::string>() << '\n';
    }
    out << report.dump(2) << '\n';
    return code;
}

}  // namespace qalg_cli
