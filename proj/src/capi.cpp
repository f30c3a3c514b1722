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

#include "qalg/qalg.h"

#include <algorithm>
#include <new>
#include <string>
#include <utility>
#include <vector>

#include "qalg/algebra.hpp"
#include "qalg/channels.hpp"
#include "qalg/quantum.hpp"
#include "qalg/random.hpp"

struct qalg_matrix {
    qalg::ComplexMatrix m;
};

struct qalg_channel {
    qalg::KrausChannel ch;
};

struct qalg_povm {
    qalg::Povm povm;
};

struct qalg_algebra {
    qalg::MatrixAlgebra a;
};

struct qalg_structure {
    qalg::AlgebraStructure s;
};

struct qalg_hybrid {
    qalg::HybridState h;
    qalg_structure structure;
};

namespace {

thread_local std::string last_error;

struct NullArgument {};

template <typename T>
const T& deref(const T* p) {
    if (p == nullptr) throw NullArgument{};
    return *p;
}

template <typename T>
void require(T* p) {
    if (p == nullptr) throw NullArgument{};
}

qalg::Tolerances tolerances(const qalg_tolerances* t) {
    if (t == nullptr) return {};
    qalg::Tolerances out{t->eps_herm, t->eps_pos, t->eps_rank, t->eps_cluster};
    out.validate();
    return out;
}

qalg_matrix* wrap(qalg::ComplexMatrix m) { return new qalg_matrix{std::move(m)}; }

template <typename F>
qalg_status guard(F&& body) {
    try {
        body();
        return QALG_OK;
    } catch (const qalg::Error& e) {
        last_error = e.what();
        return static_cast<qalg_status>(e.code());
    } catch (const NullArgument&) {
        last_error = "required pointer argument is NULL";
        return QALG_ERR_NULL_ARGUMENT;
    } catch (const std::bad_alloc&) {
        last_error = "out of memory";
        return QALG_ERR_INTERNAL;
    } catch (const std::exception& e) {
        last_error = e.what();
        return QALG_ERR_INTERNAL;
    } catch (...) {
        last_error = "unknown exception";
        return QALG_ERR_INTERNAL;
    }
}

std::vector<qalg::ComplexMatrix> collect(size_t count, const qalg_matrix* const* mats) {
    if (count > 0) require(mats);
    std::vector<qalg::ComplexMatrix> out;
    out.reserve(count);
    for (size_t i = 0; i < count; ++i) out.push_back(deref(mats[i]).m);
    return out;
}

qalg_channel_report convert(const qalg::ChannelReport& r) {
    return {r.cp ? 1 : 0,      r.tp ? 1 : 0,       r.unital ? 1 : 0,        r.min_choi_eigenvalue,
            r.tp_residual,     r.unital_residual,  r.hermiticity_residual,  r.kraus_rank};
}

}  // namespace

extern "C" {

const char* qalg_status_name(qalg_status status) {
    switch (status) {
        case QALG_OK:
            return "ok";
        case QALG_ERR_NULL_ARGUMENT:
            return "null_argument";
        case QALG_ERR_INTERNAL:
            return "internal";
        default:
            if (status >= QALG_ERR_DIMENSION && status <= QALG_ERR_NORMALIZATION) {
                return qalg::error_code_name(static_cast<qalg::ErrorCode>(status));
            }
            return "unknown";
    }
}

const char* qalg_last_error(void) { return last_error.c_str(); }

const char* qalg_version(void) { return "0.1.0"; }

const char* qalg_rng_algorithm(void) { return qalg::Rng::algorithm; }

qalg_tolerances qalg_default_tolerances(void) {
    const qalg::Tolerances t;
    return {t.eps_herm, t.eps_pos, t.eps_rank, t.eps_cluster};
}

// ---- matrices -------------------------------------------------------------

qalg_status qalg_matrix_create(size_t rows, size_t cols, const double* data, qalg_matrix** out) {
    return guard([&] {
        require(out);
        qalg::ComplexMatrix m = qalg::ComplexMatrix::Zero(static_cast<Eigen::Index>(rows),
                                                          static_cast<Eigen::Index>(cols));
        if (data != nullptr) {
            for (size_t i = 0; i < rows; ++i) {
                for (size_t j = 0; j < cols; ++j) {
                    const size_t k = 2 * (i * cols + j);
                    m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = {data[k], data[k + 1]};
                }
            }
        }
        *out = wrap(std::move(m));
    });
}

void qalg_matrix_free(qalg_matrix* m) { delete m; }

size_t qalg_matrix_rows(const qalg_matrix* m) { return m == nullptr ? 0 : static_cast<size_t>(m->m.rows()); }

size_t qalg_matrix_cols(const qalg_matrix* m) { return m == nullptr ? 0 : static_cast<size_t>(m->m.cols()); }

qalg_status qalg_matrix_read(const qalg_matrix* m, double* data) {
    return guard([&] {
        const auto& x = deref(m).m;
        require(data);
        const auto cols = static_cast<size_t>(x.cols());
        for (Eigen::Index i = 0; i < x.rows(); ++i) {
            for (Eigen::Index j = 0; j < x.cols(); ++j) {
                const size_t k = 2 * (static_cast<size_t>(i) * cols + static_cast<size_t>(j));
                data[k] = x(i, j).real();
                data[k + 1] = x(i, j).imag();
            }
        }
    });
}

qalg_status qalg_matrix_distance(const qalg_matrix* a, const qalg_matrix* b, double* out) {
    return guard([&] {
        require(out);
        const auto& x = deref(a).m;
        const auto& y = deref(b).m;
        if (x.rows() != y.rows() || x.cols() != y.cols()) {
            qalg::fail(qalg::ErrorCode::dimension, "matrix_distance: shapes differ");
        }
        *out = (x - y).norm();
    });
}

qalg_status qalg_matrix_trace(const qalg_matrix* m, double* re, double* im) {
    return guard([&] {
        const auto& x = deref(m).m;
        qalg::require_square(x, "matrix_trace");
        const qalg::Complex t = x.trace();
        if (re != nullptr) *re = t.real();
        if (im != nullptr) *im = t.imag();
    });
}

qalg_status qalg_isometry_residual(const qalg_matrix* v, double* out) {
    return guard([&] {
        require(out);
        const auto& x = deref(v).m;
        *out = (x.adjoint() * x - qalg::identity(static_cast<size_t>(x.cols()))).norm();
    });
}

qalg_status qalg_partial_trace(const qalg_matrix* z, size_t dim_first, size_t dim_second, int keep_second,
                               qalg_matrix** out) {
    return guard([&] {
        require(out);
        *out = wrap(qalg::partial_trace(deref(z).m, {dim_first, dim_second},
                                        keep_second ? qalg::Subsystem::second : qalg::Subsystem::first));
    });
}

qalg_status qalg_partial_transpose(const qalg_matrix* z, size_t dim_first, size_t dim_second,
                                   int transpose_second, qalg_matrix** out) {
    return guard([&] {
        require(out);
        *out = wrap(qalg::partial_transpose(
            deref(z).m, {dim_first, dim_second},
            transpose_second ? qalg::Subsystem::second : qalg::Subsystem::first));
    });
}

// ---- states and effects ---------------------------------------------------

qalg_status qalg_check_state(const qalg_matrix* m, const qalg_tolerances* tol, qalg_state_report* report) {
    return guard([&] {
        require(report);
        const auto r = qalg::check_state(deref(m).m, tolerances(tol));
        *report = {r.valid ? 1 : 0, r.min_eigenvalue, r.trace_deviation, r.hermiticity_residual};
    });
}

qalg_status qalg_check_effect(const qalg_matrix* m, const qalg_tolerances* tol, qalg_effect_report* report) {
    return guard([&] {
        require(report);
        const auto r = qalg::check_effect(deref(m).m, tolerances(tol));
        *report = {r.valid ? 1 : 0, r.min_eigenvalue, r.max_eigenvalue, r.hermiticity_residual};
    });
}

qalg_status qalg_entropy(const qalg_matrix* rho, const qalg_tolerances* tol, double* out) {
    return guard([&] {
        require(out);
        *out = qalg::entropy(qalg::DensityMatrix::from(deref(rho).m, tolerances(tol)));
    });
}

qalg_status qalg_shannon_entropy(const double* p, size_t n, double* out) {
    return guard([&] {
        require(out);
        if (n > 0) require(p);
        *out = qalg::shannon_entropy(std::span<const double>(p, n));
    });
}

qalg_status qalg_is_pure(const qalg_matrix* rho, const qalg_tolerances* tol, int* out) {
    return guard([&] {
        require(out);
        *out = qalg::is_pure(qalg::DensityMatrix::from(deref(rho).m, tolerances(tol))) ? 1 : 0;
    });
}

qalg_status qalg_purify(const qalg_matrix* rho, const qalg_tolerances* tol, qalg_matrix** out) {
    return guard([&] {
        require(out);
        *out = wrap(qalg::purify(qalg::DensityMatrix::from(deref(rho).m, tolerances(tol))));
    });
}

qalg_status qalg_density_from_ensemble(size_t count, const double* probabilities,
                                       const qalg_matrix* const* states, qalg_matrix** out) {
    return guard([&] {
        require(out);
        if (count > 0) {
            require(probabilities);
            require(states);
        }
        std::vector<qalg::EnsembleItem> items;
        for (size_t i = 0; i < count; ++i) {
            const auto& s = deref(states[i]).m;
            if (s.cols() != 1) qalg::fail(qalg::ErrorCode::dimension, "ensemble states must be column vectors");
            items.push_back({probabilities[i], s.col(0)});
        }
        *out = wrap(qalg::density_from_ensemble(qalg::Ensemble::from(std::move(items))).matrix());
    });
}

qalg_status qalg_density_to_bloch(const qalg_matrix* rho, const qalg_tolerances* tol, double r[3]) {
    return guard([&] {
        require(r);
        const auto b = qalg::density_to_bloch(qalg::DensityMatrix::from(deref(rho).m, tolerances(tol)));
        std::copy(b.r.begin(), b.r.end(), r);
    });
}

qalg_status qalg_bloch_to_density(const double r[3], qalg_matrix** out) {
    return guard([&] {
        require(r);
        require(out);
        *out = wrap(qalg::bloch_to_density({{r[0], r[1], r[2]}}).matrix());
    });
}

// ---- channels -------------------------------------------------------------

qalg_status qalg_channel_from_kraus(size_t dim_in, size_t dim_out, size_t count, const qalg_matrix* const* kraus,
                                    qalg_channel** out) {
    return guard([&] {
        require(out);
        *out = new qalg_channel{qalg::KrausChannel::from(dim_in, dim_out, collect(count, kraus))};
    });
}

qalg_status qalg_channel_from_choi(const qalg_matrix* choi, size_t dim_out, size_t dim_in,
                                   const qalg_tolerances* tol, qalg_channel** out) {
    return guard([&] {
        require(out);
        const auto c = qalg::ChoiMatrix::from(deref(choi).m, dim_out, dim_in);
        *out = new qalg_channel{qalg::choi_to_kraus(c, tolerances(tol))};
    });
}

void qalg_channel_free(qalg_channel* ch) { delete ch; }

size_t qalg_channel_dim_in(const qalg_channel* ch) { return ch == nullptr ? 0 : ch->ch.dim_in; }

size_t qalg_channel_dim_out(const qalg_channel* ch) { return ch == nullptr ? 0 : ch->ch.dim_out; }

size_t qalg_channel_kraus_count(const qalg_channel* ch) { return ch == nullptr ? 0 : ch->ch.kraus.size(); }

qalg_status qalg_channel_kraus(const qalg_channel* ch, size_t i, qalg_matrix** out) {
    return guard([&] {
        require(out);
        const auto& k = deref(ch).ch.kraus;
        if (i >= k.size()) qalg::fail(qalg::ErrorCode::invalid_argument, "Kraus index out of range");
        *out = wrap(k[i]);
    });
}

qalg_status qalg_channel_choi(const qalg_channel* ch, qalg_matrix** out) {
    return guard([&] {
        require(out);
        *out = wrap(qalg::kraus_to_choi(deref(ch).ch).matrix);
    });
}

qalg_status qalg_channel_apply(const qalg_channel* ch, const qalg_matrix* rho, qalg_matrix** out) {
    return guard([&] {
        require(out);
        *out = wrap(qalg::apply(deref(ch).ch, deref(rho).m));
    });
}

qalg_status qalg_channel_adjoint_apply(const qalg_channel* ch, const qalg_matrix* x, qalg_matrix** out) {
    return guard([&] {
        require(out);
        *out = wrap(qalg::adjoint_apply(deref(ch).ch, deref(x).m));
    });
}

qalg_status qalg_channel_check(const qalg_channel* ch, const qalg_tolerances* tol, qalg_channel_report* report) {
    return guard([&] {
        require(report);
        *report = convert(qalg::check(deref(ch).ch, tolerances(tol)));
    });
}

qalg_status qalg_check_choi(const qalg_matrix* choi, size_t dim_out, size_t dim_in, const qalg_tolerances* tol,
                            qalg_channel_report* report) {
    return guard([&] {
        require(report);
        *report = convert(qalg::check(qalg::ChoiMatrix::from(deref(choi).m, dim_out, dim_in), tolerances(tol)));
    });
}

qalg_status qalg_choi_apply(const qalg_matrix* choi, size_t dim_out, size_t dim_in, const qalg_matrix* rho,
                            qalg_matrix** out) {
    return guard([&] {
        require(out);
        *out = wrap(qalg::apply(qalg::ChoiMatrix::from(deref(choi).m, dim_out, dim_in), deref(rho).m));
    });
}

qalg_status qalg_channel_dilate(const qalg_channel* ch, qalg_matrix** v, size_t* dim_env) {
    return guard([&] {
        require(v);
        require(dim_env);
        auto d = qalg::stinespring_dilate(deref(ch).ch);
        *dim_env = d.dim_env;
        *v = wrap(std::move(d.v));
    });
}

qalg_status qalg_dilation_apply(const qalg_matrix* v, size_t dim_out, size_t dim_env, const qalg_matrix* rho,
                                qalg_matrix** out) {
    return guard([&] {
        require(out);
        const auto& iso = deref(v).m;
        if (static_cast<size_t>(iso.rows()) != dim_out * dim_env) {
            qalg::fail(qalg::ErrorCode::dimension, "isometry rows must equal dim_out * dim_env");
        }
        *out = wrap(qalg::apply(qalg::StinespringIsometry{iso, dim_out, dim_env}, deref(rho).m));
    });
}

// ---- measurements ---------------------------------------------------------

qalg_status qalg_povm_create(size_t count, const char* const* labels, const qalg_matrix* const* effects,
                             qalg_povm** out) {
    return guard([&] {
        require(out);
        qalg::Povm p;
        p.effects = collect(count, effects);
        for (size_t i = 0; i < count; ++i) {
            if (labels != nullptr) {
                require(labels[i]);
                p.outcomes.emplace_back(labels[i]);
            } else {
                p.outcomes.push_back(std::to_string(i));
            }
        }
        for (const auto& e : p.effects) {
            if (e.rows() != e.cols() || e.rows() != p.effects.front().rows()) {
                qalg::fail(qalg::ErrorCode::dimension, "POVM effects must be square of a common dimension");
            }
        }
        *out = new qalg_povm{std::move(p)};
    });
}

void qalg_povm_free(qalg_povm* m) { delete m; }

size_t qalg_povm_size(const qalg_povm* m) { return m == nullptr ? 0 : m->povm.size(); }

const char* qalg_povm_label(const qalg_povm* m, size_t i) {
    if (m == nullptr || i >= m->povm.outcomes.size()) return nullptr;
    return m->povm.outcomes[i].c_str();
}

qalg_status qalg_povm_effect(const qalg_povm* m, size_t i, qalg_matrix** out) {
    return guard([&] {
        require(out);
        const auto& e = deref(m).povm.effects;
        if (i >= e.size()) qalg::fail(qalg::ErrorCode::invalid_argument, "effect index out of range");
        *out = wrap(e[i]);
    });
}

qalg_status qalg_povm_check(const qalg_povm* m, const qalg_tolerances* tol, qalg_povm_report* report) {
    return guard([&] {
        require(report);
        const auto r = qalg::check_povm(deref(m).povm, tolerances(tol));
        *report = {r.valid ? 1 : 0, r.min_eigenvalue, r.completeness_residual};
    });
}

qalg_status qalg_effect_observable(const qalg_matrix* effect, const qalg_tolerances* tol, qalg_povm** out) {
    return guard([&] {
        require(out);
        *out = new qalg_povm{qalg::effect_observable(qalg::Effect::from(deref(effect).m, tolerances(tol)))};
    });
}

qalg_status qalg_povm_coarse_grain(const qalg_povm* m, const double* pi, size_t outputs, qalg_povm** out) {
    return guard([&] {
        require(out);
        require(pi);
        const auto& povm = deref(m).povm;
        const auto inputs = static_cast<Eigen::Index>(povm.size());
        qalg::RealMatrix p(static_cast<Eigen::Index>(outputs), inputs);
        for (Eigen::Index i = 0; i < p.rows(); ++i) {
            for (Eigen::Index j = 0; j < inputs; ++j) p(i, j) = pi[i * inputs + j];
        }
        *out = new qalg_povm{qalg::coarse_grain(povm, qalg::StochasticMatrix::from(std::move(p)))};
    });
}

qalg_status qalg_measure(const qalg_matrix* rho, const qalg_povm* m, const qalg_tolerances* tol,
                         double* probabilities) {
    return guard([&] {
        require(probabilities);
        const auto t = tolerances(tol);
        const auto p = qalg::measure(qalg::DensityMatrix::from(deref(rho).m, t), deref(m).povm, t);
        std::copy(p.begin(), p.end(), probabilities);
    });
}

qalg_status qalg_sample(const qalg_matrix* rho, const qalg_povm* m, uint64_t n, uint64_t seed,
                        const qalg_tolerances* tol, uint64_t* counts) {
    return guard([&] {
        require(counts);
        const auto t = tolerances(tol);
        const auto s = qalg::sample_outcomes(qalg::DensityMatrix::from(deref(rho).m, t), deref(m).povm, n, seed, t);
        std::copy(s.begin(), s.end(), counts);
    });
}

// ---- algebras -------------------------------------------------------------

qalg_status qalg_algebra_generate(size_t count, const qalg_matrix* const* generators, const qalg_tolerances* tol,
                                  qalg_algebra** out) {
    return guard([&] {
        require(out);
        const auto gens = collect(count, generators);
        *out = new qalg_algebra{qalg::generate_algebra(gens, tolerances(tol))};
    });
}

void qalg_algebra_free(qalg_algebra* a) { delete a; }

size_t qalg_algebra_dim(const qalg_algebra* a) { return a == nullptr ? 0 : a->a.dim(); }

size_t qalg_algebra_ambient_dim(const qalg_algebra* a) { return a == nullptr ? 0 : a->a.ambient_dim(); }

size_t qalg_algebra_center_dim(const qalg_algebra* a, const qalg_tolerances* tol) {
    size_t dim = 0;
    const qalg_status st = guard([&] { dim = qalg::center(deref(a).a, tolerances(tol)).dim(); });
    return st == QALG_OK ? dim : 0;
}

qalg_status qalg_algebra_unit(const qalg_algebra* a, qalg_matrix** out) {
    return guard([&] {
        require(out);
        *out = wrap(deref(a).a.unit());
    });
}

qalg_status qalg_structure_decompose(const qalg_algebra* a, uint64_t seed, const qalg_tolerances* tol,
                                     qalg_structure** out) {
    return guard([&] {
        require(out);
        *out = new qalg_structure{qalg::structure_decomposition(deref(a).a, seed, tolerances(tol))};
    });
}

void qalg_structure_free(qalg_structure* s) { delete s; }

size_t qalg_structure_block_count(const qalg_structure* s) { return s == nullptr ? 0 : s->s.blocks.size(); }

qalg_status qalg_structure_block(const qalg_structure* s, size_t i, size_t* m, size_t* n) {
    return guard([&] {
        require(m);
        require(n);
        const auto& blocks = deref(s).s.blocks;
        if (i >= blocks.size()) qalg::fail(qalg::ErrorCode::invalid_argument, "block index out of range");
        *m = blocks[i].m;
        *n = blocks[i].n;
    });
}

size_t qalg_structure_d0(const qalg_structure* s) { return s == nullptr ? 0 : s->s.d0; }

double qalg_structure_residual(const qalg_structure* s) { return s == nullptr ? 0.0 : s->s.residual; }

qalg_status qalg_structure_unitary(const qalg_structure* s, qalg_matrix** out) {
    return guard([&] {
        require(out);
        *out = wrap(deref(s).s.u);
    });
}

qalg_status qalg_canonical_state(const qalg_algebra* a, const qalg_matrix* r, uint64_t seed,
                                 const qalg_tolerances* tol, qalg_hybrid** out) {
    return guard([&] {
        require(out);
        auto h = qalg::canonical_state(deref(a).a, deref(r).m, seed, tolerances(tol));
        auto* wrapped = new qalg_hybrid{std::move(h), {}};
        wrapped->structure.s = wrapped->h.structure;
        *out = wrapped;
    });
}

void qalg_hybrid_free(qalg_hybrid* h) { delete h; }

size_t qalg_hybrid_block_count(const qalg_hybrid* h) { return h == nullptr ? 0 : h->h.blocks.size(); }

qalg_status qalg_hybrid_block(const qalg_hybrid* h, size_t i, double* p, size_t* m, qalg_matrix** rho) {
    return guard([&] {
        const auto& blocks = deref(h).h.blocks;
        if (i >= blocks.size()) qalg::fail(qalg::ErrorCode::invalid_argument, "block index out of range");
        if (p != nullptr) *p = blocks[i].p;
        if (m != nullptr) *m = blocks[i].m;
        if (rho != nullptr) *rho = wrap(blocks[i].rho);
    });
}

const qalg_structure* qalg_hybrid_structure(const qalg_hybrid* h) { return h == nullptr ? nullptr : &h->structure; }

qalg_status qalg_hybrid_reconstruct(const qalg_hybrid* h, qalg_matrix** out) {
    return guard([&] {
        require(out);
        *out = wrap(deref(h).h.reconstruct());
    });
}

qalg_status qalg_hybrid_functional_residual(const qalg_hybrid* h, const qalg_algebra* a, const qalg_matrix* r,
                                            double* out) {
    return guard([&] {
        require(out);
        const qalg::ComplexMatrix rec = deref(h).h.reconstruct();
        const auto& x = deref(r).m;
        double worst = 0.0;
        for (const auto& b : deref(a).a.basis()) {
            worst = std::max(worst, std::abs((x * b).trace() - (rec * b).trace()));
        }
        *out = worst;
    });
}

}  // extern "C"
