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

#include "qalg/channels.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <numeric>
#include <sstream>

#include "qalg/random.hpp"

namespace qalg {

namespace {

constexpr double kKrausCutoff = 1e-12;
constexpr double kFlagSlack = 1e-8;
constexpr double kClipSlack = 1e-12;
constexpr double kNormSlack = 1e-9;
constexpr double kSameChannelSlack = 1e-8;

Eigen::Index idx(std::size_t n) { return static_cast<Eigen::Index>(n); }

void require_input(const KrausChannel& ch, const ComplexMatrix& rho, const char* what) {
    if (rho.rows() != idx(ch.dim_in) || rho.cols() != idx(ch.dim_in)) {
        std::ostringstream os;
        os << what << ": expected " << ch.dim_in << "x" << ch.dim_in << " input, got " << rho.rows()
           << "x" << rho.cols();
        fail(ErrorCode::dimension, os.str());
    }
}

std::string format_label(double value) {
    std::ostringstream os;
    os << std::setprecision(17) << value;
    return os.str();
}

}  // namespace

KrausChannel KrausChannel::from(std::size_t dim_in, std::size_t dim_out,
                                std::vector<ComplexMatrix> kraus) {
    if (dim_in == 0 || dim_out == 0) fail(ErrorCode::dimension, "channel: zero dimension");
    if (kraus.empty()) fail(ErrorCode::invalid_argument, "channel: no Kraus operators");
    for (const auto& e : kraus) {
        if (e.rows() != idx(dim_out) || e.cols() != idx(dim_in)) {
            std::ostringstream os;
            os << "channel: Kraus operator is " << e.rows() << "x" << e.cols() << ", expected "
               << dim_out << "x" << dim_in;
            fail(ErrorCode::dimension, os.str());
        }
    }
    return KrausChannel{dim_in, dim_out, std::move(kraus)};
}

KrausChannel KrausChannel::identity(std::size_t d) { return from(d, d, {qalg::identity(d)}); }

KrausChannel KrausChannel::unitary(const ComplexMatrix& u) {
    require_square(u, "unitary channel");
    const auto d = static_cast<std::size_t>(u.rows());
    return from(d, d, {u});
}

KrausChannel KrausChannel::dephasing(std::size_t d) {
    std::vector<ComplexMatrix> ops;
    for (std::size_t i = 0; i < d; ++i) {
        ComplexMatrix p = ComplexMatrix::Zero(idx(d), idx(d));
        p(idx(i), idx(i)) = 1.0;
        ops.push_back(std::move(p));
    }
    return from(d, d, std::move(ops));
}

ChoiMatrix ChoiMatrix::from(ComplexMatrix matrix, std::size_t dim_out, std::size_t dim_in) {
    if (dim_out == 0 || dim_in == 0 || matrix.rows() != idx(dim_out * dim_in) ||
        matrix.cols() != idx(dim_out * dim_in)) {
        fail(ErrorCode::dimension, "choi: matrix shape does not match dims");
    }
    return ChoiMatrix{std::move(matrix), dim_out, dim_in};
}

ComplexMatrix apply(const KrausChannel& ch, const ComplexMatrix& rho) {
    require_input(ch, rho, "apply");
    ComplexMatrix out = ComplexMatrix::Zero(idx(ch.dim_out), idx(ch.dim_out));
    for (const auto& e : ch.kraus) out += e * rho * e.adjoint();
    return out;
}

ComplexMatrix adjoint_apply(const KrausChannel& ch, const ComplexMatrix& x) {
    if (x.rows() != idx(ch.dim_out) || x.cols() != idx(ch.dim_out)) {
        fail(ErrorCode::dimension, "adjoint_apply: operator does not match output dimension");
    }
    ComplexMatrix out = ComplexMatrix::Zero(idx(ch.dim_in), idx(ch.dim_in));
    for (const auto& e : ch.kraus) out += e.adjoint() * x * e;
    return out;
}

ComplexMatrix apply(const ChoiMatrix& choi, const ComplexMatrix& rho) {
    const Eigen::Index da = idx(choi.dim_in);
    const Eigen::Index db = idx(choi.dim_out);
    if (rho.rows() != da || rho.cols() != da) {
        fail(ErrorCode::dimension, "apply: input does not match Choi input dimension");
    }
    ComplexMatrix out = ComplexMatrix::Zero(db, db);
    for (Eigen::Index b = 0; b < db; ++b) {
        for (Eigen::Index c = 0; c < db; ++c) {
            Complex acc = 0.0;
            for (Eigen::Index k = 0; k < da; ++k) {
                for (Eigen::Index l = 0; l < da; ++l) {
                    acc += rho(k, l) * choi.matrix(b * da + k, c * da + l);
                }
            }
            out(b, c) = acc;
        }
    }
    return out;
}

ComplexMatrix apply(const StinespringIsometry& v, const ComplexMatrix& rho) {
    if (rho.rows() != v.v.cols() || rho.cols() != v.v.cols()) {
        fail(ErrorCode::dimension, "apply: input does not match isometry input dimension");
    }
    return partial_trace(v.v * rho * v.v.adjoint(), {v.dim_out, v.dim_env}, Subsystem::first);
}

ComplexMatrix adjoint_apply(const StinespringIsometry& v, const ComplexMatrix& x) {
    if (x.rows() != idx(v.dim_out) || x.cols() != idx(v.dim_out)) {
        fail(ErrorCode::dimension, "adjoint_apply: operator does not match output dimension");
    }
    return v.v.adjoint() * kron(x, identity(v.dim_env)) * v.v;
}

ChoiMatrix kraus_to_choi(const KrausChannel& ch) {
    const Eigen::Index n = idx(ch.dim_out * ch.dim_in);
    ComplexMatrix x = ComplexMatrix::Zero(n, n);
    for (const auto& e : ch.kraus) {
        // psi[b * dim_in + k] = E(b, k)
        ComplexVector psi(n);
        for (Eigen::Index b = 0; b < e.rows(); ++b) {
            for (Eigen::Index k = 0; k < e.cols(); ++k) psi(b * e.cols() + k) = e(b, k);
        }
        x += psi * psi.adjoint();
    }
    return ChoiMatrix{hermitian_part(x), ch.dim_out, ch.dim_in};
}

ChoiMatrix choi_of_map(const std::function<ComplexMatrix(const ComplexMatrix&)>& map,
                       std::size_t dim_in, std::size_t dim_out) {
    const Eigen::Index da = idx(dim_in);
    const Eigen::Index db = idx(dim_out);
    ComplexMatrix x = ComplexMatrix::Zero(da * db, da * db);
    for (Eigen::Index i = 0; i < da; ++i) {
        for (Eigen::Index j = 0; j < da; ++j) {
            ComplexMatrix unit = ComplexMatrix::Zero(da, da);
            unit(i, j) = 1.0;
            const ComplexMatrix image = map(unit);
            if (image.rows() != db || image.cols() != db) {
                fail(ErrorCode::dimension, "choi_of_map: map output has the wrong shape");
            }
            for (Eigen::Index b = 0; b < db; ++b) {
                for (Eigen::Index c = 0; c < db; ++c) x(b * da + i, c * da + j) = image(b, c);
            }
        }
    }
    return ChoiMatrix{std::move(x), dim_out, dim_in};
}

KrausChannel choi_to_kraus(const ChoiMatrix& choi, const Tolerances& tol) {
    const PositivityReport pos = is_positive(choi.matrix, tol);
    if (!pos.positive) {
        std::ostringstream os;
        os << "Choi matrix is not positive: min eigenvalue " << pos.min_eigenvalue
           << ", hermiticity residual " << pos.hermiticity_residual;
        fail(ErrorCode::not_cp, os.str());
    }
    const Eigen::Index da = idx(choi.dim_in);
    const Eigen::Index db = idx(choi.dim_out);
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(hermitian_part(choi.matrix));
    const RealVector& values = solver.eigenvalues();
    const double largest = values.maxCoeff();
    std::vector<ComplexMatrix> ops;
    for (Eigen::Index i = values.size() - 1; i >= 0; --i) {
        if (!(values(i) > kKrausCutoff * largest)) continue;
        const double amp = std::sqrt(values(i));
        ComplexMatrix e(db, da);
        for (Eigen::Index b = 0; b < db; ++b) {
            for (Eigen::Index k = 0; k < da; ++k) e(b, k) = amp * solver.eigenvectors()(b * da + k, i);
        }
        ops.push_back(std::move(e));
    }
    if (ops.empty()) ops.push_back(ComplexMatrix::Zero(db, da));
    return KrausChannel::from(choi.dim_in, choi.dim_out, std::move(ops));
}

ChannelReport check(const ChoiMatrix& choi, const Tolerances& tol) {
    ChannelReport report;
    const PositivityReport pos = is_positive(choi.matrix, tol);
    report.cp = pos.positive;
    report.min_choi_eigenvalue = pos.min_eigenvalue;
    report.hermiticity_residual = pos.hermiticity_residual;

    const BipartiteDims dims{choi.dim_out, choi.dim_in};
    // Tr_out X = (sum E^dagger E)^T and Tr_in X = E(1).
    const ComplexMatrix tp = partial_trace(choi.matrix, dims, Subsystem::second);
    const ComplexMatrix unital = partial_trace(choi.matrix, dims, Subsystem::first);
    report.tp_residual = (tp - identity(choi.dim_in)).norm();
    report.unital_residual = (unital - identity(choi.dim_out)).norm();
    report.tp = report.tp_residual < kFlagSlack;
    report.unital = report.unital_residual < kFlagSlack;

    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(hermitian_part(choi.matrix),
                                                        Eigen::EigenvaluesOnly);
    const double largest = solver.eigenvalues().cwiseAbs().maxCoeff();
    report.kraus_rank = largest == 0.0
                            ? 0
                            : static_cast<std::size_t>(
                                  (solver.eigenvalues().array() > kKrausCutoff * largest).count());
    return report;
}

ChannelReport check(const KrausChannel& ch, const Tolerances& tol) {
    return check(kraus_to_choi(ch), tol);
}

KrausChannel minimal_kraus(const KrausChannel& ch) {
    const auto r = idx(ch.kraus.size());
    ComplexMatrix gram(r, r);
    for (Eigen::Index i = 0; i < r; ++i) {
        for (Eigen::Index j = 0; j < r; ++j) gram(i, j) = hs_inner(ch.kraus[static_cast<std::size_t>(i)], ch.kraus[static_cast<std::size_t>(j)]);
    }
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(hermitian_part(gram));
    const RealVector& values = solver.eigenvalues();
    const double largest = values.maxCoeff();
    const auto rank = (values.array() > kKrausCutoff * largest).count();
    if (rank == r) return ch;

    // F_k = sum_i V_ik E_i over the retained eigenvectors of the Gram matrix.
    std::vector<ComplexMatrix> ops;
    for (Eigen::Index k = r - 1; k >= 0; --k) {
        if (!(values(k) > kKrausCutoff * largest)) continue;
        ComplexMatrix f = ComplexMatrix::Zero(idx(ch.dim_out), idx(ch.dim_in));
        for (Eigen::Index i = 0; i < r; ++i) f += solver.eigenvectors()(i, k) * ch.kraus[static_cast<std::size_t>(i)];
        ops.push_back(std::move(f));
    }
    if (ops.empty()) ops.push_back(ComplexMatrix::Zero(idx(ch.dim_out), idx(ch.dim_in)));
    return KrausChannel::from(ch.dim_in, ch.dim_out, std::move(ops));
}

StinespringIsometry stinespring_dilate(const KrausChannel& ch) {
    const KrausChannel minimal = minimal_kraus(ch);
    const Eigen::Index de = idx(minimal.kraus.size());
    const Eigen::Index db = idx(ch.dim_out);
    ComplexMatrix v = ComplexMatrix::Zero(db * de, idx(ch.dim_in));
    for (Eigen::Index e = 0; e < de; ++e) {
        const ComplexMatrix& k = minimal.kraus[static_cast<std::size_t>(e)];
        for (Eigen::Index b = 0; b < db; ++b) v.row(b * de + e) = k.row(b);
    }
    return StinespringIsometry{std::move(v), ch.dim_out, static_cast<std::size_t>(de)};
}

Intertwiner dilation_intertwiner(const StinespringIsometry& v1, const StinespringIsometry& v2,
                                 const Tolerances& tol) {
    if (v1.dim_out != v2.dim_out || v1.dim_in() != v2.dim_in()) {
        fail(ErrorCode::dimension, "dilation_intertwiner: isometries act between different spaces");
    }
    const std::size_t db = v1.dim_out;
    const Eigen::Index da = idx(v1.dim_in());
    const ComplexMatrix id1 = identity(v1.dim_env);
    const ComplexMatrix id2 = identity(v2.dim_env);

    // Both must induce the same Heisenberg map on an operator basis.
    double mismatch = 0.0;
    std::vector<ComplexMatrix> units;
    for (std::size_t i = 0; i < db; ++i) {
        for (std::size_t j = 0; j < db; ++j) {
            ComplexMatrix x = ComplexMatrix::Zero(idx(db), idx(db));
            x(idx(i), idx(j)) = 1.0;
            mismatch = std::max(mismatch, (adjoint_apply(v1, x) - adjoint_apply(v2, x)).norm());
            units.push_back(std::move(x));
        }
    }
    if (mismatch > kSameChannelSlack) {
        std::ostringstream os;
        os << "dilation_intertwiner: isometries dilate different channels (residual " << mismatch
           << ")";
        fail(ErrorCode::no_intertwiner, os.str());
    }

    // Spanning sets (X_a (x) 1) V |b> for both dilations; W~ = K2 K1^+ maps the
    // first onto the second and vanishes on its orthogonal complement.
    const auto cols = idx(units.size()) * da;
    ComplexMatrix k1(v1.v.rows(), cols);
    ComplexMatrix k2(v2.v.rows(), cols);
    for (std::size_t a = 0; a < units.size(); ++a) {
        k1.middleCols(idx(a) * da, da) = kron(units[a], id1) * v1.v;
        k2.middleCols(idx(a) * da, da) = kron(units[a], id2) * v2.v;
    }
    Eigen::JacobiSVD<ComplexMatrix> svd(k1, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const RealVector& s = svd.singularValues();
    RealVector inv = RealVector::Zero(s.size());
    for (Eigen::Index i = 0; i < s.size(); ++i) {
        if (s(0) > 0.0 && s(i) > tol.eps_rank * s(0)) inv(i) = 1.0 / s(i);
    }
    const ComplexMatrix pinv = svd.matrixV() * inv.cast<Complex>().asDiagonal() * svd.matrixU().adjoint();
    const ComplexMatrix full = k2 * pinv;

    // W~ = 1_B (x) W, so W is the normalized partial trace over B.
    const Eigen::Index e1 = idx(v1.dim_env);
    const Eigen::Index e2 = idx(v2.dim_env);
    Intertwiner out;
    out.w = ComplexMatrix::Zero(e2, e1);
    for (Eigen::Index b = 0; b < idx(db); ++b) out.w += full.block(b * e2, b * e1, e2, e1);
    out.w /= static_cast<double>(db);

    out.residual = (kron(identity(db), out.w) * v1.v - v2.v).norm();
    const ComplexMatrix wtw = out.w.adjoint() * out.w;
    out.partial_isometry_residual = (wtw * wtw - wtw).norm();
    return out;
}

KrausChannel combine(CombineMode mode, std::span<const KrausChannel> channels,
                     std::span<const double> weights) {
    if (channels.empty()) fail(ErrorCode::invalid_argument, "combine: no channels");
    switch (mode) {
        case CombineMode::compose: {
            KrausChannel acc = channels.back();
            for (auto it = channels.rbegin() + 1; it != channels.rend(); ++it) {
                if (it->dim_in != acc.dim_out) {
                    fail(ErrorCode::dimension, "combine: composed channels have incompatible dims");
                }
                std::vector<ComplexMatrix> ops;
                for (const auto& f : it->kraus) {
                    for (const auto& e : acc.kraus) ops.push_back(f * e);
                }
                acc = KrausChannel::from(acc.dim_in, it->dim_out, std::move(ops));
            }
            return acc;
        }
        case CombineMode::tensor: {
            KrausChannel acc = channels.front();
            for (std::size_t c = 1; c < channels.size(); ++c) {
                std::vector<ComplexMatrix> ops;
                for (const auto& e : acc.kraus) {
                    for (const auto& f : channels[c].kraus) ops.push_back(kron(e, f));
                }
                acc = KrausChannel::from(acc.dim_in * channels[c].dim_in,
                                         acc.dim_out * channels[c].dim_out, std::move(ops));
            }
            return acc;
        }
        case CombineMode::mix: {
            if (weights.size() != channels.size()) {
                fail(ErrorCode::invalid_argument, "combine: need one weight per channel");
            }
            double total = 0.0;
            for (double w : weights) {
                if (!(w >= 0.0)) fail(ErrorCode::normalization, "combine: negative weight");
                total += w;
            }
            if (std::abs(total - 1.0) > kNormSlack) {
                fail(ErrorCode::normalization, "combine: weights do not sum to 1");
            }
            std::vector<ComplexMatrix> ops;
            for (std::size_t c = 0; c < channels.size(); ++c) {
                if (channels[c].dim_in != channels.front().dim_in ||
                    channels[c].dim_out != channels.front().dim_out) {
                    fail(ErrorCode::dimension, "combine: mixed channels have different dims");
                }
                if (weights[c] == 0.0) continue;
                for (const auto& k : channels[c].kraus) ops.push_back(std::sqrt(weights[c]) * k);
            }
            return KrausChannel::from(channels.front().dim_in, channels.front().dim_out,
                                      std::move(ops));
        }
    }
    fail(ErrorCode::invalid_argument, "combine: unknown mode");
}

ComplexMatrix partial_transpose(const ComplexMatrix& rho, BipartiteDims dims, Subsystem which) {
    const Eigen::Index da = idx(dims.first);
    const Eigen::Index db = idx(dims.second);
    if (da == 0 || db == 0 || rho.rows() != da * db || rho.cols() != da * db) {
        fail(ErrorCode::dimension, "partial_transpose: dims inconsistent with input");
    }
    ComplexMatrix out(rho.rows(), rho.cols());
    for (Eigen::Index i = 0; i < da; ++i) {
        for (Eigen::Index k = 0; k < db; ++k) {
            for (Eigen::Index j = 0; j < da; ++j) {
                for (Eigen::Index l = 0; l < db; ++l) {
                    const Complex v = rho(i * db + k, j * db + l);
                    if (which == Subsystem::first) {
                        out(j * db + k, i * db + l) = v;
                    } else {
                        out(i * db + l, j * db + k) = v;
                    }
                }
            }
        }
    }
    return out;
}

PovmReport check_povm(const Povm& m, const Tolerances& tol) {
    PovmReport report;
    if (m.effects.empty()) return report;
    const Eigen::Index d = m.effects.front().rows();
    ComplexMatrix sum = ComplexMatrix::Zero(d, d);
    bool positive = true;
    report.min_eigenvalue = std::numeric_limits<double>::infinity();
    for (const auto& e : m.effects) {
        if (e.rows() != d || e.cols() != d) fail(ErrorCode::dimension, "povm: effect shapes differ");
        const PositivityReport pos = is_positive(e, tol);
        positive = positive && pos.positive;
        report.min_eigenvalue = std::min(report.min_eigenvalue, pos.min_eigenvalue);
        sum += e;
    }
    report.completeness_residual = (sum - ComplexMatrix::Identity(d, d)).norm();
    report.valid = positive && report.completeness_residual < kFlagSlack &&
                   (m.outcomes.empty() || m.outcomes.size() == m.effects.size());
    return report;
}

std::vector<double> measure(const DensityMatrix& rho, const Povm& m, const Tolerances& tol) {
    if (m.dim() != rho.dim()) fail(ErrorCode::dimension, "measure: POVM and state dims differ");
    const PovmReport report = check_povm(m, tol);
    if (!report.valid) {
        std::ostringstream os;
        os << "measure: invalid POVM (min eigenvalue " << report.min_eigenvalue
           << ", completeness residual " << report.completeness_residual << ")";
        fail(ErrorCode::invalid_argument, os.str());
    }
    std::vector<double> p;
    p.reserve(m.size());
    double total = 0.0;
    for (const auto& e : m.effects) {
        double v = (e * rho.matrix()).trace().real();
        if (v < -kClipSlack) {
            fail(ErrorCode::normalization, "measure: negative probability " + format_label(v));
        }
        v = std::max(v, 0.0);
        total += v;
        p.push_back(v);
    }
    if (std::abs(total - 1.0) > kNormSlack) {
        fail(ErrorCode::normalization, "measure: probabilities sum to " + format_label(total));
    }
    for (double& v : p) v /= total;
    return p;
}

std::vector<std::uint64_t> sample_outcomes(const DensityMatrix& rho, const Povm& m, std::uint64_t n,
                                           std::uint64_t seed, const Tolerances& tol) {
    const std::vector<double> p = measure(rho, m, tol);
    std::vector<double> cdf(p.size());
    std::partial_sum(p.begin(), p.end(), cdf.begin());
    Rng rng(Rng::mix(seed, n), p.size());
    std::vector<std::uint64_t> counts(p.size(), 0);
    for (std::uint64_t draw = 0; draw < n; ++draw) {
        const double u = rng.uniform();
        auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
        auto k = static_cast<std::size_t>(it - cdf.begin());
        if (k >= p.size()) {
            // u landed past the rounded total; fall back to the last populated bin
            k = p.size() - 1;
            while (p[k] == 0.0 && k > 0) --k;
        }
        ++counts[k];
    }
    return counts;
}

Povm observable_from_hermitian(const ComplexMatrix& a, const Tolerances& tol) {
    const SpectralDecomposition spec = spectral_decomposition(a, tol);
    Povm out;
    for (std::size_t i = 0; i < spec.size(); ++i) {
        out.outcomes.push_back(format_label(spec.eigenvalues[i]));
        out.effects.push_back(spec.projectors[i]);
    }
    return out;
}

Povm effect_observable(const Effect& e) {
    Povm out;
    out.outcomes = {"true", "false"};
    out.effects = {e.matrix(), identity(e.dim()) - e.matrix()};
    return out;
}

Povm coarse_grain(const Povm& m, const StochasticMatrix& pi) {
    if (pi.inputs() != m.size()) {
        fail(ErrorCode::dimension, "coarse_grain: stochastic matrix columns do not match outcomes");
    }
    Povm out;
    const Eigen::Index d = idx(m.dim());
    for (std::size_t beta = 0; beta < pi.outputs(); ++beta) {
        ComplexMatrix e = ComplexMatrix::Zero(d, d);
        for (std::size_t alpha = 0; alpha < m.size(); ++alpha) {
            e += pi.pi()(idx(beta), idx(alpha)) * m.effects[alpha];
        }
        out.outcomes.push_back(std::to_string(beta));
        out.effects.push_back(std::move(e));
    }
    return out;
}

Effect accessible_effect(const KrausChannel& ch, const Effect& x, const Tolerances& tol) {
    return Effect::from(hermitian_part(adjoint_apply(ch, x.matrix())), tol);
}

StochasticMatrix StochasticMatrix::from(RealMatrix pi) {
    if (pi.size() == 0) fail(ErrorCode::dimension, "stochastic matrix: empty");
    for (Eigen::Index j = 0; j < pi.cols(); ++j) {
        for (Eigen::Index i = 0; i < pi.rows(); ++i) {
            if (!(pi(i, j) >= 0.0) || !std::isfinite(pi(i, j))) {
                fail(ErrorCode::invalid_argument, "stochastic matrix: negative or non-finite entry");
            }
        }
        if (std::abs(pi.col(j).sum() - 1.0) > kNormSlack) {
            fail(ErrorCode::normalization, "stochastic matrix: column " + std::to_string(j) +
                                               " does not sum to 1");
        }
    }
    return StochasticMatrix(std::move(pi));
}

StochasticMatrix StochasticMatrix::identity(std::size_t n) {
    return StochasticMatrix(RealMatrix::Identity(idx(n), idx(n)));
}

StochasticMatrix StochasticMatrix::after(const StochasticMatrix& first) const {
    if (inputs() != first.outputs()) fail(ErrorCode::dimension, "stochastic composition: dims differ");
    return StochasticMatrix(pi_ * first.pi_);
}

std::vector<double> classical_apply(const StochasticMatrix& pi, std::span<const double> p) {
    if (p.size() != pi.inputs()) fail(ErrorCode::dimension, "classical_apply: length mismatch");
    double total = 0.0;
    for (double x : p) {
        if (!(x >= -kClipSlack)) fail(ErrorCode::normalization, "classical_apply: negative probability");
        total += x;
    }
    if (std::abs(total - 1.0) > kNormSlack) {
        fail(ErrorCode::normalization, "classical_apply: input does not sum to 1");
    }
    const Eigen::Map<const RealVector> in(p.data(), idx(p.size()));
    RealVector q = pi.pi() * in;
    q = q.cwiseMax(0.0);
    q /= q.sum();
    return {q.data(), q.data() + q.size()};
}

bool is_sharp(const Povm& m) {
    return std::all_of(m.effects.begin(), m.effects.end(),
                       [](const ComplexMatrix& e) { return (e * e - e).norm() < kFlagSlack; });
}

}  // namespace qalg
