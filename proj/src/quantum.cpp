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

#include "qalg/quantum.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace qalg {

namespace {

constexpr double kTraceSlack = 1e-9;
constexpr double kNormSlack = 1e-9;
constexpr double kPuritySlack = 1e-8;
constexpr double kEquivalenceSlack = 1e-8;

}  // namespace

StateReport check_state(const ComplexMatrix& m, const Tolerances& tol) {
    require_square(m, "check_state");
    const PositivityReport pos = is_positive(m, tol);
    StateReport report;
    report.min_eigenvalue = pos.min_eigenvalue;
    report.hermiticity_residual = pos.hermiticity_residual;
    report.trace_deviation = std::abs(m.trace() - Complex(1.0, 0.0));
    report.valid = m.rows() > 0 && pos.positive && report.trace_deviation <= kTraceSlack;
    return report;
}

DensityMatrix DensityMatrix::from(ComplexMatrix m, const Tolerances& tol) {
    const StateReport report = check_state(m, tol);
    if (!report.valid) {
        std::ostringstream os;
        os << "not a density matrix: min eigenvalue " << report.min_eigenvalue
           << ", trace deviation " << report.trace_deviation << ", hermiticity residual "
           << report.hermiticity_residual;
        fail(report.min_eigenvalue < 0 ? ErrorCode::not_positive : ErrorCode::normalization,
             os.str());
    }
    return DensityMatrix(std::move(m));
}

EffectReport check_effect(const ComplexMatrix& m, const Tolerances& tol) {
    require_square(m, "check_effect");
    const PositivityReport lower = is_positive(m, tol);
    const PositivityReport upper = is_positive(identity(static_cast<std::size_t>(m.rows())) - m, tol);
    EffectReport report;
    report.min_eigenvalue = lower.min_eigenvalue;
    report.max_eigenvalue = 1.0 - upper.min_eigenvalue;
    report.hermiticity_residual = lower.hermiticity_residual;
    report.valid = lower.positive && upper.positive;
    return report;
}

Effect Effect::from(ComplexMatrix m, const Tolerances& tol) {
    const EffectReport report = check_effect(m, tol);
    if (!report.valid) {
        std::ostringstream os;
        os << "not an effect: spectrum in [" << report.min_eigenvalue << ", "
           << report.max_eigenvalue << "], hermiticity residual " << report.hermiticity_residual;
        fail(ErrorCode::not_positive, os.str());
    }
    return Effect(std::move(m));
}

Ensemble Ensemble::from(std::vector<EnsembleItem> items) {
    if (items.empty()) fail(ErrorCode::invalid_argument, "ensemble: no items");
    const Eigen::Index dim = items.front().state.size();
    if (dim == 0) fail(ErrorCode::dimension, "ensemble: empty state vector");
    double total = 0.0;
    for (const auto& item : items) {
        if (item.state.size() != dim) fail(ErrorCode::dimension, "ensemble: state dimensions differ");
        if (!(item.probability >= 0.0)) fail(ErrorCode::normalization, "ensemble: negative weight");
        if (std::abs(item.state.norm() - 1.0) > kNormSlack) {
            fail(ErrorCode::normalization, "ensemble: state vector not normalized");
        }
        total += item.probability;
    }
    if (std::abs(total - 1.0) > kNormSlack) {
        fail(ErrorCode::normalization, "ensemble: weights do not sum to 1");
    }
    return Ensemble(std::move(items));
}

std::vector<double> Ensemble::weights() const {
    std::vector<double> out;
    out.reserve(items_.size());
    for (const auto& item : items_) out.push_back(item.probability);
    return out;
}

double BlochVector::norm() const { return std::sqrt(r[0] * r[0] + r[1] * r[1] + r[2] * r[2]); }

std::array<ComplexMatrix, 4> pauli_matrices() {
    const Complex i(0.0, 1.0);
    std::array<ComplexMatrix, 4> s;
    s[0] = ComplexMatrix::Identity(2, 2);
    s[1].resize(2, 2);
    s[1] << 0.0, 1.0, 1.0, 0.0;
    s[2].resize(2, 2);
    s[2] << 0.0, -i, i, 0.0;
    s[3].resize(2, 2);
    s[3] << 1.0, 0.0, 0.0, -1.0;
    return s;
}

DensityMatrix density_from_ensemble(const Ensemble& e) {
    const auto d = static_cast<Eigen::Index>(e.dim());
    ComplexMatrix rho = ComplexMatrix::Zero(d, d);
    for (const auto& item : e.items()) {
        rho += item.probability * item.state * item.state.adjoint();
    }
    return DensityMatrix::from(hermitian_part(rho));
}

Complex expectation(const DensityMatrix& rho, const ComplexMatrix& a) {
    if (a.rows() != rho.matrix().rows() || a.cols() != rho.matrix().cols()) {
        fail(ErrorCode::dimension, "expectation: shape mismatch");
    }
    return (rho.matrix() * a).trace();
}

double entropy(const DensityMatrix& rho) {
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(rho.matrix(), Eigen::EigenvaluesOnly);
    double s = 0.0;
    for (double lambda : solver.eigenvalues()) {
        if (lambda > 0.0) s -= lambda * std::log(lambda);
    }
    return std::max(s, 0.0);
}

double shannon_entropy(std::span<const double> p) {
    if (p.empty()) fail(ErrorCode::normalization, "shannon_entropy: empty distribution");
    double total = 0.0;
    double s = 0.0;
    for (double x : p) {
        if (!(x >= 0.0)) fail(ErrorCode::normalization, "shannon_entropy: negative probability");
        total += x;
        if (x > 0.0) s -= x * std::log(x);
    }
    if (std::abs(total - 1.0) > kNormSlack) {
        fail(ErrorCode::normalization, "shannon_entropy: probabilities do not sum to 1");
    }
    return s;
}

bool is_pure(const DensityMatrix& rho) {
    const ComplexMatrix& m = rho.matrix();
    return (m * m - m).norm() < kPuritySlack;
}

ComplexVector purify(const DensityMatrix& rho) {
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(rho.matrix());
    const auto d = static_cast<Eigen::Index>(rho.dim());
    ComplexVector psi = ComplexVector::Zero(d * d);
    for (Eigen::Index i = 0; i < d; ++i) {
        const double p = std::max(solver.eigenvalues()(i), 0.0);
        if (p == 0.0) continue;
        const ComplexVector v = solver.eigenvectors().col(i);
        psi += std::sqrt(p) * kron(v, v);
    }
    return psi / psi.norm();
}

DensityMatrix bloch_to_density(const BlochVector& r) {
    if (r.norm() > 1.0 + kNormSlack) {
        fail(ErrorCode::invalid_argument, "bloch_to_density: |r| > 1");
    }
    const auto s = pauli_matrices();
    ComplexMatrix rho = 0.5 * s[0];
    for (int k = 0; k < 3; ++k) rho += 0.5 * r.r[static_cast<std::size_t>(k)] * s[static_cast<std::size_t>(k + 1)];
    return DensityMatrix::from(rho);
}

BlochVector density_to_bloch(const DensityMatrix& rho) {
    if (rho.dim() != 2) fail(ErrorCode::dimension, "density_to_bloch: state is not 2x2");
    const auto s = pauli_matrices();
    BlochVector out;
    for (std::size_t k = 0; k < 3; ++k) out.r[k] = (rho.matrix() * s[k + 1]).trace().real();
    return out;
}

namespace {

/// Coefficients c_ik with sqrt(p_i) psi_i = sum_k c_ik sqrt(lambda_k) v_k,
/// rows padded to `rows`, snapped to the nearest isometry.
ComplexMatrix eigen_coefficients(const Ensemble& e, const ComplexMatrix& vectors,
                                 const RealVector& lambdas, Eigen::Index rows) {
    const Eigen::Index rank = vectors.cols();
    ComplexMatrix c = ComplexMatrix::Zero(rows, rank);
    for (std::size_t i = 0; i < e.size(); ++i) {
        const auto& item = e.items()[i];
        const ComplexVector a = std::sqrt(item.probability) * item.state;
        for (Eigen::Index k = 0; k < rank; ++k) {
            c(static_cast<Eigen::Index>(i), k) = vectors.col(k).dot(a) / std::sqrt(lambdas(k));
        }
    }
    Eigen::JacobiSVD<ComplexMatrix> svd(c, Eigen::ComputeThinU | Eigen::ComputeThinV);
    return svd.matrixU() * svd.matrixV().adjoint();
}

}  // namespace

ComplexMatrix ensemble_equivalence_unitary(const Ensemble& e1, const Ensemble& e2,
                                           const Tolerances& tol) {
    if (e1.dim() != e2.dim()) fail(ErrorCode::dimension, "ensemble_equivalence_unitary: dims differ");
    const ComplexMatrix rho1 = density_from_ensemble(e1).matrix();
    const ComplexMatrix rho2 = density_from_ensemble(e2).matrix();
    const double gap = (rho1 - rho2).norm();
    if (gap > kEquivalenceSlack) {
        std::ostringstream os;
        os << "ensembles induce different states (||rho1 - rho2|| = " << gap << ")";
        fail(ErrorCode::no_equivalence, os.str());
    }

    // Both ensembles are related to the eigen-ensemble of rho; composing the
    // two relations gives u.
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(hermitian_part(0.5 * (rho1 + rho2)));
    const RealVector& values = solver.eigenvalues();
    const double largest = values.maxCoeff();
    std::vector<Eigen::Index> kept;
    for (Eigen::Index k = values.size() - 1; k >= 0; --k) {
        if (values(k) > tol.eps_rank * largest) kept.push_back(k);
    }
    const auto rank = static_cast<Eigen::Index>(kept.size());
    ComplexMatrix vectors(values.size(), rank);
    RealVector lambdas(rank);
    for (Eigen::Index k = 0; k < rank; ++k) {
        vectors.col(k) = solver.eigenvectors().col(kept[static_cast<std::size_t>(k)]);
        lambdas(k) = values(kept[static_cast<std::size_t>(k)]);
    }

    const auto n = static_cast<Eigen::Index>(std::max({e1.size(), e2.size(), kept.size()}));
    const ComplexMatrix u1 = complete_unitary(eigen_coefficients(e1, vectors, lambdas, n));
    const ComplexMatrix u2 = complete_unitary(eigen_coefficients(e2, vectors, lambdas, n));
    return u1 * u2.adjoint();
}

double ensemble_relation_residual(const Ensemble& e1, const Ensemble& e2, const ComplexMatrix& u) {
    const Eigen::Index n = u.rows();
    const auto d = static_cast<Eigen::Index>(e1.dim());
    auto stack = [&](const Ensemble& e) {
        ComplexMatrix out = ComplexMatrix::Zero(d, n);
        for (std::size_t i = 0; i < e.size() && static_cast<Eigen::Index>(i) < n; ++i) {
            const auto& item = e.items()[i];
            out.col(static_cast<Eigen::Index>(i)) = std::sqrt(item.probability) * item.state;
        }
        return out;
    };
    const ComplexMatrix a = stack(e1);
    const ComplexMatrix b = stack(e2);
    // column i of b * u^T is sum_j u_ij b_j
    const ComplexMatrix diff = a - b * u.transpose();
    return diff.colwise().norm().maxCoeff();
}

ComplexVector maximally_entangled(std::size_t n) {
    if (n < 1) fail(ErrorCode::invalid_argument, "maximally_entangled: n must be >= 1");
    const auto d = static_cast<Eigen::Index>(n);
    ComplexVector omega = ComplexVector::Zero(d * d);
    const double amp = 1.0 / std::sqrt(static_cast<double>(n));
    for (Eigen::Index i = 0; i < d; ++i) omega(i * d + i) = amp;
    return omega;
}

DensityMatrix maximally_mixed(std::size_t n) {
    if (n < 1) fail(ErrorCode::invalid_argument, "maximally_mixed: n must be >= 1");
    return DensityMatrix::from(identity(n) / static_cast<double>(n));
}

bool equal_up_to_phase(const ComplexVector& a, const ComplexVector& b, double tol) {
    if (a.size() != b.size()) return false;
    const double na = a.norm();
    const double nb = b.norm();
    return std::abs(na - nb) <= tol && std::abs(std::abs(a.dot(b)) - na * nb) <= tol;
}

}  // namespace qalg
