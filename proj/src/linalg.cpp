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

#include "qalg/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

namespace qalg {

const char* error_code_name(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::dimension: return "dimension";
        case ErrorCode::not_hermitian: return "not_hermitian";
        case ErrorCode::not_positive: return "not_positive";
        case ErrorCode::invalid_argument: return "invalid_argument";
        case ErrorCode::ill_conditioned: return "ill_conditioned";
        case ErrorCode::not_cp: return "not_cp";
        case ErrorCode::no_equivalence: return "no_equivalence";
        case ErrorCode::no_intertwiner: return "no_intertwiner";
        case ErrorCode::degenerate_sample: return "degenerate_sample";
        case ErrorCode::not_a_factor: return "not_a_factor";
        case ErrorCode::no_convergence: return "no_convergence";
        case ErrorCode::normalization: return "normalization";
    }
    return "unknown";
}

void Tolerances::validate() const {
    for (double v : {eps_herm, eps_pos, eps_rank, eps_cluster}) {
        if (!(v > 0.0) || !std::isfinite(v)) {
            fail(ErrorCode::invalid_argument, "tolerances must be strictly positive and finite");
        }
    }
}

void require_square(const ComplexMatrix& a, const char* what) {
    if (a.rows() != a.cols()) {
        std::ostringstream os;
        os << what << ": expected a square matrix, got " << a.rows() << "x" << a.cols();
        fail(ErrorCode::dimension, os.str());
    }
}

ComplexMatrix identity(std::size_t n) {
    auto dim = static_cast<Eigen::Index>(n);
    return ComplexMatrix::Identity(dim, dim);
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
    ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

ComplexMatrix direct_sum(std::span<const ComplexMatrix> blocks) {
    Eigen::Index total = 0;
    for (const auto& b : blocks) {
        require_square(b, "direct_sum");
        total += b.rows();
    }
    ComplexMatrix out = ComplexMatrix::Zero(total, total);
    Eigen::Index offset = 0;
    for (const auto& b : blocks) {
        out.block(offset, offset, b.rows(), b.cols()) = b;
        offset += b.rows();
    }
    return out;
}

Complex hs_inner(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        fail(ErrorCode::dimension, "hs_inner: shape mismatch");
    }
    // Tr(a^dagger b) = sum_ij conj(a_ij) b_ij
    return (a.array().conjugate() * b.array()).sum();
}

ComplexMatrix partial_trace(const ComplexMatrix& z, BipartiteDims dims, Subsystem keep) {
    const auto da = static_cast<Eigen::Index>(dims.first);
    const auto db = static_cast<Eigen::Index>(dims.second);
    if (da == 0 || db == 0 || z.rows() != da * db || z.cols() != da * db) {
        std::ostringstream os;
        os << "partial_trace: dims (" << da << "," << db << ") inconsistent with "
           << z.rows() << "x" << z.cols() << " input";
        fail(ErrorCode::dimension, os.str());
    }
    if (keep == Subsystem::first) {
        ComplexMatrix out = ComplexMatrix::Zero(da, da);
        for (Eigen::Index i = 0; i < da; ++i) {
            for (Eigen::Index k = 0; k < da; ++k) {
                out(i, k) = z.block(i * db, k * db, db, db).trace();
            }
        }
        return out;
    }
    ComplexMatrix out = ComplexMatrix::Zero(db, db);
    for (Eigen::Index i = 0; i < da; ++i) {
        out += z.block(i * db, i * db, db, db);
    }
    return out;
}

double hermiticity_residual(const ComplexMatrix& a) {
    require_square(a, "hermiticity_residual");
    return (a - a.adjoint()).norm() / std::max(1.0, a.norm());
}

PositivityReport is_positive(const ComplexMatrix& a, const Tolerances& tol) {
    require_square(a, "is_positive");
    PositivityReport report;
    report.hermiticity_residual = hermiticity_residual(a);
    if (a.rows() == 0) {
        report.positive = true;
        return report;
    }
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(hermitian_part(a), Eigen::EigenvaluesOnly);
    const RealVector& values = solver.eigenvalues();
    report.min_eigenvalue = values(0);
    const double scale = std::max({1.0, std::abs(values(0)), std::abs(values(values.size() - 1))});
    report.positive = report.hermiticity_residual <= tol.eps_herm &&
                      report.min_eigenvalue >= -tol.eps_pos * scale;
    return report;
}

SpectralDecomposition spectral_decomposition(const ComplexMatrix& a, const Tolerances& tol) {
    require_square(a, "spectral_decomposition");
    if (hermiticity_residual(a) > tol.eps_herm) {
        fail(ErrorCode::not_hermitian, "spectral_decomposition: input is not Hermitian");
    }
    SpectralDecomposition out;
    const Eigen::Index n = a.rows();
    if (n == 0) return out;

    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(hermitian_part(a));
    const RealVector& values = solver.eigenvalues();
    const ComplexMatrix& vectors = solver.eigenvectors();
    const double radius = std::max(std::abs(values(0)), std::abs(values(n - 1)));
    const double gap = tol.eps_cluster * std::max(1.0, radius);

    // Eigenvalues come sorted, so transitive merging only needs neighbours.
    Eigen::Index start = 0;
    while (start < n) {
        Eigen::Index stop = start + 1;
        while (stop < n && values(stop) - values(stop - 1) <= gap) ++stop;
        const Eigen::Index count = stop - start;
        ComplexMatrix basis = vectors.middleCols(start, count);
        ComplexMatrix projector = basis * basis.adjoint();
        out.eigenvalues.push_back(values.segment(start, count).mean());
        out.projectors.push_back(hermitian_part(projector));
        out.bases.push_back(std::move(basis));
        start = stop;
    }
    return out;
}

ComplexMatrix SpectralDecomposition::reconstruct() const {
    if (projectors.empty()) return {};
    ComplexMatrix out = ComplexMatrix::Zero(projectors.front().rows(), projectors.front().cols());
    for (std::size_t i = 0; i < eigenvalues.size(); ++i) {
        out += eigenvalues[i] * projectors[i];
    }
    return out;
}

std::vector<ComplexMatrix> lagrange_projectors(const ComplexMatrix& a, const Tolerances& tol) {
    const SpectralDecomposition spec = spectral_decomposition(a, tol);
    double radius = 0.0;
    for (double v : spec.eigenvalues) radius = std::max(radius, std::abs(v));
    const double scale = std::max(1.0, radius);
    const double zero_gap = tol.eps_cluster * scale;

    std::vector<double> nonzero;
    ComplexMatrix unit = ComplexMatrix::Zero(a.rows(), a.cols());
    for (std::size_t i = 0; i < spec.size(); ++i) {
        if (std::abs(spec.eigenvalues[i]) > zero_gap) {
            nonzero.push_back(spec.eigenvalues[i]);
            unit += spec.projectors[i];
        }
    }

    // The interpolation polynomial amplifies roundoff by roughly ||A|| / gap
    // for each close pair; below a gap of sqrt(eps_cluster) the result can no
    // longer be trusted to match the eigenprojectors.
    const double min_gap = std::sqrt(tol.eps_cluster);
    for (std::size_t i = 0; i + 1 < nonzero.size(); ++i) {
        if (nonzero[i + 1] - nonzero[i] < min_gap) {
            std::ostringstream os;
            os << "lagrange_projectors: eigenvalue gap " << nonzero[i + 1] - nonzero[i]
               << " below conditioning threshold " << min_gap;
            fail(ErrorCode::ill_conditioned, os.str());
        }
    }

    // Clusters of several close eigenvalues make P_j steep at the remaining
    // nodes: an error of eps ||A|| in a node moves P_j(a_k) by that much times
    // |P_j'(a_k)|.
    double slope = 0.0;
    for (std::size_t j = 0; j < nonzero.size(); ++j) {
        for (std::size_t k = 0; k < nonzero.size(); ++k) {
            if (k == j) continue;
            double d = 1.0 / std::abs(nonzero[j] - nonzero[k]);
            for (std::size_t i = 0; i < nonzero.size(); ++i) {
                if (i != j && i != k) d *= std::abs((nonzero[k] - nonzero[i]) / (nonzero[j] - nonzero[i]));
            }
            slope = std::max(slope, d);
        }
    }
    const double amplification = std::numeric_limits<double>::epsilon() * scale * slope;
    if (amplification > tol.eps_cluster) {
        std::ostringstream os;
        os << "lagrange_projectors: clustered spectrum, estimated error " << amplification << " exceeds "
           << tol.eps_cluster;
        fail(ErrorCode::ill_conditioned, os.str());
    }

    const ComplexMatrix herm = hermitian_part(a);
    std::vector<ComplexMatrix> out;
    out.reserve(nonzero.size());
    for (std::size_t j = 0; j < nonzero.size(); ++j) {
        std::vector<std::size_t> others;
        for (std::size_t i = 0; i < nonzero.size(); ++i) {
            if (i != j) others.push_back(i);
        }
        std::sort(others.begin(), others.end(), [&](std::size_t x, std::size_t y) {
            return std::abs(nonzero[j] - nonzero[x]) < std::abs(nonzero[j] - nonzero[y]);
        });
        ComplexMatrix p = unit;
        for (std::size_t i : others) {
            p = (p * (herm - nonzero[i] * unit) / (nonzero[j] - nonzero[i])).eval();
        }
        out.push_back(std::move(p));
    }
    return out;
}

ComplexMatrix range_projector(const ComplexMatrix& a, const Tolerances& tol) {
    require_square(a, "range_projector");
    if (a.rows() == 0) return {};
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(hermitian_part(a));
    const RealVector& values = solver.eigenvalues();
    const double largest = values.cwiseAbs().maxCoeff();
    ComplexMatrix out = ComplexMatrix::Zero(a.rows(), a.cols());
    if (largest == 0.0) return out;
    for (Eigen::Index i = 0; i < values.size(); ++i) {
        if (std::abs(values(i)) > tol.eps_rank * largest) {
            const auto v = solver.eigenvectors().col(i);
            out += v * v.adjoint();
        }
    }
    return hermitian_part(out);
}

std::size_t numerical_rank(const ComplexMatrix& a, const Tolerances& tol) {
    if (a.size() == 0) return 0;
    Eigen::JacobiSVD<ComplexMatrix> svd(a);
    const RealVector& s = svd.singularValues();
    if (s.size() == 0 || s(0) == 0.0) return 0;
    return static_cast<std::size_t>((s.array() >= tol.eps_rank * s(0)).count());
}

ComplexMatrix matrix_sqrt(const ComplexMatrix& a, const Tolerances& tol) {
    const PositivityReport report = is_positive(a, tol);
    if (!report.positive) {
        std::ostringstream os;
        os << "matrix_sqrt: input not positive (min eigenvalue " << report.min_eigenvalue << ")";
        fail(ErrorCode::not_positive, os.str());
    }
    if (a.rows() == 0) return {};
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(hermitian_part(a));
    const RealVector roots = solver.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    const ComplexMatrix& v = solver.eigenvectors();
    return hermitian_part(v * roots.cast<Complex>().asDiagonal() * v.adjoint());
}

std::vector<ComplexMatrix> orthonormalize_span(std::span<const ComplexMatrix> mats,
                                               const Tolerances& tol) {
    std::vector<ComplexMatrix> basis;
    if (mats.empty()) return basis;
    double scale = 0.0;
    for (const auto& m : mats) {
        if (m.rows() != mats.front().rows() || m.cols() != mats.front().cols()) {
            fail(ErrorCode::dimension, "orthonormalize_span: shape mismatch");
        }
        scale = std::max(scale, m.norm());
    }
    if (scale == 0.0) return basis;
    const double threshold = tol.eps_rank * scale;

    for (const auto& m : mats) {
        ComplexMatrix r = m;
        // Two passes of modified Gram-Schmidt keep the basis orthonormal to
        // working precision.
        for (int pass = 0; pass < 2; ++pass) {
            for (const auto& b : basis) r -= hs_inner(b, r) * b;
        }
        const double norm = r.norm();
        if (norm > threshold) basis.push_back(r / norm);
    }
    return basis;
}

ComplexMatrix range_isometry(const ComplexMatrix& p) {
    require_square(p, "range_isometry");
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(hermitian_part(p));
    const RealVector& values = solver.eigenvalues();
    std::vector<Eigen::Index> keep;
    for (Eigen::Index i = values.size() - 1; i >= 0; --i) {
        if (values(i) > 0.5) keep.push_back(i);
    }
    ComplexMatrix out(p.rows(), static_cast<Eigen::Index>(keep.size()));
    for (std::size_t k = 0; k < keep.size(); ++k) {
        out.col(static_cast<Eigen::Index>(k)) = solver.eigenvectors().col(keep[k]);
    }
    return out;
}

ComplexMatrix complete_unitary(const ComplexMatrix& c) {
    const Eigen::Index n = c.rows();
    const Eigen::Index r = c.cols();
    if (r > n) fail(ErrorCode::dimension, "complete_unitary: more columns than rows");
    if (r == 0) return ComplexMatrix::Identity(n, n);
    Eigen::HouseholderQR<ComplexMatrix> qr(c);
    ComplexMatrix q = qr.householderQ() * ComplexMatrix::Identity(n, n);
    // The leading r columns of Q span range(c); the trailing ones are the
    // orthogonal complement.
    q.leftCols(r) = c;
    return q;
}

}  // namespace qalg
