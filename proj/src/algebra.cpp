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

#include "qalg/algebra.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "qalg/random.hpp"

namespace qalg {

namespace {

// One initial sample plus this many retries for every randomized step.
constexpr int kRetries = 8;
constexpr double kContentSlack = 1e-9;
constexpr double kUnitalSlack = 1e-8;

Eigen::Index idx(std::size_t n) { return static_cast<Eigen::Index>(n); }

/// Lexicographic order on matrix entries (column-major, real then imaginary),
/// ignoring differences below kContentSlack.
bool content_less(const ComplexMatrix& a, const ComplexMatrix& b) {
    for (Eigen::Index i = 0; i < a.size(); ++i) {
        const Complex x = a.data()[i];
        const Complex y = b.data()[i];
        if (std::abs(x.real() - y.real()) > kContentSlack) return x.real() < y.real();
        if (std::abs(x.imag() - y.imag()) > kContentSlack) return x.imag() < y.imag();
    }
    return false;
}

/// Gram-Schmidt step against an orthonormal basis; returns true if `c`
/// contributed a new direction.
bool extend_basis(std::vector<ComplexMatrix>& basis, const ComplexMatrix& c, double threshold) {
    ComplexMatrix r = c;
    for (int pass = 0; pass < 2; ++pass) {
        for (const auto& b : basis) r -= hs_inner(b, r) * b;
    }
    const double norm = r.norm();
    if (norm <= threshold * std::max(1.0, c.norm())) return false;
    basis.push_back(r / norm);
    return true;
}

FactorDecomposition decompose_factor(const MatrixAlgebra& a, std::uint64_t seed,
                                     const Tolerances& tol) {
    FactorDecomposition out;
    out.support = range_isometry(a.unit());
    const Eigen::Index k = out.support.cols();
    if (k == 0 || a.dim() == 0) fail(ErrorCode::not_a_factor, "factor_decomposition: zero algebra");

    std::vector<ComplexMatrix> compressed;
    compressed.reserve(a.dim());
    for (const auto& b : a.basis()) {
        compressed.push_back(out.support.adjoint() * b * out.support);
    }
    const auto dim = static_cast<Eigen::Index>(a.dim());

    bool saw_unequal = false;
    for (int attempt = 0; attempt <= kRetries; ++attempt) {
        Rng rng(seed, static_cast<std::uint64_t>(attempt));
        // A generic Hermitian element of 1_m (x) M_n has n distinct eigenvalues
        // of multiplicity m; its eigenprojectors span a maximal abelian
        // subalgebra.
        const SpectralDecomposition spec =
            spectral_decomposition(rng.hermitian_combination(compressed), tol);
        const auto n = static_cast<Eigen::Index>(spec.size());
        const Eigen::Index m = k / n;
        bool equal = (k % n == 0) && (n * n == dim);
        for (const auto& basis : spec.bases) equal = equal && basis.cols() == m;
        if (!equal) {
            saw_unequal = true;
            continue;
        }

        // Intertwiners F_j = Q_0 X Q_j satisfy F_j^dagger F_j = alpha_j Q_j;
        // F_j / sqrt(alpha_j) carries range(Q_j) isometrically onto range(Q_0).
        const ComplexMatrix x = rng.combination(compressed);
        const double scale = x.squaredNorm();
        const ComplexMatrix& e0 = spec.bases[0];
        ComplexMatrix columns(k, k);
        for (Eigen::Index i = 0; i < m; ++i) columns.col(i * n) = e0.col(i);
        bool ok = true;
        for (Eigen::Index j = 1; j < n && ok; ++j) {
            const ComplexMatrix f = spec.projectors[0] * x * spec.projectors[static_cast<std::size_t>(j)];
            const double alpha = f.squaredNorm() / static_cast<double>(m);
            if (!(alpha > 1e-10 * scale)) {
                ok = false;
                break;
            }
            const ComplexMatrix ftf = f.adjoint() * f;
            if ((ftf - alpha * spec.projectors[static_cast<std::size_t>(j)]).norm() > 1e-6 * alpha) {
                saw_unequal = true;
                ok = false;
                break;
            }
            const ComplexMatrix ej = (f / std::sqrt(alpha)).adjoint() * e0;
            for (Eigen::Index i = 0; i < m; ++i) columns.col(i * n + j) = ej.col(i);
        }
        if (!ok) continue;
        out.m = static_cast<std::size_t>(m);
        out.n = static_cast<std::size_t>(n);
        out.u_block = columns.adjoint();
        return out;
    }
    std::ostringstream os;
    if (saw_unequal) {
        os << "factor_decomposition: eigenprojector ranks never matched a 1_m (x) M_n pattern "
           << "(seed " << seed << ")";
        fail(ErrorCode::not_a_factor, os.str());
    }
    os << "factor_decomposition: intertwiner samples degenerate after retries (seed " << seed << ")";
    fail(ErrorCode::degenerate_sample, os.str());
}

}  // namespace

ComplexMatrix algebra_unit(std::span<const ComplexMatrix> basis, const Tolerances& tol) {
    if (basis.empty()) return {};
    ComplexMatrix sum = ComplexMatrix::Zero(basis.front().rows(), basis.front().cols());
    for (const auto& b : basis) sum += b * b.adjoint();
    return range_projector(sum, tol);
}

MatrixAlgebra MatrixAlgebra::from_basis(std::size_t ambient_dim, std::vector<ComplexMatrix> basis,
                                        const Tolerances& tol) {
    for (const auto& b : basis) {
        if (b.rows() != idx(ambient_dim) || b.cols() != idx(ambient_dim)) {
            fail(ErrorCode::dimension, "algebra: basis element has the wrong shape");
        }
    }
    ComplexMatrix unit = basis.empty() ? ComplexMatrix::Zero(idx(ambient_dim), idx(ambient_dim))
                                       : algebra_unit(basis, tol);
    return MatrixAlgebra(ambient_dim, std::move(basis), std::move(unit));
}

ComplexMatrix MatrixAlgebra::project(const ComplexMatrix& x) const {
    ComplexMatrix out = ComplexMatrix::Zero(idx(ambient_dim_), idx(ambient_dim_));
    for (const auto& b : basis_) out += hs_inner(b, x) * b;
    return out;
}

double MatrixAlgebra::distance(const ComplexMatrix& x) const { return (x - project(x)).norm(); }

MatrixAlgebra generate_algebra(std::span<const ComplexMatrix> generators, const Tolerances& tol) {
    if (generators.empty()) fail(ErrorCode::invalid_argument, "generate_algebra: no generators");
    const Eigen::Index d = generators.front().rows();
    std::vector<ComplexMatrix> letters;
    for (const auto& g : generators) {
        if (g.rows() != d || g.cols() != d) {
            fail(ErrorCode::dimension, "generate_algebra: generators must be square of a common dimension");
        }
        const double norm = g.norm();
        if (norm == 0.0) continue;
        letters.push_back(g / norm);
        letters.push_back(g.adjoint() / norm);
    }

    // The algebra is the span of all nonempty words in the generators and
    // their adjoints. Closing span(letters) under left multiplication by the
    // letters produces every word, breadth first by word length.
    std::vector<ComplexMatrix> basis;
    for (const auto& l : letters) extend_basis(basis, l, tol.eps_rank);
    const auto max_dim = static_cast<std::size_t>(d * d);
    const std::size_t max_rounds = max_dim + 1;
    std::size_t frontier_begin = 0;
    std::size_t rounds = 0;
    while (frontier_begin < basis.size()) {
        if (++rounds > max_rounds) {
            fail(ErrorCode::no_convergence, "generate_algebra: closure did not stabilize");
        }
        const std::size_t frontier_end = basis.size();
        for (std::size_t i = frontier_begin; i < frontier_end; ++i) {
            for (const auto& l : letters) {
                extend_basis(basis, (l * basis[i]).eval(), tol.eps_rank);
                if (basis.size() > max_dim) {
                    fail(ErrorCode::no_convergence,
                         "generate_algebra: span exceeded d^2 (tolerance too tight?)");
                }
            }
        }
        frontier_begin = frontier_end;
    }
    return MatrixAlgebra::from_basis(static_cast<std::size_t>(d), std::move(basis), tol);
}

MatrixAlgebra center(const MatrixAlgebra& a, const Tolerances& tol) {
    const auto dim = idx(a.dim());
    const Eigen::Index d = idx(a.ambient_dim());
    if (dim == 0) return a;

    // Gram matrix of the commutator map c -> ([sum_k c_k B_k, B_l])_l; its
    // null space holds the coordinates of central elements.
    ComplexMatrix gram = ComplexMatrix::Zero(dim, dim);
    ComplexMatrix stacked(d * d, dim);
    for (Eigen::Index l = 0; l < dim; ++l) {
        const ComplexMatrix& bl = a.basis()[static_cast<std::size_t>(l)];
        for (Eigen::Index k = 0; k < dim; ++k) {
            const ComplexMatrix& bk = a.basis()[static_cast<std::size_t>(k)];
            const ComplexMatrix comm = bk * bl - bl * bk;
            stacked.col(k) = Eigen::Map<const ComplexVector>(comm.data(), d * d);
        }
        gram.noalias() += stacked.adjoint() * stacked;
    }
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(hermitian_part(gram));
    const RealVector& values = solver.eigenvalues();
    const double cutoff = tol.eps_rank * std::max(1.0, values.cwiseAbs().maxCoeff());

    std::vector<ComplexMatrix> basis;
    for (Eigen::Index c = 0; c < dim; ++c) {
        if (values(c) > cutoff) continue;
        ComplexMatrix z = ComplexMatrix::Zero(d, d);
        for (Eigen::Index k = 0; k < dim; ++k) z += solver.eigenvectors()(k, c) * a.basis()[static_cast<std::size_t>(k)];
        basis.push_back(std::move(z));
    }
    return MatrixAlgebra::from_basis(a.ambient_dim(), orthonormalize_span(basis, tol), tol);
}

std::vector<ComplexMatrix> central_projections(const MatrixAlgebra& a, std::uint64_t seed,
                                               const Tolerances& tol) {
    const MatrixAlgebra z = center(a, tol);
    if (z.dim() == 0) return {};
    for (int attempt = 0; attempt <= kRetries; ++attempt) {
        Rng rng(seed, static_cast<std::uint64_t>(attempt));
        const ComplexMatrix h = rng.hermitian_combination(z.basis());
        // Shift the spectrum on the support of the unit away from the kernel,
        // which keeps eigenvalue 0.
        const double shift = 2.0 * h.norm() + 1.0;
        const SpectralDecomposition spec = spectral_decomposition(h + shift * a.unit(), tol);
        std::vector<ComplexMatrix> projections;
        for (std::size_t i = 0; i < spec.size(); ++i) {
            if (spec.eigenvalues[i] > 0.5) projections.push_back(spec.projectors[i]);
        }
        if (projections.size() == z.dim()) {
            std::sort(projections.begin(), projections.end(), content_less);
            return projections;
        }
    }
    std::ostringstream os;
    os << "central_projections: random central elements stayed degenerate after " << kRetries
       << " retries (seed " << seed << ")";
    fail(ErrorCode::degenerate_sample, os.str());
}

FactorDecomposition factor_decomposition(const MatrixAlgebra& a, std::uint64_t seed,
                                         const Tolerances& tol) {
    const std::size_t center_dim = center(a, tol).dim();
    if (center_dim != 1) {
        fail(ErrorCode::not_a_factor,
             "factor_decomposition: center has dimension " + std::to_string(center_dim));
    }
    return decompose_factor(a, seed, tol);
}

std::size_t AlgebraStructure::offset(std::size_t i) const {
    std::size_t o = 0;
    for (std::size_t b = 0; b < i && b < blocks.size(); ++b) o += blocks[b].m * blocks[b].n;
    return o;
}

double off_pattern_residual(const AlgebraStructure& s, std::span<const ComplexMatrix> mats) {
    double worst = 0.0;
    for (const auto& b : mats) {
        const double norm = b.norm();
        if (norm == 0.0) continue;
        const ComplexMatrix conj = s.u * b * s.u.adjoint();
        ComplexMatrix pattern = ComplexMatrix::Zero(conj.rows(), conj.cols());
        Eigen::Index o = 0;
        for (const auto& blk : s.blocks) {
            const auto size = idx(blk.m * blk.n);
            const ComplexMatrix factor =
                partial_trace(conj.block(o, o, size, size), {blk.m, blk.n}, Subsystem::second) /
                static_cast<double>(blk.m);
            pattern.block(o, o, size, size) = kron(identity(blk.m), factor);
            o += size;
        }
        worst = std::max(worst, (conj - pattern).norm() / norm);
    }
    return worst;
}

AlgebraStructure structure_decomposition(const MatrixAlgebra& a, std::uint64_t seed,
                                         const Tolerances& tol) {
    const std::size_t d = a.ambient_dim();
    AlgebraStructure out;
    const ComplexMatrix kernel = range_isometry(identity(d) - a.unit());
    out.d0 = static_cast<std::size_t>(kernel.cols());

    struct Piece {
        AlgebraBlock block;
        ComplexMatrix rows;
    };
    std::vector<Piece> pieces;
    const std::vector<ComplexMatrix> projections = central_projections(a, seed, tol);
    for (std::size_t i = 0; i < projections.size(); ++i) {
        // A P_i is a factor with unit P_i, since P_i is a minimal central projection.
        std::vector<ComplexMatrix> products;
        products.reserve(a.dim());
        for (const auto& b : a.basis()) products.push_back(b * projections[i]);
        const MatrixAlgebra block =
            MatrixAlgebra::from_basis(d, orthonormalize_span(products, tol), tol);
        const FactorDecomposition f = decompose_factor(block, Rng::mix(seed, i + 1), tol);
        pieces.push_back({{f.m, f.n}, f.u_block * f.support.adjoint()});
    }
    // projections arrive in content order, so ties stay deterministic
    std::stable_sort(pieces.begin(), pieces.end(), [](const Piece& x, const Piece& y) {
        if (x.block.n != y.block.n) return x.block.n > y.block.n;
        return x.block.m > y.block.m;
    });

    out.u = ComplexMatrix(idx(d), idx(d));
    Eigen::Index row = 0;
    for (const auto& p : pieces) {
        out.blocks.push_back(p.block);
        out.u.middleRows(row, p.rows.rows()) = p.rows;
        row += p.rows.rows();
    }
    out.u.middleRows(row, kernel.cols()) = kernel.adjoint();
    row += kernel.cols();
    if (row != idx(d)) {
        fail(ErrorCode::dimension, "structure_decomposition: block dimensions do not add up to d");
    }
    out.residual = off_pattern_residual(out, a.basis());
    return out;
}

ComplexMatrix functional_to_matrix(const MatrixAlgebra& a, std::span<const Complex> values) {
    if (values.size() != a.dim()) {
        fail(ErrorCode::dimension, "functional_to_matrix: need one value per basis element");
    }
    // With an orthonormal basis, Tr(B_k^dagger B_l) = delta_kl, so
    // R = sum_k f(B_k) B_k^dagger. For the matrix-unit basis of M_d this is
    // sum_ij f(|i><j|) |j><i|.
    ComplexMatrix r = ComplexMatrix::Zero(idx(a.ambient_dim()), idx(a.ambient_dim()));
    for (std::size_t k = 0; k < values.size(); ++k) r += values[k] * a.basis()[k].adjoint();
    return r;
}

HybridState canonical_state(const MatrixAlgebra& a, const ComplexMatrix& r, std::uint64_t seed,
                            const Tolerances& tol) {
    if (r.rows() != idx(a.ambient_dim()) || r.cols() != idx(a.ambient_dim())) {
        fail(ErrorCode::dimension, "canonical_state: state does not match the ambient dimension");
    }
    HybridState out;
    out.structure = structure_decomposition(a, seed, tol);
    const ComplexMatrix conj = out.structure.u * r * out.structure.u.adjoint();

    double total = 0.0;
    Eigen::Index o = 0;
    for (const auto& blk : out.structure.blocks) {
        const auto size = idx(blk.m * blk.n);
        // Pinch with the central projection, then trace out the multiplicity.
        const ComplexMatrix sigma =
            partial_trace(conj.block(o, o, size, size), {blk.m, blk.n}, Subsystem::second);
        const PositivityReport pos = is_positive(sigma, tol);
        if (!pos.positive) {
            Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(hermitian_part(sigma));
            const ComplexVector v = solver.eigenvectors().col(0);
            ComplexMatrix effect = ComplexMatrix::Zero(conj.rows(), conj.cols());
            effect.block(o, o, size, size) = kron(identity(blk.m), v * v.adjoint());
            effect = out.structure.u.adjoint() * effect * out.structure.u;
            std::ostringstream os;
            os << "canonical_state: functional is not positive on the algebra; effect "
               << "with Tr(r E) = " << (r * effect).trace() << " (block " << out.blocks.size()
               << ", hermiticity residual " << pos.hermiticity_residual << ")";
            fail(ErrorCode::not_positive, os.str());
        }
        HybridBlock hb;
        hb.m = blk.m;
        hb.p = sigma.trace().real();
        hb.rho = hb.p > 1e-14 ? ComplexMatrix(hermitian_part(sigma) / hb.p)
                              : ComplexMatrix(identity(blk.n) / static_cast<double>(blk.n));
        total += hb.p;
        out.blocks.push_back(std::move(hb));
        o += size;
    }
    if (std::abs(total - 1.0) > kUnitalSlack) {
        std::ostringstream os;
        os << "canonical_state: functional is not unital (value on the unit " << total << ")";
        fail(ErrorCode::normalization, os.str());
    }
    return out;
}

HybridState canonical_state(const MatrixAlgebra& a, std::span<const Complex> functional,
                            std::uint64_t seed, const Tolerances& tol) {
    return canonical_state(a, functional_to_matrix(a, functional), seed, tol);
}

ComplexMatrix HybridState::reconstruct() const {
    const Eigen::Index d = structure.u.rows();
    ComplexMatrix block_form = ComplexMatrix::Zero(d, d);
    Eigen::Index o = 0;
    for (const auto& hb : blocks) {
        const auto size = idx(hb.m) * hb.rho.rows();
        block_form.block(o, o, size, size) =
            hb.p * kron(identity(hb.m) / static_cast<double>(hb.m), hb.rho);
        o += size;
    }
    return structure.u.adjoint() * block_form * structure.u;
}

}  // namespace qalg
