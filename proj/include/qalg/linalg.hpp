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

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "qalg/error.hpp"

namespace qalg {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

/// Numerical slack used wherever an exact-arithmetic predicate (Hermitian,
/// positive, rank, degenerate eigenvalue) has to be decided in floating point.
/// All four are relative to max(1, scale of the input).
struct Tolerances {
    double eps_herm = 1e-10;
    double eps_pos = 1e-10;
    double eps_rank = 1e-10;
    double eps_cluster = 1e-8;

    /// Throws invalid_argument unless every field is strictly positive and finite.
    void validate() const;
};

/// Distinct eigenvalues (ascending) of a Hermitian matrix together with the
/// orthogonal projectors onto the matching eigenspaces. `bases[i]` holds an
/// orthonormal set of columns spanning the range of `projectors[i]`.
struct SpectralDecomposition {
    std::vector<double> eigenvalues;
    std::vector<ComplexMatrix> projectors;
    std::vector<ComplexMatrix> bases;

    std::size_t size() const { return eigenvalues.size(); }
    ComplexMatrix reconstruct() const;
};

struct PositivityReport {
    bool positive = false;
    double min_eigenvalue = 0.0;
    double hermiticity_residual = 0.0;
};

/// Which tensor factor of a bipartite space an operation refers to.
enum class Subsystem { first, second };

struct BipartiteDims {
    std::size_t first = 0;
    std::size_t second = 0;

    std::size_t total() const { return first * second; }
};

ComplexMatrix identity(std::size_t n);

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

/// Block-diagonal matrix with the given square blocks along the diagonal.
ComplexMatrix direct_sum(std::span<const ComplexMatrix> blocks);

/// Tr(a^dagger b).
Complex hs_inner(const ComplexMatrix& a, const ComplexMatrix& b);

/// Reduces `z` on C^first (x) C^second to the factor named by `keep`.
ComplexMatrix partial_trace(const ComplexMatrix& z, BipartiteDims dims, Subsystem keep);

/// ||a - a^dagger||_F / max(1, ||a||_F).
double hermiticity_residual(const ComplexMatrix& a);

PositivityReport is_positive(const ComplexMatrix& a, const Tolerances& tol = {});

/// Eigen-decomposes a Hermitian matrix and merges eigenvalues closer than
/// eps_cluster * max(1, spectral radius) into a single degenerate cluster.
SpectralDecomposition spectral_decomposition(const ComplexMatrix& a, const Tolerances& tol = {});

/// Spectral projectors of the nonzero eigenvalues, evaluated through the
/// interpolation polynomial prod_{i != j} (A - a_i 1_A) / (a_j - a_i), where
/// 1_A is the range projector of A. Order matches the nonzero eigenvalues of
/// spectral_decomposition(). Throws ill_conditioned when two nonzero
/// eigenvalues are closer than sqrt(eps_cluster), or when a cluster of close
/// eigenvalues makes the estimated roundoff in the result exceed eps_cluster.
std::vector<ComplexMatrix> lagrange_projectors(const ComplexMatrix& a, const Tolerances& tol = {});

/// Orthogonal projector onto the range of a Hermitian matrix (A^0).
ComplexMatrix range_projector(const ComplexMatrix& a, const Tolerances& tol = {});

/// Number of singular values >= eps_rank * largest singular value.
std::size_t numerical_rank(const ComplexMatrix& a, const Tolerances& tol = {});

ComplexMatrix matrix_sqrt(const ComplexMatrix& a, const Tolerances& tol = {});

/// Hilbert-Schmidt orthonormal basis of span(mats). A candidate whose residual
/// after projection is below eps_rank * (largest input norm) is dropped.
std::vector<ComplexMatrix> orthonormalize_span(std::span<const ComplexMatrix> mats,
                                               const Tolerances& tol = {});

/// Columns of a d x r isometry spanning the range of the projector `p`.
ComplexMatrix range_isometry(const ComplexMatrix& p);

/// Extends the orthonormal columns of `c` (n x r, r <= n) to an n x n unitary
/// whose first r columns are exactly `c`.
ComplexMatrix complete_unitary(const ComplexMatrix& c);

inline ComplexMatrix hermitian_part(const ComplexMatrix& a) {
    return (a + a.adjoint()) * 0.5;
}

void require_square(const ComplexMatrix& a, const char* what);

}  // namespace qalg
