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
#include <span>
#include <vector>

#include "qalg/linalg.hpp"

namespace qalg {

/// A *-subalgebra of d x d matrices, stored as a Hilbert-Schmidt orthonormal
/// basis together with its unit (a projector, not necessarily the identity).
class MatrixAlgebra {
  public:
    /// Takes an already orthonormal, *-closed and product-closed basis; the
    /// unit is computed from it.
    static MatrixAlgebra from_basis(std::size_t ambient_dim, std::vector<ComplexMatrix> basis,
                                    const Tolerances& tol = {});

    std::size_t ambient_dim() const { return ambient_dim_; }
    std::size_t dim() const { return basis_.size(); }
    const std::vector<ComplexMatrix>& basis() const { return basis_; }
    const ComplexMatrix& unit() const { return unit_; }

    /// Hilbert-Schmidt orthogonal projection of `x` onto the algebra.
    ComplexMatrix project(const ComplexMatrix& x) const;
    /// ||x - project(x)||_F.
    double distance(const ComplexMatrix& x) const;

  private:
    MatrixAlgebra(std::size_t d, std::vector<ComplexMatrix> basis, ComplexMatrix unit)
        : ambient_dim_(d), basis_(std::move(basis)), unit_(std::move(unit)) {}

    std::size_t ambient_dim_ = 0;
    std::vector<ComplexMatrix> basis_;
    ComplexMatrix unit_;
};

struct AlgebraBlock {
    std::size_t m = 0;  // multiplicity
    std::size_t n = 0;  // factor dimension

    bool operator==(const AlgebraBlock&) const = default;
};

/// U A U^dagger = [ (+)_i 1_{m_i} (x) M_{n_i} ] (+) 0_{d0}.
struct AlgebraStructure {
    ComplexMatrix u;
    std::vector<AlgebraBlock> blocks;
    std::size_t d0 = 0;
    double residual = 0.0;  // worst relative off-pattern residual over the basis

    /// Row offset of block i inside U.
    std::size_t offset(std::size_t i) const;
};

struct FactorDecomposition {
    std::size_t m = 0;
    std::size_t n = 0;
    ComplexMatrix support;  // d x k isometry onto the range of the algebra unit
    ComplexMatrix u_block;  // k x k unitary: u_block S^dagger A S u_block^dagger = 1_m (x) M_n
};

struct HybridBlock {
    double p = 0.0;
    std::size_t m = 0;
    ComplexMatrix rho;  // n x n density matrix
};

/// Canonical state R = U^dagger [ (+)_i p_i (1/m_i) (x) rho_i (+) 0 ] U.
struct HybridState {
    std::vector<HybridBlock> blocks;
    AlgebraStructure structure;

    ComplexMatrix reconstruct() const;
};

/// Smallest *-algebra containing the generators.
MatrixAlgebra generate_algebra(std::span<const ComplexMatrix> generators, const Tolerances& tol = {});

/// Range projector of sum_i B_i B_i^dagger over the basis.
ComplexMatrix algebra_unit(std::span<const ComplexMatrix> basis, const Tolerances& tol = {});

MatrixAlgebra center(const MatrixAlgebra& a, const Tolerances& tol = {});

/// Minimal central projections; they sum to the unit of `a`. Sorted by content
/// so the result does not depend on the seed.
std::vector<ComplexMatrix> central_projections(const MatrixAlgebra& a, std::uint64_t seed = 0,
                                               const Tolerances& tol = {});

/// Requires a factor (one-dimensional center); throws not_a_factor otherwise.
FactorDecomposition factor_decomposition(const MatrixAlgebra& a, std::uint64_t seed = 0,
                                         const Tolerances& tol = {});

AlgebraStructure structure_decomposition(const MatrixAlgebra& a, std::uint64_t seed = 0,
                                         const Tolerances& tol = {});

/// Worst ||U B U^dagger - pattern(U B U^dagger)|| / ||B|| over the matrices.
double off_pattern_residual(const AlgebraStructure& s, std::span<const ComplexMatrix> mats);

/// The element R of `a` with Tr(R B_i) = values[i] for every basis element.
ComplexMatrix functional_to_matrix(const MatrixAlgebra& a, std::span<const Complex> values);

/// Canonical hybrid form of the functional X -> Tr(r X) restricted to `a`.
/// Throws not_positive if the functional is negative on some effect of `a`,
/// normalization if it is not unital.
HybridState canonical_state(const MatrixAlgebra& a, const ComplexMatrix& r, std::uint64_t seed = 0,
                            const Tolerances& tol = {});
HybridState canonical_state(const MatrixAlgebra& a, std::span<const Complex> functional,
                            std::uint64_t seed = 0, const Tolerances& tol = {});

}  // namespace qalg
