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

#include <array>
#include <span>
#include <vector>

#include "qalg/linalg.hpp"

namespace qalg {

struct StateReport {
    bool valid = false;
    double min_eigenvalue = 0.0;
    double trace_deviation = 0.0;
    double hermiticity_residual = 0.0;
};

/// Positivity, Hermiticity and |Tr - 1| <= 1e-9.
StateReport check_state(const ComplexMatrix& m, const Tolerances& tol = {});

/// A positive, unit-trace matrix. Construction validates.
class DensityMatrix {
  public:
    static DensityMatrix from(ComplexMatrix m, const Tolerances& tol = {});

    const ComplexMatrix& matrix() const { return m_; }
    std::size_t dim() const { return static_cast<std::size_t>(m_.rows()); }

  private:
    explicit DensityMatrix(ComplexMatrix m) : m_(std::move(m)) {}
    ComplexMatrix m_;
};

struct EffectReport {
    bool valid = false;
    double min_eigenvalue = 0.0;
    double max_eigenvalue = 0.0;
    double hermiticity_residual = 0.0;
};

/// 0 <= E <= 1: both E and 1 - E positive.
EffectReport check_effect(const ComplexMatrix& m, const Tolerances& tol = {});

class Effect {
  public:
    static Effect from(ComplexMatrix m, const Tolerances& tol = {});

    const ComplexMatrix& matrix() const { return m_; }
    std::size_t dim() const { return static_cast<std::size_t>(m_.rows()); }

  private:
    explicit Effect(ComplexMatrix m) : m_(std::move(m)) {}
    ComplexMatrix m_;
};

struct EnsembleItem {
    double probability = 0.0;
    ComplexVector state;
};

/// Weighted family of unit vectors {(p_i, psi_i)} with sum p_i = 1.
class Ensemble {
  public:
    static Ensemble from(std::vector<EnsembleItem> items);

    const std::vector<EnsembleItem>& items() const { return items_; }
    std::vector<double> weights() const;
    std::size_t size() const { return items_.size(); }
    std::size_t dim() const { return static_cast<std::size_t>(items_.front().state.size()); }

  private:
    explicit Ensemble(std::vector<EnsembleItem> items) : items_(std::move(items)) {}
    std::vector<EnsembleItem> items_;
};

struct BlochVector {
    std::array<double, 3> r{};

    double norm() const;
};

/// sigma_0..sigma_3 (identity, X, Y, Z).
std::array<ComplexMatrix, 4> pauli_matrices();

DensityMatrix density_from_ensemble(const Ensemble& e);

Complex expectation(const DensityMatrix& rho, const ComplexMatrix& a);

/// von Neumann entropy -Tr(rho ln rho) in nats.
double entropy(const DensityMatrix& rho);

/// -sum p_i ln p_i in nats. Throws normalization for invalid distributions.
double shannon_entropy(std::span<const double> p);

/// ||rho^2 - rho||_F < 1e-8.
bool is_pure(const DensityMatrix& rho);

/// Unit vector on C^d (x) C^d whose reduction to either factor is rho.
ComplexVector purify(const DensityMatrix& rho);

DensityMatrix bloch_to_density(const BlochVector& r);
BlochVector density_to_bloch(const DensityMatrix& rho);

/// Unitary u with sqrt(p_i) psi_i = sum_j u_ij sqrt(q_j) phi_j, where e1 holds
/// (p_i, psi_i) and e2 holds (q_j, phi_j). The shorter ensemble is padded with
/// zero-weight entries, so u is N x N with N = max(|e1|, |e2|, rank rho).
/// Throws no_equivalence if the two ensembles induce different states.
ComplexMatrix ensemble_equivalence_unitary(const Ensemble& e1, const Ensemble& e2,
                                           const Tolerances& tol = {});

/// Residual max_i || sqrt(p_i) psi_i - sum_j u_ij sqrt(q_j) phi_j || with the
/// same zero padding as ensemble_equivalence_unitary().
double ensemble_relation_residual(const Ensemble& e1, const Ensemble& e2, const ComplexMatrix& u);

/// (1/sqrt(n)) sum_i |i> (x) |i>.
ComplexVector maximally_entangled(std::size_t n);

/// 1/n.
DensityMatrix maximally_mixed(std::size_t n);

/// |<a|b>| == ||a|| ||b|| within tol, i.e. equal up to a global phase.
bool equal_up_to_phase(const ComplexVector& a, const ComplexVector& b, double tol = 1e-9);

}  // namespace qalg
