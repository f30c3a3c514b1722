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
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "qalg/linalg.hpp"
#include "qalg/quantum.hpp"

namespace qalg {

/// CP map rho -> sum_i E_i rho E_i^dagger with E_i of shape dim_out x dim_in.
/// Trace preservation is reported by check(), not enforced.
struct KrausChannel {
    std::size_t dim_in = 0;
    std::size_t dim_out = 0;
    std::vector<ComplexMatrix> kraus;

    /// Validates that every operator has shape dim_out x dim_in.
    static KrausChannel from(std::size_t dim_in, std::size_t dim_out, std::vector<ComplexMatrix> kraus);
    static KrausChannel identity(std::size_t d);
    static KrausChannel unitary(const ComplexMatrix& u);
    /// Kraus operators |i><i|, i = 0..d-1.
    static KrausChannel dephasing(std::size_t d);
};

/// X = sum_ij E(|i><j|) (x) |i><j| on C^dim_out (x) C^dim_in. Unnormalized:
/// Tr X = dim_in for trace-preserving maps.
struct ChoiMatrix {
    ComplexMatrix matrix;
    std::size_t dim_out = 0;
    std::size_t dim_in = 0;

    static ChoiMatrix from(ComplexMatrix matrix, std::size_t dim_out, std::size_t dim_in);
};

/// V = sum_i E_i (x) |i>_E, mapping C^dim_in into C^dim_out (x) C^dim_env.
struct StinespringIsometry {
    ComplexMatrix v;
    std::size_t dim_out = 0;
    std::size_t dim_env = 0;

    std::size_t dim_in() const { return static_cast<std::size_t>(v.cols()); }
};

struct Povm {
    std::vector<std::string> outcomes;
    std::vector<ComplexMatrix> effects;

    std::size_t size() const { return effects.size(); }
    std::size_t dim() const { return effects.empty() ? 0 : static_cast<std::size_t>(effects.front().rows()); }
};

struct PovmReport {
    bool valid = false;
    double min_eigenvalue = 0.0;
    double completeness_residual = 0.0;
};

/// Column-stochastic matrix: pi(beta, alpha) is the probability of output beta
/// given input alpha.
class StochasticMatrix {
  public:
    static StochasticMatrix from(RealMatrix pi);
    static StochasticMatrix identity(std::size_t n);

    const RealMatrix& pi() const { return pi_; }
    std::size_t outputs() const { return static_cast<std::size_t>(pi_.rows()); }
    std::size_t inputs() const { return static_cast<std::size_t>(pi_.cols()); }

    /// (this o first): apply `first`, then this.
    StochasticMatrix after(const StochasticMatrix& first) const;

  private:
    explicit StochasticMatrix(RealMatrix pi) : pi_(std::move(pi)) {}
    RealMatrix pi_;
};

struct ChannelReport {
    bool cp = false;
    bool tp = false;
    bool unital = false;
    double min_choi_eigenvalue = 0.0;
    double tp_residual = 0.0;
    double unital_residual = 0.0;
    double hermiticity_residual = 0.0;
    std::size_t kraus_rank = 0;
};

ComplexMatrix apply(const KrausChannel& ch, const ComplexMatrix& rho);
ComplexMatrix adjoint_apply(const KrausChannel& ch, const ComplexMatrix& x);

/// Action read off the Choi matrix: E(|k><l|) = (1 (x) <k|) X (1 (x) |l>).
ComplexMatrix apply(const ChoiMatrix& choi, const ComplexMatrix& rho);

/// Tr_E(V rho V^dagger).
ComplexMatrix apply(const StinespringIsometry& v, const ComplexMatrix& rho);
/// V^dagger (X (x) 1_E) V.
ComplexMatrix adjoint_apply(const StinespringIsometry& v, const ComplexMatrix& x);

ChoiMatrix kraus_to_choi(const KrausChannel& ch);

/// Choi matrix of an arbitrary linear map given as a callable.
ChoiMatrix choi_of_map(const std::function<ComplexMatrix(const ComplexMatrix&)>& map,
                       std::size_t dim_in, std::size_t dim_out);

/// Kraus operators from the eigendecomposition of the Choi matrix; eigenvalues
/// below 1e-12 * lambda_max are discarded. Throws not_cp if the Choi matrix is
/// not positive.
KrausChannel choi_to_kraus(const ChoiMatrix& choi, const Tolerances& tol = {});

ChannelReport check(const ChoiMatrix& choi, const Tolerances& tol = {});
ChannelReport check(const KrausChannel& ch, const Tolerances& tol = {});

/// Linearly independent Kraus family for the same map; returns `ch` unchanged
/// when its operators are already independent.
KrausChannel minimal_kraus(const KrausChannel& ch);

/// Minimal dilation: dim_env equals the Kraus rank.
StinespringIsometry stinespring_dilate(const KrausChannel& ch);

struct Intertwiner {
    ComplexMatrix w;  // dim_env2 x dim_env1
    double residual = 0.0;                   // ||(1 (x) W) V1 - V2||
    double partial_isometry_residual = 0.0;  // ||(W^dagger W)^2 - W^dagger W||
};

/// Partial isometry W with V2 = (1_B (x) W) V1. Throws no_intertwiner if the
/// two isometries do not dilate the same map.
Intertwiner dilation_intertwiner(const StinespringIsometry& v1, const StinespringIsometry& v2,
                                 const Tolerances& tol = {});

enum class CombineMode { compose, tensor, mix };

/// compose: channels[0] o channels[1] o ... (the last one acts first).
/// tensor: channels[0] (x) channels[1] (x) ...
/// mix: sum_i weights[i] channels[i].
KrausChannel combine(CombineMode mode, std::span<const KrausChannel> channels,
                     std::span<const double> weights = {});

/// Transposes the chosen tensor factor of a bipartite operator.
ComplexMatrix partial_transpose(const ComplexMatrix& rho, BipartiteDims dims, Subsystem which);

PovmReport check_povm(const Povm& m, const Tolerances& tol = {});

/// Born probabilities Tr(A_i rho). Values within 1e-12 below zero are clipped;
/// the vector is renormalized when |sum - 1| <= 1e-9.
std::vector<double> measure(const DensityMatrix& rho, const Povm& m, const Tolerances& tol = {});

/// Outcome counts of n i.i.d. draws from measure(rho, m); the generator state
/// is derived from (seed, n, number of outcomes).
std::vector<std::uint64_t> sample_outcomes(const DensityMatrix& rho, const Povm& m, std::uint64_t n,
                                           std::uint64_t seed, const Tolerances& tol = {});

/// Sharp POVM of spectral projectors, labelled by the distinct eigenvalues.
Povm observable_from_hermitian(const ComplexMatrix& a, const Tolerances& tol = {});

/// Two-outcome POVM {E, 1 - E}, labelled "true" / "false".
Povm effect_observable(const Effect& e);

/// E_beta = sum_alpha pi(beta, alpha) A_alpha.
Povm coarse_grain(const Povm& m, const StochasticMatrix& pi);

Effect accessible_effect(const KrausChannel& ch, const Effect& x, const Tolerances& tol = {});

std::vector<double> classical_apply(const StochasticMatrix& pi, std::span<const double> p);

/// Every effect satisfies ||E^2 - E||_F < 1e-8.
bool is_sharp(const Povm& m);

}  // namespace qalg
