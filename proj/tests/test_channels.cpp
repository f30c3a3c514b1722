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

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <set>
#include <vector>

#include "qalg/algebra.hpp"
#include "qalg/channels.hpp"
#include "support.hpp"

namespace qalg {
namespace {

using testing::brute_apply;
using testing::brute_choi;
using testing::Fixtures;
using testing::ket;
using testing::Mat;
using testing::min_eigenvalue;
using testing::pauli;
using testing::unit;

KrausChannel random_channel(Fixtures& fx, Eigen::Index d_in, Eigen::Index d_out, Eigen::Index k) {
    return KrausChannel::from(static_cast<std::size_t>(d_in), static_cast<std::size_t>(d_out),
                              fx.cptp_kraus(d_in, d_out, k));
}

Mat transpose_choi(std::size_t d) {
    return brute_choi([](const Mat& x) { return Mat(x.transpose()); }, static_cast<Eigen::Index>(d));
}

Mat omega_projector(Eigen::Index d) {
    Mat psi = Mat::Zero(d * d, 1);
    for (Eigen::Index i = 0; i < d; ++i) psi(i * d + i, 0) = 1.0 / std::sqrt(static_cast<double>(d));
    return psi * psi.adjoint();
}

/// Worst action mismatch of two channels over the matrix units |k><l|.
template <class A, class B>
double action_gap(const A& a, const B& b, std::size_t d_in) {
    double worst = 0.0;
    for (std::size_t k = 0; k < d_in; ++k)
        for (std::size_t l = 0; l < d_in; ++l) {
            const Mat e = unit(static_cast<Eigen::Index>(d_in), static_cast<Eigen::Index>(d_in),
                               static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(l));
            worst = std::max(worst, (qalg::apply(a, e) - qalg::apply(b, e)).norm());
        }
    return worst;
}

Povm make_povm(std::vector<Mat> effects) {
    Povm m;
    for (std::size_t i = 0; i < effects.size(); ++i) m.outcomes.push_back(std::to_string(i));
    m.effects = std::move(effects);
    return m;
}

TEST(Apply, IdentityDephasingAndUnitaryMixture) {
    Fixtures fx(60);
    const Mat rho = fx.density(2);
    EXPECT_LT((qalg::apply(KrausChannel::identity(2), rho) - rho).norm(), 1e-15);

    Mat diag = Mat::Zero(2, 2);
    diag.diagonal() = rho.diagonal();
    EXPECT_LT((qalg::apply(KrausChannel::dephasing(2), rho) - diag).norm(), 1e-15);

    const std::vector<double> p = {0.1, 0.2, 0.3, 0.4};
    std::vector<Mat> kraus;
    Mat expected = Mat::Zero(3, 3);
    const Mat r3 = fx.density(3);
    for (double pi : p) {
        const Mat u = fx.unitary(3);
        kraus.push_back(std::sqrt(pi) * u);
        expected += pi * u * r3 * u.adjoint();
    }
    const KrausChannel mix = KrausChannel::from(3, 3, kraus);
    EXPECT_LT((qalg::apply(mix, r3) - expected).norm(), 1e-12);
    EXPECT_TRUE(check(mix).tp);

    try {
        qalg::apply(mix, rho);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::dimension);
    }
    EXPECT_THROW(KrausChannel::from(2, 2, {identity(3)}), Error);
}

TEST(AdjointApply, Examples) {
    Fixtures fx(61);
    const Mat u = fx.unitary(3);
    const Mat e = fx.hermitian(3);
    EXPECT_LT((adjoint_apply(KrausChannel::unitary(u), e) - u.adjoint() * e * u).norm(), 1e-12);

    const KrausChannel ch = random_channel(fx, 3, 2, 4);
    EXPECT_LT((adjoint_apply(ch, identity(2)) - identity(3)).norm(), 1e-12);

    const Mat x = fx.gaussian(3, 3);
    Mat expected = Mat::Zero(3, 3);
    for (Eigen::Index i = 0; i < 3; ++i) expected += x(i, i) * unit(3, 3, i, i);
    EXPECT_LT((adjoint_apply(KrausChannel::dephasing(3), x) - expected).norm(), 1e-15);
}

TEST(AdjointApply, DualityOnRandomChannels) {
    Fixtures fx(62);
    for (int t = 0; t < 100; ++t) {
        const Eigen::Index da = fx.integer(1, 4), db = fx.integer(1, 4), k = fx.integer(1, 5);
        const KrausChannel ch = random_channel(fx, da, db, k);
        const Mat rho = fx.density(da);
        const Mat x = fx.gaussian(db, db);
        const Complex lhs = (qalg::apply(ch, rho) * x).trace();
        const Complex rhs = (rho * adjoint_apply(ch, x)).trace();
        EXPECT_LT(std::abs(lhs - rhs), 1e-10);
    }
}

TEST(KrausToChoi, MatchesExplicitSum) {
    const ChoiMatrix id = kraus_to_choi(KrausChannel::identity(2));
    EXPECT_LT((id.matrix - 2.0 * omega_projector(2)).norm(), 1e-15);
    EXPECT_NEAR(id.matrix.trace().real(), 2.0, 1e-15);
    EXPECT_EQ(numerical_rank(id.matrix), 1u);

    const KrausChannel deph = KrausChannel::dephasing(2);
    const ChoiMatrix dc = kraus_to_choi(deph);
    const Mat oracle = brute_choi([&](const Mat& x) { return brute_apply(deph.kraus, x); }, 2);
    EXPECT_LT((dc.matrix - oracle).norm(), 1e-15);
    EXPECT_LT((dc.matrix - Mat(dc.matrix.diagonal().asDiagonal())).norm(), 1e-15);
    EXPECT_EQ(numerical_rank(dc.matrix), 2u);

    // completely depolarizing map rho -> Tr(rho) I/3
    const Mat dep = brute_choi([](const Mat& x) { return Mat(x.trace() * identity(3) / 3.0); }, 3);
    std::vector<Mat> kraus;
    for (Eigen::Index i = 0; i < 3; ++i)
        for (Eigen::Index j = 0; j < 3; ++j) kraus.push_back(unit(3, 3, i, j) / std::sqrt(3.0));
    const ChoiMatrix c = kraus_to_choi(KrausChannel::from(3, 3, kraus));
    EXPECT_LT((c.matrix - dep).norm(), 1e-14);
    EXPECT_LT((c.matrix - identity(9) / 3.0).norm(), 1e-14);
}

TEST(KrausToChoi, ChoiOfMapAgreesWithBruteForce) {
    Fixtures fx(63);
    const KrausChannel ch = random_channel(fx, 2, 3, 2);
    const auto map = [&](const Mat& x) { return brute_apply(ch.kraus, x); };
    const ChoiMatrix c = choi_of_map(map, 2, 3);
    EXPECT_LT((c.matrix - brute_choi(map, 2)).norm(), 1e-13);
    EXPECT_LT((c.matrix - kraus_to_choi(ch).matrix).norm(), 1e-13);
    EXPECT_NEAR(c.matrix.trace().real(), 2.0, 1e-12);
}

TEST(ChoiToKraus, Examples) {
    const KrausChannel id = choi_to_kraus(kraus_to_choi(KrausChannel::identity(3)));
    ASSERT_EQ(id.kraus.size(), 1u);
    // proportional to I up to a phase
    const Complex phase = id.kraus[0](0, 0);
    EXPECT_NEAR(std::abs(phase), 1.0, 1e-12);
    EXPECT_LT((id.kraus[0] - phase * identity(3)).norm(), 1e-12);

    const KrausChannel deph = choi_to_kraus(kraus_to_choi(KrausChannel::dephasing(2)));
    ASSERT_EQ(deph.kraus.size(), 2u);
    for (const auto& e : deph.kraus) {
        const Mat p = e.adjoint() * e;
        EXPECT_LT((p * p - p).norm(), 1e-12);
        EXPECT_NEAR(p.trace().real(), 1.0, 1e-12);
    }

    try {
        choi_to_kraus(ChoiMatrix::from(transpose_choi(2), 2, 2));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::not_cp);
    }
}

TEST(ChoiToKraus, RoundTripOnRandomChannels) {
    Fixtures fx(64);
    for (int t = 0; t < 50; ++t) {
        const Eigen::Index da = fx.integer(1, 4), db = fx.integer(1, 4), k = fx.integer(1, 4);
        const KrausChannel ch = random_channel(fx, da, db, k);
        const ChoiMatrix x = kraus_to_choi(ch);
        const KrausChannel back = choi_to_kraus(x);
        EXPECT_LE(back.kraus.size(), std::min(ch.kraus.size(), static_cast<std::size_t>(da * db)));
        EXPECT_LT(action_gap(ch, back, static_cast<std::size_t>(da)), 1e-9);
        EXPECT_LT(action_gap(x, back, static_cast<std::size_t>(da)), 1e-9);
        EXPECT_LT((kraus_to_choi(back).matrix - x.matrix).norm(), 1e-9);
    }
}

TEST(Check, TransposeMapIsNotCp) {
    const ChannelReport r = check(ChoiMatrix::from(transpose_choi(2), 2, 2));
    EXPECT_FALSE(r.cp);
    EXPECT_NEAR(r.min_choi_eigenvalue, -1.0, 1e-9);
    EXPECT_NEAR(min_eigenvalue(transpose_choi(2)), -1.0, 1e-12);
    EXPECT_TRUE(r.tp);
    EXPECT_TRUE(r.unital);
}

TEST(Check, UnitaryAndResetChannels) {
    Fixtures fx(65);
    const ChannelReport u = check(KrausChannel::unitary(fx.unitary(3)));
    EXPECT_TRUE(u.cp && u.tp && u.unital);
    EXPECT_EQ(u.kraus_rank, 1u);

    // rho -> Tr(rho)|0><0|
    const Mat reset = brute_choi([](const Mat& x) { return Mat(x.trace() * unit(3, 3, 0, 0)); }, 3);
    const ChannelReport r = check(ChoiMatrix::from(reset, 3, 3));
    EXPECT_TRUE(r.cp);
    EXPECT_TRUE(r.tp);
    EXPECT_FALSE(r.unital);
    EXPECT_NEAR(r.unital_residual, (3.0 * unit(3, 3, 0, 0) - identity(3)).norm(), 1e-12);
}

TEST(Check, RandomIsometriesAlwaysPass) {
    Fixtures fx(66);
    for (int t = 0; t < 30; ++t) {
        const ChannelReport r = check(random_channel(fx, fx.integer(1, 4), fx.integer(1, 4), fx.integer(1, 4)));
        EXPECT_TRUE(r.cp);
        EXPECT_TRUE(r.tp);
        EXPECT_LT(r.tp_residual, 1e-10);
    }
}

TEST(Stinespring, DephasingIsCnotIsometry) {
    const StinespringIsometry v = stinespring_dilate(KrausChannel::dephasing(2));
    EXPECT_EQ(v.dim_env, 2u);
    const Mat expected = kron(ket(2, 0), ket(2, 0)) * ket(2, 0).adjoint() +
                         kron(ket(2, 1), ket(2, 1)) * ket(2, 1).adjoint();
    EXPECT_LT((v.v - expected).norm(), 1e-15);
}

TEST(Stinespring, UnitaryHasTrivialEnvironment) {
    Fixtures fx(67);
    const Mat u = fx.unitary(3);
    const StinespringIsometry v = stinespring_dilate(KrausChannel::unitary(u));
    EXPECT_EQ(v.dim_env, 1u);
    EXPECT_LT((v.v - u).norm(), 1e-15);
}

TEST(Stinespring, DilationIdentitiesOnRandomChannels) {
    Fixtures fx(68);
    for (int t = 0; t < 30; ++t) {
        const Eigen::Index da = fx.integer(1, 4), db = fx.integer(1, 4), k = fx.integer(1, 4);
        const KrausChannel ch = random_channel(fx, da, db, k);
        const StinespringIsometry v = stinespring_dilate(ch);
        EXPECT_EQ(v.dim_env, check(ch).kraus_rank);
        EXPECT_LT((v.v.adjoint() * v.v - identity(static_cast<std::size_t>(da))).norm(), 1e-8);
        const Mat rho = fx.density(da);
        const Mat traced = testing::brute_partial_trace(v.v * rho * v.v.adjoint(), db,
                                                        static_cast<Eigen::Index>(v.dim_env), true);
        EXPECT_LT((traced - brute_apply(ch.kraus, rho)).norm(), 1e-9);
        EXPECT_LT((qalg::apply(v, rho) - qalg::apply(ch, rho)).norm(), 1e-9);
        const Mat x = fx.hermitian(db);
        EXPECT_LT((adjoint_apply(v, x) - adjoint_apply(ch, x)).norm(), 1e-9);
    }
}

TEST(Stinespring, NonTracePreservingIsNotIsometry) {
    const KrausChannel half = KrausChannel::from(2, 2, {identity(2) * 0.5});
    const StinespringIsometry v = stinespring_dilate(half);
    EXPECT_GT((v.v.adjoint() * v.v - identity(2)).norm(), 0.1);
    EXPECT_FALSE(check(half).tp);
}

TEST(MinimalKraus, DropsDependentOperators) {
    const KrausChannel twice = KrausChannel::from(2, 2, {identity(2) / std::sqrt(2.0), identity(2) / std::sqrt(2.0)});
    const KrausChannel m = minimal_kraus(twice);
    EXPECT_EQ(m.kraus.size(), 1u);
    EXPECT_LT(action_gap(m, twice, 2), 1e-12);
}

TEST(Intertwiner, RecoversRandomUnitary) {
    Fixtures fx(69);
    for (int t = 0; t < 20; ++t) {
        const Eigen::Index da = fx.integer(1, 3), db = fx.integer(1, 3);
        const Eigen::Index k = fx.integer(1, std::max<Eigen::Index>(1, da * db));
        const StinespringIsometry v1 = stinespring_dilate(random_channel(fx, da, db, k));
        const Mat w0 = fx.unitary(static_cast<Eigen::Index>(v1.dim_env));
        StinespringIsometry v2 = v1;
        v2.v = kron(identity(static_cast<std::size_t>(db)), w0) * v1.v;
        const Intertwiner w = dilation_intertwiner(v1, v2);
        EXPECT_LT(w.residual, 1e-7);
        EXPECT_LT(w.partial_isometry_residual, 1e-8);
        // minimal dilation: the environment support is everything
        EXPECT_LT((w.w - w0).norm(), 1e-7);
    }
}

TEST(Intertwiner, SelfAndPadded) {
    Fixtures fx(70);
    const StinespringIsometry v = stinespring_dilate(random_channel(fx, 2, 2, 2));
    const Intertwiner self = dilation_intertwiner(v, v);
    EXPECT_LT((self.w - identity(2)).norm(), 1e-8);

    // pad the environment with an unused dimension
    StinespringIsometry padded;
    padded.dim_out = 2;
    padded.dim_env = 3;
    padded.v = Mat::Zero(6, 2);
    for (Eigen::Index b = 0; b < 2; ++b) padded.v.middleRows(b * 3, 2) = v.v.middleRows(b * 2, 2);
    const Intertwiner w = dilation_intertwiner(v, padded);
    EXPECT_LT(w.residual, 1e-7);
    EXPECT_EQ(w.w.rows(), 3);
    EXPECT_LT((w.w - Mat(identity(3).leftCols(2))).norm(), 1e-8);
}

TEST(Intertwiner, DifferentChannelsAreRejected) {
    Fixtures fx(71);
    const StinespringIsometry v1 = stinespring_dilate(random_channel(fx, 2, 2, 2));
    const StinespringIsometry v2 = stinespring_dilate(random_channel(fx, 2, 2, 2));
    try {
        dilation_intertwiner(v1, v2);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::no_intertwiner);
    }
}

TEST(Combine, ComposeTensorMix) {
    Fixtures fx(72);
    const KrausChannel e = random_channel(fx, 2, 3, 2);
    const KrausChannel id3 = KrausChannel::identity(3);
    const KrausChannel parts[] = {id3, e};
    const KrausChannel c = combine(CombineMode::compose, parts);
    EXPECT_LT(action_gap(c, e, 2), 1e-12);

    const KrausChannel pair[] = {KrausChannel::identity(2), KrausChannel::unitary(pauli(1))};
    const double w[] = {0.5, 0.5};
    const KrausChannel mix = combine(CombineMode::mix, pair, w);
    EXPECT_LT((qalg::apply(mix, unit(2, 2, 0, 0)) - identity(2) / 2.0).norm(), 1e-15);

    const KrausChannel f = random_channel(fx, 2, 2, 3);
    const KrausChannel both[] = {e, f};
    const KrausChannel t = combine(CombineMode::tensor, both);
    EXPECT_EQ(t.dim_in, 4u);
    EXPECT_EQ(t.dim_out, 6u);
    const Mat r1 = fx.density(2), r2 = fx.density(2);
    EXPECT_LT((qalg::apply(t, kron(r1, r2)) - kron(qalg::apply(e, r1), qalg::apply(f, r2))).norm(), 1e-12);
    EXPECT_TRUE(check(t).tp);

    const KrausChannel reversed[] = {f, e};
    EXPECT_THROW(combine(CombineMode::compose, reversed), Error);
    const double bad[] = {0.7, 0.7};
    EXPECT_THROW(combine(CombineMode::mix, pair, bad), Error);
}

TEST(Combine, HeisenbergOrderReverses) {
    Fixtures fx(73);
    for (int t = 0; t < 20; ++t) {
        const KrausChannel e1 = random_channel(fx, 3, 2, 2);
        const KrausChannel e2 = random_channel(fx, 2, 3, 3);
        const KrausChannel parts[] = {e1, e2};
        const KrausChannel c = combine(CombineMode::compose, parts);  // e1 o e2
        const Mat x = fx.hermitian(2);
        EXPECT_LT((adjoint_apply(c, x) - adjoint_apply(e2, adjoint_apply(e1, x))).norm(), 1e-10);
    }
}

TEST(PartialTranspose, MaximallyEntangledHasNegativeEigenvalue) {
    const Mat pt = partial_transpose(omega_projector(2), {2, 2}, Subsystem::first);
    Mat swap = Mat::Zero(4, 4);
    for (Eigen::Index i = 0; i < 2; ++i)
        for (Eigen::Index j = 0; j < 2; ++j) swap(i * 2 + j, j * 2 + i) = 1.0;
    EXPECT_LT((pt - swap / 2.0).norm(), 1e-15);
    EXPECT_NEAR(min_eigenvalue(pt), -0.5, 1e-12);
}

TEST(PartialTranspose, ProductInvolutionTrace) {
    Fixtures fx(74);
    const Mat a = fx.density(2), b = fx.density(3);
    const Mat pt = partial_transpose(kron(a, b), {2, 3}, Subsystem::first);
    EXPECT_LT((pt - kron(a.transpose(), b)).norm(), 1e-15);
    EXPECT_GT(min_eigenvalue(pt), -1e-12);
    const Mat z = fx.gaussian(6, 6);
    for (const Subsystem s : {Subsystem::first, Subsystem::second}) {
        const Mat once = partial_transpose(z, {2, 3}, s);
        EXPECT_EQ(partial_transpose(once, {2, 3}, s), z);
        EXPECT_LT(std::abs(once.trace() - z.trace()), 1e-13);
    }
    EXPECT_LT((partial_transpose(z, {2, 3}, Subsystem::second) -
               partial_transpose(z, {2, 3}, Subsystem::first).transpose())
                  .norm(),
              1e-15);
    EXPECT_THROW(partial_transpose(z, {2, 2}, Subsystem::first), Error);
}

TEST(Measure, Examples) {
    Fixtures fx(75);
    const Mat rho = fx.density(3);
    std::vector<Mat> basis;
    for (Eigen::Index i = 0; i < 3; ++i) basis.push_back(unit(3, 3, i, i));
    const auto p = measure(DensityMatrix::from(rho), make_povm(basis));
    for (Eigen::Index i = 0; i < 3; ++i) EXPECT_NEAR(p[static_cast<std::size_t>(i)], rho(i, i).real(), 1e-15);

    Mat e = fx.density(3);
    e /= testing::eigenvalues(e).maxCoeff();
    const Povm binary = effect_observable(Effect::from(e));
    EXPECT_EQ(binary.outcomes, (std::vector<std::string>{"true", "false"}));
    const auto q = measure(DensityMatrix::from(rho), binary);
    EXPECT_NEAR(q[0], (rho * e).trace().real(), 1e-12);
    EXPECT_NEAR(q[1], 1.0 - (rho * e).trace().real(), 1e-12);

    const Mat a = fx.hermitian(3);
    const Povm sharp = observable_from_hermitian(a);
    const auto r = measure(DensityMatrix::from(rho), sharp);
    for (std::size_t i = 0; i < sharp.size(); ++i) EXPECT_NEAR(r[i], (rho * sharp.effects[i]).trace().real(), 1e-12);
}

TEST(Measure, InvalidPovmIsRejected) {
    const Povm bad = make_povm({identity(2) * 0.7});
    EXPECT_FALSE(check_povm(bad).valid);
    EXPECT_NEAR(check_povm(bad).completeness_residual, 0.3 * std::sqrt(2.0), 1e-12);
    EXPECT_THROW(measure(DensityMatrix::from(identity(2) / 2.0), bad), Error);
    const Povm negative = make_povm({unit(2, 2, 0, 0) * 2.0, unit(2, 2, 1, 1) - unit(2, 2, 0, 0)});
    EXPECT_FALSE(check_povm(negative).valid);
    EXPECT_NEAR(check_povm(negative).min_eigenvalue, -1.0, 1e-12);
}

TEST(Sample, DeterministicPovm) {
    const auto counts = sample_outcomes(DensityMatrix::from(identity(2) / 2.0), make_povm({identity(2)}), 1000, 3);
    EXPECT_EQ(counts, (std::vector<std::uint64_t>{1000}));
}

TEST(Sample, FairCoinWithinFiveSigma) {
    const Povm basis = make_povm({unit(2, 2, 0, 0), unit(2, 2, 1, 1)});
    const std::uint64_t n = 100000;
    const auto counts = sample_outcomes(DensityMatrix::from(identity(2) / 2.0), basis, n, 0);
    ASSERT_EQ(counts.size(), 2u);
    EXPECT_EQ(counts[0] + counts[1], n);
    const double sigma = std::sqrt(n * 0.25);
    for (auto c : counts) EXPECT_LT(std::abs(static_cast<double>(c) - n / 2.0), 5 * sigma);
    EXPECT_EQ(sample_outcomes(DensityMatrix::from(identity(2) / 2.0), basis, n, 0), counts);
    EXPECT_NE(sample_outcomes(DensityMatrix::from(identity(2) / 2.0), basis, n, 1), counts);
}

TEST(Sample, SkewedDistributionWithinFiveSigma) {
    Fixtures fx(76);
    const Mat rho = fx.density(3);
    const Povm m = make_povm(fx.povm(3, 4));
    const auto p = measure(DensityMatrix::from(rho), m);
    const std::uint64_t n = 50000;
    const auto counts = sample_outcomes(DensityMatrix::from(rho), m, n, 11);
    for (std::size_t i = 0; i < p.size(); ++i) {
        const double sigma = std::sqrt(n * p[i] * (1 - p[i]));
        EXPECT_LT(std::abs(static_cast<double>(counts[i]) - n * p[i]), 5 * sigma + 1);
    }
}

TEST(Observable, Examples) {
    const Povm z = observable_from_hermitian(pauli(3));
    ASSERT_EQ(z.size(), 2u);
    EXPECT_EQ(std::set<std::string>(z.outcomes.begin(), z.outcomes.end()), (std::set<std::string>{"1", "-1"}));
    for (std::size_t i = 0; i < 2; ++i) {
        const Mat expected = z.outcomes[i] == "1" ? unit(2, 2, 0, 0) : unit(2, 2, 1, 1);
        EXPECT_LT((z.effects[i] - expected).norm(), 1e-12);
    }
    EXPECT_TRUE(is_sharp(z));

    Fixtures fx(77);
    const Mat u = fx.unitary(4);
    Mat d = Mat::Zero(4, 4);
    d.diagonal() << 2, 2, 2, -1;
    const Povm deg = observable_from_hermitian(u * d * u.adjoint());
    ASSERT_EQ(deg.size(), 2u);
    std::multiset<long> ranks;
    for (const auto& e : deg.effects) ranks.insert(std::lround(e.trace().real()));
    EXPECT_EQ(ranks, (std::multiset<long>{1, 3}));

    for (int t = 0; t < 20; ++t) {
        const Povm m = observable_from_hermitian(fx.hermitian(fx.integer(1, 6)));
        Mat sum = Mat::Zero(static_cast<Eigen::Index>(m.dim()), static_cast<Eigen::Index>(m.dim()));
        for (const auto& e : m.effects) sum += e;
        EXPECT_LT((sum - identity(m.dim())).norm(), 1e-10);
        EXPECT_TRUE(is_sharp(m));
        for (std::size_t i = 0; i < m.size(); ++i)
            for (std::size_t j = i + 1; j < m.size(); ++j) EXPECT_LT((m.effects[i] * m.effects[j]).norm(), 1e-8);
    }
    EXPECT_THROW(observable_from_hermitian(fx.gaussian(2, 2)), Error);
}

TEST(CoarseGrain, Examples) {
    Fixtures fx(78);
    const Povm m = make_povm(fx.povm(3, 3));
    const Povm same = coarse_grain(m, StochasticMatrix::identity(3));
    for (std::size_t i = 0; i < 3; ++i) EXPECT_LT((same.effects[i] - m.effects[i]).norm(), 1e-15);

    const Povm merged = coarse_grain(m, StochasticMatrix::from(RealMatrix::Ones(1, 3)));
    ASSERT_EQ(merged.size(), 1u);
    EXPECT_LT((merged.effects[0] - identity(3)).norm(), 1e-12);

    const double p = 0.1;
    const Povm sharp = make_povm({unit(2, 2, 0, 0), unit(2, 2, 1, 1)});
    RealMatrix flip(2, 2);
    flip << 1 - p, p, p, 1 - p;
    const Povm noisy = coarse_grain(sharp, StochasticMatrix::from(flip));
    EXPECT_LT((noisy.effects[0] - ((1 - p) * unit(2, 2, 0, 0) + p * unit(2, 2, 1, 1))).norm(), 1e-15);
    EXPECT_TRUE(check_povm(noisy).valid);
    EXPECT_FALSE(is_sharp(noisy));
    EXPECT_GT((noisy.effects[0] * noisy.effects[0] - noisy.effects[0]).norm(), 1e-3);

    EXPECT_THROW(coarse_grain(m, StochasticMatrix::identity(2)), Error);
}

TEST(CoarseGrain, Composes) {
    Fixtures fx(79);
    for (int t = 0; t < 20; ++t) {
        const Eigen::Index k = fx.integer(1, 5), k1 = fx.integer(1, 4), k2 = fx.integer(1, 4);
        const Povm m = make_povm(fx.povm(3, k));
        const StochasticMatrix pi1 = StochasticMatrix::from(fx.stochastic(k1, k));
        const StochasticMatrix pi2 = StochasticMatrix::from(fx.stochastic(k2, k1));
        const Povm direct = coarse_grain(m, pi2.after(pi1));
        const Povm stepwise = coarse_grain(coarse_grain(m, pi1), pi2);
        ASSERT_EQ(direct.size(), stepwise.size());
        for (std::size_t i = 0; i < direct.size(); ++i)
            EXPECT_LT((direct.effects[i] - stepwise.effects[i]).norm(), 1e-10);
    }
}

TEST(MeasurementSquare, SchrodingerHeisenbergAgree) {
    Fixtures fx(80);
    for (int t = 0; t < 50; ++t) {
        const Eigen::Index d = fx.integer(1, 4), k = fx.integer(1, 5), outputs = fx.integer(1, 4);
        const DensityMatrix rho = DensityMatrix::from(fx.density(d));
        const Povm m = make_povm(fx.povm(d, k));
        const StochasticMatrix pi = StochasticMatrix::from(fx.stochastic(outputs, k));
        const auto lhs = measure(rho, coarse_grain(m, pi));
        const auto rhs = classical_apply(pi, measure(rho, m));
        ASSERT_EQ(lhs.size(), rhs.size());
        for (std::size_t i = 0; i < lhs.size(); ++i) EXPECT_NEAR(lhs[i], rhs[i], 1e-10);
    }
}

TEST(AccessibleEffect, Examples) {
    Fixtures fx(81);
    const Mat x = fx.density(3);  // eigenvalues in [0, 1]
    const Effect e = Effect::from(x);
    EXPECT_LT((accessible_effect(KrausChannel::identity(3), e).matrix() - x).norm(), 1e-15);

    const Mat u = fx.unitary(3);
    const Mat ue = accessible_effect(KrausChannel::unitary(u), e).matrix();
    EXPECT_LT((ue - u.adjoint() * x * u).norm(), 1e-12);
    EXPECT_LT((testing::eigenvalues(ue) - testing::eigenvalues(x)).norm(), 1e-12);

    Mat expected = Mat::Zero(3, 3);
    for (Eigen::Index i = 0; i < 3; ++i) expected += x(i, i) * unit(3, 3, i, i);
    EXPECT_LT((accessible_effect(KrausChannel::dephasing(3), e).matrix() - expected).norm(), 1e-15);

    const KrausChannel ch = random_channel(fx, 2, 3, 3);
    EXPECT_TRUE(check_effect(accessible_effect(ch, e).matrix()).valid);
    EXPECT_THROW(accessible_effect(ch, Effect::from(identity(2))), Error);
}

TEST(AccessibleEffect, DephasingOutputsCommuteAndFormAbelianAlgebra) {
    Fixtures fx(82);
    const KrausChannel deph = KrausChannel::dephasing(4);
    std::vector<Mat> outputs;
    for (int t = 0; t < 10; ++t) {
        Mat x = fx.density(4);
        x /= testing::eigenvalues(x).maxCoeff();
        outputs.push_back(accessible_effect(deph, Effect::from(x)).matrix());
    }
    for (const auto& a : outputs)
        for (const auto& b : outputs) EXPECT_LT((a * b - b * a).norm(), 1e-9);
    const AlgebraStructure s = structure_decomposition(generate_algebra(outputs));
    for (const auto& b : s.blocks) EXPECT_EQ(b.n, 1u);
}

TEST(ClassicalApply, Examples) {
    Fixtures fx(83);
    const auto p = fx.distribution(4);
    const auto same = classical_apply(StochasticMatrix::identity(4), p);
    for (std::size_t i = 0; i < 4; ++i) EXPECT_NEAR(same[i], p[i], 1e-15);

    RealMatrix constant(3, 4);
    const auto c = fx.distribution(3);
    for (Eigen::Index j = 0; j < 4; ++j)
        for (Eigen::Index i = 0; i < 3; ++i) constant(i, j) = c[static_cast<std::size_t>(i)];
    const auto out = classical_apply(StochasticMatrix::from(constant), p);
    for (std::size_t i = 0; i < 3; ++i) EXPECT_NEAR(out[i], c[i], 1e-15);

    const StochasticMatrix pi = StochasticMatrix::from(fx.stochastic(3, 4));
    for (Eigen::Index k = 0; k < 4; ++k) {
        std::vector<double> delta(4, 0.0);
        delta[static_cast<std::size_t>(k)] = 1.0;
        const auto col = classical_apply(pi, delta);
        for (Eigen::Index i = 0; i < 3; ++i) EXPECT_NEAR(col[static_cast<std::size_t>(i)], pi.pi()(i, k), 1e-15);
    }

    RealMatrix bad(2, 2);
    bad << 0.5, 0.5, 0.6, 0.5;
    EXPECT_THROW(StochasticMatrix::from(bad), Error);
    const std::vector<double> not_dist = {0.5, 0.6, 0.0, 0.0};
    EXPECT_THROW(classical_apply(pi, not_dist), Error);
}

TEST(IsSharp, Examples) {
    EXPECT_TRUE(is_sharp(observable_from_hermitian(pauli(1))));
    EXPECT_FALSE(is_sharp(make_povm({identity(2) / 2.0, identity(2) / 2.0})));
}

}  // namespace
}  // namespace qalg
