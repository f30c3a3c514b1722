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

// Random fixtures and brute-force reference implementations shared by the
// test binaries. The references deliberately avoid the library routines they
// are used to check.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "qalg/linalg.hpp"

namespace qalg::testing {

using Mat = ComplexMatrix;
using Vec = ComplexVector;

class Fixtures {
  public:
    explicit Fixtures(std::uint64_t seed) : engine_(seed) {}

    double uniform() { return std::uniform_real_distribution<double>(0.0, 1.0)(engine_); }
    double normal() { return std::normal_distribution<double>(0.0, 1.0)(engine_); }
    int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(engine_); }

    Mat gaussian(Eigen::Index rows, Eigen::Index cols) {
        Mat m(rows, cols);
        for (Eigen::Index j = 0; j < cols; ++j) {
            for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = {normal(), normal()};
        }
        return m;
    }

    Vec unit_vector(Eigen::Index d) {
        Vec v = gaussian(d, 1).col(0);
        return v / v.norm();
    }

    Mat hermitian(Eigen::Index d) {
        const Mat g = gaussian(d, d);
        return (g + g.adjoint()) * 0.5;
    }

    /// Haar-distributed unitary (QR with the phase correction of Mezzadri).
    Mat unitary(Eigen::Index d) {
        const Mat g = gaussian(d, d);
        Eigen::HouseholderQR<Mat> qr(g);
        Mat q = qr.householderQ();
        const Mat r = qr.matrixQR().triangularView<Eigen::Upper>();
        for (Eigen::Index i = 0; i < d; ++i) {
            const Complex diag = r(i, i);
            q.col(i) *= diag / std::abs(diag);
        }
        return q;
    }

    /// rows x cols with orthonormal columns.
    Mat isometry(Eigen::Index rows, Eigen::Index cols) { return unitary(rows).leftCols(cols); }

    /// Random state of the given rank (full rank by default).
    Mat density(Eigen::Index d, Eigen::Index rank = -1) {
        if (rank < 0) rank = d;
        const Mat g = gaussian(d, rank);
        const Mat rho = g * g.adjoint();
        return rho / rho.trace().real();
    }

    /// Kraus operators of a random CPTP map C^dA -> C^dB: the dB x dA blocks
    /// of a random (k dB) x dA isometry; k is raised to ceil(dA / dB) if needed.
    std::vector<Mat> cptp_kraus(Eigen::Index d_in, Eigen::Index d_out, Eigen::Index k) {
        k = std::max(k, (d_in + d_out - 1) / d_out);
        const Mat v = isometry(k * d_out, d_in);
        std::vector<Mat> out;
        for (Eigen::Index i = 0; i < k; ++i) out.push_back(v.block(i * d_out, 0, d_out, d_in));
        return out;
    }

    /// Random POVM with k effects A_i = V_i^dagger V_i.
    std::vector<Mat> povm(Eigen::Index d, Eigen::Index k) {
        std::vector<Mat> out;
        for (const auto& b : cptp_kraus(d, d, k)) out.push_back(b.adjoint() * b);
        return out;
    }

    /// Column-stochastic outputs x inputs matrix.
    Eigen::MatrixXd stochastic(Eigen::Index outputs, Eigen::Index inputs) {
        Eigen::MatrixXd pi(outputs, inputs);
        for (Eigen::Index j = 0; j < inputs; ++j) {
            double total = 0.0;
            for (Eigen::Index i = 0; i < outputs; ++i) total += (pi(i, j) = uniform() + 1e-3);
            pi.col(j) /= total;
        }
        return pi;
    }

    std::vector<double> distribution(std::size_t n) {
        std::vector<double> p(n);
        double total = 0.0;
        for (auto& x : p) total += (x = uniform() + 1e-3);
        for (auto& x : p) x /= total;
        return p;
    }

  private:
    std::mt19937_64 engine_;
};

inline Mat unit(Eigen::Index rows, Eigen::Index cols, Eigen::Index i, Eigen::Index j) {
    Mat m = Mat::Zero(rows, cols);
    m(i, j) = 1.0;
    return m;
}

inline Mat ket(Eigen::Index d, Eigen::Index i) { return unit(d, 1, i, 0); }

inline Mat pauli(int k) {
    Mat m(2, 2);
    const Complex i(0.0, 1.0);
    switch (k) {
        case 1:
            m << 0, 1, 1, 0;
            break;
        case 2:
            m << 0, -i, i, 0;
            break;
        case 3:
            m << 1, 0, 0, -1;
            break;
        default:
            m << 1, 0, 0, 1;
    }
    return m;
}

inline Mat brute_kron(const Mat& a, const Mat& b) {
    Mat out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            for (Eigen::Index k = 0; k < b.rows(); ++k)
                for (Eigen::Index l = 0; l < b.cols(); ++l) out(i * b.rows() + k, j * b.cols() + l) = a(i, j) * b(k, l);
    return out;
}

/// Sum over the traced index of the four-index tensor z[(a,b),(a',b')].
inline Mat brute_partial_trace(const Mat& z, Eigen::Index da, Eigen::Index db, bool keep_first) {
    const Eigen::Index n = keep_first ? da : db;
    Mat out = Mat::Zero(n, n);
    for (Eigen::Index a = 0; a < da; ++a)
        for (Eigen::Index b = 0; b < db; ++b)
            for (Eigen::Index a2 = 0; a2 < da; ++a2)
                for (Eigen::Index b2 = 0; b2 < db; ++b2) {
                    if (keep_first && b == b2) out(a, a2) += z(a * db + b, a2 * db + b2);
                    if (!keep_first && a == a2) out(b, b2) += z(a * db + b, a2 * db + b2);
                }
    return out;
}

inline Mat brute_apply(const std::vector<Mat>& kraus, const Mat& rho) {
    Mat out = Mat::Zero(kraus.front().rows(), kraus.front().rows());
    for (const auto& k : kraus) out += k * rho * k.adjoint();
    return out;
}

/// sum_ij map(|i><j|) (x) |i><j|, straight from the definition.
inline Mat brute_choi(const std::function<Mat(const Mat&)>& map, Eigen::Index d_in) {
    Mat out;
    for (Eigen::Index i = 0; i < d_in; ++i) {
        for (Eigen::Index j = 0; j < d_in; ++j) {
            const Mat e = unit(d_in, d_in, i, j);
            const Mat term = brute_kron(map(e), e);
            if (out.size() == 0) out = Mat::Zero(term.rows(), term.cols());
            out += term;
        }
    }
    return out;
}

inline double min_eigenvalue(const Mat& h) {
    return Eigen::SelfAdjointEigenSolver<Mat>((h + h.adjoint()) * 0.5).eigenvalues().minCoeff();
}

inline Eigen::VectorXd eigenvalues(const Mat& h) {
    return Eigen::SelfAdjointEigenSolver<Mat>((h + h.adjoint()) * 0.5).eigenvalues();
}

/// Distance from x to span(mats), via least squares on vectorized matrices.
inline double span_distance(const Mat& x, const std::vector<Mat>& mats) {
    if (mats.empty()) return x.norm();
    const Eigen::Index n = x.size();
    Mat a(n, static_cast<Eigen::Index>(mats.size()));
    for (std::size_t k = 0; k < mats.size(); ++k) a.col(static_cast<Eigen::Index>(k)) = mats[k].reshaped();
    const Vec b = x.reshaped();
    const Vec c = a.completeOrthogonalDecomposition().solve(b);
    return (a * c - b).norm();
}

struct BlockSpec {
    Eigen::Index m = 1;
    Eigen::Index n = 1;
};

/// Generators of U^dagger [ (+)_i 1_{m_i} (x) M_{n_i} (+) 0_{d0} ] U: one random
/// complex matrix per block, which generically generates the full block.
inline std::vector<Mat> hidden_block_generators(Fixtures& fx, const std::vector<BlockSpec>& blocks,
                                                Eigen::Index d0, const Mat& u) {
    Eigen::Index d = d0;
    for (const auto& b : blocks) d += b.m * b.n;
    std::vector<Mat> out;
    Eigen::Index offset = 0;
    for (const auto& b : blocks) {
        Mat g = Mat::Zero(d, d);
        g.block(offset, offset, b.m * b.n, b.m * b.n) = brute_kron(Mat::Identity(b.m, b.m), fx.gaussian(b.n, b.n));
        out.push_back(u.adjoint() * g * u);
        offset += b.m * b.n;
    }
    return out;
}

}  // namespace qalg::testing
