// Copyright 2026 The Cobit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Independent reference computations used by the tests. Everything here works
// on raw index arithmetic and plain Eigen, never on the library's kernels.

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <vector>

namespace oracle {

using cplx = std::complex<double>;
using Vec = Eigen::VectorXcd;
using Mat = Eigen::MatrixXcd;

inline Vec random_state(int width, std::mt19937_64 &rng) {
    std::normal_distribution<double> g;
    Vec v(int64_t{1} << width);
    for (auto &x : v) {
        x = cplx(g(rng), g(rng));
    }
    return v / v.norm();
}

inline Mat random_unitary(int dim, std::mt19937_64 &rng) {
    std::normal_distribution<double> g;
    Mat m(dim, dim);
    for (int r = 0; r < dim; r++) {
        for (int c = 0; c < dim; c++) {
            m(r, c) = cplx(g(rng), g(rng));
        }
    }
    Eigen::HouseholderQR<Mat> qr(m);
    Mat q = qr.householderQ();
    return q;
}

/// Reduced density matrix of a pure state on `total` qubits, keeping the qubit
/// positions in `keep` (0 = most significant), in the order given.
inline Mat reduce(const Vec &psi, int total, const std::vector<int> &keep) {
    std::vector<int> rest;
    for (int q = 0; q < total; q++) {
        bool kept = false;
        for (int k : keep) {
            kept = kept || k == q;
        }
        if (!kept) {
            rest.push_back(q);
        }
    }
    int64_t dk = int64_t{1} << keep.size();
    int64_t dr = int64_t{1} << rest.size();
    auto compose = [&](uint64_t kv, uint64_t rv) {
        uint64_t idx = 0;
        for (size_t i = 0; i < keep.size(); i++) {
            idx |= ((kv >> (keep.size() - 1 - i)) & 1) << (total - 1 - keep[i]);
        }
        for (size_t i = 0; i < rest.size(); i++) {
            idx |= ((rv >> (rest.size() - 1 - i)) & 1) << (total - 1 - rest[i]);
        }
        return idx;
    };
    Mat rho = Mat::Zero(dk, dk);
    for (int64_t i = 0; i < dk; i++) {
        for (int64_t j = 0; j < dk; j++) {
            cplx s = 0;
            for (int64_t r = 0; r < dr; r++) {
                s += psi[compose(i, r)] * std::conj(psi[compose(j, r)]);
            }
            rho(i, j) = s;
        }
    }
    return rho;
}

/// Entropy in bits of the reduced state on the leading `left` qubits.
inline double entanglement_entropy(const Vec &psi, int total, int left) {
    Mat m(int64_t{1} << left, int64_t{1} << (total - left));
    for (int64_t i = 0; i < psi.size(); i++) {
        m(i >> (total - left), i & ((int64_t{1} << (total - left)) - 1)) = psi[i];
    }
    Eigen::JacobiSVD<Mat> svd(m);
    double h = 0;
    for (int i = 0; i < svd.singularValues().size(); i++) {
        double p = svd.singularValues()[i] * svd.singularValues()[i];
        if (p > 1e-15) {
            h -= p * std::log2(p);
        }
    }
    return h;
}

inline double trace_norm_half(const Mat &a) {
    Eigen::SelfAdjointEigenSolver<Mat> es(a);
    return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

/// Operator-Schmidt rank by realignment with a Jacobi SVD.
inline int operator_schmidt_rank(const Mat &u, int wa, int wb) {
    int64_t da = int64_t{1} << wa, db = int64_t{1} << wb;
    Mat r(da * da, db * db);
    for (int64_t a = 0; a < da; a++) {
        for (int64_t a2 = 0; a2 < da; a2++) {
            for (int64_t b = 0; b < db; b++) {
                for (int64_t b2 = 0; b2 < db; b2++) {
                    r(a * da + a2, b * db + b2) = u(a * db + b, a2 * db + b2);
                }
            }
        }
    }
    Eigen::JacobiSVD<Mat> svd(r);
    const auto &s = svd.singularValues();
    int rank = 0;
    for (int i = 0; i < s.size(); i++) {
        rank += s[i] > 1e-9 * s[0];
    }
    return rank;
}

inline double binom(int n, int k) {
    return std::exp(std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0));
}

inline double binary_entropy(long double p) {
    if (p <= 0 || p >= 1) {
        return 0;
    }
    return static_cast<double>(-p * std::log2(p) - (1 - p) * std::log2(1 - p));
}

/// P[Bin(n, p) >= j].
inline double binomial_tail(int n, double p, int j) {
    long double s = 0;
    for (int i = j; i <= n; i++) {
        s += binom(n, i) * std::pow(static_cast<long double>(p), i) * std::pow(1.0L - p, n - i);
    }
    return static_cast<double>(s);
}

}  // namespace oracle
