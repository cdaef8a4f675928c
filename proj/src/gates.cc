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

#include "cobit/gates.h"

#include <bit>
#include <cmath>
#include <numeric>
#include <string>

namespace cobit::gates {

namespace {
const cplx I{0, 1};
}

Matrix identity(int width) {
    auto d = Eigen::Index{1} << width;
    return Matrix::Identity(d, d);
}

Matrix x() {
    Matrix m(2, 2);
    m << 0, 1, 1, 0;
    return m;
}

Matrix y() {
    Matrix m(2, 2);
    m << 0, -I, I, 0;
    return m;
}

Matrix z() {
    Matrix m(2, 2);
    m << 1, 0, 0, -1;
    return m;
}

Matrix h() {
    Matrix m(2, 2);
    double r = 1 / std::sqrt(2.0);
    m << r, r, r, -r;
    return m;
}

Matrix s() {
    Matrix m(2, 2);
    m << 1, 0, 0, I;
    return m;
}

Matrix t() {
    Matrix m(2, 2);
    m << 1, 0, 0, std::exp(I * (M_PI / 4));
    return m;
}

Matrix rx(double theta) {
    Matrix m(2, 2);
    double c = std::cos(theta / 2), sn = std::sin(theta / 2);
    m << c, -I * sn, -I * sn, c;
    return m;
}

Matrix ry(double theta) {
    Matrix m(2, 2);
    double c = std::cos(theta / 2), sn = std::sin(theta / 2);
    m << c, -sn, sn, c;
    return m;
}

Matrix rz(double theta) {
    Matrix m(2, 2);
    m << std::exp(-I * (theta / 2)), 0, 0, std::exp(I * (theta / 2));
    return m;
}

Matrix cnot() {
    return xor_copy(1);
}

Matrix cz() {
    Matrix m = Matrix::Identity(4, 4);
    m(3, 3) = -1;
    return m;
}

Matrix swap() {
    return swap_registers(1);
}

Matrix on_each(const Matrix &single, int width) {
    Matrix out = Matrix::Identity(1, 1);
    for (int i = 0; i < width; i++) {
        out = kron(out, single);
    }
    return out;
}

Matrix permutation(int width, const std::function<uint64_t(uint64_t)> &f) {
    auto d = Eigen::Index{1} << width;
    Matrix m = Matrix::Zero(d, d);
    for (Eigen::Index v = 0; v < d; v++) {
        auto w = static_cast<Eigen::Index>(f(static_cast<uint64_t>(v)));
        if (w < 0 || w >= d || m.row(w).cwiseAbs().sum() != 0) {
            throw ContractError("map is not a permutation");
        }
        m(w, v) = 1;
    }
    return m;
}

Matrix xor_copy(int width) {
    uint64_t mask = (uint64_t{1} << width) - 1;
    return permutation(2 * width, [&](uint64_t v) {
        uint64_t hi = v >> width;
        return (hi << width) | ((v & mask) ^ hi);
    });
}

Matrix swap_registers(int width) {
    uint64_t mask = (uint64_t{1} << width) - 1;
    return permutation(2 * width, [&](uint64_t v) {
        return ((v & mask) << width) | (v >> width);
    });
}

Matrix named(std::string_view name, std::span<const int> target_widths, double theta) {
    int total = std::accumulate(target_widths.begin(), target_widths.end(), 0);
    auto pair_width = [&]() {
        if (target_widths.size() != 2 || target_widths[0] != target_widths[1]) {
            throw ContractError("gate '" + std::string(name) + "' needs two targets of equal width");
        }
        return target_widths[0];
    };
    if (name == "id") return identity(total);
    if (name == "x") return on_each(x(), total);
    if (name == "y") return on_each(y(), total);
    if (name == "z") return on_each(z(), total);
    if (name == "h") return on_each(h(), total);
    if (name == "s") return on_each(s(), total);
    if (name == "t") return on_each(t(), total);
    if (name == "rx") return on_each(rx(theta), total);
    if (name == "ry") return on_each(ry(theta), total);
    if (name == "rz") return on_each(rz(theta), total);
    if (name == "cnot" || name == "copy") return xor_copy(pair_width());
    if (name == "swap") return swap_registers(pair_width());
    if (name == "cz") {
        int w = pair_width();
        Matrix m = identity(2 * w);
        for (Eigen::Index v = 0; v < m.rows(); v++) {
            uint64_t a = static_cast<uint64_t>(v) >> w;
            uint64_t b = static_cast<uint64_t>(v) & ((uint64_t{1} << w) - 1);
            if (std::popcount(a & b) % 2) {
                m(v, v) = -1;
            }
        }
        return m;
    }
    throw ContractError("unknown local gate '" + std::string(name) + "'");
}

}  // namespace cobit::gates
