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

#include "cobit/code.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <random>

namespace cobit {

namespace {

void require(bool ok, const std::string &what) {
    if (!ok) {
        throw ContractError(what);
    }
}

bool power_of_two(int n) {
    return n > 0 && (n & (n - 1)) == 0;
}

uint64_t ipow(uint64_t base, int exp) {
    uint64_t r = 1;
    for (int i = 0; i < exp; i++) {
        if (r > (uint64_t{1} << 62) / base) {
            throw WidthOverflow("N^k exceeds 2^62");
        }
        r *= base;
    }
    return r;
}

Word word_of(uint64_t index, int k, int n) {
    Word w(k);
    for (int i = k - 1; i >= 0; i--) {
        w[i] = static_cast<int>(index % n);
        index /= n;
    }
    return w;
}

uint64_t index_of(const Word &w, int n) {
    uint64_t v = 0;
    for (int s : w) {
        v = v * n + s;
    }
    return v;
}

int bits_per_symbol(int n) {
    return std::countr_zero(static_cast<unsigned>(n));
}

}  // namespace

double binary_entropy(double p) {
    require(p >= 0 && p <= 1, "binary entropy needs p in [0, 1]");
    if (p == 0 || p == 1) {
        return 0;
    }
    return -p * std::log2(p) - (1 - p) * std::log2(1 - p);
}

double kl_divergence(double a, double e) {
    require(a > 0 && a < 1 && e > 0 && e < 1, "KL divergence needs both arguments in (0, 1)");
    return a * std::log2(a / e) + (1 - a) * std::log2((1 - a) / (1 - e));
}

double chernoff_bound(int k, double alpha, double eps) {
    if (eps == 0) {
        return 0;
    }
    return std::exp2(-k * kl_divergence(alpha, eps));
}

double chernoff_relaxed(int k, double alpha, double eps) {
    if (eps == 0) {
        return 0;
    }
    return std::exp2(k + k * alpha * std::log2(eps));
}

bool chernoff_premise(double alpha, double eps) {
    if (eps <= 0) {
        return true;
    }
    if (eps >= 1) {
        return false;
    }
    return alpha >= -2 / std::log2(eps);
}

int CodeParams::distance() const {
    // Guard against 2k*alpha landing a hair above an integer.
    return static_cast<int>(std::ceil(2 * k * alpha - 1e-12));
}

int CodeParams::correctable() const {
    return std::max(0, (distance() - 1) / 2);
}

void CodeParams::validate() const {
    require(k >= 1, "block length must be positive");
    require(n_symbols >= 2, "alphabet needs at least two symbols");
    require(alpha > 0 && alpha < 0.5, "alpha must lie in (0, 1/2)");
    require(distance() <= k, "distance exceeds block length; no code exists");
}

CodeParams CodeParams::with_distance(int k, int n_symbols, int d) {
    require(d >= 1 && d <= k, "distance must lie in [1, k]");
    return CodeParams{k, n_symbols, (d - 0.5) / (2.0 * k)};
}

double hamming_ball_volume(int k, int n_symbols, int r) {
    double vol = 0, binom = 1;
    for (int j = 0; j <= std::min(r, k); j++) {
        if (j > 0) {
            binom = binom * (k - j + 1) / j;
        }
        vol += binom * std::pow(n_symbols - 1, j);
    }
    return vol;
}

uint64_t gv_bound(int k, int n_symbols, int d) {
    double total = std::pow(static_cast<double>(n_symbols), k);
    return static_cast<uint64_t>(std::ceil(total / hamming_ball_volume(k, n_symbols, d - 1) - 1e-9));
}

double rate_bound_bits(const CodeParams &p) {
    double lg = std::log2(p.n_symbols);
    double two_a = std::min(2 * p.alpha, 1.0);
    return p.k * lg * (1 - 2 * p.alpha - binary_entropy(two_a) / lg);
}

int symbol_diff(int a, int b, int n) {
    if (power_of_two(n)) {
        return a ^ b;
    }
    return ((a - b) % n + n) % n;
}

int symbol_add(int a, int b, int n) {
    if (power_of_two(n)) {
        return a ^ b;
    }
    return (a + b) % n;
}

int hamming_weight(const Word &w) {
    return static_cast<int>(std::count_if(w.begin(), w.end(), [](int s) { return s != 0; }));
}

int hamming_distance(const Word &a, const Word &b) {
    require(a.size() == b.size(), "words of different length");
    int d = 0;
    for (size_t i = 0; i < a.size(); i++) {
        d += a[i] != b[i];
    }
    return d;
}

int BlockCode::l() const {
    int l = 0;
    uint64_t cap = 1;
    while (cap * params.n_symbols <= codewords.size()) {
        cap *= params.n_symbols;
        l++;
    }
    return l;
}

uint64_t BlockCode::message_count() const {
    return ipow(params.n_symbols, l());
}

int BlockCode::min_distance() const {
    int best = params.k + 1;
    for (size_t i = 0; i < codewords.size(); i++) {
        for (size_t j = i + 1; j < codewords.size(); j++) {
            best = std::min(best, hamming_distance(codewords[i], codewords[j]));
        }
    }
    return best;
}

BlockCode build_code(const CodeParams &params, uint64_t seed) {
    params.validate();
    uint64_t total = ipow(params.n_symbols, params.k);
    if (total > (uint64_t{1} << kMaxWidth)) {
        throw WidthOverflow("greedy construction enumerates N^k = " + std::to_string(total) + " words; cap is 2^" +
                            std::to_string(kMaxWidth));
    }
    std::vector<uint64_t> order(total);
    std::iota(order.begin(), order.end(), 0);
    std::mt19937_64 rng(seed);
    std::shuffle(order.begin(), order.end(), rng);

    BlockCode code{params, seed, {}};
    int d = params.distance();
    for (uint64_t idx : order) {
        Word w = word_of(idx, params.k, params.n_symbols);
        bool ok = std::all_of(code.codewords.begin(), code.codewords.end(),
                              [&](const Word &c) { return hamming_distance(c, w) >= d; });
        if (ok) {
            code.codewords.push_back(std::move(w));
        }
    }
    return code;
}

BlockCode repetition_code(int k, int n_symbols) {
    BlockCode code{CodeParams::with_distance(k, n_symbols, k), 0, {}};
    for (int s = 0; s < n_symbols; s++) {
        code.codewords.push_back(Word(k, s));
    }
    return code;
}

const Word &encode(const BlockCode &code, uint64_t message) {
    require(message < code.message_count(), "message index exceeds N^l");
    return code.codewords[message];
}

Word message_symbols(const BlockCode &code, uint64_t message) {
    require(message < code.message_count(), "message index exceeds N^l");
    return word_of(message, code.l(), code.params.n_symbols);
}

std::optional<Decoded> decode(const BlockCode &code, const Word &received) {
    require(static_cast<int>(received.size()) == code.params.k, "received word has the wrong length");
    int t = code.params.correctable();
    for (size_t i = 0; i < code.codewords.size(); i++) {
        const auto &c = code.codewords[i];
        if (hamming_distance(c, received) <= t) {
            Word e(received.size());
            for (size_t j = 0; j < e.size(); j++) {
                e[j] = symbol_diff(received[j], c[j], code.params.n_symbols);
            }
            return Decoded{i, c, std::move(e)};
        }
    }
    return std::nullopt;
}

SyndromeSupport syndrome_support(const Word &error, const CodeParams &params) {
    SyndromeSupport s;
    for (size_t j = 0; j < error.size(); j++) {
        if (error[j] != 0) {
            s.positions.push_back(static_cast<int>(j));
        }
    }
    double ka = params.k * params.alpha;
    double cost = params.k * binary_entropy(std::min(params.alpha, 1.0)) + (ka > 0 ? std::log2(ka) : 0);
    s.bit_cost = static_cast<int>(std::ceil(cost - 1e-12));
    s.oversized = static_cast<double>(s.positions.size()) > std::floor(ka + 1e-12);
    return s;
}

std::vector<uint64_t> coherent_decode_table(const BlockCode &code) {
    int n = code.params.n_symbols;
    require(power_of_two(n), "coherent decoding needs a power-of-two alphabet");
    int w = code.params.k * bits_per_symbol(n);
    require(2 * w + 1 <= kMaxWidth, "coherent decoder table exceeds the dense cap");
    uint64_t words = uint64_t{1} << w;
    uint64_t size = uint64_t{1} << (2 * w + 1);
    // Index layout: (reg << (w + 1)) | (err << 1) | fail.
    std::vector<uint64_t> table(size, UINT64_MAX);
    std::vector<bool> used(size, false);
    for (uint64_t v = 0; v < words; v++) {
        auto dec = decode(code, word_of(v, code.params.k, n));
        uint64_t target = dec ? (index_of(dec->codeword, n) << (w + 1)) | (index_of(dec->error, n) << 1)
                              : (v << (w + 1)) | 1;
        uint64_t source = v << (w + 1);
        table[source] = target;
        used[target] = true;
    }
    uint64_t next_free = 0;
    for (uint64_t src = 0; src < size; src++) {
        if (table[src] != UINT64_MAX) {
            continue;
        }
        while (used[next_free]) {
            next_free++;
        }
        table[src] = next_free;
        used[next_free] = true;
    }
    return table;
}

QuantumState coherent_decode(const QuantumState &s, const BlockCode &code, const std::string &reg) {
    const auto &r = s.layout().at(reg);
    int w = code.params.k * bits_per_symbol(code.params.n_symbols);
    require(r.width == w, "register width does not match k log2 N");
    auto table = coherent_decode_table(code);
    QuantumState out = with_register(s, {reg + ".err", r.party, w});
    out = with_register(out, {reg + ".fail", r.party, 1});
    std::vector<std::string> targets{reg, reg + ".err", reg + ".fail"};
    return apply_permutation(out, targets, [&](uint64_t v) { return table[v]; });
}

}  // namespace cobit
