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

#include <cstdint>
#include <optional>
#include <vector>

#include "cobit/qstate.h"

namespace cobit {

using Word = std::vector<int>;

double binary_entropy(double p);
/// D(a || e) in bits.
double kl_divergence(double a, double e);
/// 2^(-k D(alpha || eps)): Chernoff bound on the chance of more than k*alpha
/// errors at per-symbol error rate eps.
double chernoff_bound(int k, double alpha, double eps);
/// The looser 2^(k + k alpha log2 eps), which drops below 2^-k once alpha >= -2/log2 eps.
double chernoff_relaxed(int k, double alpha, double eps);
/// True when alpha >= -2/log2(eps); trivially true at eps = 0.
bool chernoff_premise(double alpha, double eps);

struct CodeParams {
    int k = 0;
    int n_symbols = 2;
    double alpha = 0;

    /// d = ceil(2 k alpha).
    int distance() const;
    /// t = floor((d - 1) / 2).
    int correctable() const;
    void validate() const;

    /// Parameters whose distance is exactly d; alpha = (d - 1/2) / (2k).
    static CodeParams with_distance(int k, int n_symbols, int d);
};

/// Number of words within Hamming distance r of a fixed word.
double hamming_ball_volume(int k, int n_symbols, int r);
/// ceil(N^k / Vol(k, d - 1)): the greedy construction never returns fewer codewords.
uint64_t gv_bound(int k, int n_symbols, int d);
/// k log2 N [1 - 2 alpha - H2(2 alpha) / log2 N], the guaranteed message length
/// in bits (may be negative at small k).
double rate_bound_bits(const CodeParams &p);

/// Symbol difference used for error vectors: XOR when N is a power of two
/// (so that register arithmetic matches the coherent pad), subtraction mod N otherwise.
int symbol_diff(int a, int b, int n_symbols);
int symbol_add(int a, int b, int n_symbols);
int hamming_weight(const Word &w);
int hamming_distance(const Word &a, const Word &b);

struct BlockCode {
    CodeParams params;
    uint64_t seed = 0;
    std::vector<Word> codewords;

    /// Message length in symbols: the largest l with N^l <= |codewords|.
    int l() const;
    uint64_t message_count() const;
    /// Smallest pairwise distance (exhaustive); k + 1 for a single codeword.
    int min_distance() const;
};

/// Greedy Gilbert-Varshamov construction over all N^k words visited in a
/// seeded pseudorandom order.
BlockCode build_code(const CodeParams &params, uint64_t seed);
/// The k-fold repetition code over [N] (distance k).
BlockCode repetition_code(int k, int n_symbols = 2);

/// Message index in [0, N^l) to codeword.
const Word &encode(const BlockCode &code, uint64_t message);
/// Symbols (most significant first) of a message index.
Word message_symbols(const BlockCode &code, uint64_t message);

struct Decoded {
    uint64_t message = 0;
    Word codeword;
    Word error;  // received (-) codeword
};
/// Bounded-distance decoding: the unique codeword within distance t, if any.
std::optional<Decoded> decode(const BlockCode &code, const Word &received);

struct SyndromeSupport {
    std::vector<int> positions;
    int bit_cost = 0;
    bool oversized = false;
};
/// Positions of nonzero error symbols and the cost ceil(k H2(alpha) + log2(k alpha))
/// of announcing them. Oversized when more than floor(k alpha) positions are set.
SyndromeSupport syndrome_support(const Word &error, const CodeParams &params);

/// Coherent decoder on a k log2 N qubit register: appends `<reg>.err` and a
/// one-qubit `<reg>.fail` flag (both owned by the register's party) and maps
///   |v>|0>|0> -> |c>|v (-) c>|0>   when v decodes to c,
///   |v>|0>|0> -> |v>|0>|1>         otherwise,
/// completed to a permutation of the full space.
QuantumState coherent_decode(const QuantumState &s, const BlockCode &code, const std::string &reg);
/// The permutation used by `coherent_decode`, on (reg, err, fail) values.
std::vector<uint64_t> coherent_decode_table(const BlockCode &code);

}  // namespace cobit
