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

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <set>

#include "cobit/code.h"
#include "oracle.h"

using namespace cobit;

namespace {

// Sphere volume by direct summation.
double volume(int k, int n, int r) {
    double v = 0;
    for (int j = 0; j <= r; j++) {
        v += oracle::binom(k, j) * std::pow(n - 1, j);
    }
    return v;
}

int pairwise_min_distance(const std::vector<Word> &words) {
    int best = words.empty() ? 0 : static_cast<int>(words[0].size()) + 1;
    for (size_t i = 0; i < words.size(); i++) {
        for (size_t j = i + 1; j < words.size(); j++) {
            int d = 0;
            for (size_t s = 0; s < words[i].size(); s++) {
                d += words[i][s] != words[j][s];
            }
            best = std::min(best, d);
        }
    }
    return best;
}

// All nonzero error words of weight <= t over [N] (difference symbols 1..N-1).
std::vector<Word> errors_up_to(int k, int n, int t) {
    std::vector<Word> out;
    uint64_t total = 1;
    for (int i = 0; i < k; i++) {
        total *= n;
    }
    for (uint64_t v = 0; v < total; v++) {
        Word w(k);
        uint64_t x = v;
        int weight = 0;
        for (int i = k - 1; i >= 0; i--) {
            w[i] = static_cast<int>(x % n);
            x /= n;
            weight += w[i] != 0;
        }
        if (weight <= t) {
            out.push_back(w);
        }
    }
    return out;
}

Word apply_error(const Word &c, const Word &e, int n) {
    Word r(c.size());
    for (size_t i = 0; i < c.size(); i++) {
        r[i] = symbol_add(c[i], e[i], n);
    }
    return r;
}

}  // namespace

TEST(Entropy, BinaryEntropyExamples) {
    EXPECT_DOUBLE_EQ(binary_entropy(0.5), 1.0);
    EXPECT_EQ(binary_entropy(0.0), 0.0);
    EXPECT_EQ(binary_entropy(1.0), 0.0);
    EXPECT_NEAR(binary_entropy(0.2), oracle::binary_entropy(0.2L), 1e-15);
    EXPECT_NEAR(binary_entropy(0.2), 0.721928, 1e-6);
    EXPECT_THROW(binary_entropy(-0.1), ContractError);
    EXPECT_THROW(binary_entropy(1.1), ContractError);
}

TEST(Entropy, KlDivergenceExamples) {
    EXPECT_NEAR(kl_divergence(0.3, 0.3), 0.0, 1e-15);
    long double a = 0.2L, e = 0.05L;
    double expect = static_cast<double>(a * std::log2(a / e) + (1 - a) * std::log2((1 - a) / (1 - e)));
    EXPECT_NEAR(kl_divergence(0.2, 0.05), expect, 1e-14);
    EXPECT_NEAR(kl_divergence(0.2, 0.05), 0.2017, 1e-4);
    EXPECT_THROW(kl_divergence(0.0, 0.1), ContractError);
    EXPECT_THROW(kl_divergence(0.2, 1.0), ContractError);
}

TEST(Entropy, ChernoffRelaxationGrid) {
    for (int k : {5, 10, 50, 200}) {
        for (double eps : {0.001, 0.01, 0.05, 0.1, 0.2}) {
            for (double alpha = 0.02; alpha < 0.5; alpha += 0.02) {
                if (alpha <= eps) {
                    continue;
                }
                double tight = chernoff_bound(k, alpha, eps);
                double loose = chernoff_relaxed(k, alpha, eps);
                EXPECT_LE(tight, loose * (1 + 1e-12));
                EXPECT_NEAR(tight, std::exp2(-k * kl_divergence(alpha, eps)), 1e-15);
                bool premise = alpha >= -2 / std::log2(eps);
                EXPECT_EQ(chernoff_premise(alpha, eps), premise);
                if (premise) {
                    EXPECT_LE(loose, std::exp2(-k) * (1 + 1e-12));
                }
            }
        }
    }
    EXPECT_TRUE(chernoff_premise(0.1, 0.0));
}

TEST(Chernoff, MonteCarloTailWithinThreeSigma) {
    const int k = 50, trials = 100000;
    const double eps = 0.05, alpha = 0.2;
    std::mt19937_64 rng(2024);
    std::binomial_distribution<int> errors(k, eps);
    int hits = 0;
    for (int t = 0; t < trials; t++) {
        hits += errors(rng) >= k * alpha;
    }
    double bound = chernoff_bound(k, alpha, eps);
    double sigma = std::sqrt(bound * (1 - bound) / trials);
    EXPECT_LE(static_cast<double>(hits) / trials, bound + 3 * sigma);
    // The exact tail sits below the bound too.
    EXPECT_LE(oracle::binomial_tail(k, eps, 10), bound);
}

TEST(Params, DistanceAndCorrectable) {
    CodeParams p{16, 2, 0.125};
    EXPECT_EQ(p.distance(), 4);
    EXPECT_EQ(p.correctable(), 1);
    auto q = CodeParams::with_distance(7, 2, 3);
    EXPECT_EQ(q.distance(), 3);
    EXPECT_EQ(q.correctable(), 1);
    for (int k = 1; k <= 20; k++) {
        for (int d = 1; d <= k; d++) {
            EXPECT_EQ(CodeParams::with_distance(k, 2, d).distance(), d);
        }
    }
    EXPECT_THROW((CodeParams{4, 2, 0.6}.validate()), ContractError);
    EXPECT_THROW((CodeParams{4, 1, 0.1}.validate()), ContractError);
    EXPECT_THROW((CodeParams{0, 2, 0.1}.validate()), ContractError);
    EXPECT_THROW((CodeParams{4, 2, 0.0}.validate()), ContractError);
}

TEST(Build, GreedyMeetsSphereBound) {
    auto code = build_code(CodeParams::with_distance(7, 2, 3), 1);
    double guaranteed = std::ceil(128 / volume(7, 2, 2));
    EXPECT_EQ(guaranteed, 5);
    EXPECT_GE(code.codewords.size(), 5u);
    EXPECT_EQ(gv_bound(7, 2, 3), 5u);
    EXPECT_GE(pairwise_min_distance(code.codewords), 3);
}

TEST(Build, DistanceOneKeepsEverything) {
    auto code = build_code(CodeParams::with_distance(6, 2, 1), 3);
    EXPECT_EQ(code.codewords.size(), 64u);
    auto ternary = build_code(CodeParams::with_distance(4, 3, 1), 3);
    EXPECT_EQ(ternary.codewords.size(), 81u);
}

TEST(Build, VacuousRateBoundStillYieldsCodewords) {
    CodeParams p{16, 2, 0.125};
    double expect = 16 * (1 - 0.25 - oracle::binary_entropy(0.25L));
    EXPECT_NEAR(rate_bound_bits(p), expect, 1e-12);
    EXPECT_LT(rate_bound_bits(p), 0);
    auto code = build_code(p, 0);
    EXPECT_GE(code.codewords.size(), 1u);
    EXPECT_GE(pairwise_min_distance(code.codewords), 4);
}

TEST(Build, DeterministicGivenSeed) {
    auto p = CodeParams::with_distance(9, 2, 3);
    EXPECT_EQ(build_code(p, 42).codewords, build_code(p, 42).codewords);
    EXPECT_NE(build_code(p, 42).codewords, build_code(p, 43).codewords);
}

TEST(Build, Contracts) {
    EXPECT_THROW(CodeParams::with_distance(4, 2, 5), ContractError);
    EXPECT_THROW(build_code(CodeParams::with_distance(23, 2, 3), 0), WidthOverflow);
}

// Exhaustive: every built code at desk scale meets its distance and the
// greedy volume guarantee, and the rate bound whenever 2 alpha <= 1/2.
TEST(Build, MinimumDistanceAndCountProperty) {
    for (int n : {2, 3, 4}) {
        int kmax = n == 2 ? 12 : (n == 3 ? 7 : 6);
        for (int k = 2; k <= kmax; k++) {
            for (int d = 1; d <= k; d++) {
                for (uint64_t seed : {0u, 1u}) {
                    auto p = CodeParams::with_distance(k, n, d);
                    auto code = build_code(p, seed);
                    ASSERT_GE(pairwise_min_distance(code.codewords), d) << "k=" << k << " n=" << n << " d=" << d;
                    EXPECT_EQ(code.min_distance(), pairwise_min_distance(code.codewords));
                    double total = std::pow(n, k);
                    EXPECT_GE(static_cast<double>(code.codewords.size()), total / volume(k, n, d - 1) - 1e-9);
                    if (2 * p.alpha <= 0.5) {
                        EXPECT_GE(std::log2(static_cast<double>(code.codewords.size())), rate_bound_bits(p) - 1e-9);
                    }
                    EXPECT_LE(std::pow(n, code.l()), static_cast<double>(code.codewords.size()));
                    EXPECT_GT(std::pow(n, code.l() + 1), static_cast<double>(code.codewords.size()));
                }
            }
        }
    }
}

TEST(Decode, ExactCodewordDecodesToItself) {
    auto code = build_code(CodeParams::with_distance(7, 2, 3), 5);
    for (uint64_t m = 0; m < code.message_count(); m++) {
        auto r = decode(code, encode(code, m));
        ASSERT_TRUE(r.has_value());
        EXPECT_EQ(r->message, m);
        EXPECT_EQ(hamming_weight(r->error), 0);
    }
}

// Exhaustive over all <= t error patterns, k <= 10, N = 2, plus N = 3 and 4.
TEST(Decode, CorrectsEveryPatternWithinRadius) {
    struct Case {
        int k, n, d;
    };
    std::vector<Case> cases;
    for (int k = 3; k <= 10; k++) {
        for (int d = 3; d <= k; d += 2) {
            cases.push_back({k, 2, d});
        }
    }
    cases.push_back({5, 3, 3});
    cases.push_back({5, 4, 3});
    for (auto [k, n, d] : cases) {
        auto code = build_code(CodeParams::with_distance(k, n, d), 9);
        int t = code.params.correctable();
        auto errs = errors_up_to(k, n, t);
        for (uint64_t m = 0; m < code.message_count(); m++) {
            const auto &c = encode(code, m);
            for (const auto &e : errs) {
                auto r = decode(code, apply_error(c, e, n));
                ASSERT_TRUE(r.has_value()) << "k=" << k << " n=" << n;
                EXPECT_EQ(r->message, m);
                EXPECT_EQ(r->codeword, c);
                EXPECT_EQ(r->error, e);
            }
        }
    }
}

TEST(Decode, FailsOutsideEveryBall) {
    auto code = build_code(CodeParams::with_distance(7, 2, 3), 5);
    int t = code.params.correctable();
    bool found = false;
    for (uint64_t v = 0; v < 128 && !found; v++) {
        Word w(7);
        for (int i = 0; i < 7; i++) {
            w[i] = (v >> (6 - i)) & 1;
        }
        bool far = true;
        for (const auto &c : code.codewords) {
            far = far && hamming_distance(w, c) > t;
        }
        if (far) {
            found = true;
            EXPECT_FALSE(decode(code, w).has_value());
        }
    }
    EXPECT_TRUE(found);
    EXPECT_THROW(decode(code, Word(6, 0)), ContractError);
}

TEST(Syndrome, Examples) {
    CodeParams p{16, 2, 0.125};
    double cost = std::ceil(16 * oracle::binary_entropy(0.125L) + std::log2(16 * 0.125));
    EXPECT_EQ(cost, 10);
    auto zero = syndrome_support(Word(16, 0), p);
    EXPECT_TRUE(zero.positions.empty());
    EXPECT_EQ(zero.bit_cost, 10);
    EXPECT_FALSE(zero.oversized);

    Word one(16, 0);
    one[3] = 1;
    auto s = syndrome_support(one, p);
    EXPECT_EQ(s.positions, std::vector<int>{3});
    EXPECT_EQ(s.bit_cost, 10);

    Word two = one;
    two[9] = 1;
    EXPECT_FALSE(syndrome_support(two, p).oversized);
    Word three = two;
    three[12] = 1;
    EXPECT_TRUE(syndrome_support(three, p).oversized);
}

TEST(SymbolArithmetic, XorForPowersOfTwoElseModular) {
    for (int n : {2, 4, 8}) {
        for (int a = 0; a < n; a++) {
            for (int b = 0; b < n; b++) {
                EXPECT_EQ(symbol_diff(a, b, n), a ^ b);
                EXPECT_EQ(symbol_add(b, symbol_diff(a, b, n), n), a);
            }
        }
    }
    for (int a = 0; a < 3; a++) {
        for (int b = 0; b < 3; b++) {
            EXPECT_EQ(symbol_diff(a, b, 3), ((a - b) % 3 + 3) % 3);
            EXPECT_EQ(symbol_add(b, symbol_diff(a, b, 3), 3), a);
        }
    }
}

TEST(CoherentDecode, BallSuperpositionFactorizes) {
    auto code = repetition_code(3);
    RegisterLayout l({{"R", Party::Bob, 3}});
    Amplitudes amps = Amplitudes::Zero(8);
    for (int v : {0b000, 0b001, 0b010, 0b100}) {
        amps[v] = 0.5;
    }
    auto out = coherent_decode(QuantumState(l, amps), code, "R");
    EXPECT_EQ(out.layout().names(), (std::vector<std::string>{"R", "R.err", "R.fail"}));
    auto branch = slice(out, {{"R", 0}, {"R.fail", 0}});
    EXPECT_NEAR(branch.weight(), 1.0, 1e-15);
    for (int e : {0b000, 0b001, 0b010, 0b100}) {
        EXPECT_NEAR(std::abs(branch.amplitudes()[e]), 0.5, 1e-15);
    }

    auto cw = coherent_decode(basis_state(l, std::map<std::string, uint64_t>{{"R", 7}}), code, "R");
    EXPECT_NEAR(slice(cw, {{"R", 7}, {"R.err", 0}, {"R.fail", 0}}).weight(), 1.0, 1e-15);
}

TEST(CoherentDecode, TableIsAPermutation) {
    for (const auto &code : {repetition_code(3), build_code(CodeParams::with_distance(5, 2, 3), 1),
                             build_code(CodeParams::with_distance(3, 4, 3), 1)}) {
        auto table = coherent_decode_table(code);
        std::set<uint64_t> seen(table.begin(), table.end());
        EXPECT_EQ(seen.size(), table.size());
        EXPECT_EQ(*seen.rbegin(), table.size() - 1);
    }
    // D^dagger D = I as a matrix statement.
    auto table = coherent_decode_table(repetition_code(3));
    Eigen::MatrixXd d = Eigen::MatrixXd::Zero(table.size(), table.size());
    for (size_t i = 0; i < table.size(); i++) {
        d(table[i], i) = 1;
    }
    EXPECT_LT((d.transpose() * d - Eigen::MatrixXd::Identity(table.size(), table.size())).norm(), 1e-10);
    RegisterLayout wrong({{"R", Party::Bob, 2}});
    EXPECT_THROW(coherent_decode(basis_state(wrong, std::map<std::string, uint64_t>{{"R", 0}}), repetition_code(3), "R"),
                 ContractError);
}

TEST(Repetition, Structure) {
    auto code = repetition_code(5);
    EXPECT_EQ(code.codewords.size(), 2u);
    EXPECT_EQ(code.min_distance(), 5);
    EXPECT_EQ(code.params.distance(), 5);
    EXPECT_EQ(code.params.correctable(), 2);
    EXPECT_EQ(code.l(), 1);
    auto quaternary = repetition_code(3, 4);
    EXPECT_EQ(quaternary.codewords.size(), 4u);
    EXPECT_EQ(message_symbols(quaternary, 3), Word{3});
}
