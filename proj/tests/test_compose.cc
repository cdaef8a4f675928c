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

#include "cobit/compose.h"
#include "cobit/serialize.h"
#include "oracle.h"

using namespace cobit;

namespace {

PipelineConfig repetition_config(MessageProtocol p, int k) {
    PipelineConfig cfg;
    cfg.protocol = std::move(p);
    cfg.k = k;
    if (cfg.protocol.c1_bits > 0) {
        cfg.code_a = repetition_code(k, 1 << cfg.protocol.c1_bits);
    }
    if (cfg.protocol.c2_bits > 0) {
        cfg.code_b = repetition_code(k, 1 << cfg.protocol.c2_bits);
    }
    cfg.alpha = CodeParams::with_distance(k, 2, k).alpha;
    return cfg;
}

// Terms recomputed from their definitions.
std::array<double, 7> terms_oracle(double k, int n, double alpha, double r, int sch, double c1, double c2,
                                   double delta) {
    double s = std::pow(sch, n);
    return {std::pow(2.0, 2 - k),
            std::pow(2.0, -std::sqrt(k) * s),
            2 * alpha * (c1 + c2),
            s / (n * std::sqrt(k)),
            r / n,
            3 * alpha * (c1 + c2),
            2 * delta};
}

}  // namespace

TEST(Pipeline, NoiselessK3Ledger) {
    auto cfg = repetition_config(protocols::crossing(), 3);
    auto analysis = analyze(cfg.protocol);
    for (uint64_t a = 0; a < 2; a++) {
        for (uint64_t b = 0; b < 2; b++) {
            auto r = run_pipeline(cfg, a, b, 17, analysis);
            const auto &l = r.ledger;
            EXPECT_EQ(l.p_fail, 0);
            EXPECT_EQ(l.p_message_error, 0);
            EXPECT_TRUE(r.transcript.sampled_success);
            EXPECT_EQ(r.transcript.kept_positions.size(), 3u);
            EXPECT_EQ(l.cobits_fwd, 1);
            EXPECT_EQ(l.cobits_back, 1);
            EXPECT_EQ(l.u_uses, 3 + 12);
            EXPECT_EQ(l.ebits_in, 6);
            // Gamma_00 is maximally entangled of rank 4: three copies give exactly 6.
            EXPECT_NEAR(l.ebits_out, 6, 1e-9);
            EXPECT_NEAR(l.ebits_in - l.ebits_out - l.retained_entropy, 0, 1e-9);
            EXPECT_EQ(r.transcript.codeword_a, Word(3, static_cast<int>(a)));
            EXPECT_EQ(r.transcript.codeword_b, Word(3, static_cast<int>(b)));
            EXPECT_EQ(r.transcript.decoded_a, a);
            EXPECT_EQ(r.transcript.decoded_b, b);
            EXPECT_LT(l.decoupling_error, 1e-9);
            ASSERT_TRUE(r.transcript.concentration.has_value());
            EXPECT_EQ(r.transcript.concentration->k_prime, 3);
            for (const auto &pos : r.transcript.positions) {
                ASSERT_EQ(pos.branches.size(), 1u);
                EXPECT_EQ(std::get<0>(pos.branches[0]), pos.a);
                EXPECT_EQ(std::get<1>(pos.branches[0]), pos.b);
            }
            double cost = std::ceil(3 * oracle::binary_entropy(cfg.alpha) + std::log2(3 * cfg.alpha));
            EXPECT_EQ(l.syndrome_bits_fwd, cost);
            EXPECT_EQ(l.syndrome_bits_back, cost);
        }
    }
}

TEST(Pipeline, ConfigFileMatchesProgrammaticConfig) {
    std::filesystem::path dir = std::filesystem::path(COBIT_SOURCE_DIR) / "data" / "pipelines";
    auto cfg = pipeline_from_json(read_json_file(dir / "noiseless_k3.json"), dir);
    auto ref = repetition_config(protocols::crossing(), 3);
    EXPECT_EQ(cfg.k, ref.k);
    EXPECT_NEAR(cfg.alpha, ref.alpha, 1e-12);
    EXPECT_EQ(cfg.code_a->codewords, ref.code_a->codewords);
    auto a = run_pipeline(cfg, 1, 0, 3);
    auto b = run_pipeline(ref, 1, 0, 3);
    EXPECT_EQ(a.ledger.ebits_out, b.ledger.ebits_out);
    EXPECT_EQ(a.ledger.u_uses, b.ledger.u_uses);
}

TEST(Pipeline, NoisyK5FailureIsBinomialTailForEveryMessage) {
    auto cfg = repetition_config(protocols::crossing(0.1), 5);
    ASSERT_EQ(cfg.code_a->params.correctable(), 2);
    auto analysis = analyze(cfg.protocol);
    // Only Alice's message is noisy; decoding fails once three of five flip.
    double tail = oracle::binomial_tail(5, 0.1, 3);
    EXPECT_NEAR(tail, 0.00856, 1e-12);
    auto sweep = sweep_messages(cfg, analysis, 2);
    ASSERT_EQ(sweep.p_fail.size(), 4u);
    for (double p : sweep.p_fail) {
        EXPECT_NEAR(p, tail, 1e-12);
    }
    EXPECT_LE(sweep.spread, 1e-12);
    for (size_t i = 0; i < 4; i++) {
        EXPECT_LE(sweep.p_message_error[i], sweep.p_fail[i] + 1e-15);
    }
    EXPECT_NEAR(sweep.fidelity_worst, 1 - tail, 1e-12);
}

TEST(Pipeline, NoisyK5SampledFailureWithinThreeSigma) {
    auto cfg = repetition_config(protocols::crossing(0.1), 5);
    auto analysis = analyze(cfg.protocol);
    const int trials = 20000;
    int failures = 0;
    double p_fail = 0;
    for (int t = 0; t < trials; t++) {
        auto r = run_pipeline(cfg, t % 2, (t / 2) % 2, 1000 + t, analysis);
        failures += !r.transcript.sampled_success;
        p_fail = r.ledger.p_fail;
        EXPECT_LT(r.ledger.decoupling_error, 1e-9);
    }
    double sigma = std::sqrt(p_fail * (1 - p_fail) / trials);
    EXPECT_LE(std::abs(static_cast<double>(failures) / trials - p_fail), 3 * sigma);
}

TEST(Pipeline, ChernoffPremiseImpliesFailureBound) {
    int checked = 0;
    for (double eps : {0.1, 0.01, 0.001}) {
        for (int k : {3, 5, 7}) {
            auto cfg = repetition_config(protocols::crossing(eps), k);
            auto analysis = analyze(cfg.protocol);
            auto sweep = sweep_messages(cfg, analysis);
            double expect = oracle::binomial_tail(k, eps, cfg.code_a->params.correctable() + 1);
            for (double p : sweep.p_fail) {
                EXPECT_NEAR(p, expect, 1e-12);
            }
            if (chernoff_premise(cfg.alpha, eps)) {
                checked++;
                EXPECT_LE(sweep.p_fail[0], 2 * std::exp2(-k));
            }
        }
    }
    EXPECT_GT(checked, 0);
}

TEST(Pipeline, SampledErrorPositionsAreDroppedAndAnnounced) {
    auto cfg = repetition_config(protocols::crossing(0.1), 5);
    auto analysis = analyze(cfg.protocol);
    bool saw_error = false;
    for (uint64_t seed = 0; seed < 200 && !saw_error; seed++) {
        auto r = run_pipeline(cfg, 1, 0, seed, analysis);
        const auto &tr = r.transcript;
        if (!tr.sampled_success) {
            continue;
        }
        int flips = 0;
        for (int j = 0; j < 5; j++) {
            flips += tr.received_a[j] != tr.codeword_a[j];
        }
        EXPECT_EQ(tr.syndrome_a.positions.size(), static_cast<size_t>(flips));
        EXPECT_EQ(tr.kept_positions.size(), static_cast<size_t>(5 - flips));
        EXPECT_GE(static_cast<double>(tr.kept_positions.size()), 5 * (1 - 2 * cfg.alpha));
        EXPECT_LE(r.ledger.ebits_out + r.ledger.retained_entropy, r.ledger.ebits_in + 1e-9);
        saw_error = flips > 0;
    }
    EXPECT_TRUE(saw_error);
}

TEST(Pipeline, ConservationOnNoiselessRuns) {
    for (auto p : {protocols::crossing(), protocols::crossing_with_epr(), protocols::cnot()}) {
        auto cfg = repetition_config(p, 3);
        auto analysis = analyze(cfg.protocol);
        for (uint64_t a = 0; a < cfg.message_count_a(); a++) {
            for (uint64_t b = 0; b < cfg.message_count_b(); b++) {
                for (uint64_t seed = 0; seed < 3; seed++) {
                    auto l = run_pipeline(cfg, a, b, seed, analysis).ledger;
                    EXPECT_GE(l.ebits_in - l.ebits_out - l.retained_entropy, -1e-6) << p.name;
                    EXPECT_LT(l.decoupling_error, 1e-9);
                }
            }
        }
    }
}

TEST(Pipeline, ZeroLengthMessages) {
    PipelineConfig cfg;
    cfg.protocol = protocols::empty();
    cfg.k = 4;
    cfg.alpha = 0.1;
    auto r = run_pipeline(cfg, 0, 0, 1);
    EXPECT_EQ(r.ledger.cobits_fwd, 0);
    EXPECT_EQ(r.ledger.cobits_back, 0);
    EXPECT_EQ(r.ledger.ebits_in, 0);
    EXPECT_EQ(r.ledger.ebits_out, 0);
    EXPECT_EQ(r.ledger.p_fail, 0);
    EXPECT_EQ(r.ledger.syndrome_bits_fwd, 0);
    EXPECT_EQ(r.ledger.syndrome_bits_back, 0);
    EXPECT_EQ(cfg.message_count_a(), 1u);
}

TEST(Pipeline, LimitsAndContracts) {
    auto cfg = repetition_config(protocols::crossing(0.1), 5);
    auto analysis = analyze(cfg.protocol);
    auto small = cfg;
    small.max_patterns = 16;
    EXPECT_THROW(run_pipeline(small, 0, 0, 1, analysis), WidthOverflow);
    auto strict = cfg;
    strict.abort_threshold = 1e-3;
    EXPECT_THROW(run_pipeline(strict, 0, 0, 1, analysis), ContractError);
    EXPECT_THROW(run_pipeline(cfg, 2, 0, 1, analysis), ContractError);

    auto wrong_k = cfg;
    wrong_k.k = 4;
    EXPECT_THROW(wrong_k.validate(), ContractError);
    auto wrong_alpha = cfg;
    wrong_alpha.alpha = 0.2;
    EXPECT_THROW(wrong_alpha.validate(), ContractError);
    auto missing = cfg;
    missing.code_b.reset();
    EXPECT_THROW(missing.validate(), ContractError);
    PipelineConfig extra;
    extra.protocol = protocols::empty();
    extra.k = 3;
    extra.alpha = cfg.alpha;
    extra.code_a = repetition_code(3);
    EXPECT_THROW(extra.validate(), ContractError);
}

TEST(Pipeline, TranscriptElidesWideStates) {
    auto cfg = repetition_config(protocols::crossing(), 3);
    cfg.transcript_state_limit = 4;
    auto r = run_pipeline(cfg, 0, 1, 2);
    for (const auto &pos : r.transcript.positions) {
        EXPECT_FALSE(pos.state.has_value());
        EXPECT_NE(pos.state_digest, 0u);
    }
    cfg.transcript_state_limit = 22;
    auto full = run_pipeline(cfg, 0, 1, 2);
    for (const auto &pos : full.transcript.positions) {
        ASSERT_TRUE(pos.state.has_value());
        EXPECT_EQ(pos.state_digest, state_digest(pos.state->amplitudes()));
    }
}

TEST(Accounting, TermsMatchDefinitions) {
    for (int64_t k : {4, 64, 1000, 1000000}) {
        for (int n : {1, 2, 5}) {
            for (int sch : {1, 2, 4}) {
                FInputs in{k, n, 0.1, 4, sch, 1, 0.5, 0.3, 2};
                auto r = f_of(in);
                auto t = terms_oracle(static_cast<double>(k), n, 0.1, 4, sch, 1, 0.5, 0.3);
                double sum = 0;
                for (int i = 0; i < 7; i++) {
                    EXPECT_NEAR(r.terms[i], t[i], 1e-15 + 1e-13 * t[i]);
                    EXPECT_GE(r.terms[i], 0);
                    sum += r.terms[i];
                }
                EXPECT_NEAR(r.f_value, sum, 1e-12);
                EXPECT_EQ(r.m, static_cast<int64_t>(std::floor(1 / std::sqrt(r.f_value))));
            }
        }
    }
    EXPECT_THROW(f_of(FInputs{0, 1}), ContractError);
    EXPECT_THROW(f_of(FInputs{1, 0}), ContractError);
}

TEST(Accounting, LargeKApproachesLimit) {
    for (int n = 1; n <= 8; n++) {
        for (double alpha : {0.01, 0.1, 0.3}) {
            FInputs in{1000000, n, alpha, 4, 1, 1, 1, 1 / std::sqrt(n), 0};
            // At Sch = 1 the only surviving finite-k term is 1/(n sqrt k) <= 1e-3.
            EXPECT_LE(std::abs(f_of(in).f_value - f_limit(in)), 1e-3 + 1e-12);
        }
        // Gate-dependent penalty: the limit is reached once sqrt k dwarfs Sch^n.
        FInputs wide{static_cast<int64_t>(1e6 * std::pow(4.0, 2 * std::min(n, 3))), n, 0.1, 4, 4, 1, 1, 0.1, 0};
        if (n <= 3) {
            EXPECT_LE(std::abs(f_of(wide).f_value - f_limit(wide)), 1e-3);
        }
    }
}

TEST(Accounting, NonincreasingInK) {
    for (int n : {1, 2, 3}) {
        for (int sch : {2, 4}) {
            double prev = INFINITY;
            int64_t start = static_cast<int64_t>(std::pow(sch, 2 * n));
            for (int64_t k = start; k < start * 1000; k *= 2) {
                double f = f_of(FInputs{k, n, 0.05, 4, sch, 1, 1, 0.1, 0}).f_value;
                EXPECT_LE(f, prev);
                prev = f;
            }
        }
    }
}

TEST(Accounting, ScheduleStrictlyDecreasing) {
    for (int sch : {2, 4}) {
        for (double cap : {1.0, 2.0}) {
            double prev = INFINITY;
            for (int n = 2; n <= 8; n++) {
                auto in = schedule_inputs(n, sch, cap);
                EXPECT_EQ(in.k, static_cast<int64_t>(std::pow(sch, 3 * n)));
                EXPECT_NEAR(in.delta_n, 1 / std::sqrt(n), 1e-15);
                EXPECT_NEAR(in.c1, std::max(0.0, cap - 1 / std::sqrt(n)), 1e-15);
                double f = f_of(in).f_value;
                EXPECT_LT(f, prev) << "sch=" << sch << " cap=" << cap << " n=" << n;
                prev = f;
            }
        }
    }
}

TEST(Accounting, CatalysisChoiceWithinFactorTwo) {
    for (double f : {1e-6, 1e-4, 1e-2, 0.05, 0.1}) {
        for (double c : {0.1, 1.0, 10.0}) {
            int64_t m = static_cast<int64_t>(std::floor(1 / std::sqrt(f)));
            ASSERT_GE(m, 1);
            double best = INFINITY;
            for (int64_t x = 1; x <= 100 * m; x++) {
                best = std::min(best, catalysis_objective(f, c, x));
            }
            EXPECT_LE(catalysis_objective(f, c, m), 2 * best) << "f=" << f << " c=" << c;
        }
    }
    EXPECT_THROW(catalysis_objective(0.1, 1, 0), ContractError);
}

// Once f approaches 1 the floor pins m to 1 and the rule loses its factor-2
// guarantee for lopsided c: 0.5 + 10 against 5 * 0.5 + 10 / 5 = 4.5.
TEST(Accounting, CatalysisRuleDegradesNearUnitF) {
    EXPECT_EQ(static_cast<int64_t>(std::floor(1 / std::sqrt(0.5))), 1);
    EXPECT_DOUBLE_EQ(catalysis_objective(0.5, 10, 1), 10.5);
    EXPECT_DOUBLE_EQ(catalysis_objective(0.5, 10, 4), 4.5);
    EXPECT_GT(catalysis_objective(0.5, 10, 1), 2 * catalysis_objective(0.5, 10, 4));
}

TEST(Accounting, CatalysisOverhead) {
    auto r = f_of(FInputs{1000000, 40, 0.001, 0.01, 1, 1, 1, 0.001, 3});
    ASSERT_GT(r.m, 0);
    EXPECT_NEAR(r.catalysis_overhead, 3.0 / static_cast<double>(r.m), 1e-15);
}

TEST(Accounting, ConfigOverloadReportsPremise) {
    auto cfg = repetition_config(protocols::crossing(0.1), 5);
    auto r = f_of(cfg, 4, 1, 1, 0.1, 0);
    EXPECT_FALSE(r.chernoff_premise);
    EXPECT_EQ(r.catalysis_c, 2);
    auto clean = f_of(repetition_config(protocols::crossing(0.01), 5), 4, 1, 1, 0.01, 0);
    EXPECT_TRUE(clean.chernoff_premise);
}

TEST(EntanglementVariant, ConsumeDoublesRankCeiling) {
    auto cfg = repetition_config(protocols::crossing_with_epr(), 3);
    auto d = entanglement_variant(cfg, EntanglementSign::Consume, 1);
    EXPECT_EQ(d.rank_ceiling, 8);
    EXPECT_LE(d.measured_rank, d.rank_ceiling);
    EXPECT_EQ(d.ebits_in, 3);
    auto spectrum = spectrum_of(analyze(cfg.protocol).gamma.gamma00(), Party::Alice);
    EXPECT_EQ(spectrum.rank, d.measured_rank);
    // The plain gate sits at its own ceiling.
    auto plain = entanglement_variant(repetition_config(protocols::crossing(), 3), EntanglementSign::Consume, 0);
    EXPECT_EQ(plain.rank_ceiling, 4);
    EXPECT_EQ(plain.measured_rank, 4);
}

TEST(EntanglementVariant, ZeroRateIsZeroDelta) {
    auto cfg = repetition_config(protocols::crossing(), 3);
    for (auto sign : {EntanglementSign::Consume, EntanglementSign::Produce}) {
        auto d = entanglement_variant(cfg, sign, 0);
        EXPECT_EQ(d.ebits_in, 0);
        EXPECT_EQ(d.ebits_out, 0);
        EXPECT_EQ(d.inefficiency, 0);
    }
}

TEST(EntanglementVariant, ProduceRecordsExtraEbits) {
    auto cfg = repetition_config(protocols::swap_entangler(), 3);
    auto d = entanglement_variant(cfg, EntanglementSign::Produce, 1);
    EXPECT_GT(d.measured_entropy, cfg.protocol.c1_bits + cfg.protocol.c2_bits + 1e-9);
    EXPECT_GE(d.measured_entropy + 1e-9, d.entropy_floor);
    EXPECT_EQ(d.ebits_out, 3);
    EXPECT_NEAR(d.inefficiency, 2 * cfg.alpha, 1e-15);
}

TEST(EntanglementVariant, InconsistentDeclarationsRejected) {
    auto cfg = repetition_config(protocols::crossing(), 3);
    EXPECT_THROW(entanglement_variant(cfg, EntanglementSign::Consume, 1), ContractError);
    EXPECT_THROW(entanglement_variant(cfg, EntanglementSign::Produce, 1), ContractError);
    EXPECT_THROW(entanglement_variant(cfg, EntanglementSign::Produce, -1), ContractError);
}
