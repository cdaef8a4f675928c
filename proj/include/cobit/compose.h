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

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cobit/code.h"
#include "cobit/concentrate.h"
#include "cobit/protocol.h"

namespace cobit {

struct PipelineConfig {
    MessageProtocol protocol;
    /// Parallel P' runs per block.
    int k = 0;
    /// Codes over [2^c1] and [2^c2]; absent when the matching message width is zero.
    std::optional<BlockCode> code_a;
    std::optional<BlockCode> code_b;
    double alpha = 0;
    /// Gate uses charged per syndrome bit exchanged.
    double r_side_channel = 4;
    double delta_n = 0;
    /// Run aborts when the weight outside the correctable set exceeds this.
    double abort_threshold = 1;
    /// Cap on jointly enumerated received patterns.
    uint64_t max_patterns = uint64_t{1} << 22;
    /// Widest per-position state copied into the transcript; wider ones keep only a digest.
    int transcript_state_limit = 10;

    void validate() const;
    int message_symbols_a() const;
    int message_symbols_b() const;
    uint64_t message_count_a() const;
    uint64_t message_count_b() const;
};

struct Ledger {
    int64_t u_uses = 0;
    double ebits_in = 0;
    double ebits_out = 0;
    double cobits_fwd = 0;
    double cobits_back = 0;
    double p_fail = 0;
    /// Chance that either party decodes the wrong message (a subset of failure).
    double p_message_error = 0;
    double decoupling_error = 0;
    double fidelity_worst = 1;
    double fidelity_avg = 1;
    int syndrome_bits_fwd = 0;
    int syndrome_bits_back = 0;
    /// Entanglement entropy left in positions dropped before concentration.
    double retained_entropy = 0;
};

struct PositionRecord {
    int a = 0;
    int b = 0;
    /// Nonzero-weight branches (a', b', weight).
    std::vector<std::tuple<int, int, double>> branches;
    uint64_t state_digest = 0;
    int state_width = 0;
    /// The P' output itself, kept only when state_width <= transcript_state_limit.
    std::optional<QuantumState> state;
};

struct Transcript {
    Word codeword_a;
    Word codeword_b;
    std::vector<PositionRecord> positions;
    uint64_t patterns_enumerated = 0;
    /// The sampled branch: what each party received, decoded and announced.
    Word received_a;  // Bob's view of a
    Word received_b;  // Alice's view of b
    bool sampled_success = false;
    std::optional<uint64_t> decoded_a;
    std::optional<uint64_t> decoded_b;
    SyndromeSupport syndrome_a;
    SyndromeSupport syndrome_b;
    std::vector<int> kept_positions;
    std::optional<ConcentrationReport> concentration;
    GammaDecomposition gamma;
};

struct PipelineResult {
    Ledger ledger;
    Transcript transcript;
};

/// Runs P''_nk for one message pair. `analysis` may be shared across calls.
PipelineResult run_pipeline(const PipelineConfig &cfg, uint64_t msg_a, uint64_t msg_b, uint64_t seed,
                            const ProtocolAnalysis &analysis);
PipelineResult run_pipeline(const PipelineConfig &cfg, uint64_t msg_a, uint64_t msg_b, uint64_t seed, int jobs = 1);

struct MessageSweep {
    /// p_fail indexed by msg_a * count_b + msg_b.
    std::vector<double> p_fail;
    std::vector<double> p_message_error;
    double spread = 0;
    double fidelity_worst = 1;
    double fidelity_avg = 1;
};
MessageSweep sweep_messages(const PipelineConfig &cfg, const ProtocolAnalysis &analysis, int jobs = 1);

struct FInputs {
    int64_t k = 1;
    int n = 1;
    double alpha = 0;
    double r_side_channel = 4;
    int sch_u = 1;
    double c1 = 0;
    double c2 = 0;
    double delta_n = 0;
    /// Catalysis constant; ebits borrowed per gate use.
    double catalysis_c = 0;
};

struct AccountingReport {
    std::array<double, 7> terms{};
    double f_value = 0;
    int64_t m = 0;
    double catalysis_overhead = 0;
    double catalysis_c = 0;
    bool chernoff_premise = true;
};

/// The seven terms 2^-(k-2), 2^(-sqrt(k) Sch^n), 2 alpha (C1 + C2), Sch^n / (n sqrt k),
/// R / n, 3 alpha (C1 + C2), 2 delta; m = floor(1 / sqrt f).
AccountingReport f_of(const FInputs &in);
/// Same, drawing k, n, alpha, R and the catalysis constant from a config.
AccountingReport f_of(const PipelineConfig &cfg, int sch_u, double c1, double c2, double eps_n, double delta_n);
/// 5 alpha (C1 + C2) + 2 delta + R / n.
double f_limit(const FInputs &in);

/// Parameters of the n-dependent schedule eps_n = 2^-sqrt(n), delta_n = 1/sqrt(n),
/// C^(n) = ceil(n (C - delta_n)), alpha_n = max(1/C^(n), -2/log2 eps_n), k(n) = Sch^(3n),
/// with message rates C1 = C2 = C - delta_n per use.
FInputs schedule_inputs(int n, int sch_u, double capacity, double r_side_channel = 4);

/// m * f + c / m, the amortized cost of m catalytic repetitions.
double catalysis_objective(double f, double c, int64_t m);

enum class EntanglementSign { Consume, Produce };

struct LedgerDelta {
    double ebits_in = 0;
    double ebits_out = 0;
    /// Bound on the Schmidt rank of Gamma_00.
    double rank_ceiling = 0;
    double entropy_floor = 0;
    double inefficiency = 0;
    /// Measured on the protocol, for comparison with the two fields above.
    int measured_rank = 0;
    double measured_entropy = 0;
};

/// Ledger adjustments for protocols that consume (E < 0) or generate (E > 0)
/// entanglement at `e_rate` ebits per gate use.
LedgerDelta entanglement_variant(const PipelineConfig &cfg, EntanglementSign sign, double e_rate);

}  // namespace cobit
