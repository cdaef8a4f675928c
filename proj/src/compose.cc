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

#include "cobit/compose.h"

#include <algorithm>
#include <cmath>
#include <complex>
#include <random>

#include "cobit/parallel.h"

namespace cobit {

namespace {

void require(bool ok, const std::string &what) {
    if (!ok) {
        throw ContractError(what);
    }
}

constexpr double kNegligible = 1e-15;

struct PositionBranch {
    int a2 = 0;
    int b2 = 0;
    double weight = 0;
    // The branch split against its reference Gamma_{a xor a', b xor b'} (from the
    // (0, 0) run) as coeff * ref + residual, residual orthogonal to ref. Keeping the
    // residual norm separately avoids forming 1 - F by cancellation.
    cplx coeff = 0;
    double ideal_weight = 0;
    double residual = 0;
};

std::vector<PositionBranch> position_branches(
    const ProtocolAnalysis &analysis, int a, int b, int c1, int c2) {
    const auto &coherent = analysis.family.coherent[(static_cast<size_t>(a) << c2) | static_cast<size_t>(b)];
    auto branches = coherent_branches(coherent, a, b, c1, c2);
    std::vector<PositionBranch> out;
    for (const auto &[key, br] : branches) {
        if (br.weight() <= kNegligible) {
            continue;
        }
        const auto &ref = analysis.gamma.gamma(key.first ^ a, key.second ^ b);
        PositionBranch pb{static_cast<int>(key.first), static_cast<int>(key.second), br.weight()};
        pb.ideal_weight = ref.weight();
        if (pb.ideal_weight > kNegligible) {
            pb.coeff = ref.amplitudes().dot(br.amplitudes()) / pb.ideal_weight;
            pb.residual = (br.amplitudes() - pb.coeff * ref.amplitudes()).squaredNorm();
        } else {
            pb.ideal_weight = 0;
            pb.residual = pb.weight;
        }
        out.push_back(pb);
    }
    return out;
}

struct FailureStats {
    double p_fail = 0;
    double p_message_error = 0;
    double decoupling = 0;
    uint64_t patterns = 0;
};

bool decodes_to(const std::optional<BlockCode> &code, const Word &received, uint64_t msg, bool *message_ok) {
    if (!code) {
        *message_ok = true;
        return true;
    }
    auto dec = decode(*code, received);
    *message_ok = dec && dec->message == msg;
    return *message_ok;
}

FailureStats failure_stats(const PipelineConfig &cfg, const std::vector<std::vector<PositionBranch>> &per_position,
                           uint64_t msg_a, uint64_t msg_b) {
    long double count = 1;
    for (const auto &p : per_position) {
        count *= p.size();
    }
    if (count > static_cast<long double>(cfg.max_patterns)) {
        throw WidthOverflow("joint received-pattern enumeration needs " + std::to_string(static_cast<double>(count)) +
                            " patterns; cap is " + std::to_string(cfg.max_patterns));
    }
    int k = cfg.k;

    struct Pattern {
        bool success = false;
        bool message_ok = false;
        double weight = 0;
        double ideal_weight = 0;  // prod of reference weights
        cplx coeff = 1;           // prod of coefficients
        double residual = 0;      // weight orthogonal to the product of references
    };
    // Odometer over the per-position branch choices.
    auto for_each_pattern = [&](auto &&visit) {
        Word recv_a(k, 0), recv_b(k, 0);
        std::vector<size_t> choice(k, 0);
        while (true) {
            Pattern pat;
            double parallel = 1;
            pat.weight = 1;
            pat.ideal_weight = 1;
            for (int j = 0; j < k; j++) {
                const auto &br = per_position[j][choice[j]];
                recv_a[j] = br.a2;
                recv_b[j] = br.b2;
                // prod (|c|^2 wi + r) - prod |c|^2 wi, expanded one position at a time.
                double par_j = std::norm(br.coeff) * br.ideal_weight;
                pat.residual = pat.residual * (par_j + br.residual) + parallel * br.residual;
                parallel *= par_j;
                pat.weight *= br.weight;
                pat.ideal_weight *= br.ideal_weight;
                pat.coeff *= br.coeff;
            }
            bool ok_a, ok_b;
            pat.success = decodes_to(cfg.code_a, recv_a, msg_a, &ok_a) & decodes_to(cfg.code_b, recv_b, msg_b, &ok_b);
            pat.message_ok = ok_a && ok_b;
            visit(pat);
            int j = k - 1;
            while (j >= 0 && ++choice[j] == per_position[j].size()) {
                choice[j] = 0;
                j--;
            }
            if (j < 0) {
                break;
            }
        }
    };

    FailureStats st;
    double ideal_total = 0, residual_total = 0;
    cplx weighted_coeff = 0;
    for_each_pattern([&](const Pattern &pat) {
        st.patterns++;
        if (!pat.message_ok) {
            st.p_message_error += pat.weight;
        }
        if (!pat.success) {
            st.p_fail += pat.weight;
            return;
        }
        ideal_total += pat.ideal_weight;
        weighted_coeff += pat.coeff * pat.ideal_weight;
        residual_total += pat.residual;
    });
    if (ideal_total > 0) {
        // With the success block written as sum_p C_p (x) ref_p + residual, the
        // infidelity against the ideal block is (sum_p Wi_p |C_p - mean C|^2 + residual) / W.
        cplx mean = weighted_coeff / ideal_total;
        double spread = 0, parallel = 0;
        for_each_pattern([&](const Pattern &pat) {
            if (pat.success) {
                spread += pat.ideal_weight * std::norm(pat.coeff - mean);
                parallel += pat.ideal_weight * std::norm(pat.coeff);
            }
        });
        double w = parallel + residual_total;
        if (w > 0) {
            st.decoupling = std::sqrt(std::clamp((spread + residual_total) / w, 0.0, 1.0));
        }
    }
    return st;
}

Word codeword_or_zero(const std::optional<BlockCode> &code, uint64_t msg, int k) {
    return code ? encode(*code, msg) : Word(k, 0);
}

std::vector<std::vector<PositionBranch>> all_positions(
    const PipelineConfig &cfg, const ProtocolAnalysis &analysis, const Word &cw_a, const Word &cw_b) {
    std::vector<std::vector<PositionBranch>> out;
    for (int j = 0; j < cfg.k; j++) {
        out.push_back(position_branches(analysis, cw_a[j], cw_b[j], cfg.protocol.c1_bits, cfg.protocol.c2_bits));
    }
    return out;
}

double gamma_entropy(const Branch &b) {
    if (b.weight() <= kNegligible) {
        return 0;
    }
    auto s = b.normalized();
    auto alice = s.layout().names_of(Party::Alice);
    if (alice.empty() || alice.size() == s.layout().size()) {
        return 0;
    }
    return schmidt(s, std::span<const std::string>(alice)).entropy;
}

}  // namespace

void PipelineConfig::validate() const {
    protocol.validate();
    require(k >= 1, "k must be positive");
    require(alpha >= 0 && alpha < 0.5, "alpha must lie in [0, 1/2)");
    require(r_side_channel >= 0, "side-channel rate must be nonnegative");
    auto check_code = [&](const std::optional<BlockCode> &code, int bits, const char *which) {
        if (bits == 0) {
            require(!code, std::string(which) + " must be absent for a zero-width message");
            return;
        }
        require(code.has_value(), std::string(which) + " is required");
        require(code->params.n_symbols == (1 << bits), std::string(which) + " alphabet must be 2^bits");
        require(code->params.k == k, std::string(which) + " block length must equal k");
        int d = static_cast<int>(std::ceil(2 * k * alpha - 1e-12));
        require(code->params.distance() == d, std::string(which) + " distance must equal ceil(2 k alpha)");
        require(code->l() >= 0 && !code->codewords.empty(), std::string(which) + " has no codewords");
    };
    check_code(code_a, protocol.c1_bits, "code_a");
    check_code(code_b, protocol.c2_bits, "code_b");
}

int PipelineConfig::message_symbols_a() const {
    return code_a ? code_a->l() : 0;
}
int PipelineConfig::message_symbols_b() const {
    return code_b ? code_b->l() : 0;
}
uint64_t PipelineConfig::message_count_a() const {
    return code_a ? code_a->message_count() : 1;
}
uint64_t PipelineConfig::message_count_b() const {
    return code_b ? code_b->message_count() : 1;
}

PipelineResult run_pipeline(const PipelineConfig &cfg, uint64_t msg_a, uint64_t msg_b, uint64_t seed,
                            const ProtocolAnalysis &analysis) {
    cfg.validate();
    require(msg_a < cfg.message_count_a() && msg_b < cfg.message_count_b(), "message outside the code's range");
    const auto &p = cfg.protocol;
    PipelineResult res;
    auto &tr = res.transcript;
    auto &led = res.ledger;
    tr.gamma = analysis.gamma;

    // Steps 0-2: encode and run P' on every position.
    tr.codeword_a = codeword_or_zero(cfg.code_a, msg_a, cfg.k);
    tr.codeword_b = codeword_or_zero(cfg.code_b, msg_b, cfg.k);
    auto per_position = all_positions(cfg, analysis, tr.codeword_a, tr.codeword_b);
    for (int j = 0; j < cfg.k; j++) {
        PositionRecord rec;
        rec.a = tr.codeword_a[j];
        rec.b = tr.codeword_b[j];
        for (const auto &br : per_position[j]) {
            rec.branches.emplace_back(br.a2, br.b2, br.weight);
        }
        const auto &state = analysis.family.coherent[(static_cast<size_t>(rec.a) << p.c2_bits) | rec.b];
        rec.state_digest = state_digest(state.amplitudes());
        rec.state_width = state.layout().total_width();
        if (rec.state_width <= cfg.transcript_state_limit) {
            rec.state = state;
        }
        tr.positions.push_back(std::move(rec));
    }

    // Step 3: coherent decoding, evaluated over every joint received pattern.
    auto stats = failure_stats(cfg, per_position, msg_a, msg_b);
    tr.patterns_enumerated = stats.patterns;
    led.p_fail = stats.p_fail;
    led.p_message_error = stats.p_message_error;
    led.decoupling_error = stats.decoupling;
    led.fidelity_worst = led.fidelity_avg = 1 - stats.p_fail;
    if (stats.p_fail > cfg.abort_threshold) {
        throw ContractError("failure weight " + std::to_string(stats.p_fail) + " exceeds the abort threshold");
    }

    // Steps 4-5: one sampled branch, its syndromes and the clean positions.
    std::mt19937_64 rng(seed);
    tr.received_a.assign(cfg.k, 0);
    tr.received_b.assign(cfg.k, 0);
    for (int j = 0; j < cfg.k; j++) {
        std::vector<double> weights;
        for (const auto &br : per_position[j]) {
            weights.push_back(br.weight);
        }
        size_t pick = std::discrete_distribution<size_t>(weights.begin(), weights.end())(rng);
        tr.received_a[j] = per_position[j][pick].a2;
        tr.received_b[j] = per_position[j][pick].b2;
    }
    Word err_a(cfg.k, 0), err_b(cfg.k, 0);
    bool ok = true;
    if (cfg.code_a) {
        auto dec = decode(*cfg.code_a, tr.received_a);
        ok = ok && dec && dec->message == msg_a;
        if (dec) {
            tr.decoded_a = dec->message;
            err_a = dec->error;
        }
    }
    if (cfg.code_b) {
        auto dec = decode(*cfg.code_b, tr.received_b);
        ok = ok && dec && dec->message == msg_b;
        if (dec) {
            tr.decoded_b = dec->message;
            err_b = dec->error;
        }
    }
    tr.sampled_success = ok;
    CodeParams syndrome_params{cfg.k, 2, cfg.alpha};
    tr.syndrome_a = syndrome_support(err_a, cfg.code_a ? cfg.code_a->params : syndrome_params);
    tr.syndrome_b = syndrome_support(err_b, cfg.code_b ? cfg.code_b->params : syndrome_params);
    led.syndrome_bits_fwd = cfg.code_a ? tr.syndrome_a.bit_cost : 0;
    led.syndrome_bits_back = cfg.code_b ? tr.syndrome_b.bit_cost : 0;
    for (int j = 0; j < cfg.k; j++) {
        if (err_a[j] == 0 && err_b[j] == 0) {
            tr.kept_positions.push_back(j);
        } else {
            led.retained_entropy += gamma_entropy(analysis.gamma.gamma(err_a[j], err_b[j]));
        }
    }

    // Step 6: concentrate the clean copies of Gamma_00.
    if (ok && !tr.kept_positions.empty()) {
        auto g00 = analysis.gamma.gamma00();
        auto alice = g00.layout().names_of(Party::Alice);
        SchmidtSpectrum spectrum = (alice.empty() || alice.size() == g00.layout().size())
                                       ? SchmidtSpectrum::from_probs({1.0})
                                       : spectrum_of(g00, std::span<const std::string>(alice));
        YieldInputs in{static_cast<double>(p.c1_bits), static_cast<double>(p.c2_bits),
                       std::min(analysis.gamma.epsilon_measured, 1 - 1e-12), p.gate.schmidt_number,
                       std::max(1, p.n_uses())};
        tr.concentration = concentrate(spectrum, static_cast<int>(tr.kept_positions.size()), rng(), in);
        led.ebits_out = tr.concentration->ebits_out;
    }

    int n = p.n_uses();
    led.u_uses = static_cast<int64_t>(n) * cfg.k + static_cast<int64_t>(std::ceil(cfg.r_side_channel * cfg.k));
    led.ebits_in = static_cast<double>(cfg.k) * (p.c1_bits + p.c2_bits + p.e_in_ebits);
    led.cobits_fwd = static_cast<double>(cfg.message_symbols_a()) * p.c1_bits;
    led.cobits_back = static_cast<double>(cfg.message_symbols_b()) * p.c2_bits;
    return res;
}

PipelineResult run_pipeline(const PipelineConfig &cfg, uint64_t msg_a, uint64_t msg_b, uint64_t seed, int jobs) {
    auto analysis = analyze(cfg.protocol, jobs);
    return run_pipeline(cfg, msg_a, msg_b, seed, analysis);
}

MessageSweep sweep_messages(const PipelineConfig &cfg, const ProtocolAnalysis &analysis, int jobs) {
    cfg.validate();
    uint64_t na = cfg.message_count_a(), nb = cfg.message_count_b();
    MessageSweep sw;
    sw.p_fail.assign(na * nb, 0);
    sw.p_message_error.assign(na * nb, 0);
    parallel_for(na * nb, jobs, [&](size_t i) {
        uint64_t ma = i / nb, mb = i % nb;
        auto cw_a = codeword_or_zero(cfg.code_a, ma, cfg.k);
        auto cw_b = codeword_or_zero(cfg.code_b, mb, cfg.k);
        auto stats = failure_stats(cfg, all_positions(cfg, analysis, cw_a, cw_b), ma, mb);
        sw.p_fail[i] = stats.p_fail;
        sw.p_message_error[i] = stats.p_message_error;
    });
    double lo = 1, hi = 0, sum = 0;
    for (double v : sw.p_fail) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
        sum += v;
    }
    sw.spread = hi - lo;
    sw.fidelity_worst = 1 - hi;
    sw.fidelity_avg = 1 - sum / static_cast<double>(sw.p_fail.size());
    return sw;
}

AccountingReport f_of(const FInputs &in) {
    require(in.k >= 1 && in.n >= 1, "k and n must be positive");
    require(in.alpha >= 0 && in.c1 >= 0 && in.c2 >= 0 && in.delta_n >= 0 && in.r_side_channel >= 0,
            "rates must be nonnegative");
    double k = in.k;
    double sqrt_k = std::sqrt(k);
    double sch_n = std::pow(static_cast<double>(in.sch_u), in.n);
    double rates = in.c1 + in.c2;
    AccountingReport r;
    r.terms = {std::exp2(-(k - 2)),
               std::exp2(-sqrt_k * sch_n),
               2 * in.alpha * rates,
               sch_n / (in.n * sqrt_k),
               in.r_side_channel / in.n,
               3 * in.alpha * rates,
               2 * in.delta_n};
    for (double t : r.terms) {
        r.f_value += t;
    }
    r.catalysis_c = in.catalysis_c;
    if (r.f_value > 0) {
        r.m = static_cast<int64_t>(std::floor(1 / std::sqrt(r.f_value)));
    }
    r.catalysis_overhead = r.m > 0 ? in.catalysis_c / static_cast<double>(r.m) : INFINITY;
    return r;
}

AccountingReport f_of(const PipelineConfig &cfg, int sch_u, double c1, double c2, double eps_n, double delta_n) {
    int n = std::max(1, cfg.protocol.n_uses());
    FInputs in{cfg.k, n, cfg.alpha, cfg.r_side_channel, sch_u, c1, c2, delta_n, 0};
    in.catalysis_c = static_cast<double>(cfg.protocol.c1_bits + cfg.protocol.c2_bits + cfg.protocol.e_in_ebits) / n;
    auto r = f_of(in);
    r.chernoff_premise = chernoff_premise(cfg.alpha, eps_n);
    return r;
}

double f_limit(const FInputs &in) {
    return 5 * in.alpha * (in.c1 + in.c2) + 2 * in.delta_n + in.r_side_channel / in.n;
}

FInputs schedule_inputs(int n, int sch_u, double capacity, double r_side_channel) {
    require(n >= 1, "n must be positive");
    double delta = 1 / std::sqrt(static_cast<double>(n));
    double bits = std::max(1.0, std::ceil(n * (capacity - delta)));
    double alpha = std::max(1 / bits, 2 / std::sqrt(static_cast<double>(n)));
    double k = std::pow(static_cast<double>(sch_u), 3.0 * n);
    require(k < 9.0e18, "k(n) overflows 64 bits");
    FInputs in;
    in.k = static_cast<int64_t>(k);
    in.n = n;
    in.alpha = alpha;
    in.r_side_channel = r_side_channel;
    in.sch_u = sch_u;
    // Rates per use; the integer message width only enters through alpha.
    in.c1 = in.c2 = std::max(0.0, capacity - delta);
    in.delta_n = delta;
    in.catalysis_c = in.c1 + in.c2;
    return in;
}

double catalysis_objective(double f, double c, int64_t m) {
    require(m >= 1, "m must be positive");
    return static_cast<double>(m) * f + c / static_cast<double>(m);
}

LedgerDelta entanglement_variant(const PipelineConfig &cfg, EntanglementSign sign, double e_rate) {
    const auto &p = cfg.protocol;
    int n = std::max(1, p.n_uses());
    auto analysis = analyze(p);
    LedgerDelta d;
    d.measured_rank = analysis.gamma00_schmidt.rank;
    d.measured_entropy = analysis.gamma00_schmidt.entropy;
    double floor = p.c1_bits + p.c2_bits + std::log2(std::max(1e-300, 1 - analysis.gamma.epsilon_measured));
    double sch_n = std::pow(static_cast<double>(p.gate.schmidt_number), n);
    d.rank_ceiling = sch_n;
    d.entropy_floor = floor;
    require(e_rate >= 0, "entanglement rate is a magnitude; the sign selects the case");
    if (e_rate == 0) {
        return d;
    }
    double per_block = n * e_rate;
    if (sign == EntanglementSign::Consume) {
        require(p.e_in_ebits + 1e-9 >= per_block,
                "protocol declares " + std::to_string(p.e_in_ebits) + " consumed ebits, fewer than n * E");
        d.ebits_in = cfg.k * per_block;
        d.rank_ceiling = std::pow(p.gate.schmidt_number * std::exp2(e_rate + cfg.delta_n), n);
    } else {
        require(d.measured_entropy + 1e-6 >= floor + per_block,
                "Gamma_00 entropy " + std::to_string(d.measured_entropy) + " is below the declared production floor");
        d.ebits_out = cfg.k * per_block;
        d.entropy_floor = floor + per_block;
        d.inefficiency = 2 * cfg.alpha * e_rate;
    }
    return d;
}

}  // namespace cobit
