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

// Batch front end: simulate protocols, run pipelines, map regions, sample
// concentration and verify the exact resource identities.

#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <array>
#include <random>
#include <sstream>

#include "cobit/compose.h"
#include "cobit/concentrate.h"
#include "cobit/parallel.h"
#include "cobit/protocol.h"
#include "cobit/resource.h"
#include "cobit/serialize.h"

namespace fs = std::filesystem;
using namespace cobit;

namespace {

struct Globals {
    std::string json_out;
    std::string csv_out;
    uint64_t seed = 1;
    int jobs = 1;
    double tolerance = 0;
};

void emit(const std::string &path, const std::string &text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw Error("cannot write '" + path + "'");
    }
    out << text;
}

void emit_json(const Globals &g, const Json &j, const char *schema) {
    Json doc = j;
    doc["schema"] = schema;
    emit(g.json_out, doc.dump(2) + "\n");
}

std::vector<double> parse_point(const std::string &s) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            size_t used = 0;
            out.push_back(std::stod(item, &used));
            if (used != item.size()) {
                throw std::invalid_argument(item);
            }
        } catch (const std::exception &) {
            throw SchemaError("cannot parse coordinate '" + item + "'");
        }
    }
    return out;
}

uint64_t parse_bits(const std::string &s, int width, const char *which) {
    if (static_cast<int>(s.size()) != width || s.find_first_not_of("01") != std::string::npos) {
        throw SchemaError(std::string(which) + " must be a bitstring of width " + std::to_string(width));
    }
    return width == 0 ? 0 : std::stoull(s, nullptr, 2);
}

// Stream of per-trial seeds, independent of the worker count.
uint64_t trial_seed(uint64_t seed, uint64_t trial) {
    std::seed_seq seq{static_cast<uint32_t>(seed), static_cast<uint32_t>(seed >> 32), static_cast<uint32_t>(trial),
                      static_cast<uint32_t>(trial >> 32)};
    std::array<uint32_t, 2> out{};
    seq.generate(out.begin(), out.end());
    return (static_cast<uint64_t>(out[0]) << 32) | out[1];
}

int cmd_simulate(const Globals &g, const std::string &protocol_path, bool all_messages, const std::string &a_bits,
                 const std::string &b_bits, bool include_state) {
    auto p = protocol_from_json(read_json_file(protocol_path));
    auto analysis = analyze(p, g.jobs);
    Json out = {{"protocol", p.name},
                {"c1_bits", p.c1_bits},
                {"c2_bits", p.c2_bits},
                {"e_in_ebits", p.e_in_ebits},
                {"n_uses", p.n_uses()},
                {"gate", {{"name", p.gate.name}, {"schmidt_number", p.gate.schmidt_number}}},
                {"gamma", gamma_to_json(analysis.gamma)},
                {"decoupling_error", analysis.decoupling_error},
                {"gamma00",
                 {{"entropy", analysis.gamma00_schmidt.entropy},
                  {"rank", analysis.gamma00_schmidt.rank},
                  {"coefficients", analysis.gamma00_schmidt.coefficients}}}};
    out["cobit_error"] = {
        {"forward", p.c1_bits ? Json(verify_cobit(p, Direction::Forward)) : Json(nullptr)},
        {"backward", p.c2_bits ? Json(verify_cobit(p, Direction::Backward)) : Json(nullptr)}};
    if (!all_messages) {
        uint64_t a = parse_bits(a_bits, p.c1_bits, "-a");
        uint64_t b = parse_bits(b_bits, p.c2_bits, "-b");
        const auto &state = analysis.family.coherent[(a << p.c2_bits) | b];
        Json run = {{"a", a}, {"b", b}, {"width", state.layout().total_width()}};
        run["state"] = include_state ? state_to_json(state) : Json(nullptr);
        out["run"] = run;
    }
    emit_json(g, out, "cobit.simulate/1");
    return 0;
}

int cmd_pipeline(const Globals &g, const std::string &config_path, int trials, bool random_messages,
                 bool with_transcript) {
    auto cfg = pipeline_from_json(read_json_file(config_path), fs::path(config_path).parent_path());
    int n = std::max(1, cfg.protocol.n_uses());
    const auto &p = cfg.protocol;
    auto accounting = f_of(cfg, p.gate.schmidt_number, p.c1_bits / static_cast<double>(n),
                           p.c2_bits / static_cast<double>(n), p.declared_epsilon, cfg.delta_n);
    Json summary = {{"config", config_path}, {"trials", trials}, {"accounting", accounting_to_json(accounting)}};
    if (trials <= 0) {
        emit_json(g, summary, "cobit.pipeline-summary/1");
        if (!g.csv_out.empty()) {
            emit(g.csv_out, "");
        }
        return 0;
    }
    auto analysis = analyze(p, g.jobs);
    auto sweep = sweep_messages(cfg, analysis, g.jobs);
    std::vector<std::optional<PipelineResult>> results(trials);
    std::vector<std::pair<uint64_t, uint64_t>> messages(trials);
    for (int t = 0; t < trials; t++) {
        std::mt19937_64 rng(trial_seed(g.seed, t));
        messages[t] = random_messages ? std::pair{rng() % cfg.message_count_a(), rng() % cfg.message_count_b()}
                                      : std::pair<uint64_t, uint64_t>{0, 0};
    }
    parallel_for(trials, g.jobs, [&](size_t t) {
        results[t] = run_pipeline(cfg, messages[t].first, messages[t].second, trial_seed(g.seed, t) ^ 0x5bd1e995u,
                                  analysis);
    });
    std::ostringstream csv;
    csv << std::setprecision(17);
    csv << "trial,msg_a,msg_b,u_uses,ebits_in,ebits_out,cobits_fwd,cobits_back,p_fail,p_message_error,"
           "decoupling_error,sampled_success,k_prime\r\n";
    double ebits_sum = 0, failures = 0, p_fail_max = 0;
    for (int t = 0; t < trials; t++) {
        const auto &r = *results[t];
        const auto &l = r.ledger;
        csv << t << ',' << messages[t].first << ',' << messages[t].second << ',' << l.u_uses << ',' << l.ebits_in
            << ',' << l.ebits_out << ',' << l.cobits_fwd << ',' << l.cobits_back << ',' << l.p_fail << ','
            << l.p_message_error << ',' << l.decoupling_error << ',' << (r.transcript.sampled_success ? 1 : 0) << ','
            << r.transcript.kept_positions.size() << "\r\n";
        ebits_sum += l.ebits_out;
        failures += r.transcript.sampled_success ? 0 : 1;
        p_fail_max = std::max(p_fail_max, l.p_fail);
    }
    if (!g.csv_out.empty()) {
        emit(g.csv_out, csv.str());
    }
    summary["p_fail"] = p_fail_max;
    summary["p_fail_spread"] = sweep.spread;
    summary["fidelity_worst"] = sweep.fidelity_worst;
    summary["fidelity_avg"] = sweep.fidelity_avg;
    summary["mean_ebits_out"] = ebits_sum / trials;
    summary["sampled_failure_rate"] = failures / trials;
    summary["ledger"] = ledger_to_json(results[0]->ledger);
    if (with_transcript) {
        summary["transcript"] = transcript_to_json(results[0]->transcript);
    }
    emit_json(g, summary, "cobit.pipeline-summary/1");
    return 0;
}

int cmd_regions(const Globals &g, const std::string &map, const std::string &point, const std::string &script_path,
                bool list) {
    if (list) {
        emit_json(g, {{"maps", named_maps()}}, "cobit.regions/1");
        return 0;
    }
    if (!script_path.empty()) {
        auto script = derivation_from_json(read_json_file(script_path));
        auto verdict = check_derivation(script);
        emit_json(g, verdict_to_json(verdict, script.name), "cobit.verdict/1");
        return 0;
    }
    if (map.empty() || point.empty()) {
        throw SchemaError("regions needs --map with --point, --script, or --list");
    }
    auto in = parse_point(point);
    std::vector<double> out;
    try {
        out = apply_named_map(map, in);
    } catch (const ContractError &e) {
        throw SchemaError(e.what());
    }
    emit_json(g, {{"map", map}, {"input", in}, {"output", out}}, "cobit.regions/1");
    return 0;
}

int cmd_concentrate(const Globals &g, const std::string &probs_arg, const std::string &protocol_path, int k_prime,
                    int seeds, YieldInputs in, bool bound_from_protocol) {
    SchmidtSpectrum spectrum;
    if (!protocol_path.empty()) {
        auto p = protocol_from_json(read_json_file(protocol_path));
        auto analysis = analyze(p, g.jobs);
        std::vector<double> probs;
        for (double c : analysis.gamma00_schmidt.coefficients) {
            probs.push_back(c * c);
        }
        spectrum = SchmidtSpectrum::from_probs(probs);
        if (bound_from_protocol) {
            in = {static_cast<double>(p.c1_bits), static_cast<double>(p.c2_bits), analysis.gamma.epsilon_measured,
                  p.gate.schmidt_number, std::max(1, p.n_uses())};
        }
    } else if (!probs_arg.empty()) {
        try {
            spectrum = SchmidtSpectrum::from_probs(parse_point(probs_arg));
        } catch (const ContractError &e) {
            throw SchemaError(e.what());
        }
    } else {
        throw SchemaError("concentrate needs --probs or --protocol");
    }
    if (k_prime < 1 || seeds < 1) {
        throw SchemaError("--k-prime and --seeds must be positive");
    }
    std::vector<ConcentrationReport> reports(seeds);
    parallel_for(seeds, g.jobs, [&](size_t i) { reports[i] = concentrate(spectrum, k_prime, trial_seed(g.seed, i), in); });
    double sum = 0, sum2 = 0, successes = 0;
    for (const auto &r : reports) {
        sum += r.ebits_out;
        sum2 += r.ebits_out * r.ebits_out;
        successes += r.success;
    }
    double mean = sum / seeds;
    double var = seeds > 1 ? (sum2 - seeds * mean * mean) / (seeds - 1) : 0;
    Json out = {{"spectrum", spectrum.probs},
                {"rank", spectrum.rank},
                {"entropy", spectrum.entropy()},
                {"k_prime", k_prime},
                {"seeds", seeds},
                {"mean_ebits", mean},
                {"mean_ebits_per_copy", mean / k_prime},
                {"standard_error", std::sqrt(std::max(0.0, var) / seeds)},
                {"success_rate", successes / seeds},
                {"bound_ebits", nullptr},
                {"bound_prob", nullptr},
                {"rank_bound_prob", nullptr}};
    // Bounds only mean something when the gate parameters are known.
    if (!protocol_path.empty() || !bound_from_protocol) {
        out["bound_ebits"] = reports[0].bound_ebits;
        out["bound_prob"] = reports[0].bound_prob;
        out["rank_bound_prob"] = reports[0].rank_bound_prob ? Json(*reports[0].rank_bound_prob) : Json(nullptr);
    }
    if (schmidt_levels(spectrum).size() <= 2) {
        out["exact_mean_ebits"] = exact_expected_ebits(spectrum, k_prime);
    }
    if (!g.csv_out.empty()) {
        std::ostringstream csv;
        write_concentration_csv(csv, reports);
        emit(g.csv_out, csv.str());
    }
    emit_json(g, out, "cobit.concentrate/1");
    return 0;
}

int cmd_verify(const Globals &g, const std::string &protocol_path, int haar_samples) {
    Json reports = Json::array();
    bool ok = true;
    for (const auto &name : identity_names()) {
        auto r = verify_identity(name);
        ok = ok && r.epsilon <= 1e-10;
        reports.push_back(identity_report_to_json(r));
    }
    Json out = {{"identities", reports}, {"all_exact", ok}};
    if (!protocol_path.empty()) {
        auto p = protocol_from_json(read_json_file(protocol_path));
        Json cobit = {{"protocol", p.name}};
        for (auto [dir, key, bits] : {std::tuple{Direction::Forward, "forward", p.c1_bits},
                                      std::tuple{Direction::Backward, "backward", p.c2_bits}}) {
            if (bits == 0) {
                cobit[key] = nullptr;
                continue;
            }
            Json entry = {{"probe_epsilon", verify_cobit(p, dir)}};
            if (haar_samples > 0) {
                entry["haar_epsilon"] = verify_cobit_haar(p, dir, haar_samples, g.seed);
            }
            cobit[key] = entry;
        }
        out["cobit"] = cobit;
    }
    emit_json(g, out, "cobit.identities/1");
    return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"Coherent classical communication simulator"};
    app.require_subcommand(1);
    app.fallthrough();
    Globals g;
    app.add_option("--json", g.json_out, "Write the JSON report here ('-' or unset: stdout)");
    app.add_option("--csv", g.csv_out, "Write per-trial CSV rows here");
    app.add_option("--seed", g.seed, "Base random seed");
    app.add_option("--jobs", g.jobs, "Worker threads")->check(CLI::PositiveNumber);
    app.add_option("--tolerance", g.tolerance, "Override the norm/unitarity tolerance")->check(CLI::PositiveNumber);

    auto *sim = app.add_subcommand("simulate", "Run P and its coherent version on every message pair");
    std::string protocol_path, a_bits, b_bits;
    bool all_messages = false, include_state = false;
    sim->add_option("--protocol", protocol_path, "Protocol JSON")->required();
    sim->add_flag("--all-messages", all_messages, "Report the full family (default when -a/-b are absent)");
    sim->add_option("-a", a_bits, "Alice's message bits");
    sim->add_option("-b", b_bits, "Bob's message bits");
    sim->add_flag("--state", include_state, "Include the coherent output state for -a/-b");

    auto *pipe = app.add_subcommand("pipeline", "Run the error-corrected composition");
    std::string config_path;
    int trials = 1;
    bool random_messages = false, with_transcript = false;
    pipe->add_option("--config", config_path, "Pipeline config JSON")->required();
    pipe->add_option("--trials", trials, "Number of sampled trials (0: accounting only)")->check(CLI::NonNegativeNumber);
    pipe->add_flag("--random-messages", random_messages, "Draw message pairs per trial");
    pipe->add_flag("--transcript", with_transcript, "Attach the first trial's transcript");

    auto *reg = app.add_subcommand("regions", "Apply region maps or check derivation scripts");
    std::string map_name, point, script_path;
    bool list_maps = false;
    reg->add_option("--map", map_name, "Map name (see --list)");
    reg->add_option("--point", point, "Comma-separated coordinates");
    reg->add_option("--script", script_path, "Derivation script JSON");
    reg->add_flag("--list", list_maps, "List map names");

    auto *conc = app.add_subcommand("concentrate", "Sample entanglement concentration");
    std::string probs_arg, conc_protocol;
    int k_prime = 64, seeds = 1000;
    YieldInputs yin;
    conc->add_option("--probs", probs_arg, "Comma-separated Schmidt probabilities");
    conc->add_option("--protocol", conc_protocol, "Use Gamma_00 of this protocol");
    conc->add_option("--k-prime", k_prime, "Copies per run");
    conc->add_option("--seeds", seeds, "Number of runs");
    auto *c1_opt = conc->add_option("--c1", yin.c1, "Bound input C1");
    auto *c2_opt = conc->add_option("--c2", yin.c2, "Bound input C2");
    conc->add_option("--eps", yin.eps, "Bound input epsilon");
    conc->add_option("--sch", yin.sch_u, "Bound input Sch(U)");
    conc->add_option("--n", yin.n, "Bound input n");

    auto *ver = app.add_subcommand("verify-identities", "Check the exact resource identities");
    std::string verify_protocol;
    int haar = 0;
    ver->add_option("--protocol", verify_protocol, "Also measure the cobit error of this protocol");
    ver->add_option("--haar", haar, "Haar-random probes for --protocol");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        return app.exit(e);
    }
    try {
        if (g.tolerance > 0) {
            tolerances().norm = g.tolerance;
            tolerances().unitarity = g.tolerance;
        }
        if (*sim) {
            bool single = !a_bits.empty() || !b_bits.empty();
            return cmd_simulate(g, protocol_path, all_messages || !single, a_bits, b_bits, include_state);
        }
        if (*pipe) {
            return cmd_pipeline(g, config_path, trials, random_messages, with_transcript);
        }
        if (*reg) {
            return cmd_regions(g, map_name, point, script_path, list_maps);
        }
        if (*conc) {
            bool from_protocol = c1_opt->count() == 0 && c2_opt->count() == 0;
            return cmd_concentrate(g, probs_arg, conc_protocol, k_prime, seeds, yin, from_protocol);
        }
        if (*ver) {
            return cmd_verify(g, verify_protocol, haar);
        }
    } catch (const SchemaError &e) {
        std::cerr << "schema error: " << e.what() << "\n";
        return 2;
    } catch (const WidthOverflow &e) {
        std::cerr << "width overflow: " << e.what() << "\n";
        return 3;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
