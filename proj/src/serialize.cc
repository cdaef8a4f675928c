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

#include "cobit/serialize.h"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "cobit/gates.h"

namespace cobit {

namespace {

[[noreturn]] void schema_fail(const std::string &what) {
    throw SchemaError(what);
}

const Json &field(const Json &j, const char *key) {
    if (!j.is_object() || !j.contains(key)) {
        schema_fail(std::string("missing field '") + key + "'");
    }
    return j.at(key);
}

template <typename T>
T get(const Json &j, const char *key) {
    try {
        return field(j, key).get<T>();
    } catch (const nlohmann::json::exception &e) {
        schema_fail(std::string("field '") + key + "': " + e.what());
    }
}

template <typename T>
T get_or(const Json &j, const char *key, T fallback) {
    if (!j.is_object() || !j.contains(key) || j.at(key).is_null()) {
        return fallback;
    }
    return get<T>(j, key);
}

void check_schema_tag(const Json &j, const char *expected) {
    if (j.is_object() && j.contains("schema") && j.at("schema") != expected) {
        schema_fail("document declares schema '" + j.at("schema").dump() + "', expected '" + expected + "'");
    }
}

Json matrix_to_json(const Matrix &m) {
    Json rows = Json::array();
    for (Eigen::Index r = 0; r < m.rows(); r++) {
        Json row = Json::array();
        for (Eigen::Index c = 0; c < m.cols(); c++) {
            row.push_back({m(r, c).real(), m(r, c).imag()});
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

Matrix matrix_from_json(const Json &j) {
    if (!j.is_array() || j.empty()) {
        schema_fail("matrix must be a nonempty array of rows");
    }
    auto n = static_cast<Eigen::Index>(j.size());
    Matrix m(n, n);
    for (Eigen::Index r = 0; r < n; r++) {
        const auto &row = j[r];
        if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != n) {
            schema_fail("matrix must be square");
        }
        for (Eigen::Index c = 0; c < n; c++) {
            const auto &e = row[c];
            if (e.is_number()) {
                m(r, c) = e.get<double>();
            } else if (e.is_array() && e.size() == 2 && e[0].is_number() && e[1].is_number()) {
                m(r, c) = cplx(e[0].get<double>(), e[1].get<double>());
            } else {
                schema_fail("matrix entries must be numbers or [re, im] pairs");
            }
        }
    }
    return m;
}

Json ops_to_json(const std::vector<LocalOp> &ops) {
    Json out = Json::array();
    for (const auto &op : ops) {
        Json j = {{"gate", op.name}, {"targets", op.targets}};
        if (op.theta != 0) {
            j["theta"] = op.theta;
        }
        if (op.name == "custom") {
            j["matrix"] = matrix_to_json(op.matrix);
        }
        out.push_back(std::move(j));
    }
    return out;
}

std::vector<LocalOp> ops_from_json(const Json &j, const RegisterLayout &layout) {
    std::vector<LocalOp> ops;
    if (j.is_null()) {
        return ops;
    }
    if (!j.is_array()) {
        schema_fail("round operations must be an array");
    }
    for (const auto &e : j) {
        LocalOp op;
        op.name = get<std::string>(e, "gate");
        op.targets = get<std::vector<std::string>>(e, "targets");
        op.theta = get_or<double>(e, "theta", 0.0);
        std::vector<int> widths;
        for (const auto &t : op.targets) {
            if (!layout.contains(t)) {
                schema_fail("operation '" + op.name + "' targets unknown register '" + t + "'");
            }
            widths.push_back(layout.at(t).width);
        }
        try {
            op.matrix = op.name == "custom" ? matrix_from_json(field(e, "matrix"))
                                            : gates::named(op.name, widths, op.theta);
        } catch (const ContractError &err) {
            schema_fail(err.what());
        }
        ops.push_back(std::move(op));
    }
    return ops;
}

Json holdings_to_json(const Holdings &h) {
    Json j = Json::object();
    for (const auto &[k, v] : h) {
        j[k] = v;
    }
    return j;
}

Holdings holdings_from_json(const Json &j) {
    Holdings h;
    if (j.is_null()) {
        return h;
    }
    if (!j.is_object()) {
        schema_fail("resource amounts must be an object");
    }
    const auto &keys = resource_keys();
    for (const auto &[k, v] : j.items()) {
        if (std::find(keys.begin(), keys.end(), k) == keys.end()) {
            schema_fail("unknown resource '" + k + "'");
        }
        if (!v.is_number()) {
            schema_fail("resource '" + k + "' must be a number");
        }
        h[k] = v.get<double>();
    }
    return h;
}

std::string hex_digest(uint64_t d) {
    std::ostringstream os;
    os << std::hex;
    os.width(16);
    os.fill('0');
    os << d;
    return os.str();
}

}  // namespace

Json finite_or_null(double x) {
    return std::isfinite(x) ? Json(x) : Json(nullptr);
}

Json read_json_file(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in) {
        schema_fail("cannot read '" + path.string() + "'");
    }
    try {
        return Json::parse(in);
    } catch (const nlohmann::json::exception &e) {
        schema_fail("'" + path.string() + "' is not valid JSON: " + e.what());
    }
}

Json layout_to_json(const RegisterLayout &layout) {
    Json regs = Json::array();
    for (const auto &r : layout.registers()) {
        regs.push_back({{"name", r.name}, {"party", std::string(party_name(r.party))}, {"width", r.width}});
    }
    return regs;
}

RegisterLayout layout_from_json(const Json &j) {
    if (!j.is_array()) {
        schema_fail("registers must be an array");
    }
    std::vector<Register> regs;
    for (const auto &e : j) {
        Party party;
        try {
            party = parse_party(get<std::string>(e, "party"));
        } catch (const ContractError &err) {
            schema_fail(err.what());
        }
        regs.push_back({get<std::string>(e, "name"), party, get<int>(e, "width")});
    }
    try {
        return RegisterLayout(std::move(regs));
    } catch (const ContractError &err) {
        schema_fail(err.what());
    }
}

Json state_to_json(const QuantumState &s) {
    Json amps = Json::array();
    for (Eigen::Index i = 0; i < s.amplitudes().size(); i++) {
        amps.push_back(s.amplitudes()[i].real());
        amps.push_back(s.amplitudes()[i].imag());
    }
    return {{"layout", layout_to_json(s.layout())},
            {"amplitudes", std::move(amps)},
            {"digest", hex_digest(state_digest(s.amplitudes()))}};
}

QuantumState state_from_json(const Json &j) {
    auto layout = layout_from_json(field(j, "layout"));
    auto flat = get<std::vector<double>>(j, "amplitudes");
    if (flat.size() != 2 * layout.dimension()) {
        schema_fail("amplitude array length does not match the layout");
    }
    Amplitudes amps(static_cast<Eigen::Index>(layout.dimension()));
    for (Eigen::Index i = 0; i < amps.size(); i++) {
        amps[i] = cplx(flat[2 * i], flat[2 * i + 1]);
    }
    try {
        return QuantumState(std::move(layout), std::move(amps));
    } catch (const ContractError &err) {
        schema_fail(err.what());
    }
}

Json protocol_to_json(const MessageProtocol &p) {
    Json gate;
    if (p.gate.name == "cnot" || p.gate.name == "crossing" || p.gate.name == "swap" || p.gate.name == "identity") {
        gate = {{"builtin", p.gate.name}};
    } else {
        gate = {{"name", p.gate.name},
                {"alice_width", p.gate.alice_width},
                {"bob_width", p.gate.bob_width},
                {"matrix", matrix_to_json(p.gate.matrix)}};
    }
    Json rounds = Json::array();
    for (const auto &r : p.rounds) {
        rounds.push_back({{"alice", ops_to_json(r.alice)}, {"bob", ops_to_json(r.bob)}});
    }
    Json uses = Json::array();
    for (const auto &u : p.uses) {
        uses.push_back({{"alice", u.alice_targets}, {"bob", u.bob_targets}});
    }
    Json j = {{"schema", kProtocolSchema},
              {"name", p.name},
              {"gate", gate},
              {"registers", layout_to_json(p.layout)},
              {"rounds", rounds},
              {"uses", uses},
              {"c1_bits", p.c1_bits},
              {"c2_bits", p.c2_bits},
              {"e_in_ebits", p.e_in_ebits},
              {"declared_epsilon", p.declared_epsilon}};
    for (auto [key, value] : {std::pair{"alice_message", &p.alice_message}, std::pair{"bob_message", &p.bob_message},
                              std::pair{"alice_output", &p.alice_output}, std::pair{"bob_output", &p.bob_output}}) {
        if (!value->empty()) {
            j[key] = *value;
        }
    }
    return j;
}

MessageProtocol protocol_from_json(const Json &j) {
    check_schema_tag(j, kProtocolSchema);
    MessageProtocol p;
    p.name = get_or<std::string>(j, "name", "protocol");
    const auto &g = field(j, "gate");
    try {
        if (g.contains("builtin")) {
            p.gate = builtin_gate(get<std::string>(g, "builtin"));
        } else {
            p.gate = make_gate(get<std::string>(g, "name"), get<int>(g, "alice_width"), get<int>(g, "bob_width"),
                               matrix_from_json(field(g, "matrix")));
        }
    } catch (const ContractError &err) {
        schema_fail(err.what());
    }
    p.layout = layout_from_json(field(j, "registers"));
    p.c1_bits = get_or<int>(j, "c1_bits", 0);
    p.c2_bits = get_or<int>(j, "c2_bits", 0);
    p.e_in_ebits = get_or<int>(j, "e_in_ebits", 0);
    p.declared_epsilon = get_or<double>(j, "declared_epsilon", 0.0);
    p.alice_message = get_or<std::string>(j, "alice_message", "");
    p.bob_message = get_or<std::string>(j, "bob_message", "");
    p.alice_output = get_or<std::string>(j, "alice_output", "");
    p.bob_output = get_or<std::string>(j, "bob_output", "");
    RegisterLayout full;
    try {
        full = p.input_layout();
    } catch (const ContractError &err) {
        schema_fail(err.what());
    }
    const auto &rounds = field(j, "rounds");
    if (!rounds.is_array()) {
        schema_fail("rounds must be an array");
    }
    for (const auto &r : rounds) {
        p.rounds.push_back({ops_from_json(r.value("alice", Json()), full), ops_from_json(r.value("bob", Json()), full)});
    }
    for (const auto &u : j.value("uses", Json::array())) {
        p.uses.push_back({get<std::vector<std::string>>(u, "alice"), get<std::vector<std::string>>(u, "bob")});
    }
    try {
        p.validate();
    } catch (const ContractError &err) {
        schema_fail(std::string("invalid protocol: ") + err.what());
    }
    return p;
}

Json code_to_json(const BlockCode &code) {
    return {{"schema", kCodeSchema},
            {"kind", "explicit"},
            {"k", code.params.k},
            {"n_symbols", code.params.n_symbols},
            {"alpha", code.params.alpha},
            {"distance", code.params.distance()},
            {"seed", code.seed},
            {"codewords", code.codewords}};
}

BlockCode code_from_json(const Json &j) {
    check_schema_tag(j, kCodeSchema);
    auto kind = get_or<std::string>(j, "kind", "explicit");
    try {
        if (kind == "repetition") {
            return repetition_code(get<int>(j, "k"), get_or<int>(j, "n_symbols", 2));
        }
        CodeParams params{get<int>(j, "k"), get_or<int>(j, "n_symbols", 2), 0};
        if (j.contains("distance")) {
            params = CodeParams::with_distance(params.k, params.n_symbols, get<int>(j, "distance"));
        }
        if (j.contains("alpha")) {
            params.alpha = get<double>(j, "alpha");
        }
        params.validate();
        if (kind == "greedy") {
            return build_code(params, get_or<uint64_t>(j, "seed", 0));
        }
        if (kind != "explicit") {
            schema_fail("unknown code kind '" + kind + "'");
        }
        BlockCode code{params, get_or<uint64_t>(j, "seed", 0), get<std::vector<Word>>(j, "codewords")};
        for (const auto &w : code.codewords) {
            if (static_cast<int>(w.size()) != params.k) {
                schema_fail("codeword length differs from k");
            }
            for (int s : w) {
                if (s < 0 || s >= params.n_symbols) {
                    schema_fail("codeword symbol outside the alphabet");
                }
            }
        }
        if (code.codewords.empty() || code.min_distance() < params.distance()) {
            schema_fail("explicit code does not meet its declared distance");
        }
        return code;
    } catch (const ContractError &err) {
        schema_fail(err.what());
    }
}

PipelineConfig pipeline_from_json(const Json &j, const std::filesystem::path &base_dir) {
    check_schema_tag(j, kPipelineSchema);
    PipelineConfig cfg;
    const auto &proto = field(j, "protocol");
    if (proto.is_string()) {
        cfg.protocol = protocol_from_json(read_json_file(base_dir / proto.get<std::string>()));
    } else {
        cfg.protocol = protocol_from_json(proto);
    }
    cfg.k = get<int>(j, "k");
    auto load_code = [&](const char *key, int bits) -> std::optional<BlockCode> {
        if (!j.contains(key) || j.at(key).is_null()) {
            return std::nullopt;
        }
        Json doc = j.at(key);
        if (doc.is_string()) {
            doc = read_json_file(base_dir / doc.get<std::string>());
        }
        if (!doc.contains("k")) {
            doc["k"] = cfg.k;
        }
        if (!doc.contains("n_symbols")) {
            doc["n_symbols"] = 1 << bits;
        }
        return code_from_json(doc);
    };
    cfg.code_a = load_code("code_a", cfg.protocol.c1_bits);
    cfg.code_b = load_code("code_b", cfg.protocol.c2_bits);
    if (j.contains("alpha")) {
        cfg.alpha = get<double>(j, "alpha");
    } else if (cfg.code_a) {
        cfg.alpha = cfg.code_a->params.alpha;
    } else if (cfg.code_b) {
        cfg.alpha = cfg.code_b->params.alpha;
    }
    cfg.r_side_channel = get_or<double>(j, "r_side_channel", 4.0);
    cfg.delta_n = get_or<double>(j, "delta_n", 0.0);
    cfg.abort_threshold = get_or<double>(j, "abort_threshold", 1.0);
    cfg.transcript_state_limit = get_or<int>(j, "transcript_state_limit", 10);
    try {
        cfg.validate();
    } catch (const ContractError &err) {
        schema_fail(std::string("invalid pipeline: ") + err.what());
    }
    return cfg;
}

Json pipeline_to_json(const PipelineConfig &cfg) {
    Json j = {{"schema", kPipelineSchema},
              {"protocol", protocol_to_json(cfg.protocol)},
              {"k", cfg.k},
              {"alpha", cfg.alpha},
              {"r_side_channel", cfg.r_side_channel},
              {"delta_n", cfg.delta_n},
              {"abort_threshold", cfg.abort_threshold},
              {"transcript_state_limit", cfg.transcript_state_limit}};
    if (cfg.code_a) j["code_a"] = code_to_json(*cfg.code_a);
    if (cfg.code_b) j["code_b"] = code_to_json(*cfg.code_b);
    return j;
}

Json ledger_to_json(const Ledger &l) {
    return {{"u_uses", l.u_uses},
            {"ebits_in", l.ebits_in},
            {"ebits_out", l.ebits_out},
            {"cobits_fwd", l.cobits_fwd},
            {"cobits_back", l.cobits_back},
            {"p_fail", l.p_fail},
            {"p_message_error", l.p_message_error},
            {"decoupling_error", l.decoupling_error},
            {"fidelity_worst", l.fidelity_worst},
            {"fidelity_avg", l.fidelity_avg},
            {"syndrome_bits_fwd", l.syndrome_bits_fwd},
            {"syndrome_bits_back", l.syndrome_bits_back},
            {"retained_entropy", l.retained_entropy}};
}

Json concentration_to_json(const ConcentrationReport &r) {
    return {{"k_prime", r.k_prime},
            {"type_observed", r.type_observed},
            {"level_multiplicity", r.level_multiplicity},
            {"ebits_out", r.ebits_out},
            {"success", r.success},
            {"bound_ebits", r.bound_ebits},
            {"bound_prob", r.bound_prob},
            {"rank_bound_prob", r.rank_bound_prob ? Json(*r.rank_bound_prob) : Json(nullptr)}};
}

Json gamma_to_json(const GammaDecomposition &g) {
    Json table = Json::array();
    if (g.c1_bits + g.c2_bits > 0) {
        uint64_t n1 = uint64_t{1} << g.c1_bits, n2 = uint64_t{1} << g.c2_bits;
        for (uint64_t a = 0; a < n1; a++) {
            for (uint64_t b = 0; b < n2; b++) {
                for (uint64_t a2 = 0; a2 < n1; a2++) {
                    for (uint64_t b2 = 0; b2 < n2; b2++) {
                        table.push_back({{"a", a}, {"b", b}, {"a2", a2}, {"b2", b2}, {"p", g.probability(a, b, a2, b2)}});
                    }
                }
            }
        }
    }
    Json weights = Json::array();
    for (const auto &[key, br] : g.gamma_states) {
        weights.push_back({{"da", key.first}, {"db", key.second}, {"weight", br.weight()}});
    }
    return {{"pr_table", table},
            {"epsilon_measured", g.epsilon_measured},
            {"epsilon_bar", g.epsilon_bar},
            {"difference_law_deviation", g.difference_law_deviation},
            {"difference_law_fidelity", g.difference_law_fidelity},
            {"gamma_weights", weights}};
}

Json transcript_to_json(const Transcript &t) {
    Json positions = Json::array();
    for (const auto &p : t.positions) {
        Json branches = Json::array();
        for (const auto &[a2, b2, w] : p.branches) {
            branches.push_back({{"a2", a2}, {"b2", b2}, {"weight", w}});
        }
        Json rec = {{"a", p.a},
                    {"b", p.b},
                    {"branches", branches},
                    {"state_width", p.state_width},
                    {"state_digest", hex_digest(p.state_digest)}};
        rec["state"] = p.state ? state_to_json(*p.state) : Json(nullptr);
        positions.push_back(std::move(rec));
    }
    auto syndrome = [](const SyndromeSupport &s) {
        return Json{{"positions", s.positions}, {"bit_cost", s.bit_cost}, {"oversized", s.oversized}};
    };
    return {{"codeword_a", t.codeword_a},
            {"codeword_b", t.codeword_b},
            {"positions", positions},
            {"patterns_enumerated", t.patterns_enumerated},
            {"received_a", t.received_a},
            {"received_b", t.received_b},
            {"sampled_success", t.sampled_success},
            {"decoded_a", t.decoded_a ? Json(*t.decoded_a) : Json(nullptr)},
            {"decoded_b", t.decoded_b ? Json(*t.decoded_b) : Json(nullptr)},
            {"syndrome_a", syndrome(t.syndrome_a)},
            {"syndrome_b", syndrome(t.syndrome_b)},
            {"kept_positions", t.kept_positions},
            {"concentration", t.concentration ? concentration_to_json(*t.concentration) : Json(nullptr)},
            {"gamma", gamma_to_json(t.gamma)}};
}

Json accounting_to_json(const AccountingReport &r) {
    return {{"terms", r.terms},
            {"f_value", r.f_value},
            {"m", r.m},
            {"catalysis_overhead", finite_or_null(r.catalysis_overhead)},
            {"catalysis_c", r.catalysis_c},
            {"chernoff_premise", r.chernoff_premise}};
}

namespace {

const std::vector<std::pair<StepKind, std::string>> kStepKinds = {
    {StepKind::Identity, "identity"},
    {StepKind::Capability, "capability"},
    {StepKind::Cited, "cited"},
    {StepKind::Borrow, "borrow"},
};

}  // namespace

DerivationScript derivation_from_json(const Json &j) {
    check_schema_tag(j, kDerivationSchema);
    DerivationScript s;
    s.name = get_or<std::string>(j, "name", "derivation");
    s.initial = holdings_from_json(j.value("initial", Json()));
    s.goal = holdings_from_json(j.value("goal", Json()));
    const auto &steps = field(j, "steps");
    if (!steps.is_array()) {
        schema_fail("steps must be an array");
    }
    for (const auto &e : steps) {
        DerivationStep step;
        auto kind = get<std::string>(e, "kind");
        auto it = std::find_if(kStepKinds.begin(), kStepKinds.end(), [&](const auto &p) { return p.second == kind; });
        if (it == kStepKinds.end()) {
            schema_fail("unknown step kind '" + kind + "'");
        }
        step.kind = it->first;
        step.name = get_or<std::string>(e, "name", kind);
        step.multiplicity = get_or<double>(e, "multiplicity", 1.0);
        if (step.kind == StepKind::Borrow) {
            step.produces = holdings_from_json(field(e, "resources"));
        } else if (step.kind != StepKind::Identity) {
            step.consumes = holdings_from_json(e.value("consumes", Json()));
            step.produces = holdings_from_json(e.value("produces", Json()));
        }
        s.steps.push_back(std::move(step));
    }
    return s;
}

Json derivation_to_json(const DerivationScript &s) {
    Json steps = Json::array();
    for (const auto &step : s.steps) {
        auto kind = std::find_if(kStepKinds.begin(), kStepKinds.end(), [&](const auto &p) { return p.first == step.kind; });
        Json j = {{"kind", kind->second}, {"name", step.name}, {"multiplicity", step.multiplicity}};
        if (step.kind == StepKind::Borrow) {
            j["resources"] = holdings_to_json(step.produces);
        } else if (step.kind != StepKind::Identity) {
            j["consumes"] = holdings_to_json(step.consumes);
            j["produces"] = holdings_to_json(step.produces);
        }
        steps.push_back(std::move(j));
    }
    return {{"schema", kDerivationSchema},
            {"name", s.name},
            {"initial", holdings_to_json(s.initial)},
            {"goal", holdings_to_json(s.goal)},
            {"steps", steps}};
}

Json verdict_to_json(const Verdict &v, const std::string &script_name) {
    Json trace = Json::array();
    for (const auto &r : v.trace) {
        trace.push_back({{"step", r.name}, {"holdings", holdings_to_json(r.holdings)}});
    }
    return {{"script", script_name},
            {"valid", v.valid},
            {"failed_step", v.failed_step},
            {"reason", v.reason},
            {"premises", v.premises},
            {"borrowed", holdings_to_json(v.borrowed)},
            {"final_holdings", holdings_to_json(v.final_holdings)},
            {"trace", trace}};
}

Json resource_point_to_json(const ResourcePoint &p) {
    return {{"cbit_fwd", p.cbit_fwd},   {"cbit_back", p.cbit_back},   {"cobit_fwd", p.cobit_fwd},
            {"cobit_back", p.cobit_back}, {"qubit_fwd", p.qubit_fwd}, {"qubit_back", p.qubit_back},
            {"ebit", p.ebit}};
}

Json identity_report_to_json(const IdentityReport &r) {
    return {{"name", r.name},
            {"epsilon", r.epsilon},
            {"probes", r.probes},
            {"consumed", resource_point_to_json(r.consumed)},
            {"produced", resource_point_to_json(r.produced)},
            {"ebits_on_plus", r.ebits_on_plus}};
}

}  // namespace cobit
