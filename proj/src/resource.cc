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

#include "cobit/resource.h"

#include <cmath>
#include <deque>
#include <functional>

#include "cobit/gates.h"
#include "cobit/qstate.h"

namespace cobit {

namespace {

void require(bool ok, const std::string &what) {
    if (!ok) {
        throw ContractError(what);
    }
}

const std::vector<std::pair<Region, std::string_view>> kRegionNames = {
    {Region::CCE, "CCE"},   {Region::CoCoE, "CoCoE"}, {Region::QQE, "QQE"}, {Region::QCoE, "QCoE"},
    {Region::CoQE, "CoQE"}, {Region::QCE, "QCE"},     {Region::CQE, "CQE"}, {Region::RRE, "RRE"},
    {Region::CoE, "CoE"},   {Region::QE, "QE"},       {Region::CE, "CE"},
};

std::string lower(std::string_view s) {
    std::string out(s);
    for (auto &c : out) {
        c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    }
    return out;
}

}  // namespace

std::string_view region_name(Region r) {
    for (const auto &[region, name] : kRegionNames) {
        if (region == r) {
            return name;
        }
    }
    return "?";
}

Region parse_region(std::string_view s) {
    auto key = lower(s);
    for (const auto &[region, name] : kRegionNames) {
        if (lower(name) == key) {
            return region;
        }
    }
    throw ContractError("unknown region '" + std::string(s) + "'");
}

Region canonical(Region r) {
    return r == Region::RRE ? Region::CCE : r;
}

const std::vector<DiamondEdge> &diamond_edges() {
    static const std::vector<DiamondEdge> edges = {
        {Region::QQE, Region::CoQE, 0},
        {Region::QQE, Region::QCoE, 1},
        {Region::CoQE, Region::CoCoE, 1},
        {Region::QCoE, Region::CoCoE, 0},
    };
    return edges;
}

bool in_diamond(Region r) {
    return r == Region::QQE || r == Region::CoQE || r == Region::QCoE || r == Region::CoCoE;
}

std::vector<Region> diamond_path(Region from, Region to) {
    require(in_diamond(from) && in_diamond(to), std::string("regions ") + std::string(region_name(from)) + " and " +
                                                    std::string(region_name(to)) + " are not connected by the diamond");
    // Breadth-first search; edges are visited in declaration order so the
    // chosen path is deterministic.
    std::map<Region, Region> parent{{from, from}};
    std::deque<Region> queue{from};
    while (!queue.empty()) {
        Region cur = queue.front();
        queue.pop_front();
        if (cur == to) {
            break;
        }
        for (const auto &e : diamond_edges()) {
            for (auto [a, b] : {std::pair{e.from, e.to}, std::pair{e.to, e.from}}) {
                if (a == cur && !parent.count(b)) {
                    parent[b] = cur;
                    queue.push_back(b);
                }
            }
        }
    }
    std::vector<Region> path{to};
    while (path.back() != from) {
        path.push_back(parent.at(path.back()));
    }
    return {path.rbegin(), path.rend()};
}

std::vector<std::string> named_maps() {
    std::vector<std::string> out = {"thm12", "thm12-inverse", "qe-to-coe", "coe-to-qe", "rre-to-cce"};
    for (Region a : {Region::QQE, Region::CoQE, Region::QCoE, Region::CoCoE}) {
        for (Region b : {Region::QQE, Region::CoQE, Region::QCoE, Region::CoCoE}) {
            if (a != b) {
                out.push_back(lower(region_name(a)) + "-to-" + lower(region_name(b)));
            }
        }
    }
    return out;
}

std::vector<double> apply_named_map(std::string_view name, const std::vector<double> &point) {
    auto triple = [&]() {
        require(point.size() == 3, "map '" + std::string(name) + "' takes three coordinates");
        return RateTriple<double>{point[0], point[1], point[2]};
    };
    auto pack = [](const RateTriple<double> &t) { return std::vector<double>{t.c1, t.c2, t.e}; };
    if (name == "thm12") return pack(map_cce_cocoe(triple(), MapDirection::Forward));
    if (name == "thm12-inverse") return pack(map_cce_cocoe(triple(), MapDirection::Inverse));
    if (name == "rre-to-cce") return pack(triple());
    if (name == "qe-to-coe" || name == "coe-to-qe") {
        require(point.size() == 2, "one-way maps take two coordinates");
        auto r = map_one_way(RatePair<double>{point[0], point[1]},
                             name == "qe-to-coe" ? MapDirection::Forward : MapDirection::Inverse);
        return {r.c, r.e};
    }
    auto sep = name.find("-to-");
    if (sep != std::string_view::npos) {
        Region from = parse_region(name.substr(0, sep));
        Region to = parse_region(name.substr(sep + 4));
        return pack(map_diamond(triple(), from, to));
    }
    throw ContractError("unknown map '" + std::string(name) + "'");
}

// ---- Identities ------------------------------------------------------------------

namespace {

using Circuit = std::function<QuantumState(QuantumState)>;

QuantumState op(const QuantumState &s, std::string_view gate, std::initializer_list<std::string> targets) {
    std::vector<int> widths;
    for (const auto &t : targets) {
        widths.push_back(s.layout().at(t).width);
    }
    return apply_local(s, gates::named(gate, widths), targets);
}

/// A qubit channel: the state of `src` moves into Bob's fresh register `dst`.
QuantumState send_qubit(const QuantumState &s, const std::string &src, const std::string &dst) {
    return op(s, "swap", {src, dst});
}

/// A cbit channel: the environment keeps a copy and the value moves to Bob.
QuantumState send_cbit(const QuantumState &s, const std::string &src, const std::string &dst, const std::string &env) {
    return send_qubit(xor_into(s, src, env), src, dst);
}

QuantumState epr(const QuantumState &s, const std::string &a, const std::string &b) {
    return xor_into(op(s, "h", {a}), a, b);
}

struct IdentityCase {
    RegisterLayout layout;
    std::vector<std::string> keep;
    std::vector<std::pair<std::string, Circuit>> probes;
    Circuit resources;  // prepares the consumed entanglement
    Circuit actual;
    Circuit ideal;
    std::string plus_probe;
    ResourcePoint consumed;
    ResourcePoint produced;
};

/// Probes for a message made of single-qubit registers, optionally paired with
/// one reference qubit per message qubit.
std::vector<std::pair<std::string, Circuit>> message_probes(
    const std::vector<std::string> &msg, const std::vector<std::string> &ref, bool with_phase_probe,
    bool with_reference) {
    std::vector<std::pair<std::string, Circuit>> probes;
    std::vector<std::pair<std::string, std::string>> single = {{"0", "id"}, {"1", "x"}, {"+", "h"}};
    if (with_phase_probe) {
        single.push_back({"i", "hs"});
    }
    size_t combos = 1;
    for (size_t i = 0; i < msg.size(); i++) {
        combos *= single.size();
    }
    for (size_t c = 0; c < combos; c++) {
        std::string label;
        std::vector<std::string> ops;
        size_t rest = c;
        for (size_t i = 0; i < msg.size(); i++) {
            label += single[rest % single.size()].first;
            ops.push_back(single[rest % single.size()].second);
            rest /= single.size();
        }
        probes.push_back({label, [msg, ops](QuantumState s) {
                              for (size_t i = 0; i < msg.size(); i++) {
                                  if (ops[i] == "hs") {
                                      s = op(op(s, "h", {msg[i]}), "s", {msg[i]});
                                  } else {
                                      s = op(s, ops[i], {msg[i]});
                                  }
                              }
                              return s;
                          }});
    }
    if (with_reference) {
        probes.push_back({"entangled", [msg, ref](QuantumState s) {
                              for (size_t i = 0; i < msg.size(); i++) {
                                  s = epr(s, ref[i], msg[i]);
                              }
                              return s;
                          }});
    }
    return probes;
}

IdentityCase teleport_case() {
    IdentityCase c;
    c.layout = RegisterLayout({{"R", Party::Reference, 1},
                               {"Aq", Party::Alice, 1},
                               {"Ae", Party::Alice, 1},
                               {"Be", Party::Bob, 1},
                               {"Bm1", Party::Bob, 1},
                               {"Bm2", Party::Bob, 1},
                               {"E1", Party::Environment, 1},
                               {"E2", Party::Environment, 1}});
    c.keep = {"R", "Be"};
    c.probes = message_probes({"Aq"}, {"R"}, true, true);
    c.resources = [](QuantumState s) { return epr(s, "Ae", "Be"); };
    c.actual = [](QuantumState s) {
        s = xor_into(s, "Aq", "Ae");
        s = op(s, "h", {"Aq"});
        s = send_cbit(s, "Aq", "Bm1", "E1");
        s = send_cbit(s, "Ae", "Bm2", "E2");
        s = op(s, "cnot", {"Bm2", "Be"});
        return op(s, "cz", {"Bm1", "Be"});
    };
    c.ideal = [](QuantumState s) { return send_qubit(s, "Aq", "Be"); };
    c.consumed = {.cbit_fwd = 2, .ebit = 1};
    c.produced = {.qubit_fwd = 1};
    return c;
}

// Alice's Z^a X^b on her half, then Bob's Bell decoding into (half, partner).
QuantumState dense_encode(QuantumState s, const std::string &a, const std::string &b, const std::string &half) {
    s = op(s, "cnot", {b, half});
    return op(s, "cz", {a, half});
}

QuantumState dense_decode(QuantumState s, const std::string &half, const std::string &partner) {
    s = op(s, "cnot", {half, partner});
    return op(s, "h", {half});
}

IdentityCase superdense_case() {
    IdentityCase c;
    c.layout = RegisterLayout({{"Ma", Party::Alice, 1},
                               {"Mb", Party::Alice, 1},
                               {"Ae", Party::Alice, 1},
                               {"Bq", Party::Bob, 1},
                               {"Be", Party::Bob, 1},
                               {"Ea", Party::Environment, 1},
                               {"Eb", Party::Environment, 1}});
    // Classical channel semantics: compare what Bob and the environment hold.
    c.keep = {"Bq", "Be", "Ea", "Eb"};
    c.probes = message_probes({"Ma", "Mb"}, {}, false, false);
    c.resources = [](QuantumState s) { return epr(s, "Ae", "Be"); };
    c.actual = [](QuantumState s) {
        s = dense_encode(std::move(s), "Ma", "Mb", "Ae");
        s = send_qubit(s, "Ae", "Bq");
        s = dense_decode(std::move(s), "Bq", "Be");
        // Bob reads the outcome: the environment keeps a copy.
        s = xor_into(s, "Bq", "Ea");
        return xor_into(s, "Be", "Eb");
    };
    c.ideal = [](QuantumState s) {
        s = xor_into(xor_into(s, "Ma", "Bq"), "Mb", "Be");
        return xor_into(xor_into(s, "Ma", "Ea"), "Mb", "Eb");
    };
    c.consumed = {.qubit_fwd = 1, .ebit = 1};
    c.produced = {.cbit_fwd = 2};
    return c;
}

IdentityCase two_cobits_case() {
    IdentityCase c;
    c.layout = RegisterLayout({{"Ra", Party::Reference, 1},
                               {"Rb", Party::Reference, 1},
                               {"Ma", Party::Alice, 1},
                               {"Mb", Party::Alice, 1},
                               {"Ae", Party::Alice, 1},
                               {"Bq", Party::Bob, 1},
                               {"Be", Party::Bob, 1}});
    c.keep = {"Ra", "Rb", "Ma", "Mb", "Bq", "Be"};
    c.probes = message_probes({"Ma", "Mb"}, {"Ra", "Rb"}, false, true);
    c.resources = [](QuantumState s) { return epr(s, "Ae", "Be"); };
    c.actual = [](QuantumState s) {
        s = dense_encode(std::move(s), "Ma", "Mb", "Ae");
        s = send_qubit(s, "Ae", "Bq");
        return dense_decode(std::move(s), "Bq", "Be");
    };
    c.ideal = [](QuantumState s) { return xor_into(xor_into(s, "Ma", "Bq"), "Mb", "Be"); };
    c.plus_probe = "++";
    c.consumed = {.qubit_fwd = 1, .ebit = 1};
    c.produced = {.cobit_fwd = 2};
    return c;
}

IdentityCase tp_sd_case() {
    IdentityCase c;
    c.layout = RegisterLayout({{"Ra", Party::Reference, 1},
                               {"Rb", Party::Reference, 1},
                               {"Ma", Party::Alice, 1},
                               {"Mb", Party::Alice, 1},
                               {"Ad", Party::Alice, 1},
                               {"At", Party::Alice, 1},
                               {"Bd", Party::Bob, 1},
                               {"Bt", Party::Bob, 1},
                               {"Bm1", Party::Bob, 1},
                               {"Bm2", Party::Bob, 1},
                               {"E1", Party::Environment, 1},
                               {"E2", Party::Environment, 1}});
    c.keep = {"Ra", "Rb", "Ma", "Mb", "Bt", "Bd"};
    c.probes = message_probes({"Ma", "Mb"}, {"Ra", "Rb"}, false, true);
    c.resources = [](QuantumState s) { return epr(epr(s, "Ad", "Bd"), "At", "Bt"); };
    c.actual = [](QuantumState s) {
        // Superdense encoding on the first pair ...
        s = dense_encode(std::move(s), "Ma", "Mb", "Ad");
        // ... whose encoded half is teleported over the second pair with two cbits.
        s = xor_into(s, "Ad", "At");
        s = op(s, "h", {"Ad"});
        s = send_cbit(s, "Ad", "Bm1", "E1");
        s = send_cbit(s, "At", "Bm2", "E2");
        s = op(s, "cnot", {"Bm2", "Bt"});
        s = op(s, "cz", {"Bm1", "Bt"});
        return dense_decode(std::move(s), "Bt", "Bd");
    };
    c.ideal = [](QuantumState s) { return xor_into(xor_into(s, "Ma", "Bt"), "Mb", "Bd"); };
    c.plus_probe = "++";
    c.consumed = {.cbit_fwd = 2, .ebit = 2};
    c.produced = {.cobit_fwd = 2};
    return c;
}

}  // namespace

std::vector<std::string> identity_names() {
    return {"teleport", "superdense", "two_cobits", "tp_sd"};
}

IdentityReport verify_identity(std::string_view name) {
    IdentityCase c;
    if (name == "teleport") {
        c = teleport_case();
    } else if (name == "superdense") {
        c = superdense_case();
    } else if (name == "two_cobits") {
        c = two_cobits_case();
    } else if (name == "tp_sd") {
        c = tp_sd_case();
    } else {
        throw ContractError("unknown identity '" + std::string(name) + "'");
    }
    IdentityReport r;
    r.name = std::string(name);
    r.consumed = c.consumed;
    r.produced = c.produced;
    QuantumState zero = basis_state(c.layout, std::map<std::string, uint64_t>{});
    for (const auto &[label, prep] : c.probes) {
        QuantumState input = prep(zero);
        QuantumState actual = c.actual(c.resources(input));
        QuantumState ideal = c.ideal(input);
        double d = trace_distance(partial_trace(actual, c.keep), partial_trace(ideal, c.keep));
        r.epsilon = std::max(r.epsilon, d);
        r.probes++;
        if (label == c.plus_probe) {
            r.ebits_on_plus = schmidt(actual, Party::Alice).entropy;
        }
    }
    return r;
}

// ---- Derivations -----------------------------------------------------------------

const std::vector<std::string> &resource_keys() {
    static const std::vector<std::string> keys = {"cbit_fwd",  "cbit_back",  "cobit_fwd", "cobit_back",
                                                  "qubit_fwd", "qubit_back", "ebit",      "U"};
    return keys;
}

const std::map<std::string, IdentityRule> &identity_rules() {
    static const std::map<std::string, IdentityRule> rules = [] {
        std::map<std::string, IdentityRule> forward = {
            {"teleport", {{{"cbit_fwd", 2}, {"ebit", 1}}, {{"qubit_fwd", 1}}}},
            {"superdense", {{{"qubit_fwd", 1}, {"ebit", 1}}, {{"cbit_fwd", 2}}}},
            {"two_cobits", {{{"qubit_fwd", 1}, {"ebit", 1}}, {{"cobit_fwd", 2}}}},
            {"cobits_to_qubit", {{{"cobit_fwd", 2}}, {{"qubit_fwd", 1}, {"ebit", 1}}}},
            {"tp_sd", {{{"cbit_fwd", 1}, {"ebit", 1}}, {{"cobit_fwd", 1}}}},
            {"cobit_to_cbit", {{{"cobit_fwd", 1}}, {{"cbit_fwd", 1}}}},
            {"cobit_to_ebit", {{{"cobit_fwd", 1}}, {{"ebit", 1}}}},
            {"qubit_to_cobit", {{{"qubit_fwd", 1}}, {{"cobit_fwd", 1}}}},
            {"qubit_to_ebit", {{{"qubit_fwd", 1}}, {{"ebit", 1}}}},
        };
        auto flip = [](const Holdings &h) {
            Holdings out;
            for (const auto &[k, v] : h) {
                std::string key = k;
                if (auto pos = key.find("_fwd"); pos != std::string::npos) {
                    key.replace(pos, 4, "_back");
                }
                out[key] = v;
            }
            return out;
        };
        std::map<std::string, IdentityRule> all = forward;
        for (const auto &[name, rule] : forward) {
            all[name + "_back"] = {flip(rule.consumes), flip(rule.produces)};
        }
        return all;
    }();
    return rules;
}

Verdict check_derivation(const DerivationScript &script) {
    constexpr double tol = 1e-12;
    const auto &keys = resource_keys();
    auto check_keys = [&](const Holdings &h) {
        for (const auto &[k, v] : h) {
            require(std::find(keys.begin(), keys.end(), k) != keys.end(), "unknown resource '" + k + "'");
            require(std::isfinite(v), "non-finite amount of '" + k + "'");
        }
    };
    check_keys(script.initial);
    check_keys(script.goal);
    Verdict v;
    Holdings holdings;
    for (const auto &k : keys) {
        holdings[k] = 0;
        v.borrowed[k] = 0;
    }
    for (const auto &[k, x] : script.initial) {
        holdings[k] += x;
    }
    auto fail = [&](int step, std::string reason) {
        v.valid = false;
        v.failed_step = step;
        v.reason = std::move(reason);
        v.final_holdings = holdings;
        return v;
    };
    for (size_t i = 0; i < script.steps.size(); i++) {
        const auto &step = script.steps[i];
        check_keys(step.consumes);
        check_keys(step.produces);
        require(step.multiplicity >= 0, "step multiplicity must be nonnegative");
        Holdings consumes = step.consumes, produces = step.produces;
        if (step.kind == StepKind::Identity) {
            auto it = identity_rules().find(step.name);
            if (it == identity_rules().end()) {
                return fail(static_cast<int>(i), "unknown identity '" + step.name + "'");
            }
            consumes = it->second.consumes;
            produces = it->second.produces;
        } else if (step.kind == StepKind::Cited) {
            v.premises.push_back(step.name);
        } else if (step.kind == StepKind::Borrow) {
            for (const auto &[k, x] : produces) {
                v.borrowed[k] += x * step.multiplicity;
            }
        }
        for (const auto &[k, x] : consumes) {
            holdings[k] -= x * step.multiplicity;
            if (holdings[k] < -tol) {
                return fail(static_cast<int>(i), "step " + std::to_string(i) + " ('" + step.name + "') needs " +
                                                     std::to_string(x * step.multiplicity) + " " + k + " but only " +
                                                     std::to_string(holdings[k] + x * step.multiplicity) + " is held");
            }
        }
        for (const auto &[k, x] : produces) {
            holdings[k] += x * step.multiplicity;
        }
        v.trace.push_back({step.name, holdings});
    }
    for (const auto &k : keys) {
        double need = v.borrowed[k] + (script.goal.count(k) ? script.goal.at(k) : 0.0);
        if (holdings[k] < need - tol) {
            return fail(static_cast<int>(script.steps.size()),
                        "final holdings of " + k + " (" + std::to_string(holdings[k]) + ") do not cover the goal plus " +
                            "repayment (" + std::to_string(need) + ")");
        }
    }
    v.valid = true;
    v.final_holdings = holdings;
    return v;
}

}  // namespace cobit
