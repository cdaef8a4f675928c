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

#include <algorithm>
#include <array>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cobit/errors.h"

namespace cobit {

/// Signed rates; negative entries are consumed.
struct ResourcePoint {
    double cbit_fwd = 0;
    double cbit_back = 0;
    double cobit_fwd = 0;
    double cobit_back = 0;
    double qubit_fwd = 0;
    double qubit_back = 0;
    double ebit = 0;

    bool operator==(const ResourcePoint &) const = default;
};

enum class Region { CCE, CoCoE, QQE, QCoE, CoQE, QCE, CQE, RRE, CoE, QE, CE };

std::string_view region_name(Region r);
Region parse_region(std::string_view s);
/// RRE is the same region as CCE; every other region is its own canonical form.
Region canonical(Region r);

enum class MapDirection { Forward, Inverse };

template <typename T>
struct RateTriple {
    T c1{};
    T c2{};
    T e{};
    bool operator==(const RateTriple &) const = default;
};

template <typename T>
struct RatePair {
    T c{};
    T e{};
    bool operator==(const RatePair &) const = default;
};

/// (C1, C2, E) in CCE <-> (C1, C2, E - min(C1, 0) - min(C2, 0)) in C_oC_oE.
template <typename T>
RateTriple<T> map_cce_cocoe(const RateTriple<T> &p, MapDirection dir) {
    T zero{};
    T shift = std::min(p.c1, zero) + std::min(p.c2, zero);
    return dir == MapDirection::Forward ? RateTriple<T>{p.c1, p.c2, p.e - shift}
                                        : RateTriple<T>{p.c1, p.c2, p.e + shift};
}

/// (Q, E) in QE <-> (2Q, E - Q) in C_oE.
template <typename T>
RatePair<T> map_one_way(const RatePair<T> &p, MapDirection dir) {
    if (dir == MapDirection::Forward) {
        return {p.c + p.c, p.e - p.c};
    }
    T q = p.c / T(2);
    return {q, p.e + q};
}

/// One side of the diamond QQE / C_oQE / QC_oE / C_oC_oE. Each elementary edge
/// trades a qubit channel for two cobits plus one ebit on one side only.
struct DiamondEdge {
    Region from;
    Region to;
    int side;  // 0: forward channel, 1: backward channel
};
const std::vector<DiamondEdge> &diamond_edges();
bool in_diamond(Region r);

template <typename T>
RateTriple<T> apply_edge(const RateTriple<T> &p, const DiamondEdge &edge, MapDirection dir) {
    RateTriple<T> out = p;
    T &rate = edge.side == 0 ? out.c1 : out.c2;
    if (dir == MapDirection::Forward) {
        out.e = out.e - rate;
        rate = rate + rate;
    } else {
        rate = rate / T(2);
        out.e = out.e + rate;
    }
    return out;
}

/// Sequence of regions (inclusive) along a shortest path in the diamond.
std::vector<Region> diamond_path(Region from, Region to);

/// Maps along an explicit region path; consecutive regions must share an edge.
template <typename T>
RateTriple<T> map_diamond_via(const RateTriple<T> &p, const std::vector<Region> &path) {
    RateTriple<T> cur = p;
    for (size_t i = 0; i + 1 < path.size(); i++) {
        bool found = false;
        for (const auto &edge : diamond_edges()) {
            if (edge.from == path[i] && edge.to == path[i + 1]) {
                cur = apply_edge(cur, edge, MapDirection::Forward);
                found = true;
            } else if (edge.to == path[i] && edge.from == path[i + 1]) {
                cur = apply_edge(cur, edge, MapDirection::Inverse);
                found = true;
            }
            if (found) {
                break;
            }
        }
        if (!found) {
            throw ContractError(std::string("no diamond edge between ") + std::string(region_name(path[i])) +
                                " and " + std::string(region_name(path[i + 1])));
        }
    }
    return cur;
}

template <typename T>
RateTriple<T> map_diamond(const RateTriple<T> &p, Region from, Region to) {
    return map_diamond_via(p, diamond_path(from, to));
}

/// Named maps used by the command line: thm12 (CCE -> C_oC_oE), the diamond
/// maps as "<from>-to-<to>" (e.g. qqe-to-cocoe), one-way (qe-to-coe) and their
/// inverses. Returns the mapped coordinates; pairs use the first two entries.
std::vector<double> apply_named_map(std::string_view name, const std::vector<double> &point);
std::vector<std::string> named_maps();

// ---- Exact resource identities -------------------------------------------------

struct IdentityReport {
    std::string name;
    /// Worst trace distance to the ideal resource map over the probe set.
    double epsilon = 0;
    int probes = 0;
    ResourcePoint consumed;
    ResourcePoint produced;
    /// Alice/Bob entanglement left after the all-|+> probe (the implicit ebit of a cobit).
    double ebits_on_plus = 0;
};

IdentityReport verify_identity(std::string_view name);
std::vector<std::string> identity_names();

// ---- Derivation scripts --------------------------------------------------------

/// Resource holdings: the seven rates plus "U" (gate uses).
using Holdings = std::map<std::string, double>;
const std::vector<std::string> &resource_keys();

enum class StepKind { Identity, Capability, Cited, Borrow };

struct DerivationStep {
    StepKind kind = StepKind::Identity;
    std::string name;
    double multiplicity = 1;
    Holdings consumes;
    Holdings produces;
};

struct DerivationScript {
    std::string name;
    Holdings initial;
    Holdings goal;
    std::vector<DerivationStep> steps;
};

struct StepRecord {
    std::string name;
    Holdings holdings;
};

struct Verdict {
    bool valid = false;
    /// Index of the offending step, or -1 (the final coverage check fails with steps.size()).
    int failed_step = -1;
    std::string reason;
    std::vector<StepRecord> trace;
    Holdings borrowed;
    Holdings final_holdings;
    /// Cited steps taken as premises rather than verified here.
    std::vector<std::string> premises;
};

/// Exchange rates of the built-in identity steps (per unit multiplicity).
struct IdentityRule {
    Holdings consumes;
    Holdings produces;
};
const std::map<std::string, IdentityRule> &identity_rules();

Verdict check_derivation(const DerivationScript &script);

}  // namespace cobit
