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
#include <ostream>
#include <span>
#include <vector>

#include "cobit/qstate.h"

namespace cobit {

struct SchmidtSpectrum {
    std::vector<double> probs;  // descending, sums to 1
    int rank = 0;

    static SchmidtSpectrum from_probs(std::vector<double> probs);
    double entropy() const;
};

/// Squared Schmidt coefficients across (left, rest).
SchmidtSpectrum spectrum_of(const QuantumState &s, std::span<const std::string> left);
SchmidtSpectrum spectrum_of(const QuantumState &s, Party left);

struct YieldBound {
    double bound_ebits = 0;
    double bound_prob = 0;
    /// Same probability formula with the observed Schmidt rank in place of Sch(U)^n.
    std::optional<double> rank_bound_prob;
};

/// bound_ebits = k'(c1 + c2 + log2(1 - eps)) - Sch^n (sqrt k' - log2(k' + 1));
/// bound_prob = 1 - 2^(-Sch^n (sqrt k' - log2(k' + 1))), clamped to [0, 1].
YieldBound yield_bound(double c1, double c2, double eps, int sch_u, int n, int k_prime,
                       std::optional<int> spectrum_rank = std::nullopt);

/// Inputs of the guaranteed-yield formula attached to a concentration run.
struct YieldInputs {
    double c1 = 0;
    double c2 = 0;
    double eps = 0;
    int sch_u = 1;
    int n = 1;
};

struct ConcentrationReport {
    int k_prime = 0;
    /// Copies landing on each distinct Schmidt level (levels grouped by equal probability).
    std::vector<int> type_observed;
    std::vector<int> level_multiplicity;
    double ebits_out = 0;
    bool success = false;
    double bound_ebits = 0;
    double bound_prob = 0;
    std::optional<double> rank_bound_prob;
};

/// Groups equal probabilities (within 1e-9) into levels: {probability, multiplicity}.
std::vector<std::pair<double, int>> schmidt_levels(const SchmidtSpectrum &s);

/// Simulates the local type measurement on k' copies. The observed type fixes
/// an eigenspace of the k'-fold reduced state whose dimension is
/// multinomial(k'; L) * prod g_j^{L_j}, where L_j counts copies on level j
/// (multiplicity g_j); the post-measurement state is maximally entangled of
/// that dimension and ebits_out is its log2.
ConcentrationReport concentrate(const SchmidtSpectrum &spectrum, int k_prime, uint64_t seed,
                                const YieldInputs &bound_inputs);

/// Exact E[ebits_out] for spectra with at most two distinct levels.
double exact_expected_ebits(const SchmidtSpectrum &spectrum, int k_prime);

double log2_multinomial(int total, std::span<const int> counts);

/// CSV rows: k_prime,ebits_out,bound_ebits,success.
void write_concentration_csv(std::ostream &out, std::span<const ConcentrationReport> reports);

}  // namespace cobit
