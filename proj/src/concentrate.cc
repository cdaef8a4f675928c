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

#include "cobit/concentrate.h"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numeric>
#include <random>

namespace cobit {

namespace {

void require(bool ok, const std::string &what) {
    if (!ok) {
        throw ContractError(what);
    }
}

SchmidtSpectrum from_schmidt(const SchmidtResult &r) {
    std::vector<double> probs;
    for (double c : r.coefficients) {
        if (c > tolerances().rank) {
            probs.push_back(c * c);
        }
    }
    return SchmidtSpectrum::from_probs(std::move(probs));
}

}  // namespace

SchmidtSpectrum SchmidtSpectrum::from_probs(std::vector<double> probs) {
    double total = 0;
    for (double p : probs) {
        require(p >= -tolerances().psd, "negative probability in spectrum");
        total += p;
    }
    require(std::abs(total - 1) <= 1e-9, "spectrum does not sum to 1");
    std::erase_if(probs, [](double p) { return p <= 0; });
    std::sort(probs.rbegin(), probs.rend());
    SchmidtSpectrum s;
    s.rank = static_cast<int>(probs.size());
    s.probs = std::move(probs);
    return s;
}

double SchmidtSpectrum::entropy() const {
    return shannon_entropy(probs);
}

SchmidtSpectrum spectrum_of(const QuantumState &s, std::span<const std::string> left) {
    return from_schmidt(schmidt(s, left));
}

SchmidtSpectrum spectrum_of(const QuantumState &s, Party left) {
    return from_schmidt(schmidt(s, left));
}

YieldBound yield_bound(double c1, double c2, double eps, int sch_u, int n, int k_prime,
                       std::optional<int> spectrum_rank) {
    require(sch_u >= 1 && n >= 1, "Schmidt number and use count must be positive");
    require(k_prime >= 1, "k' must be positive");
    require(eps < 1, "eps must be below 1");
    double slack = std::sqrt(static_cast<double>(k_prime)) - std::log2(k_prime + 1.0);
    double sch_n = std::pow(static_cast<double>(sch_u), n);
    YieldBound b;
    b.bound_ebits = k_prime * (c1 + c2 + std::log2(1 - eps)) - sch_n * slack;
    b.bound_prob = std::clamp(1 - std::exp2(-sch_n * slack), 0.0, 1.0);
    if (spectrum_rank) {
        b.rank_bound_prob = std::clamp(1 - std::exp2(-*spectrum_rank * slack), 0.0, 1.0);
    }
    return b;
}

std::vector<std::pair<double, int>> schmidt_levels(const SchmidtSpectrum &s) {
    std::vector<std::pair<double, int>> levels;
    for (double p : s.probs) {
        if (!levels.empty() && std::abs(levels.back().first - p) <= 1e-9) {
            levels.back().second++;
        } else {
            levels.push_back({p, 1});
        }
    }
    return levels;
}

double log2_multinomial(int total, std::span<const int> counts) {
    double r = std::lgamma(total + 1.0);
    for (int c : counts) {
        r -= std::lgamma(c + 1.0);
    }
    return std::max(0.0, r / std::log(2.0));
}

ConcentrationReport concentrate(const SchmidtSpectrum &spectrum, int k_prime, uint64_t seed,
                                const YieldInputs &in) {
    require(k_prime >= 1, "k' must be positive");
    auto levels = schmidt_levels(spectrum);
    ConcentrationReport r;
    r.k_prime = k_prime;
    std::mt19937_64 rng(seed);
    // Multinomial sample by sequential conditional binomials over levels.
    int remaining = k_prime;
    double mass_left = 1;
    for (size_t j = 0; j < levels.size(); j++) {
        double level_mass = levels[j].first * levels[j].second;
        int draw;
        if (j + 1 == levels.size()) {
            draw = remaining;
        } else {
            double p = std::clamp(level_mass / mass_left, 0.0, 1.0);
            draw = std::binomial_distribution<int>(remaining, p)(rng);
        }
        r.type_observed.push_back(draw);
        r.level_multiplicity.push_back(levels[j].second);
        remaining -= draw;
        mass_left -= level_mass;
    }
    r.ebits_out = log2_multinomial(k_prime, r.type_observed);
    for (size_t j = 0; j < levels.size(); j++) {
        r.ebits_out += r.type_observed[j] * std::log2(static_cast<double>(levels[j].second));
    }
    auto bound = yield_bound(in.c1, in.c2, in.eps, in.sch_u, in.n, k_prime, spectrum.rank);
    r.bound_ebits = bound.bound_ebits;
    r.bound_prob = bound.bound_prob;
    r.rank_bound_prob = bound.rank_bound_prob;
    r.success = r.ebits_out >= r.bound_ebits;
    return r;
}

double exact_expected_ebits(const SchmidtSpectrum &spectrum, int k_prime) {
    auto levels = schmidt_levels(spectrum);
    require(levels.size() <= 2, "exact expectation implemented for at most two levels");
    if (levels.size() == 1) {
        return k_prime * std::log2(static_cast<double>(levels[0].second));
    }
    double q = levels[0].first * levels[0].second;  // mass of level 0
    double lg0 = std::log2(static_cast<double>(levels[0].second));
    double lg1 = std::log2(static_cast<double>(levels[1].second));
    double sum = 0;
    for (int j = 0; j <= k_prime; j++) {
        int counts[2] = {j, k_prime - j};
        double log_binom = std::lgamma(k_prime + 1.0) - std::lgamma(j + 1.0) - std::lgamma(k_prime - j + 1.0);
        double log_prob = log_binom + j * std::log(q) + (k_prime - j) * std::log1p(-q);
        sum += std::exp(log_prob) * (log2_multinomial(k_prime, counts) + j * lg0 + (k_prime - j) * lg1);
    }
    return sum;
}

void write_concentration_csv(std::ostream &out, std::span<const ConcentrationReport> reports) {
    out << "k_prime,ebits_out,bound_ebits,success\r\n";
    auto flags = out.flags();
    out << std::setprecision(17);
    for (const auto &r : reports) {
        out << r.k_prime << ',' << r.ebits_out << ',' << r.bound_ebits << ',' << (r.success ? "true" : "false")
            << "\r\n";
    }
    out.flags(flags);
}

}  // namespace cobit
