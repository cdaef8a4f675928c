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

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cobit/errors.h"

namespace cobit {

using cplx = std::complex<double>;
using Amplitudes = Eigen::VectorXcd;
using Matrix = Eigen::MatrixXcd;

/// Largest total register width a dense state may have.
inline constexpr int kMaxWidth = 22;

enum class Party { Alice, Bob, Environment, Reference };

std::string_view party_name(Party p);
Party parse_party(std::string_view s);

/// Numerical tolerances used across the engine. Mutable through
/// `tolerances()` so a caller (the CLI's --tolerance flag) can override them.
struct Tolerances {
    double norm = 1e-10;
    double unitarity = 1e-10;
    double rank = 1e-9;
    double psd = 1e-9;
};
Tolerances &tolerances();

struct Register {
    std::string name;
    Party party;
    int width;

    bool operator==(const Register &) const = default;
};

/// Ordered list of named registers. Amplitude indices concatenate register
/// values in layout order with the first register in the most significant bits.
class RegisterLayout {
   public:
    RegisterLayout() = default;
    explicit RegisterLayout(std::vector<Register> registers);

    const std::vector<Register> &registers() const {
        return registers_;
    }
    size_t size() const {
        return registers_.size();
    }
    int total_width() const {
        return total_width_;
    }
    uint64_t dimension() const {
        return uint64_t{1} << total_width_;
    }

    bool contains(std::string_view name) const;
    size_t index_of(std::string_view name) const;
    const Register &at(std::string_view name) const;
    /// Position of the register's least significant bit inside an amplitude index.
    int shift_of(std::string_view name) const;
    uint64_t value_of(uint64_t index, std::string_view name) const;

    std::vector<std::string> names() const;
    std::vector<std::string> names_of(Party p) const;
    int width_of(std::span<const std::string> names) const;

    RegisterLayout appended(Register r) const;
    RegisterLayout concatenated(const RegisterLayout &other) const;
    /// Sub-layout holding `names` in the given order.
    RegisterLayout subset(std::span<const std::string> names) const;
    RegisterLayout renamed(const std::map<std::string, std::string> &renames) const;

    bool operator==(const RegisterLayout &) const = default;

   private:
    std::vector<Register> registers_;
    std::vector<int> shifts_;
    int total_width_ = 0;
};

/// Normalized pure state over a register layout.
class QuantumState {
   public:
    QuantumState(RegisterLayout layout, Amplitudes amplitudes);

    const RegisterLayout &layout() const {
        return layout_;
    }
    const Amplitudes &amplitudes() const {
        return amplitudes_;
    }
    cplx amplitude(uint64_t index) const {
        return amplitudes_[static_cast<Eigen::Index>(index)];
    }
    double norm() const {
        return amplitudes_.norm();
    }

   private:
    RegisterLayout layout_;
    Amplitudes amplitudes_;
};

/// Subnormalized state: one term of a decomposition such as sum_k |k>|branch_k>.
class Branch {
   public:
    Branch() = default;
    Branch(RegisterLayout layout, Amplitudes amplitudes);

    const RegisterLayout &layout() const {
        return layout_;
    }
    const Amplitudes &amplitudes() const {
        return amplitudes_;
    }
    double weight() const {
        return amplitudes_.squaredNorm();
    }
    /// Normalized copy; throws when the weight is zero.
    QuantumState normalized() const;

   private:
    RegisterLayout layout_;
    Amplitudes amplitudes_;
};

class DensityOperator {
   public:
    DensityOperator(RegisterLayout layout, Matrix matrix);

    const RegisterLayout &layout() const {
        return layout_;
    }
    const Matrix &matrix() const {
        return matrix_;
    }
    Eigen::VectorXd eigenvalues() const;

   private:
    RegisterLayout layout_;
    Matrix matrix_;
};

struct SchmidtResult {
    std::vector<double> coefficients;  // descending
    int rank = 0;
    double entropy = 0;  // bits
};

QuantumState basis_state(const RegisterLayout &layout, const std::map<std::string, std::string> &assignment);
QuantumState basis_state(const RegisterLayout &layout, const std::map<std::string, uint64_t> &values);

/// Tensor product; registers of `b` follow those of `a`.
QuantumState tensor(const QuantumState &a, const QuantumState &b);
/// Appends a fresh register prepared in |0...0>.
QuantumState with_register(const QuantumState &s, Register r);

/// Applies a unitary to the concatenation of `targets` (first target most significant).
QuantumState apply_local(const QuantumState &s, const Matrix &u, std::span<const std::string> targets);
QuantumState apply_local(const QuantumState &s, const Matrix &u, std::initializer_list<std::string> targets);

/// Applies a classical reversible map to the value held by `targets`.
/// `f` must be a bijection on [0, 2^width); this is checked.
QuantumState apply_permutation(
    const QuantumState &s, std::span<const std::string> targets, const std::function<uint64_t(uint64_t)> &f);

/// |s>_src |d>_dst -> |s>_src |d xor s>_dst. Widths must agree.
QuantumState xor_into(const QuantumState &s, std::string_view src, std::string_view dst);

/// Subnormalized component of `s` with the registers in `fixed` held at the given
/// values; the result lives on the remaining registers in layout order.
Branch slice(const QuantumState &s, const std::map<std::string, uint64_t> &fixed);

QuantumState permute_registers(const QuantumState &s, std::span<const std::string> new_order);
Amplitudes permute_amplitudes(
    const Amplitudes &amps, const RegisterLayout &layout, std::span<const std::string> new_order);

DensityOperator partial_trace(const QuantumState &s, std::span<const std::string> keep);

/// Schmidt decomposition across (left, everything else).
SchmidtResult schmidt(const Amplitudes &amps, const RegisterLayout &layout, std::span<const std::string> left);
SchmidtResult schmidt(const QuantumState &s, std::span<const std::string> left);
/// Cut with the registers of party `left` on one side.
SchmidtResult schmidt(const QuantumState &s, Party left);

double trace_distance(const QuantumState &a, const QuantumState &b);
double trace_distance(const DensityOperator &a, const DensityOperator &b);
double trace_distance(const QuantumState &a, const DensityOperator &b);

/// Trace distance between sum_i |a_i><a_i| and sum_j |b_j><b_j|, evaluated in
/// the span of the vectors so the ambient dimension never gets materialized.
double mixture_trace_distance(std::span<const Amplitudes> a, std::span<const Amplitudes> b);

/// |<a|b>|^2 for normalized states.
double fidelity(const QuantumState &a, const QuantumState &b);

/// Entropy in bits of a probability vector (zeros contribute nothing).
double shannon_entropy(std::span<const double> probs);

Matrix kron(const Matrix &a, const Matrix &b);
bool is_unitary(const Matrix &u, double tol);

/// 64-bit FNV-1a digest of the amplitude bytes, used to identify elided states.
uint64_t state_digest(const Amplitudes &amps);

}  // namespace cobit
