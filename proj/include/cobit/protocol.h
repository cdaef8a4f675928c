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

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cobit/qstate.h"

namespace cobit {

/// Unitary coupling Alice's `alice_width` qubits (most significant) with Bob's.
struct BipartiteGate {
    std::string name;
    int alice_width = 0;
    int bob_width = 0;
    Matrix matrix;
    /// Operator-Schmidt rank across the Alice/Bob cut, computed by `make_gate`.
    int schmidt_number = 0;
};

/// Validates unitarity and computes the operator-Schmidt rank.
BipartiteGate make_gate(std::string name, int alice_width, int bob_width, Matrix matrix);
int operator_schmidt_rank(const Matrix &u, int alice_width, int bob_width);

/// Builtins: "cnot" (Alice control, Bob target), "crossing" (Alice (a, a_out),
/// Bob (b, b_out); CNOT a->b_out times CNOT b->a_out), "swap" (one qubit each side).
BipartiteGate builtin_gate(std::string_view name);

struct LocalOp {
    std::string name;
    Matrix matrix;
    std::vector<std::string> targets;
    /// Rotation angle for the parameterized named gates; kept for serialization.
    double theta = 0;
};

/// Local operations performed between gate uses. Alice's ops may touch Alice
/// and Environment registers (an environment copy models a measurement).
struct Round {
    std::vector<LocalOp> alice;
    std::vector<LocalOp> bob;
};

struct GateUse {
    std::vector<std::string> alice_targets;
    std::vector<std::string> bob_targets;
};

/// P_n = (V_n x W_n) U ... U (V_0 x W_0) with declared message widths.
///
/// The working layout holds every register the protocol touches. Alice's
/// message enters in `alice_message` (c1 bits) and Bob's in `bob_message`
/// (c2 bits). Decoded messages are left in `alice_output` (Alice's copy of b',
/// c2 bits) and `bob_output` (Bob's copy of a', c1 bits). A register name is
/// empty exactly when its width would be zero. When `e_in_ebits > 0`, EPR
/// halves A5/B5 are added to the input automatically.
struct MessageProtocol {
    std::string name;
    BipartiteGate gate;
    RegisterLayout layout;
    std::vector<Round> rounds;
    std::vector<GateUse> uses;
    int c1_bits = 0;
    int c2_bits = 0;
    int e_in_ebits = 0;
    std::string alice_message;
    std::string bob_message;
    std::string alice_output;
    std::string bob_output;
    double declared_epsilon = 0;

    int n_uses() const {
        return static_cast<int>(uses.size());
    }
    /// Throws ContractError describing the first broken invariant.
    void validate() const;
    /// Working layout plus the consumed EPR halves.
    RegisterLayout input_layout() const;
};

/// Registers added around P_n by the coherentified protocol.
inline constexpr const char *kCopyA = "A0";
inline constexpr const char *kCopyB = "B0";
inline constexpr const char *kKeyA3 = "A3";
inline constexpr const char *kKeyB3 = "B3";
inline constexpr const char *kKeyA4 = "A4";
inline constexpr const char *kKeyB4 = "B4";
inline constexpr const char *kEprA = "A5";
inline constexpr const char *kEprB = "B5";

/// `count` EPR pairs held in registers `alice` and `bob` (width `count` each).
QuantumState make_epr(int count, const std::string &alice = "A", const std::string &bob = "B");

/// |x>_src |0>_dst -> |x>_src |x>_dst, extended linearly (a ladder of CNOTs).
QuantumState coherent_copy(const QuantumState &s, const std::string &src, const std::string &dst);

enum class PadDirection { Encrypt, Decrypt };
/// Coherent one-time pad |m>|x> -> |m xor x>|x>; self-inverse.
QuantumState otp(const QuantumState &s, const std::string &message, const std::string &key, PadDirection direction);

/// Input |a>|b> (plus EPR ancillas), all other working registers zero.
QuantumState prepare_input(const MessageProtocol &p, uint64_t a, uint64_t b);
/// Applies the rounds and gate uses to a state that contains the working registers.
QuantumState execute(const MessageProtocol &p, const QuantumState &input);

/// P_n(|a>|b>) relabelled so that A1 holds b' and B1 holds a'; every other
/// Alice register is renamed "A2.<name>", Bob's "B2.<name>", environment "E2.<name>".
QuantumState run_protocol(const MessageProtocol &p, uint64_t a, uint64_t b);

/// The coherentified protocol's final state for messages (a, b), over
/// A0 A1 A3 A4 A2.* B0 B1 B3 B4 B2.* E2.* (registers of width zero omitted).
QuantumState p_prime_state(const MessageProtocol &p, uint64_t a, uint64_t b);

/// P_n and P'_n outputs for every message pair, indexed by a * 2^c2 + b.
struct OutputFamily {
    int c1_bits = 0;
    int c2_bits = 0;
    std::vector<QuantumState> direct;
    std::vector<QuantumState> coherent;
};
OutputFamily collect_outputs(const MessageProtocol &p, int jobs = 1);

struct GammaDecomposition {
    int c1_bits = 0;
    int c2_bits = 0;
    /// Pr(a'b'|ab), indexed by `prob_index`.
    std::vector<double> prob;
    /// Keyed by (a xor a', b xor b'); extracted from the (0, 0) run.
    std::map<std::pair<uint64_t, uint64_t>, Branch> gamma_states;
    double epsilon_measured = 0;
    double epsilon_bar = 0;
    /// Largest |Gamma^{(a,b)} - Gamma^{(0,0)}| over runs sharing a difference key.
    double difference_law_deviation = 0;
    /// Smallest normalized fidelity between such Gamma states (1 when all agree).
    double difference_law_fidelity = 1;

    size_t prob_index(uint64_t a, uint64_t b, uint64_t a2, uint64_t b2) const;
    double probability(uint64_t a, uint64_t b, uint64_t a2, uint64_t b2) const {
        return prob[prob_index(a, b, a2, b2)];
    }
    const Branch &gamma(uint64_t da, uint64_t db) const;
    /// Gamma_00 normalized.
    QuantumState gamma00() const;
};

/// Branches of a coherent output keyed by (a', b'), on the Gamma registers.
std::map<std::pair<uint64_t, uint64_t>, Branch> coherent_branches(
    const QuantumState &coherent, uint64_t a, uint64_t b, int c1_bits, int c2_bits);

GammaDecomposition extract_gamma(const MessageProtocol &p, const OutputFamily &family);

struct PPrimeOutput {
    QuantumState final_state;
    GammaDecomposition gamma;
    double decoupling_error = 0;
};

/// Max over (a, b) of the trace distance between the Gamma-register reduced
/// state and the normalized Gamma_00.
double decoupling_error(const OutputFamily &family, const GammaDecomposition &gamma);

PPrimeOutput run_p_prime(const MessageProtocol &p, uint64_t a, uint64_t b, int jobs = 1);

/// Whole-protocol analysis shared by the CLI and the pipeline.
struct ProtocolAnalysis {
    OutputFamily family;
    GammaDecomposition gamma;
    double decoupling_error = 0;
    SchmidtResult gamma00_schmidt;
};
ProtocolAnalysis analyze(const MessageProtocol &p, int jobs = 1);

enum class Direction { Forward, Backward };

/// Worst trace distance between the protocol and the ideal cobit map
/// |x>_sender -> |x>_sender |x>_receiver over the probe set {|0>, |1>, |+>}^c
/// plus a maximally entangled reference probe; the other message is held at 0
/// and every register but the sender's message and the receiver's output is discarded.
double verify_cobit(const MessageProtocol &p, Direction direction);
/// Same comparison over `samples` Haar-random probes on (reference, message).
double verify_cobit_haar(const MessageProtocol &p, Direction direction, int samples, uint64_t seed);

/// Catalog of small protocols used by tests and shipped as examples.
namespace protocols {
/// Crossing gate, one use; Alice pre-rotates her message by R_y(2 theta) with
/// sin^2 theta = flip_probability.
MessageProtocol crossing(double flip_probability = 0);
/// Single CNOT from Alice's message to Bob's output. With `measured`, Alice
/// first copies her message into an environment register.
MessageProtocol cnot(bool measured = false);
/// No gate use at all; `bits` forward message bits that never reach Bob.
MessageProtocol identity(int bits);
/// Crossing gate that also consumes one EPR pair per use; the pair ends up in
/// the junk, doubling the Schmidt rank available to Gamma_00.
MessageProtocol crossing_with_epr();
/// One-way message plus an entangled ancilla pair shipped through a swap gate,
/// producing one ebit per use on top of the message.
MessageProtocol swap_entangler();
/// No message bits; identity gate.
MessageProtocol empty();
}  // namespace protocols

}  // namespace cobit
