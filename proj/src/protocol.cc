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

#include "cobit/protocol.h"

#include <cmath>
#include <optional>
#include <random>
#include <set>

#include "cobit/gates.h"
#include "cobit/parallel.h"

namespace cobit {

namespace {

const std::set<std::string> kReserved = {"A0", "A3", "A4", "B0", "B3", "B4", "A5", "B5", "R.ref"};

bool has_prefix(const std::string &s, std::string_view prefix) {
    return s.rfind(prefix, 0) == 0;
}

void require(bool ok, const std::string &what) {
    if (!ok) {
        throw ContractError(what);
    }
}

void check_message_register(
    const RegisterLayout &layout, const std::string &name, int width, Party party, const std::string &role) {
    if (width == 0) {
        require(name.empty(), role + " must be empty when its width is zero");
        return;
    }
    require(!name.empty(), role + " register is missing");
    const auto &r = layout.at(name);
    require(r.party == party, role + " register '" + name + "' belongs to the wrong party");
    require(r.width == width, role + " register '" + name + "' has width " + std::to_string(r.width) +
                                  ", expected " + std::to_string(width));
}

void check_ops(const RegisterLayout &layout, const std::vector<LocalOp> &ops, Party owner) {
    for (const auto &op : ops) {
        int w = 0;
        for (const auto &t : op.targets) {
            const auto &r = layout.at(t);
            require(r.party == owner || r.party == Party::Environment,
                    "local op '" + op.name + "' of " + std::string(party_name(owner)) + " touches register '" + t +
                        "' of " + std::string(party_name(r.party)));
            w += r.width;
        }
        require(op.matrix.rows() == (Eigen::Index{1} << w), "local op '" + op.name + "' has the wrong dimension");
        require(is_unitary(op.matrix, tolerances().unitarity), "local op '" + op.name + "' is not unitary");
    }
}

QuantumState apply_ops(QuantumState s, const std::vector<LocalOp> &ops) {
    for (const auto &op : ops) {
        s = apply_local(s, op.matrix, std::span<const std::string>(op.targets));
    }
    return s;
}

// Reorders and renames a state so that `front` registers come first under new
// names, followed by the remaining registers grouped by party.
QuantumState relabel(
    const QuantumState &s, const std::vector<std::pair<std::string, std::string>> &alice_front,
    const std::vector<std::pair<std::string, std::string>> &bob_front) {
    std::set<std::string> placed;
    std::vector<std::string> order;
    std::map<std::string, std::string> renames;
    auto place_group = [&](const std::vector<std::pair<std::string, std::string>> &front, Party party,
                           const std::string &prefix) {
        for (const auto &[from, to] : front) {
            if (from.empty()) {
                continue;
            }
            order.push_back(from);
            placed.insert(from);
            renames[from] = to;
        }
        for (const auto &r : s.layout().registers()) {
            if (r.party == party && !placed.count(r.name)) {
                order.push_back(r.name);
                placed.insert(r.name);
                renames[r.name] = prefix + r.name;
            }
        }
    };
    place_group(alice_front, Party::Alice, "A2.");
    place_group(bob_front, Party::Bob, "B2.");
    place_group({}, Party::Environment, "E2.");
    place_group({}, Party::Reference, "R2.");
    auto permuted = permute_registers(s, order);
    return QuantumState(permuted.layout().renamed(renames), permuted.amplitudes());
}

uint64_t pair_index(uint64_t a, uint64_t b, int c2) {
    return (a << c2) | b;
}

}  // namespace

int operator_schmidt_rank(const Matrix &u, int alice_width, int bob_width) {
    auto da = Eigen::Index{1} << alice_width;
    auto db = Eigen::Index{1} << bob_width;
    require(u.rows() == da * db && u.cols() == da * db, "gate dimension does not match its party widths");
    // Realignment: R[(a, a'), (b, b')] = U[(a, b), (a', b')].
    Matrix r(da * da, db * db);
    for (Eigen::Index a = 0; a < da; a++) {
        for (Eigen::Index a2 = 0; a2 < da; a2++) {
            for (Eigen::Index b = 0; b < db; b++) {
                for (Eigen::Index b2 = 0; b2 < db; b2++) {
                    r(a * da + a2, b * db + b2) = u(a * db + b, a2 * db + b2);
                }
            }
        }
    }
    Eigen::BDCSVD<Matrix> svd(r);
    const auto &sv = svd.singularValues();
    double top = sv.size() ? sv[0] : 0;
    int rank = 0;
    for (Eigen::Index i = 0; i < sv.size(); i++) {
        if (sv[i] > 1e-9 * std::max(1.0, top)) {
            rank++;
        }
    }
    return rank;
}

BipartiteGate make_gate(std::string name, int alice_width, int bob_width, Matrix matrix) {
    require(alice_width >= 1 && bob_width >= 1, "gate party widths must be positive");
    require(is_unitary(matrix, tolerances().unitarity), "gate '" + name + "' is not unitary");
    BipartiteGate g{std::move(name), alice_width, bob_width, std::move(matrix), 0};
    g.schmidt_number = operator_schmidt_rank(g.matrix, alice_width, bob_width);
    return g;
}

BipartiteGate builtin_gate(std::string_view name) {
    if (name == "cnot") {
        return make_gate("cnot", 1, 1, gates::cnot());
    }
    if (name == "swap") {
        return make_gate("swap", 1, 1, gates::swap());
    }
    if (name == "identity") {
        return make_gate("identity", 1, 1, gates::identity(2));
    }
    if (name == "crossing") {
        // Bits (MSB first): a, a_out, b, b_out.
        return make_gate("crossing", 2, 2, gates::permutation(4, [](uint64_t v) {
                             uint64_t a = (v >> 3) & 1, b = (v >> 1) & 1;
                             return v ^ (b << 2) ^ a;
                         }));
    }
    throw ContractError("unknown builtin gate '" + std::string(name) + "'");
}

void MessageProtocol::validate() const {
    require(c1_bits >= 0 && c2_bits >= 0 && e_in_ebits >= 0, "message and entanglement widths must be nonnegative");
    require(rounds.size() == uses.size() + 1, "round count must be one more than the number of gate uses");
    for (const auto &r : layout.registers()) {
        require(!kReserved.count(r.name) && !has_prefix(r.name, "A2.") && !has_prefix(r.name, "B2.") &&
                    !has_prefix(r.name, "E2.") && !has_prefix(r.name, "R2."),
                "register name '" + r.name + "' is reserved");
        require(r.party != Party::Reference, "protocols may not touch reference registers");
    }
    check_message_register(layout, alice_message, c1_bits, Party::Alice, "alice_message");
    check_message_register(layout, bob_output, c1_bits, Party::Bob, "bob_output");
    check_message_register(layout, bob_message, c2_bits, Party::Bob, "bob_message");
    check_message_register(layout, alice_output, c2_bits, Party::Alice, "alice_output");
    auto full = input_layout();
    for (const auto &round : rounds) {
        check_ops(full, round.alice, Party::Alice);
        check_ops(full, round.bob, Party::Bob);
    }
    for (const auto &use : uses) {
        int wa = 0, wb = 0;
        for (const auto &t : use.alice_targets) {
            require(full.at(t).party == Party::Alice, "gate use puts Alice input on '" + t + "'");
            wa += full.at(t).width;
        }
        for (const auto &t : use.bob_targets) {
            require(full.at(t).party == Party::Bob, "gate use puts Bob input on '" + t + "'");
            wb += full.at(t).width;
        }
        require(wa == gate.alice_width && wb == gate.bob_width, "gate use target widths do not match the gate");
    }
}

RegisterLayout MessageProtocol::input_layout() const {
    if (e_in_ebits == 0) {
        return layout;
    }
    return layout.appended({kEprA, Party::Alice, e_in_ebits}).appended({kEprB, Party::Bob, e_in_ebits});
}

QuantumState make_epr(int count, const std::string &alice, const std::string &bob) {
    require(count >= 1, "EPR count must be positive");
    RegisterLayout layout({{alice, Party::Alice, count}, {bob, Party::Bob, count}});
    if (layout.total_width() > kMaxWidth) {
        throw WidthOverflow("too many EPR pairs for dense storage");
    }
    auto n = Eigen::Index{1} << count;
    Amplitudes amps = Amplitudes::Zero(n * n);
    for (Eigen::Index x = 0; x < n; x++) {
        amps[x * n + x] = 1.0 / std::sqrt(static_cast<double>(n));
    }
    return QuantumState(std::move(layout), std::move(amps));
}

QuantumState coherent_copy(const QuantumState &s, const std::string &src, const std::string &dst) {
    return xor_into(s, src, dst);
}

QuantumState otp(const QuantumState &s, const std::string &message, const std::string &key, PadDirection) {
    const auto &m = s.layout().at(message);
    const auto &k = s.layout().at(key);
    require(m.width == k.width, "message and key widths differ");
    require(m.party == k.party, "message and key belong to different parties");
    return xor_into(s, key, message);
}

QuantumState prepare_input(const MessageProtocol &p, uint64_t a, uint64_t b) {
    require(a < (uint64_t{1} << p.c1_bits), "message a does not fit in c1 bits");
    require(b < (uint64_t{1} << p.c2_bits), "message b does not fit in c2 bits");
    auto layout = p.input_layout();
    std::map<std::string, uint64_t> values;
    if (p.c1_bits) values[p.alice_message] = a;
    if (p.c2_bits) values[p.bob_message] = b;
    auto s = basis_state(layout, values);
    if (p.e_in_ebits) {
        s = apply_local(s, gates::on_each(gates::h(), p.e_in_ebits), {kEprA});
        s = xor_into(s, kEprA, kEprB);
    }
    return s;
}

QuantumState execute(const MessageProtocol &p, const QuantumState &input) {
    QuantumState s = input;
    for (size_t i = 0; i < p.rounds.size(); i++) {
        s = apply_ops(std::move(s), p.rounds[i].alice);
        s = apply_ops(std::move(s), p.rounds[i].bob);
        if (i < p.uses.size()) {
            std::vector<std::string> targets = p.uses[i].alice_targets;
            targets.insert(targets.end(), p.uses[i].bob_targets.begin(), p.uses[i].bob_targets.end());
            s = apply_local(s, p.gate.matrix, std::span<const std::string>(targets));
        }
    }
    return s;
}

QuantumState run_protocol(const MessageProtocol &p, uint64_t a, uint64_t b) {
    auto out = execute(p, prepare_input(p, a, b));
    return relabel(out, {{p.alice_output, "A1"}}, {{p.bob_output, "B1"}});
}

QuantumState p_prime_state(const MessageProtocol &p, uint64_t a, uint64_t b) {
    // Step 0: inputs plus the two coherent keys.
    QuantumState s = prepare_input(p, a, b);
    if (p.input_layout().total_width() + 3 * (p.c1_bits + p.c2_bits) > kMaxWidth) {
        throw WidthOverflow(
            "coherentified protocol needs " + std::to_string(p.input_layout().total_width() + 3 * (p.c1_bits + p.c2_bits)) +
            " qubits; the dense cap is " + std::to_string(kMaxWidth));
    }
    if (p.c1_bits) {
        s = with_register(s, {kCopyA, Party::Alice, p.c1_bits});
        s = tensor(s, make_epr(p.c1_bits, kKeyA3, kKeyB3));
    }
    if (p.c2_bits) {
        s = with_register(s, {kCopyB, Party::Bob, p.c2_bits});
        s = tensor(s, make_epr(p.c2_bits, kKeyA4, kKeyB4));
    }
    // Step 1: coherent copies. Step 2: encryption.
    if (p.c1_bits) {
        s = coherent_copy(s, p.alice_message, kCopyA);
        s = otp(s, p.alice_message, kKeyA3, PadDirection::Encrypt);
    }
    if (p.c2_bits) {
        s = coherent_copy(s, p.bob_message, kCopyB);
        s = otp(s, p.bob_message, kKeyB4, PadDirection::Encrypt);
    }
    // Step 3: the protocol itself.
    s = execute(p, s);
    // Step 4: decryption. Step 5: decoupling CNOTs.
    if (p.c2_bits) {
        s = otp(s, p.alice_output, kKeyA4, PadDirection::Decrypt);
        s = xor_into(s, p.alice_output, kKeyA4);
        s = xor_into(s, kCopyB, kKeyB4);
    }
    if (p.c1_bits) {
        s = otp(s, p.bob_output, kKeyB3, PadDirection::Decrypt);
        s = xor_into(s, kCopyA, kKeyA3);
        s = xor_into(s, p.bob_output, kKeyB3);
    }
    std::vector<std::pair<std::string, std::string>> alice_front, bob_front;
    if (p.c1_bits) alice_front.push_back({kCopyA, kCopyA});
    if (p.c2_bits) alice_front.push_back({p.alice_output, "A1"});
    if (p.c1_bits) alice_front.push_back({kKeyA3, kKeyA3});
    if (p.c2_bits) alice_front.push_back({kKeyA4, kKeyA4});
    if (p.c2_bits) bob_front.push_back({kCopyB, kCopyB});
    if (p.c1_bits) bob_front.push_back({p.bob_output, "B1"});
    if (p.c1_bits) bob_front.push_back({kKeyB3, kKeyB3});
    if (p.c2_bits) bob_front.push_back({kKeyB4, kKeyB4});
    return relabel(s, alice_front, bob_front);
}

OutputFamily collect_outputs(const MessageProtocol &p, int jobs) {
    p.validate();
    uint64_t pairs = uint64_t{1} << (p.c1_bits + p.c2_bits);
    std::vector<std::optional<QuantumState>> direct(pairs), coherent(pairs);
    parallel_for(pairs, jobs, [&](size_t i) {
        uint64_t a = i >> p.c2_bits;
        uint64_t b = i & ((uint64_t{1} << p.c2_bits) - 1);
        direct[i] = run_protocol(p, a, b);
        coherent[i] = p_prime_state(p, a, b);
    });
    OutputFamily f;
    f.c1_bits = p.c1_bits;
    f.c2_bits = p.c2_bits;
    for (uint64_t i = 0; i < pairs; i++) {
        f.direct.push_back(std::move(*direct[i]));
        f.coherent.push_back(std::move(*coherent[i]));
    }
    return f;
}

size_t GammaDecomposition::prob_index(uint64_t a, uint64_t b, uint64_t a2, uint64_t b2) const {
    uint64_t n1 = uint64_t{1} << c1_bits, n2 = uint64_t{1} << c2_bits;
    require(a < n1 && a2 < n1 && b < n2 && b2 < n2, "message out of range");
    return static_cast<size_t>(((a * n2 + b) * n1 + a2) * n2 + b2);
}

const Branch &GammaDecomposition::gamma(uint64_t da, uint64_t db) const {
    auto it = gamma_states.find({da, db});
    require(it != gamma_states.end(), "no Gamma state for the requested difference");
    return it->second;
}

QuantumState GammaDecomposition::gamma00() const {
    return gamma(0, 0).normalized();
}

std::map<std::pair<uint64_t, uint64_t>, Branch> coherent_branches(
    const QuantumState &coherent, uint64_t a, uint64_t b, int c1_bits, int c2_bits) {
    std::map<std::pair<uint64_t, uint64_t>, Branch> out;
    for (uint64_t a2 = 0; a2 < (uint64_t{1} << c1_bits); a2++) {
        for (uint64_t b2 = 0; b2 < (uint64_t{1} << c2_bits); b2++) {
            std::map<std::string, uint64_t> fixed;
            if (c1_bits) {
                fixed[kCopyA] = a;
                fixed["B1"] = a2;
            }
            if (c2_bits) {
                fixed[kCopyB] = b;
                fixed["A1"] = b2;
            }
            out.emplace(std::make_pair(a2, b2), slice(coherent, fixed));
        }
    }
    return out;
}

GammaDecomposition extract_gamma(const MessageProtocol &p, const OutputFamily &family) {
    uint64_t n1 = uint64_t{1} << p.c1_bits, n2 = uint64_t{1} << p.c2_bits;
    require(family.c1_bits == p.c1_bits && family.c2_bits == p.c2_bits, "output family widths do not match");
    require(family.direct.size() == n1 * n2 && family.coherent.size() == n1 * n2, "output family is incomplete");
    for (size_t i = 1; i < family.direct.size(); i++) {
        require(family.direct[i].layout() == family.direct[0].layout(), "inconsistent layouts among outputs");
        require(family.coherent[i].layout() == family.coherent[0].layout(), "inconsistent layouts among outputs");
    }
    GammaDecomposition g;
    g.c1_bits = p.c1_bits;
    g.c2_bits = p.c2_bits;
    g.prob.assign(n1 * n2 * n1 * n2, 0.0);
    for (uint64_t a = 0; a < n1; a++) {
        for (uint64_t b = 0; b < n2; b++) {
            const auto &direct = family.direct[pair_index(a, b, p.c2_bits)];
            double err = 0;
            for (uint64_t a2 = 0; a2 < n1; a2++) {
                for (uint64_t b2 = 0; b2 < n2; b2++) {
                    std::map<std::string, uint64_t> fixed;
                    if (p.c2_bits) fixed["A1"] = b2;
                    if (p.c1_bits) fixed["B1"] = a2;
                    double pr = slice(direct, fixed).weight();
                    g.prob[g.prob_index(a, b, a2, b2)] = pr;
                    err += 0.5 * std::abs(pr - ((a == a2 && b == b2) ? 1.0 : 0.0));
                }
            }
            g.epsilon_measured = std::max(g.epsilon_measured, err);
        }
    }
    g.gamma_states = coherent_branches(family.coherent[0], 0, 0, p.c1_bits, p.c2_bits);
    for (uint64_t a = 0; a < n1; a++) {
        for (uint64_t b = 0; b < n2; b++) {
            auto branches = coherent_branches(family.coherent[pair_index(a, b, p.c2_bits)], a, b, p.c1_bits, p.c2_bits);
            for (const auto &[key, br] : branches) {
                const auto &ref = g.gamma(key.first ^ a, key.second ^ b);
                g.difference_law_deviation =
                    std::max(g.difference_law_deviation, (br.amplitudes() - ref.amplitudes()).norm());
                double wa = br.weight(), wb = ref.weight();
                if (wa > 0 && wb > 0) {
                    double f = std::norm(br.amplitudes().dot(ref.amplitudes())) / (wa * wb);
                    g.difference_law_fidelity = std::min(g.difference_law_fidelity, f);
                } else if (std::abs(wa - wb) > 1e-12) {
                    g.difference_law_fidelity = 0;
                }
            }
        }
    }
    g.epsilon_bar = 1 - g.gamma(0, 0).weight();
    return g;
}

double decoupling_error(const OutputFamily &family, const GammaDecomposition &gamma) {
    Amplitudes g00 = gamma.gamma00().amplitudes();
    std::vector<Amplitudes> ideal{g00};
    double worst = 0;
    uint64_t n1 = uint64_t{1} << family.c1_bits, n2 = uint64_t{1} << family.c2_bits;
    for (uint64_t a = 0; a < n1; a++) {
        for (uint64_t b = 0; b < n2; b++) {
            auto branches = coherent_branches(
                family.coherent[pair_index(a, b, family.c2_bits)], a, b, family.c1_bits, family.c2_bits);
            std::vector<Amplitudes> actual;
            for (const auto &[key, br] : branches) {
                if (br.weight() > 0) {
                    actual.push_back(br.amplitudes());
                }
            }
            worst = std::max(worst, mixture_trace_distance(actual, ideal));
        }
    }
    return std::clamp(worst, 0.0, 1.0);
}

ProtocolAnalysis analyze(const MessageProtocol &p, int jobs) {
    ProtocolAnalysis out{collect_outputs(p, jobs), {}, 0, {}};
    out.gamma = extract_gamma(p, out.family);
    out.decoupling_error = decoupling_error(out.family, out.gamma);
    auto g00 = out.gamma.gamma00();
    auto alice = g00.layout().names_of(Party::Alice);
    if (alice.empty() || alice.size() == g00.layout().size()) {
        out.gamma00_schmidt = SchmidtResult{{1.0}, 1, 0.0};
    } else {
        out.gamma00_schmidt = schmidt(g00, std::span<const std::string>(alice));
    }
    return out;
}

PPrimeOutput run_p_prime(const MessageProtocol &p, uint64_t a, uint64_t b, int jobs) {
    auto analysis = analyze(p, jobs);
    auto &state = analysis.family.coherent[pair_index(a, b, p.c2_bits)];
    return PPrimeOutput{state, std::move(analysis.gamma), analysis.decoupling_error};
}

namespace {

struct CobitRoles {
    std::string message;
    std::string output;
    int bits;
};

CobitRoles cobit_roles(const MessageProtocol &p, Direction d) {
    CobitRoles r = d == Direction::Forward ? CobitRoles{p.alice_message, p.bob_output, p.c1_bits}
                                           : CobitRoles{p.bob_message, p.alice_output, p.c2_bits};
    require(r.bits > 0, "direction has zero declared bits");
    return r;
}

double probe_error(const MessageProtocol &p, const CobitRoles &roles, const Matrix &prep, bool with_reference) {
    const std::string ref = "R.ref";
    QuantumState s = prepare_input(p, 0, 0);
    std::vector<std::string> keep;
    if (with_reference) {
        s = with_register(s, {ref, Party::Reference, roles.bits});
        keep.push_back(ref);
    }
    keep.push_back(roles.message);
    keep.push_back(roles.output);
    std::vector<std::string> prep_targets;
    if (with_reference) prep_targets.push_back(ref);
    prep_targets.push_back(roles.message);
    s = apply_local(s, prep, std::span<const std::string>(prep_targets));

    // Ideal map on the kept registers alone.
    RegisterLayout kept = s.layout().subset(keep);
    std::map<std::string, uint64_t> zeros;
    QuantumState ideal = basis_state(kept, zeros);
    ideal = apply_local(ideal, prep, std::span<const std::string>(prep_targets));
    ideal = xor_into(ideal, roles.message, roles.output);

    QuantumState actual = execute(p, s);
    return trace_distance(ideal, partial_trace(actual, keep));
}

}  // namespace

double verify_cobit(const MessageProtocol &p, Direction direction) {
    p.validate();
    auto roles = cobit_roles(p, direction);
    require(roles.bits <= 6, "probe set grows as 3^bits; at most 6 bits supported");
    double worst = 0;
    uint64_t patterns = 1;
    for (int i = 0; i < roles.bits; i++) {
        patterns *= 3;
    }
    const Matrix choices[3] = {gates::identity(1), gates::x(), gates::h()};
    for (uint64_t pat = 0; pat < patterns; pat++) {
        Matrix prep = Matrix::Identity(1, 1);
        uint64_t rest = pat;
        for (int i = 0; i < roles.bits; i++) {
            prep = kron(prep, choices[rest % 3]);
            rest /= 3;
        }
        worst = std::max(worst, probe_error(p, roles, prep, false));
    }
    // Maximally entangled reference: H on R then R -> message.
    Matrix ent = gates::xor_copy(roles.bits) * kron(gates::on_each(gates::h(), roles.bits), gates::identity(roles.bits));
    worst = std::max(worst, probe_error(p, roles, ent, true));
    return worst;
}

double verify_cobit_haar(const MessageProtocol &p, Direction direction, int samples, uint64_t seed) {
    p.validate();
    auto roles = cobit_roles(p, direction);
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal;
    auto dim = Eigen::Index{1} << (2 * roles.bits);
    double worst = 0;
    for (int i = 0; i < samples; i++) {
        Matrix m(dim, dim);
        for (Eigen::Index r = 0; r < dim; r++) {
            for (Eigen::Index c = 0; c < dim; c++) {
                m(r, c) = cplx(normal(rng), normal(rng));
            }
        }
        // Q of a Gaussian matrix; its first column is a Haar-random probe.
        Eigen::HouseholderQR<Matrix> qr(m);
        Matrix q = qr.householderQ();
        worst = std::max(worst, probe_error(p, roles, q, true));
    }
    return worst;
}

namespace protocols {

namespace {

LocalOp op(const std::string &name, const RegisterLayout &layout, std::vector<std::string> targets, double theta = 0) {
    std::vector<int> widths;
    for (const auto &t : targets) {
        widths.push_back(layout.at(t).width);
    }
    return LocalOp{name, gates::named(name, widths, theta), std::move(targets), theta};
}

}  // namespace

MessageProtocol crossing(double flip_probability) {
    require(flip_probability >= 0 && flip_probability <= 1, "flip probability must lie in [0, 1]");
    MessageProtocol p;
    p.name = flip_probability > 0 ? "crossing-noisy" : "crossing";
    p.gate = builtin_gate("crossing");
    p.layout = RegisterLayout({{"Am", Party::Alice, 1},
                               {"Ao", Party::Alice, 1},
                               {"Bm", Party::Bob, 1},
                               {"Bo", Party::Bob, 1}});
    p.rounds.resize(2);
    if (flip_probability > 0) {
        double theta = std::asin(std::sqrt(flip_probability));
        p.rounds[0].alice.push_back(op("ry", p.layout, {"Am"}, 2 * theta));
    }
    p.uses.push_back({{"Am", "Ao"}, {"Bm", "Bo"}});
    p.c1_bits = p.c2_bits = 1;
    p.alice_message = "Am";
    p.alice_output = "Ao";
    p.bob_message = "Bm";
    p.bob_output = "Bo";
    p.declared_epsilon = flip_probability;
    return p;
}

MessageProtocol cnot(bool measured) {
    MessageProtocol p;
    p.name = measured ? "cnot-measured" : "cnot";
    p.gate = builtin_gate("cnot");
    std::vector<Register> regs{{"Am", Party::Alice, 1}, {"Bo", Party::Bob, 1}};
    if (measured) {
        regs.push_back({"Env", Party::Environment, 1});
    }
    p.layout = RegisterLayout(std::move(regs));
    p.rounds.resize(2);
    if (measured) {
        p.rounds[0].alice.push_back(op("copy", p.layout, {"Am", "Env"}));
    }
    p.uses.push_back({{"Am"}, {"Bo"}});
    p.c1_bits = 1;
    p.alice_message = "Am";
    p.bob_output = "Bo";
    return p;
}

MessageProtocol identity(int bits) {
    require(bits >= 1, "identity protocol needs at least one bit");
    MessageProtocol p;
    p.name = "identity";
    p.gate = builtin_gate("identity");
    p.layout = RegisterLayout({{"Am", Party::Alice, bits}, {"Bo", Party::Bob, bits}});
    p.rounds.resize(1);
    p.c1_bits = bits;
    p.alice_message = "Am";
    p.bob_output = "Bo";
    return p;
}

MessageProtocol crossing_with_epr() {
    MessageProtocol p = crossing(0);
    p.name = "crossing-epr";
    p.e_in_ebits = 1;
    return p;
}

MessageProtocol swap_entangler() {
    MessageProtocol p;
    p.name = "swap-entangler";
    p.gate = make_gate("swap2", 2, 2, gates::swap_registers(2));
    p.layout = RegisterLayout({{"Am", Party::Alice, 1},
                               {"As", Party::Alice, 1},
                               {"Ae", Party::Alice, 1},
                               {"Ak", Party::Alice, 1},
                               {"Bo", Party::Bob, 1},
                               {"Bk", Party::Bob, 1}});
    p.rounds.resize(2);
    p.rounds[0].alice.push_back(op("copy", p.layout, {"Am", "As"}));
    p.rounds[0].alice.push_back(op("h", p.layout, {"Ae"}));
    p.rounds[0].alice.push_back(op("cnot", p.layout, {"Ae", "Ak"}));
    p.uses.push_back({{"As", "Ak"}, {"Bo", "Bk"}});
    p.c1_bits = 1;
    p.alice_message = "Am";
    p.bob_output = "Bo";
    return p;
}

MessageProtocol empty() {
    MessageProtocol p;
    p.name = "empty";
    p.gate = builtin_gate("identity");
    p.layout = RegisterLayout({{"Aj", Party::Alice, 1}, {"Bj", Party::Bob, 1}});
    p.rounds.resize(2);
    p.uses.push_back({{"Aj"}, {"Bj"}});
    return p;
}

}  // namespace protocols

}  // namespace cobit
