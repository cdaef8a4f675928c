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

#include "cobit/qstate.h"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <numeric>
#include <set>

namespace cobit {

namespace {

uint64_t mask_of(int width) {
    return width >= 64 ? ~uint64_t{0} : (uint64_t{1} << width) - 1;
}

// Matrix view of the amplitudes after moving `left` to the front:
// rows index the complement, columns index `left`.
Matrix split_matrix(const Amplitudes &amps, const RegisterLayout &layout, std::span<const std::string> left) {
    std::vector<std::string> order(left.begin(), left.end());
    std::set<std::string> seen(order.begin(), order.end());
    if (seen.size() != order.size()) {
        throw ContractError("duplicate register in cut");
    }
    for (const auto &r : layout.registers()) {
        if (!seen.count(r.name)) {
            order.push_back(r.name);
        }
    }
    Amplitudes permuted = permute_amplitudes(amps, layout, order);
    auto left_dim = Eigen::Index{1} << layout.width_of(left);
    auto rest_dim = static_cast<Eigen::Index>(layout.dimension()) / left_dim;
    return Eigen::Map<const Matrix>(permuted.data(), rest_dim, left_dim);
}

}  // namespace

std::string_view party_name(Party p) {
    switch (p) {
        case Party::Alice:
            return "alice";
        case Party::Bob:
            return "bob";
        case Party::Environment:
            return "environment";
        case Party::Reference:
            return "reference";
    }
    return "?";
}

Party parse_party(std::string_view s) {
    if (s == "alice") return Party::Alice;
    if (s == "bob") return Party::Bob;
    if (s == "environment") return Party::Environment;
    if (s == "reference") return Party::Reference;
    throw ContractError("unknown party '" + std::string(s) + "'");
}

Tolerances &tolerances() {
    static Tolerances t;
    return t;
}

RegisterLayout::RegisterLayout(std::vector<Register> registers) : registers_(std::move(registers)) {
    std::set<std::string> names;
    for (const auto &r : registers_) {
        if (r.width < 1) {
            throw ContractError("register '" + r.name + "' has width < 1");
        }
        if (!names.insert(r.name).second) {
            throw ContractError("duplicate register name '" + r.name + "'");
        }
        total_width_ += r.width;
    }
    if (total_width_ > 62) {
        throw WidthOverflow("layout width " + std::to_string(total_width_) + " cannot be indexed");
    }
    int shift = total_width_;
    for (const auto &r : registers_) {
        shift -= r.width;
        shifts_.push_back(shift);
    }
}

bool RegisterLayout::contains(std::string_view name) const {
    return std::any_of(registers_.begin(), registers_.end(), [&](const Register &r) {
        return r.name == name;
    });
}

size_t RegisterLayout::index_of(std::string_view name) const {
    for (size_t i = 0; i < registers_.size(); i++) {
        if (registers_[i].name == name) {
            return i;
        }
    }
    throw ContractError("unknown register '" + std::string(name) + "'");
}

const Register &RegisterLayout::at(std::string_view name) const {
    return registers_[index_of(name)];
}

int RegisterLayout::shift_of(std::string_view name) const {
    return shifts_[index_of(name)];
}

uint64_t RegisterLayout::value_of(uint64_t index, std::string_view name) const {
    size_t i = index_of(name);
    return (index >> shifts_[i]) & mask_of(registers_[i].width);
}

std::vector<std::string> RegisterLayout::names() const {
    std::vector<std::string> out;
    for (const auto &r : registers_) {
        out.push_back(r.name);
    }
    return out;
}

std::vector<std::string> RegisterLayout::names_of(Party p) const {
    std::vector<std::string> out;
    for (const auto &r : registers_) {
        if (r.party == p) {
            out.push_back(r.name);
        }
    }
    return out;
}

int RegisterLayout::width_of(std::span<const std::string> names) const {
    int w = 0;
    for (const auto &n : names) {
        w += at(n).width;
    }
    return w;
}

RegisterLayout RegisterLayout::appended(Register r) const {
    auto regs = registers_;
    regs.push_back(std::move(r));
    return RegisterLayout(std::move(regs));
}

RegisterLayout RegisterLayout::concatenated(const RegisterLayout &other) const {
    auto regs = registers_;
    regs.insert(regs.end(), other.registers_.begin(), other.registers_.end());
    return RegisterLayout(std::move(regs));
}

RegisterLayout RegisterLayout::subset(std::span<const std::string> names) const {
    std::vector<Register> regs;
    for (const auto &n : names) {
        regs.push_back(at(n));
    }
    return RegisterLayout(std::move(regs));
}

RegisterLayout RegisterLayout::renamed(const std::map<std::string, std::string> &renames) const {
    auto regs = registers_;
    for (auto &r : regs) {
        auto it = renames.find(r.name);
        if (it != renames.end()) {
            r.name = it->second;
        }
    }
    return RegisterLayout(std::move(regs));
}

QuantumState::QuantumState(RegisterLayout layout, Amplitudes amplitudes)
    : layout_(std::move(layout)), amplitudes_(std::move(amplitudes)) {
    if (static_cast<uint64_t>(amplitudes_.size()) != layout_.dimension()) {
        throw ContractError("amplitude count does not match layout dimension");
    }
    if (std::abs(amplitudes_.norm() - 1.0) > tolerances().norm) {
        throw ContractError("state is not normalized (norm " + std::to_string(amplitudes_.norm()) + ")");
    }
}

Branch::Branch(RegisterLayout layout, Amplitudes amplitudes)
    : layout_(std::move(layout)), amplitudes_(std::move(amplitudes)) {
    if (static_cast<uint64_t>(amplitudes_.size()) != layout_.dimension()) {
        throw ContractError("amplitude count does not match layout dimension");
    }
    if (weight() > 1 + tolerances().norm) {
        throw ContractError("branch weight exceeds one");
    }
}

QuantumState Branch::normalized() const {
    double n = amplitudes_.norm();
    if (n == 0) {
        throw ContractError("cannot normalize a zero-weight branch");
    }
    return QuantumState(layout_, amplitudes_ / n);
}

DensityOperator::DensityOperator(RegisterLayout layout, Matrix matrix)
    : layout_(std::move(layout)), matrix_(std::move(matrix)) {
    auto d = static_cast<Eigen::Index>(layout_.dimension());
    if (matrix_.rows() != d || matrix_.cols() != d) {
        throw ContractError("density matrix dimension does not match layout");
    }
    if (std::abs(matrix_.trace().real() - 1.0) > tolerances().norm * 10) {
        throw ContractError("density matrix trace differs from one");
    }
    if ((matrix_ - matrix_.adjoint()).cwiseAbs().maxCoeff() > 1e-9) {
        throw ContractError("density matrix is not Hermitian");
    }
    if (eigenvalues().minCoeff() < -tolerances().psd) {
        throw ContractError("density matrix is not positive semidefinite");
    }
}

Eigen::VectorXd DensityOperator::eigenvalues() const {
    Eigen::SelfAdjointEigenSolver<Matrix> es(matrix_, Eigen::EigenvaluesOnly);
    return es.eigenvalues();
}

QuantumState basis_state(const RegisterLayout &layout, const std::map<std::string, std::string> &assignment) {
    std::map<std::string, uint64_t> values;
    for (const auto &[name, bits] : assignment) {
        const auto &r = layout.at(name);
        if (static_cast<int>(bits.size()) != r.width) {
            throw ContractError(
                "width mismatch for register '" + name + "': expected " + std::to_string(r.width) + " bits, got " +
                std::to_string(bits.size()));
        }
        uint64_t v = 0;
        for (char c : bits) {
            if (c != '0' && c != '1') {
                throw ContractError("bitstring for '" + name + "' contains '" + std::string(1, c) + "'");
            }
            v = (v << 1) | static_cast<uint64_t>(c - '0');
        }
        values[name] = v;
    }
    for (const auto &r : layout.registers()) {
        if (!assignment.count(r.name)) {
            throw ContractError("register '" + r.name + "' was not assigned");
        }
    }
    return basis_state(layout, values);
}

QuantumState basis_state(const RegisterLayout &layout, const std::map<std::string, uint64_t> &values) {
    uint64_t index = 0;
    for (const auto &[name, v] : values) {
        const auto &r = layout.at(name);
        if (v > mask_of(r.width)) {
            throw ContractError("value does not fit register '" + name + "'");
        }
        index |= v << layout.shift_of(name);
    }
    if (layout.total_width() > kMaxWidth) {
        throw WidthOverflow(
            "state needs " + std::to_string(layout.total_width()) + " qubits; the dense cap is " +
            std::to_string(kMaxWidth));
    }
    Amplitudes amps = Amplitudes::Zero(static_cast<Eigen::Index>(layout.dimension()));
    amps[static_cast<Eigen::Index>(index)] = 1.0;
    return QuantumState(layout, std::move(amps));
}

Matrix kron(const Matrix &a, const Matrix &b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); i++) {
        for (Eigen::Index j = 0; j < a.cols(); j++) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

bool is_unitary(const Matrix &u, double tol) {
    if (u.rows() != u.cols()) {
        return false;
    }
    Matrix d = u.adjoint() * u - Matrix::Identity(u.rows(), u.cols());
    return d.cwiseAbs().maxCoeff() <= tol;
}

QuantumState tensor(const QuantumState &a, const QuantumState &b) {
    auto layout = a.layout().concatenated(b.layout());
    if (layout.total_width() > kMaxWidth) {
        throw WidthOverflow("tensor product exceeds the dense width cap");
    }
    Amplitudes out(static_cast<Eigen::Index>(layout.dimension()));
    auto nb = b.amplitudes().size();
    for (Eigen::Index i = 0; i < a.amplitudes().size(); i++) {
        out.segment(i * nb, nb) = a.amplitudes()[i] * b.amplitudes();
    }
    return QuantumState(std::move(layout), std::move(out));
}

QuantumState with_register(const QuantumState &s, Register r) {
    RegisterLayout fresh({r});
    return tensor(s, basis_state(fresh, std::map<std::string, uint64_t>{{r.name, 0}}));
}

namespace {

struct TargetBits {
    std::vector<int> positions;  // bit positions in the full index, most significant target bit first
    uint64_t full_mask = 0;
};

TargetBits target_bits(const RegisterLayout &layout, std::span<const std::string> targets) {
    TargetBits tb;
    std::set<std::string> seen;
    for (const auto &t : targets) {
        if (!seen.insert(t).second) {
            throw ContractError("overlapping target register '" + t + "'");
        }
        const auto &r = layout.at(t);
        int shift = layout.shift_of(t);
        for (int b = r.width - 1; b >= 0; b--) {
            tb.positions.push_back(shift + b);
            tb.full_mask |= uint64_t{1} << (shift + b);
        }
    }
    return tb;
}

// Scatters a local value (most significant target bit first) into the full index.
uint64_t scatter(const TargetBits &tb, uint64_t local) {
    uint64_t out = 0;
    int w = static_cast<int>(tb.positions.size());
    for (int i = 0; i < w; i++) {
        if ((local >> (w - 1 - i)) & 1) {
            out |= uint64_t{1} << tb.positions[i];
        }
    }
    return out;
}

uint64_t gather(const TargetBits &tb, uint64_t full) {
    uint64_t out = 0;
    for (int p : tb.positions) {
        out = (out << 1) | ((full >> p) & 1);
    }
    return out;
}

}  // namespace

QuantumState apply_local(const QuantumState &s, const Matrix &u, std::span<const std::string> targets) {
    const auto &layout = s.layout();
    TargetBits tb = target_bits(layout, targets);
    auto local_dim = Eigen::Index{1} << tb.positions.size();
    if (u.rows() != local_dim || u.cols() != local_dim) {
        throw ContractError(
            "unitary dimension " + std::to_string(u.rows()) + "x" + std::to_string(u.cols()) +
            " does not match target dimension " + std::to_string(local_dim));
    }
    if (!is_unitary(u, tolerances().unitarity)) {
        throw ContractError("matrix is not unitary");
    }
    std::vector<uint64_t> offsets(static_cast<size_t>(local_dim));
    for (Eigen::Index v = 0; v < local_dim; v++) {
        offsets[static_cast<size_t>(v)] = scatter(tb, static_cast<uint64_t>(v));
    }
    const Amplitudes &in = s.amplitudes();
    Amplitudes out(in.size());
    Amplitudes local(local_dim);
    for (uint64_t base = 0; base < layout.dimension(); base++) {
        if (base & tb.full_mask) {
            continue;
        }
        for (Eigen::Index v = 0; v < local_dim; v++) {
            local[v] = in[static_cast<Eigen::Index>(base | offsets[static_cast<size_t>(v)])];
        }
        Amplitudes mapped = u * local;
        for (Eigen::Index v = 0; v < local_dim; v++) {
            out[static_cast<Eigen::Index>(base | offsets[static_cast<size_t>(v)])] = mapped[v];
        }
    }
    return QuantumState(layout, std::move(out));
}

QuantumState apply_local(const QuantumState &s, const Matrix &u, std::initializer_list<std::string> targets) {
    std::vector<std::string> t(targets);
    return apply_local(s, u, std::span<const std::string>(t));
}

QuantumState apply_permutation(
    const QuantumState &s, std::span<const std::string> targets, const std::function<uint64_t(uint64_t)> &f) {
    const auto &layout = s.layout();
    TargetBits tb = target_bits(layout, targets);
    uint64_t local_dim = uint64_t{1} << tb.positions.size();
    std::vector<uint64_t> image(local_dim);
    std::vector<bool> hit(local_dim, false);
    for (uint64_t v = 0; v < local_dim; v++) {
        uint64_t w = f(v);
        if (w >= local_dim || hit[w]) {
            throw ContractError("map is not a permutation of the target values");
        }
        hit[w] = true;
        image[v] = scatter(tb, w);
    }
    const Amplitudes &in = s.amplitudes();
    Amplitudes out = Amplitudes::Zero(in.size());
    for (uint64_t i = 0; i < layout.dimension(); i++) {
        uint64_t v = gather(tb, i);
        uint64_t j = (i & ~tb.full_mask) | image[v];
        out[static_cast<Eigen::Index>(j)] = in[static_cast<Eigen::Index>(i)];
    }
    return QuantumState(layout, std::move(out));
}

QuantumState xor_into(const QuantumState &s, std::string_view src, std::string_view dst) {
    const auto &layout = s.layout();
    int w = layout.at(src).width;
    if (layout.at(dst).width != w) {
        throw ContractError("width mismatch between '" + std::string(src) + "' and '" + std::string(dst) + "'");
    }
    std::vector<std::string> targets{std::string(src), std::string(dst)};
    uint64_t m = mask_of(w);
    return apply_permutation(s, targets, [&](uint64_t v) {
        uint64_t hi = v >> w;
        return (hi << w) | ((v & m) ^ hi);
    });
}

Amplitudes permute_amplitudes(
    const Amplitudes &amps, const RegisterLayout &layout, std::span<const std::string> new_order) {
    if (new_order.size() != layout.size()) {
        throw ContractError("new order is not a permutation of the layout registers");
    }
    std::set<std::string> seen;
    for (const auto &n : new_order) {
        layout.at(n);
        if (!seen.insert(n).second) {
            throw ContractError("new order is not a permutation of the layout registers");
        }
    }
    RegisterLayout target = layout.subset(new_order);
    struct Move {
        int from_shift;
        int to_shift;
        uint64_t mask;
    };
    std::vector<Move> moves;
    for (const auto &r : layout.registers()) {
        moves.push_back({layout.shift_of(r.name), target.shift_of(r.name), mask_of(r.width)});
    }
    Amplitudes out(amps.size());
    for (uint64_t i = 0; i < layout.dimension(); i++) {
        uint64_t j = 0;
        for (const auto &m : moves) {
            j |= ((i >> m.from_shift) & m.mask) << m.to_shift;
        }
        out[static_cast<Eigen::Index>(j)] = amps[static_cast<Eigen::Index>(i)];
    }
    return out;
}

QuantumState permute_registers(const QuantumState &s, std::span<const std::string> new_order) {
    auto amps = permute_amplitudes(s.amplitudes(), s.layout(), new_order);
    return QuantumState(s.layout().subset(new_order), std::move(amps));
}

Branch slice(const QuantumState &s, const std::map<std::string, uint64_t> &fixed) {
    const auto &layout = s.layout();
    std::vector<std::string> rest;
    uint64_t fixed_mask = 0;
    uint64_t fixed_bits = 0;
    for (const auto &[name, v] : fixed) {
        const auto &r = layout.at(name);
        if (v > mask_of(r.width)) {
            throw ContractError("value does not fit register '" + name + "'");
        }
        fixed_mask |= mask_of(r.width) << layout.shift_of(name);
        fixed_bits |= v << layout.shift_of(name);
    }
    for (const auto &r : layout.registers()) {
        if (!fixed.count(r.name)) {
            rest.push_back(r.name);
        }
    }
    RegisterLayout rest_layout = layout.subset(rest);
    Amplitudes out = Amplitudes::Zero(static_cast<Eigen::Index>(rest_layout.dimension()));
    TargetBits tb = target_bits(layout, rest);
    for (uint64_t i = 0; i < layout.dimension(); i++) {
        if ((i & fixed_mask) != fixed_bits) {
            continue;
        }
        out[static_cast<Eigen::Index>(gather(tb, i))] = s.amplitudes()[static_cast<Eigen::Index>(i)];
    }
    return Branch(std::move(rest_layout), std::move(out));
}

DensityOperator partial_trace(const QuantumState &s, std::span<const std::string> keep) {
    if (keep.empty()) {
        throw ContractError("partial trace needs at least one kept register");
    }
    Matrix m = split_matrix(s.amplitudes(), s.layout(), keep);
    Matrix rho = m.transpose() * m.conjugate();
    return DensityOperator(s.layout().subset(keep), std::move(rho));
}

SchmidtResult schmidt(const Amplitudes &amps, const RegisterLayout &layout, std::span<const std::string> left) {
    if (left.empty() || left.size() >= layout.size()) {
        throw ContractError("Schmidt cut must leave registers on both sides");
    }
    Matrix m = split_matrix(amps, layout, left);
    Eigen::BDCSVD<Matrix> svd(m);
    SchmidtResult r;
    double total = amps.squaredNorm();
    for (Eigen::Index i = 0; i < svd.singularValues().size(); i++) {
        double c = svd.singularValues()[i] / std::sqrt(total);
        r.coefficients.push_back(c);
        if (c > tolerances().rank) {
            r.rank++;
        }
        double p = c * c;
        if (p > 0) {
            r.entropy -= p * std::log2(p);
        }
    }
    return r;
}

SchmidtResult schmidt(const QuantumState &s, std::span<const std::string> left) {
    return schmidt(s.amplitudes(), s.layout(), left);
}

SchmidtResult schmidt(const QuantumState &s, Party left) {
    auto names = s.layout().names_of(left);
    return schmidt(s, std::span<const std::string>(names));
}

double fidelity(const QuantumState &a, const QuantumState &b) {
    if (!(a.layout() == b.layout())) {
        throw ContractError("layout mismatch");
    }
    return std::norm(a.amplitudes().dot(b.amplitudes()));
}

double trace_distance(const QuantumState &a, const QuantumState &b) {
    double f = std::min(1.0, fidelity(a, b));
    return std::sqrt(std::max(0.0, 1.0 - f));
}

namespace {

double hermitian_trace_norm_half(const Matrix &d) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(d, Eigen::EigenvaluesOnly);
    return std::min(1.0, 0.5 * es.eigenvalues().cwiseAbs().sum());
}

}  // namespace

double trace_distance(const DensityOperator &a, const DensityOperator &b) {
    if (!(a.layout() == b.layout())) {
        throw ContractError("layout mismatch");
    }
    return hermitian_trace_norm_half(a.matrix() - b.matrix());
}

double trace_distance(const QuantumState &a, const DensityOperator &b) {
    if (!(a.layout() == b.layout())) {
        throw ContractError("layout mismatch");
    }
    Matrix pa = a.amplitudes() * a.amplitudes().adjoint();
    return hermitian_trace_norm_half(pa - b.matrix());
}

double mixture_trace_distance(std::span<const Amplitudes> a, std::span<const Amplitudes> b) {
    if (a.empty() && b.empty()) {
        return 0;
    }
    auto dim = (a.empty() ? b : a)[0].size();
    auto count = static_cast<Eigen::Index>(a.size() + b.size());
    Matrix stacked(dim, count);
    Eigen::Index c = 0;
    for (const auto &v : a) {
        stacked.col(c++) = v;
    }
    for (const auto &v : b) {
        stacked.col(c++) = v;
    }
    // Orthonormal basis of the span, then the difference in that basis.
    Eigen::ColPivHouseholderQR<Matrix> qr(stacked);
    qr.setThreshold(1e-14);
    auto rank = qr.rank();
    if (rank == 0) {
        return 0;
    }
    Matrix q = qr.householderQ() * Matrix::Identity(dim, rank);
    Matrix coeffs = q.adjoint() * stacked;
    auto na = static_cast<Eigen::Index>(a.size());
    Matrix left = coeffs.leftCols(na);
    Matrix right = coeffs.rightCols(count - na);
    Matrix d = left * left.adjoint() - right * right.adjoint();
    Eigen::SelfAdjointEigenSolver<Matrix> es(d, Eigen::EigenvaluesOnly);
    return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

double shannon_entropy(std::span<const double> probs) {
    double h = 0;
    for (double p : probs) {
        if (p > 0) {
            h -= p * std::log2(p);
        }
    }
    return h;
}

uint64_t state_digest(const Amplitudes &amps) {
    uint64_t h = 1469598103934665603ull;
    const auto *bytes = reinterpret_cast<const unsigned char *>(amps.data());
    size_t n = static_cast<size_t>(amps.size()) * sizeof(cplx);
    for (size_t i = 0; i < n; i++) {
        h ^= bytes[i];
        h *= 1099511628211ull;
    }
    return h;
}

}  // namespace cobit
