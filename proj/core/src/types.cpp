#include "qsim/types.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qsim {

double InputState::norm() const {
    double n = 1.0;
    for (const auto& q : qubits) n *= std::sqrt(q.norm2());
    return n;
}

void InputState::validate() const {
    const int m = num_qubits();
    if (m < 1) throw std::invalid_argument("input state needs at least one qubit");
    if (m > kMaxQubits)
        throw std::invalid_argument("qubit count " + std::to_string(m) + " exceeds limit " +
                                    std::to_string(kMaxQubits));
}

GateStep GateStep::bit_flip(int target, std::vector<int> controls) {
    GateStep s;
    s.kind = GateKind::BitFlip;
    s.target = target;
    s.controls = std::move(controls);
    return s;
}

GateStep GateStep::cphase(double theta, std::vector<int> controls) {
    GateStep s;
    s.kind = GateKind::ControlledPhase;
    s.theta = theta;
    s.controls = std::move(controls);
    return s;
}

GateStep GateStep::swap(int a, int b) {
    GateStep s;
    s.kind = GateKind::Swap;
    s.swap_a = a;
    s.swap_b = b;
    return s;
}

namespace {

void check_bit(int bit, int num_qubits, const char* what) {
    if (bit < 1 || bit > num_qubits)
        throw std::invalid_argument(std::string(what) + " bit " + std::to_string(bit) +
                                    " out of range [1, " + std::to_string(num_qubits) + "]");
}

void check_controls(const std::vector<int>& controls, int num_qubits) {
    for (int c : controls) check_bit(c, num_qubits, "control");
    auto sorted = controls;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
        throw std::invalid_argument("duplicate control bit");
}

}  // namespace

void GateStep::validate(int num_qubits) const {
    switch (kind) {
        case GateKind::BitFlip:
            check_bit(target, num_qubits, "target");
            check_controls(controls, num_qubits);
            for (int c : controls)
                if (c == target) throw std::invalid_argument("target bit cannot also be a control");
            break;
        case GateKind::ControlledPhase:
            if (controls.empty())
                throw std::invalid_argument("controlled phase needs at least one control bit");
            check_controls(controls, num_qubits);
            if (!std::isfinite(theta)) throw std::invalid_argument("phase angle must be finite");
            break;
        case GateKind::Swap:
            check_bit(swap_a, num_qubits, "swap");
            check_bit(swap_b, num_qubits, "swap");
            if (swap_a == swap_b) throw std::invalid_argument("swap bits must be distinct");
            break;
    }
}

void Circuit::validate() const {
    if (num_qubits < 1) throw std::invalid_argument("circuit needs at least one qubit");
    if (num_qubits > kMaxQubits)
        throw std::invalid_argument("qubit count " + std::to_string(num_qubits) +
                                    " exceeds limit " + std::to_string(kMaxQubits));
    for (const auto& s : steps) s.validate(num_qubits);
}

SparseUnitary SparseUnitary::identity(addr_t dim) {
    SparseUnitary u;
    u.dim = dim;
    u.col.resize(dim);
    u.val.assign(dim, complex_t{1.0, 0.0});
    for (addr_t i = 0; i < dim; ++i) u.col[i] = i;
    return u;
}

bool SparseUnitary::is_permutation() const {
    if (col.size() != dim || val.size() != dim) return false;
    std::vector<std::uint64_t> seen((dim + 63) / 64, 0);
    for (addr_t i = 0; i < dim; ++i) {
        const addr_t c = col[i];
        if (c >= dim) return false;
        std::uint64_t& word = seen[c >> 6];
        const std::uint64_t bit = std::uint64_t{1} << (c & 63);
        if (word & bit) return false;
        word |= bit;
    }
    return true;
}

}  // namespace qsim
