#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

namespace qsim {

using complex_t = std::complex<double>;

// State-vector index. Bit j (1-based, j=1 the LSB) is address bit a(j) and
// selects the component of qubit j.
using addr_t = std::uint64_t;

inline constexpr int kMaxQubits = 62;

// Default cap on explicit matrix materialization; overridable per call and
// via QSIM_MAX_EXPLICIT_QUBITS in the CLI.
inline constexpr int kDefaultExplicitQubitCap = 26;

inline constexpr addr_t dim_for_qubits(int num_qubits) {
    return addr_t{1} << num_qubits;
}

// 1-based address-bit accessors.
inline constexpr addr_t bit_mask(int bit) { return addr_t{1} << (bit - 1); }
inline constexpr int address_bit(addr_t value, int bit) {
    return static_cast<int>((value >> (bit - 1)) & 1u);
}

// One qubit as a pair of complex amplitudes [q(0) q(1)]. Arbitrary magnitude
// and phase are allowed; normalization is reported, not enforced.
struct QubitPair {
    complex_t amp0{1.0, 0.0};
    complex_t amp1{0.0, 0.0};

    double norm2() const { return std::norm(amp0) + std::norm(amp1); }
    bool is_normalized(double tol = 1e-12) const {
        return std::abs(norm2() - 1.0) <= tol;
    }
};

// The initial M-qubit state, stored as per-qubit pairs. The full 2^M vector
// is never materialized: element i is the product over qubits of the
// component selected by bit j of i (qubit 1 owns the LSB).
struct InputState {
    std::vector<QubitPair> qubits;

    InputState() = default;
    explicit InputState(int num_qubits) : qubits(num_qubits) {}

    int num_qubits() const { return static_cast<int>(qubits.size()); }
    addr_t dim() const { return dim_for_qubits(num_qubits()); }

    // Product of per-qubit 2-norms; equals the 2-norm of the full vector.
    double norm() const;

    // Throws std::invalid_argument unless 1 <= M <= kMaxQubits.
    void validate() const;
};

enum class GateKind { BitFlip, ControlledPhase, Swap };

// One wiring-diagram step. Bit indices are 1-based.
//   BitFlip: toggle `target` when every bit in `controls` is 1
//            (NOT / CNOT / generalized Toffoli as |controls| = 0 / 1 / k).
//   ControlledPhase: multiply by e^{i*theta} when every control bit is 1.
//   Swap: exchange bits swap_a and swap_b.
struct GateStep {
    GateKind kind{GateKind::BitFlip};
    int target{0};
    std::vector<int> controls;
    int swap_a{0};
    int swap_b{0};
    double theta{0.0};

    static GateStep bit_flip(int target, std::vector<int> controls = {});
    static GateStep cphase(double theta, std::vector<int> controls);
    static GateStep swap(int a, int b);

    // Throws std::invalid_argument on out-of-range or clashing bit indices.
    void validate(int num_qubits) const;

    bool operator==(const GateStep&) const = default;
};

struct Circuit {
    int num_qubits{0};
    std::vector<GateStep> steps;

    addr_t dim() const { return dim_for_qubits(num_qubits); }
    void validate() const;

    bool operator==(const Circuit&) const = default;
};

// Explicit phased permutation: row i holds its single nonzero val[i] at
// column col[i], so that output(i) = val(i) * input(col(i)).
struct SparseUnitary {
    addr_t dim{0};
    std::vector<addr_t> col;
    std::vector<complex_t> val;

    static SparseUnitary identity(addr_t dim);

    // True when col visits every index exactly once (exact check).
    bool is_permutation() const;

    bool operator==(const SparseUnitary&) const = default;
};

// Contiguous slice of output amplitudes covering [start, start + size()).
struct StateChunk {
    addr_t start{0};
    std::vector<complex_t> amps;

    addr_t size() const { return amps.size(); }
    addr_t end() const { return start + amps.size(); }
};

// Result of threading one output address backward through a circuit:
// output(i) = phase * input(address).
struct SourceAmp {
    addr_t address{0};
    complex_t phase{1.0, 0.0};
};

}  // namespace qsim
