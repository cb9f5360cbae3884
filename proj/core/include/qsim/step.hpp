#pragma once

#include "qsim/types.hpp"

namespace qsim {

// One gate step with its bit masks precomputed, ready for per-address work.
// col()/val() follow the matrix convention output(i) = val(i) * input(col(i)):
// col is the inverse address map, which for the involutions (BitFlip, Swap)
// coincides with the forward map, and for ControlledPhase is the identity.
struct CompiledStep {
    GateKind kind{GateKind::BitFlip};
    addr_t control_mask{0};  // BitFlip / ControlledPhase
    addr_t target_mask{0};   // BitFlip
    addr_t mask_a{0};        // Swap
    addr_t mask_b{0};        // Swap
    complex_t phase{1.0, 0.0};  // ControlledPhase: e^{i*theta}

    explicit CompiledStep(const GateStep& step);

    addr_t col(addr_t i) const {
        switch (kind) {
            case GateKind::BitFlip:
                return (i & control_mask) == control_mask ? i ^ target_mask : i;
            case GateKind::ControlledPhase:
                return i;
            case GateKind::Swap: {
                const bool a = (i & mask_a) != 0;
                const bool b = (i & mask_b) != 0;
                return a == b ? i : i ^ (mask_a | mask_b);
            }
        }
        return i;
    }

    complex_t val(addr_t i) const {
        if (kind == GateKind::ControlledPhase && (i & control_mask) == control_mask)
            return phase;
        return complex_t{1.0, 0.0};
    }

    bool has_phase() const { return kind == GateKind::ControlledPhase; }
};

// Forward action of one step on a basis address: the gate sends basis state
// |i> to phase * |address>. BitFlip and Swap are self-inverse; the inverse
// of ControlledPhase negates theta.
SourceAmp apply_step_to_address(const GateStep& step, addr_t i);

// Explicit 2^M x 2^M single-step matrix. For BitFlip and Swap the result
// equals its own transpose. Throws when M exceeds max_qubits.
SparseUnitary build_step_matrix(const GateStep& step, int num_qubits,
                                int max_qubits = kDefaultExplicitQubitCap);

}  // namespace qsim
