#include "qsim/step.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace qsim {

CompiledStep::CompiledStep(const GateStep& step) : kind(step.kind) {
    for (int c : step.controls) control_mask |= bit_mask(c);
    switch (step.kind) {
        case GateKind::BitFlip:
            target_mask = bit_mask(step.target);
            break;
        case GateKind::ControlledPhase:
            phase = std::polar(1.0, step.theta);
            break;
        case GateKind::Swap:
            mask_a = bit_mask(step.swap_a);
            mask_b = bit_mask(step.swap_b);
            break;
    }
}

SourceAmp apply_step_to_address(const GateStep& step, addr_t i) {
    const CompiledStep cs(step);
    switch (step.kind) {
        case GateKind::BitFlip:
        case GateKind::Swap:
            // Involutions: forward map and inverse map coincide, phase 1.
            return {cs.col(i), complex_t{1.0, 0.0}};
        case GateKind::ControlledPhase:
            return {i, cs.val(i)};
    }
    return {i, complex_t{1.0, 0.0}};
}

SparseUnitary build_step_matrix(const GateStep& step, int num_qubits, int max_qubits) {
    step.validate(num_qubits);
    if (num_qubits > max_qubits)
        throw std::invalid_argument("refusing to materialize a 2^" + std::to_string(num_qubits) +
                                    " row matrix (cap " + std::to_string(max_qubits) +
                                    "); use the lazy evaluation path");
    const addr_t dim = dim_for_qubits(num_qubits);
    const CompiledStep cs(step);
    SparseUnitary u;
    u.dim = dim;
    u.col.resize(dim);
    u.val.resize(dim);
    for (addr_t i = 0; i < dim; ++i) {
        u.col[i] = cs.col(i);
        u.val[i] = cs.val(i);
    }
    return u;
}

}  // namespace qsim
