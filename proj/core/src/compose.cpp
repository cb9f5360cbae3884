#include "qsim/compose.hpp"

#include <stdexcept>
#include <string>

namespace qsim {

CompiledCircuit::CompiledCircuit(const Circuit& circuit) : num_qubits_(circuit.num_qubits) {
    circuit.validate();
    reversed_steps_.reserve(circuit.steps.size());
    for (auto it = circuit.steps.rbegin(); it != circuit.steps.rend(); ++it) {
        reversed_steps_.emplace_back(*it);
        if (reversed_steps_.back().has_phase()) has_phase_steps_ = true;
    }
}

SourceAmp map_output_address(const Circuit& circuit, addr_t i) {
    if (i >= circuit.dim()) throw std::out_of_range("output address out of range");
    return CompiledCircuit(circuit).map_output_address(i);
}

SparseUnitary compose_explicit(const Circuit& circuit, int max_qubits) {
    if (circuit.num_qubits > max_qubits)
        throw std::invalid_argument("refusing to materialize a 2^" +
                                    std::to_string(circuit.num_qubits) + " row matrix (cap " +
                                    std::to_string(max_qubits) +
                                    "); use the lazy evaluation path");
    const CompiledCircuit cc(circuit);
    const addr_t dim = cc.dim();
    SparseUnitary u;
    u.dim = dim;
    u.col.resize(dim);
    u.val.resize(dim);
    for (addr_t i = 0; i < dim; ++i) {
        const SourceAmp r = cc.map_output_address(i);
        u.col[i] = r.address;
        u.val[i] = r.phase;
    }
    return u;
}

}  // namespace qsim
