#include "qsim/evaluate.hpp"

#include <stdexcept>

#include "qsim/kron.hpp"

namespace qsim {

StateChunk evaluate_chunk(const CompiledCircuit& circuit, const InputState& input,
                          addr_t start, addr_t len) {
    if (input.num_qubits() != circuit.num_qubits())
        throw std::invalid_argument("input state qubit count does not match circuit");
    if (len < 1) throw std::invalid_argument("chunk length must be at least 1");
    const addr_t dim = circuit.dim();
    if (start >= dim || len > dim - start)
        throw std::out_of_range("chunk range exceeds state vector dimension");

    StateChunk chunk;
    chunk.start = start;
    chunk.amps.resize(len);
    for (addr_t k = 0; k < len; ++k) {
        const SourceAmp src = circuit.map_output_address(start + k);
        chunk.amps[k] = src.phase * kron_element(input, src.address);
    }
    return chunk;
}

StateChunk evaluate_chunk(const Circuit& circuit, const InputState& input,
                          addr_t start, addr_t len) {
    return evaluate_chunk(CompiledCircuit(circuit), input, start, len);
}

}  // namespace qsim
