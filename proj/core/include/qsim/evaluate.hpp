#pragma once

#include "qsim/compose.hpp"
#include "qsim/types.hpp"

namespace qsim {

// Computes output amplitudes [start, start + len) in index order:
// amps[k] = phase * kron_element(input, j) with (j, phase) the backward walk
// of address start + k. Peak additional memory is O(len + M) regardless of
// 2^M, which is what makes partial ranges of very large M practical.
StateChunk evaluate_chunk(const CompiledCircuit& circuit, const InputState& input,
                          addr_t start, addr_t len);

StateChunk evaluate_chunk(const Circuit& circuit, const InputState& input,
                          addr_t start, addr_t len);

}  // namespace qsim
