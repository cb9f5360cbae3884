#pragma once

#include <vector>

#include "qsim/step.hpp"
#include "qsim/types.hpp"

namespace qsim {

// A circuit lowered to mask form for repeated per-address walks. Steps apply
// in file order, so the composed matrix is U_n * ... * U_1 and a row walk
// visits the steps last-to-first.
class CompiledCircuit {
  public:
    explicit CompiledCircuit(const Circuit& circuit);

    int num_qubits() const { return num_qubits_; }
    addr_t dim() const { return dim_for_qubits(num_qubits_); }
    bool has_phase_steps() const { return has_phase_steps_; }

    // Threads output address i backward through every step: returns the
    // source address j and accumulated phase f with output(i) = f * input(j).
    // O(steps) time, O(1) space, nothing materialized.
    SourceAmp map_output_address(addr_t i) const {
        SourceAmp r{i, {1.0, 0.0}};
        for (const CompiledStep& s : reversed_steps_) {
            if (s.has_phase()) r.phase *= s.val(r.address);
            r.address = s.col(r.address);
        }
        return r;
    }

  private:
    int num_qubits_;
    bool has_phase_steps_{false};
    std::vector<CompiledStep> reversed_steps_;  // last step first
};

// One-shot convenience; compile once via CompiledCircuit when walking many
// addresses.
SourceAmp map_output_address(const Circuit& circuit, addr_t i);

// Explicit whole-circuit sparse matrix: row i = map_output_address(i). The
// one-nonzero-per-row class is closed under composition, so the result is
// again a phased permutation. Throws when M exceeds max_qubits.
SparseUnitary compose_explicit(const Circuit& circuit,
                               int max_qubits = kDefaultExplicitQubitCap);

}  // namespace qsim
