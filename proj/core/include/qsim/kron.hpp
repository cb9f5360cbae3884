#pragma once

#include <stdexcept>

#include "qsim/types.hpp"

namespace qsim {

// Element i of the implicit Kronecker product q_M (x) ... (x) q_1, computed
// on the fly: bit j of i selects component q_j(bit). Example (M = 3):
// element 0b101 = q_3(1) * q_2(0) * q_1(1). O(M) time, no vector storage.
inline complex_t kron_element(const InputState& input, addr_t i) {
    complex_t product{1.0, 0.0};
    addr_t bits = i;
    for (const QubitPair& q : input.qubits) {
        product *= (bits & 1u) ? q.amp1 : q.amp0;
        bits >>= 1;
    }
    return product;
}

// Range-checked variant; the unchecked one above is the hot path.
inline complex_t kron_element_checked(const InputState& input, addr_t i) {
    if (i >= input.dim()) throw std::out_of_range("address out of range for input state");
    return kron_element(input, i);
}

}  // namespace qsim
