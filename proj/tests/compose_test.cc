#include "qsim/compose.hpp"

#include <gtest/gtest.h>

#include <numbers>

#include "qsim/analysis.hpp"
#include "qsim/kron.hpp"
#include "qsim/workload.hpp"

namespace qsim {
namespace {

TEST(MapOutputAddress, EmptyCircuitIsIdentity) {
    Circuit circuit;
    circuit.num_qubits = 5;
    for (addr_t i : {addr_t{0}, addr_t{13}, addr_t{31}}) {
        const SourceAmp r = map_output_address(circuit, i);
        EXPECT_EQ(r.address, i);
        EXPECT_EQ(r.phase, (complex_t{1, 0}));
    }
}

TEST(MapOutputAddress, RepeatedInvolutionCancels) {
    Circuit circuit;
    circuit.num_qubits = 4;
    circuit.steps = {GateStep::bit_flip(2, {3}), GateStep::bit_flip(2, {3})};
    for (addr_t i = 0; i < circuit.dim(); ++i) {
        const SourceAmp r = map_output_address(circuit, i);
        EXPECT_EQ(r.address, i);
        EXPECT_EQ(r.phase, (complex_t{1, 0}));
    }
}

TEST(MapOutputAddress, RejectsOutOfRangeAddress) {
    Circuit circuit;
    circuit.num_qubits = 3;
    EXPECT_THROW(map_output_address(circuit, 8), std::out_of_range);
}

// Row i of the composed matrix times the Kronecker input must match the
// dense oracle's step-by-step state evolution.
TEST(MapOutputAddress, AgreesWithDenseOracle) {
    const Circuit circuit = random_circuit(4, 10, 42);
    const InputState input = random_input(4, 43);
    const std::vector<complex_t> expected =
        dense_apply_circuit(circuit, dense_input_vector(input));

    const CompiledCircuit cc(circuit);
    for (addr_t i = 0; i < circuit.dim(); ++i) {
        const SourceAmp r = cc.map_output_address(i);
        const complex_t got = r.phase * kron_element(input, r.address);
        EXPECT_LE(std::abs(got - expected[i]), 1e-12) << "row " << i;
    }
}

TEST(ComposeExplicit, EmptyCircuitGivesIdentity) {
    Circuit circuit;
    circuit.num_qubits = 3;
    const SparseUnitary u = compose_explicit(circuit);
    EXPECT_EQ(u, SparseUnitary::identity(8));
}

TEST(ComposeExplicit, MatchesDenseStepProduct) {
    for (std::uint64_t seed : {7u, 8u, 9u}) {
        const Circuit circuit = random_circuit(6, 24, seed);
        const DenseMatrix expected = dense_circuit_matrix(circuit);
        const DenseMatrix got = to_dense(compose_explicit(circuit));
        double worst = 0.0;
        for (std::size_t k = 0; k < got.a.size(); ++k)
            worst = std::max(worst, std::abs(got.a[k] - expected.a[k]));
        EXPECT_LE(worst, 1e-12) << "seed " << seed;
    }
}

TEST(ComposeExplicit, LazyAndExplicitAgree) {
    const Circuit circuit = random_circuit(16, 40, 4242);
    const SparseUnitary u = compose_explicit(circuit);
    const CompiledCircuit cc(circuit);
    for (addr_t i = 0; i < circuit.dim(); ++i) {
        const SourceAmp r = cc.map_output_address(i);
        ASSERT_EQ(r.address, u.col[i]) << "row " << i;
        ASSERT_EQ(r.phase, u.val[i]) << "row " << i;
    }
}

TEST(ComposeExplicit, PhaseFreeCircuitHasExactlyUnitValues) {
    Circuit circuit = random_circuit(8, 64, 77);
    std::erase_if(circuit.steps, [](const GateStep& s) {
        return s.kind == GateKind::ControlledPhase;
    });
    const SparseUnitary u = compose_explicit(circuit);
    for (const complex_t& v : u.val) EXPECT_EQ(v, (complex_t{1, 0}));
    EXPECT_TRUE(u.is_permutation());
}

// The displayed 4x4 signed permutation: rows (0->3, +1), (1->0, +1),
// (2->2, +1), (3->1, -1). One involution times a diagonal cannot produce
// its 3-cycle, so the generating circuit needs three bit-flip steps.
TEST(ComposeExplicit, ReproducesSignedPermutationExample) {
    const Circuit circuit{
        2,
        {
            GateStep::bit_flip(2, {1}),
            GateStep::bit_flip(1, {2}),
            GateStep::bit_flip(1),
            GateStep::cphase(std::numbers::pi, {1, 2}),
        },
    };
    const SparseUnitary u = compose_explicit(circuit);
    EXPECT_EQ(u.col, (std::vector<addr_t>{3, 0, 2, 1}));
    EXPECT_LE(std::abs(u.val[0] - complex_t{1, 0}), 1e-15);
    EXPECT_LE(std::abs(u.val[1] - complex_t{1, 0}), 1e-15);
    EXPECT_LE(std::abs(u.val[2] - complex_t{1, 0}), 1e-15);
    EXPECT_LE(std::abs(u.val[3] - complex_t{-1, 0}), 1e-15);
    EXPECT_TRUE(verify_unitary(u).is_unitary);
}

TEST(ComposeExplicit, RefusesToMaterializeOverCap) {
    Circuit over;
    over.num_qubits = 27;
    EXPECT_THROW(compose_explicit(over), std::invalid_argument);

    Circuit small;
    small.num_qubits = 4;
    EXPECT_THROW(compose_explicit(small, 3), std::invalid_argument);
    EXPECT_NO_THROW(compose_explicit(small, 4));
}

}  // namespace
}  // namespace qsim
