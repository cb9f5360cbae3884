#include "qsim/step.hpp"

#include <gtest/gtest.h>

#include <numbers>

#include "qsim/analysis.hpp"

namespace qsim {
namespace {

TEST(ApplyStep, CnotTogglesTargetWhenControlSet) {
    const GateStep cnot = GateStep::bit_flip(1, {2});
    const SourceAmp r = apply_step_to_address(cnot, 0b011);
    EXPECT_EQ(r.address, 0b010u);
    EXPECT_EQ(r.phase, (complex_t{1, 0}));
}

TEST(ApplyStep, CnotIdentityWhenControlClear) {
    const GateStep cnot = GateStep::bit_flip(1, {2});
    const SourceAmp r = apply_step_to_address(cnot, 0b001);
    EXPECT_EQ(r.address, 0b001u);
    EXPECT_EQ(r.phase, (complex_t{1, 0}));
}

TEST(ApplyStep, CphaseIsDiagonal) {
    const GateStep gate = GateStep::cphase(std::numbers::pi, {1, 2});
    const SourceAmp hit = apply_step_to_address(gate, 0b11);
    EXPECT_EQ(hit.address, 0b11u);
    EXPECT_LE(std::abs(hit.phase - complex_t{-1, 0}), 1e-15);
    const SourceAmp miss = apply_step_to_address(gate, 0b01);
    EXPECT_EQ(miss.address, 0b01u);
    EXPECT_EQ(miss.phase, (complex_t{1, 0}));
}

TEST(ApplyStep, SwapExchangesBits) {
    const GateStep gate = GateStep::swap(1, 3);
    EXPECT_EQ(apply_step_to_address(gate, 0b001).address, 0b100u);
    EXPECT_EQ(apply_step_to_address(gate, 0b100).address, 0b001u);
    EXPECT_EQ(apply_step_to_address(gate, 0b101).address, 0b101u);
    EXPECT_EQ(apply_step_to_address(gate, 0b010).address, 0b010u);
}

TEST(ApplyStep, BitFlipAndSwapAreInvolutions) {
    for (const GateStep& gate : {GateStep::bit_flip(2, {1, 4}), GateStep::swap(2, 3)}) {
        for (addr_t i = 0; i < 16; ++i) {
            const SourceAmp once = apply_step_to_address(gate, i);
            const SourceAmp twice = apply_step_to_address(gate, once.address);
            EXPECT_EQ(twice.address, i);
            EXPECT_EQ(twice.phase, (complex_t{1, 0}));
        }
    }
}

TEST(StepMatrix, CnotPermutation) {
    const SparseUnitary u = build_step_matrix(GateStep::bit_flip(1, {2}), 2);
    ASSERT_EQ(u.dim, 4u);
    EXPECT_EQ(u.col, (std::vector<addr_t>{0, 1, 3, 2}));
    for (const complex_t& v : u.val) EXPECT_EQ(v, (complex_t{1, 0}));
    // Self-transpose permutation.
    for (addr_t i = 0; i < u.dim; ++i) EXPECT_EQ(u.col[u.col[i]], i);
}

TEST(StepMatrix, CphaseDiagonal) {
    const SparseUnitary u = build_step_matrix(GateStep::cphase(std::numbers::pi, {1, 2}), 2);
    ASSERT_EQ(u.dim, 4u);
    EXPECT_EQ(u.col, (std::vector<addr_t>{0, 1, 2, 3}));
    EXPECT_EQ(u.val[0], (complex_t{1, 0}));
    EXPECT_EQ(u.val[1], (complex_t{1, 0}));
    EXPECT_EQ(u.val[2], (complex_t{1, 0}));
    EXPECT_LE(std::abs(u.val[3] - complex_t{-1, 0}), 1e-15);
}

TEST(StepMatrix, DenseExpansionIsUnitary) {
    const GateStep steps[] = {
        GateStep::bit_flip(3),
        GateStep::bit_flip(5, {1, 2, 7}),
        GateStep::cphase(0.37, {4}),
        GateStep::cphase(-2.1, {2, 6}),
        GateStep::swap(1, 8),
    };
    for (const GateStep& s : steps) {
        const UnitaryReport rep = verify_unitary(to_dense(build_step_matrix(s, 8)));
        EXPECT_TRUE(rep.is_unitary) << rep.detail;
        EXPECT_LE(rep.max_deviation, 1e-12);
    }
}

TEST(StepMatrix, RefusesToMaterializeOverCap) {
    try {
        build_step_matrix(GateStep::bit_flip(1), 27);
        FAIL() << "expected a cap error";
    } catch (const std::invalid_argument& e) {
        EXPECT_NE(std::string(e.what()).find("lazy"), std::string::npos);
    }
}

TEST(StepValidate, RejectsBadIndices) {
    EXPECT_THROW(GateStep::bit_flip(0).validate(3), std::invalid_argument);
    EXPECT_THROW(GateStep::bit_flip(4).validate(3), std::invalid_argument);
    EXPECT_THROW(GateStep::bit_flip(1, {1}).validate(3), std::invalid_argument);
    EXPECT_THROW(GateStep::bit_flip(1, {2, 2}).validate(3), std::invalid_argument);
    EXPECT_THROW(GateStep::cphase(1.0, {}).validate(3), std::invalid_argument);
    EXPECT_THROW(GateStep::swap(2, 2).validate(3), std::invalid_argument);
    EXPECT_THROW(GateStep::swap(1, 9).validate(3), std::invalid_argument);
    EXPECT_NO_THROW(GateStep::bit_flip(3, {1, 2}).validate(3));
}

}  // namespace
}  // namespace qsim
