// Acceptance gate: eight quantitative criteria, each printing one
// "criterion N: PASS|FAIL" line. Tolerances are part of the contract and
// must not be loosened.

#include <gtest/gtest.h>

#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>

#include "qsim/analysis.hpp"
#include "qsim/compose.hpp"
#include "qsim/evaluate.hpp"
#include "qsim/executor.hpp"
#include "qsim/format.hpp"
#include "qsim/kron.hpp"
#include "qsim/step.hpp"
#include "qsim/workload.hpp"

namespace qsim {
namespace {

void report(int criterion, bool ok) {
    std::printf("criterion %d: %s\n", criterion, ok ? "PASS" : "FAIL");
    std::fflush(stdout);
    EXPECT_TRUE(ok) << "criterion " << criterion;
}

// 1. Full-range lazy evaluation equals the dense oracle's matrix-vector
// product for 200 seeded random circuits, M in 2..8, up to 64 steps.
TEST(Acceptance, Criterion1OracleEquivalence) {
    double worst = 0.0;
    for (int s = 0; s < 200; ++s) {
        const int m = 2 + s % 7;
        const int steps = 1 + (s * 7 + 3) % 64;
        const Circuit circuit = random_circuit(m, steps, 1000 + s);
        const InputState input = random_input(m, 500 + s);

        const StateChunk got = evaluate_chunk(circuit, input, 0, circuit.dim());
        const std::vector<complex_t> want =
            dense_apply_circuit(circuit, dense_input_vector(input));
        for (addr_t i = 0; i < circuit.dim(); ++i)
            worst = std::max(worst, std::abs(got.amps[i] - want[i]));
    }
    std::printf("  max abs deviation over 200 circuits: %.3g\n", worst);
    report(1, worst <= 1e-12);
}

// 2. CNOT(control a(2), target a(1)) sends address 011 to 010, and basis
// input |011> produces amplitude 1 at index 0b010 exactly.
TEST(Acceptance, Criterion2GroundTruth) {
    const GateStep cnot = GateStep::bit_flip(1, {2});
    const SourceAmp mapped = apply_step_to_address(cnot, 0b011);
    bool ok = mapped.address == 0b010 && mapped.phase == complex_t{1, 0};

    const Circuit circuit{3, {cnot}};
    InputState input(3);
    input.qubits[0] = {complex_t{0, 0}, complex_t{1, 0}};  // a(1) = 1
    input.qubits[1] = {complex_t{0, 0}, complex_t{1, 0}};  // a(2) = 1
    const StateChunk out = evaluate_chunk(circuit, input, 0, 8);
    for (addr_t i = 0; i < 8; ++i) {
        const complex_t want = i == 0b010 ? complex_t{1, 0} : complex_t{0, 0};
        ok = ok && out.amps[i] == want;
    }
    report(2, ok);
}

// 3. The displayed 4x4 signed permutation loads, verifies, and its dense
// expansion is unitary to 1e-12.
TEST(Acceptance, Criterion3SignedPermutationMatrix) {
    const std::string fixture =
        "sparse-u v1 dim=4\n"
        "0 3 1 0\n"
        "1 0 1 0\n"
        "2 2 1 0\n"
        "3 1 -1 0\n";
    std::istringstream in(fixture);
    const SparseUnitary u = parse_sparse(in);
    const UnitaryReport sparse_rep = verify_unitary(u);
    const UnitaryReport dense_rep = verify_unitary(to_dense(u));
    std::printf("  sparse deviation %.3g, dense |U^H U - I| %.3g\n",
                sparse_rep.max_deviation, dense_rep.max_deviation);
    report(3, sparse_rep.is_unitary && dense_rep.max_deviation <= 1e-12);
}

// 4. kron_element vs materialized Kronecker products, 100 random inputs
// spread over M <= 12; the all-ones case is exact.
TEST(Acceptance, Criterion4KroneckerFactorization) {
    double worst = 0.0;
    for (int s = 0; s < 100; ++s) {
        const int m = 1 + s % 12;
        const InputState input = random_input(m, 4000 + s);
        std::vector<complex_t> acc{complex_t{1, 0}};
        for (auto it = input.qubits.rbegin(); it != input.qubits.rend(); ++it) {
            std::vector<complex_t> next(acc.size() * 2);
            for (std::size_t i = 0; i < acc.size(); ++i) {
                next[i * 2] = acc[i] * it->amp0;
                next[i * 2 + 1] = acc[i] * it->amp1;
            }
            acc = std::move(next);
        }
        for (addr_t i = 0; i < input.dim(); ++i)
            worst = std::max(worst, std::abs(kron_element(input, i) - acc[i]));
    }

    InputState ones(12);
    for (QubitPair& q : ones.qubits) q = {complex_t{0, 0}, complex_t{1, 0}};
    bool exact = kron_element(ones, (addr_t{1} << 12) - 1) == complex_t{1, 0};
    for (addr_t i = 0; exact && i < (addr_t{1} << 12) - 1; ++i)
        exact = kron_element(ones, i) == complex_t{0, 0};

    std::printf("  max abs deviation over 100 inputs: %.3g\n", worst);
    report(4, worst <= 1e-12 && exact);
}

// 5. Every bit-flip and swap step matrix equals its own transpose, exactly.
TEST(Acceptance, Criterion5StepSymmetry) {
    bool ok = true;
    for (int m = 1; m <= 6 && ok; ++m) {
        for (int target = 1; target <= m && ok; ++target) {
            ok = step_matrix_is_symmetric(GateStep::bit_flip(target), m);
            for (int c1 = 1; c1 <= m && ok; ++c1) {
                if (c1 == target) continue;
                ok = step_matrix_is_symmetric(GateStep::bit_flip(target, {c1}), m);
                for (int c2 = c1 + 1; c2 <= m && ok; ++c2) {
                    if (c2 == target) continue;
                    ok = step_matrix_is_symmetric(GateStep::bit_flip(target, {c1, c2}), m);
                }
            }
        }
        for (int a = 1; a <= m && ok; ++a)
            for (int b = a + 1; b <= m && ok; ++b)
                ok = step_matrix_is_symmetric(GateStep::swap(a, b), m);
    }
    report(5, ok);
}

// 6. M = 20, 100 steps: output 2-norm equals input 2-norm within 1e-10.
TEST(Acceptance, Criterion6NormConservation) {
    const int m = 20;
    const Circuit circuit = random_circuit(m, 100, 2026);
    const InputState input = random_input(m, 2027, true);

    ExecutionPlan plan;
    plan.start = 0;
    plan.end = circuit.dim();
    plan.chunk_size = addr_t{1} << 16;
    plan.workers = 4;

    ProbabilityAccumulator acc(m, 0);
    FunctionSink sink([&](const StateChunk& c) { acc.feed(c); });
    run_parallel(circuit, input, plan, sink);

    const double out_norm = std::sqrt(acc.report().total_norm2);
    const double in_norm = input.norm();
    std::printf("  |out| = %.15g, |in| = %.15g, difference %.3g\n", out_norm, in_norm,
                std::abs(out_norm - in_norm));
    report(6, std::abs(out_norm - in_norm) <= 1e-10);
}

// 7. A 2^20 chunk of an M = 40 circuit completes with buffer accounting
// within 1.1 * W * chunk_size amplitudes; the high-qubit embedding of the
// same gates reproduces the M = 10 result on the low window.
TEST(Acceptance, Criterion7ChunkedBeyondMemory) {
    const int m = 40;
    const Circuit circuit = random_circuit(10, 50, 3001);
    Circuit wide = circuit;
    wide.num_qubits = m;
    const InputState narrow_input = random_input(10, 3002);
    InputState wide_input(m);
    for (int q = 0; q < 10; ++q) wide_input.qubits[q] = narrow_input.qubits[q];

    ExecutionPlan plan;
    plan.start = addr_t{3} << 20;
    plan.end = plan.start + (addr_t{1} << 20);
    plan.chunk_size = addr_t{1} << 16;
    plan.workers = 4;

    std::uint64_t amps_seen = 0;
    FunctionSink counting([&](const StateChunk& c) { amps_seen += c.size(); });
    const RunReport rep = run_parallel(wide, wide_input, plan, counting);

    const std::uint64_t budget =
        static_cast<std::uint64_t>(1.1 * plan.workers * plan.chunk_size);
    std::printf("  peak buffered amplitudes %llu (budget %llu)\n",
                static_cast<unsigned long long>(rep.peak_amp_elements),
                static_cast<unsigned long long>(budget));

    // Gates touch only bits 1..10 and the high qubits are |0>, so the first
    // 2^10 outputs of the wide circuit equal the narrow circuit's vector.
    const StateChunk wide_low = evaluate_chunk(wide, wide_input, 0, 1024);
    const StateChunk narrow = evaluate_chunk(circuit, narrow_input, 0, 1024);
    bool window_ok = true;
    for (addr_t i = 0; i < 1024; ++i)
        window_ok = window_ok && wide_low.amps[i] == narrow.amps[i];

    report(7, amps_seen == (addr_t{1} << 20) && rep.peak_amp_elements <= budget && window_ok);
}

// 8. Bit-identical output across worker counts, and bench growth factors
// per added qubit inside (1.5, 4.5) over M = 16..22.
TEST(Acceptance, Criterion8ParallelDeterminismAndScaling) {
    const Circuit circuit = random_circuit(18, 48, 8001);
    const InputState input = random_input(18, 8002, true);

    std::uint64_t first_hash = 0;
    bool hashes_match = true;
    for (unsigned workers : {1u, 2u, 4u, 8u}) {
        ExecutionPlan plan;
        plan.start = 0;
        plan.end = circuit.dim();
        plan.chunk_size = addr_t{1} << 12;
        plan.workers = workers;
        HashingSink sink;
        run_parallel(circuit, input, plan, sink);
        if (workers == 1)
            first_hash = sink.digest();
        else
            hashes_match = hashes_match && sink.digest() == first_hash;
    }
    std::printf("  output hash %016llx for W in {1,2,4,8}: %s\n",
                static_cast<unsigned long long>(first_hash),
                hashes_match ? "identical" : "DIVERGENT");

    BenchConfig config;
    config.min_qubits = 16;
    config.max_qubits = 22;
    config.steps = 48;
    config.workers = 4;
    config.chunk_size = addr_t{1} << 12;
    config.repeats = 3;
    config.seed = 1;
    const std::vector<BenchRecord> records = run_bench_sweep(config);

    bool growth_ok = true;
    for (const BenchRecord& r : records) {
        if (!r.has_growth) continue;
        std::printf("  M=%d: %.6g s, growth x%.3g\n", r.num_qubits, r.seconds, r.growth);
        growth_ok = growth_ok && r.growth > 1.5 && r.growth < 4.5;
    }
    report(8, hashes_match && growth_ok);
}

}  // namespace
}  // namespace qsim
