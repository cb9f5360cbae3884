#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "qsim/executor.hpp"
#include "qsim/types.hpp"

namespace qsim {

// Seeded pseudo-random circuit with a fixed gate mix: 80% bit-flips with
// 0-2 controls, 10% swaps, 10% controlled phases with 1-2 controls. The mix
// is part of the bench contract so numbers stay comparable across machines;
// the same seed always yields the same circuit.
Circuit random_circuit(int num_qubits, int steps, std::uint64_t seed);

// Random per-qubit pairs with components uniform in [-1, 1]^2, optionally
// scaled to unit norm.
InputState random_input(int num_qubits, std::uint64_t seed, bool normalized = false);

// FNV-1a over the raw amplitude bytes in index order. Chunk boundaries do
// not affect the digest, so runs with different worker counts or chunk
// sizes are directly comparable.
class OutputHasher {
  public:
    void update(const StateChunk& chunk);
    std::uint64_t digest() const { return state_; }

  private:
    std::uint64_t state_{14695981039346656037ull};
};

class HashingSink final : public ChunkSink {
  public:
    void write(const StateChunk& chunk) override { hasher_.update(chunk); }
    std::uint64_t digest() const { return hasher_.digest(); }

  private:
    OutputHasher hasher_;
};

struct BenchConfig {
    int min_qubits{16};
    int max_qubits{22};
    int steps{48};
    unsigned workers{1};
    addr_t chunk_size{addr_t{1} << 16};
    int repeats{1};
    std::uint64_t seed{1};
};

// One timed full-range execution per qubit count. Seconds are the median
// over repeats of the execution phase only; growth is the ratio to the
// previous qubit count within the same sweep.
struct BenchRecord {
    int num_qubits{0};
    int steps{0};
    unsigned workers{0};
    addr_t chunk_size{0};
    double seconds{0.0};
    bool has_growth{false};
    double growth{0.0};
    std::uint64_t output_hash{0};
};

std::vector<BenchRecord> run_bench_sweep(const BenchConfig& config);

// CSV schema: M,steps,W,chunk,seconds,growth,output_hash (growth blank on
// the first row of a sweep).
void write_bench_csv(const std::vector<BenchRecord>& records, std::ostream& out);

}  // namespace qsim
