#include "qsim/workload.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>
#include <random>
#include <stdexcept>

namespace qsim {

namespace {

// mt19937_64 with explicit draw arithmetic; std::uniform_int_distribution is
// implementation-defined and would tie circuit identity to the stdlib.
class Prng {
  public:
    explicit Prng(std::uint64_t seed) : eng_(seed) {}

    std::uint64_t below(std::uint64_t n) { return eng_() % n; }

    double unit() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

    double signed_unit() { return unit() * 2.0 - 1.0; }

    // k distinct bit indices in [1, m], none equal to `exclude` (0 = none).
    std::vector<int> pick_bits(int k, int m, int exclude) {
        std::vector<int> bits;
        while (static_cast<int>(bits.size()) < k) {
            const int b = static_cast<int>(below(m)) + 1;
            if (b == exclude) continue;
            if (std::find(bits.begin(), bits.end(), b) != bits.end()) continue;
            bits.push_back(b);
        }
        return bits;
    }

  private:
    std::mt19937_64 eng_;
};

double median(std::vector<double> xs) {
    std::sort(xs.begin(), xs.end());
    const std::size_t n = xs.size();
    return n % 2 ? xs[n / 2] : 0.5 * (xs[n / 2 - 1] + xs[n / 2]);
}

}  // namespace

Circuit random_circuit(int num_qubits, int steps, std::uint64_t seed) {
    if (num_qubits < 1 || num_qubits > kMaxQubits)
        throw std::invalid_argument("qubit count out of range");
    if (steps < 0) throw std::invalid_argument("step count must be non-negative");

    Prng rng(seed);
    Circuit circuit;
    circuit.num_qubits = num_qubits;
    circuit.steps.reserve(steps);
    for (int s = 0; s < steps; ++s) {
        const std::uint64_t roll = rng.below(10);
        if (roll < 8 || num_qubits < 2) {
            const int target = static_cast<int>(rng.below(num_qubits)) + 1;
            const int max_controls = std::min<int>(2, num_qubits - 1);
            const int n_controls =
                max_controls > 0 ? static_cast<int>(rng.below(max_controls + 1)) : 0;
            circuit.steps.push_back(
                GateStep::bit_flip(target, rng.pick_bits(n_controls, num_qubits, target)));
        } else if (roll == 8) {
            auto pair = rng.pick_bits(2, num_qubits, 0);
            circuit.steps.push_back(GateStep::swap(pair[0], pair[1]));
        } else {
            const int n_controls = 1 + static_cast<int>(rng.below(std::min(2, num_qubits)));
            const double theta = rng.unit() * 2.0 * std::numbers::pi;
            circuit.steps.push_back(
                GateStep::cphase(theta, rng.pick_bits(n_controls, num_qubits, 0)));
        }
    }
    return circuit;
}

InputState random_input(int num_qubits, std::uint64_t seed, bool normalized) {
    if (num_qubits < 1 || num_qubits > kMaxQubits)
        throw std::invalid_argument("qubit count out of range");
    Prng rng(seed);
    InputState input(num_qubits);
    for (QubitPair& q : input.qubits) {
        do {
            q.amp0 = complex_t{rng.signed_unit(), rng.signed_unit()};
            q.amp1 = complex_t{rng.signed_unit(), rng.signed_unit()};
        } while (q.norm2() < 1e-6);
        if (normalized) {
            const double scale = 1.0 / std::sqrt(q.norm2());
            q.amp0 *= scale;
            q.amp1 *= scale;
        }
    }
    return input;
}

void OutputHasher::update(const StateChunk& chunk) {
    const auto* bytes = reinterpret_cast<const unsigned char*>(chunk.amps.data());
    const std::size_t n = chunk.amps.size() * sizeof(complex_t);
    std::uint64_t h = state_;
    for (std::size_t i = 0; i < n; ++i) {
        h ^= bytes[i];
        h *= 1099511628211ull;
    }
    state_ = h;
}

std::vector<BenchRecord> run_bench_sweep(const BenchConfig& config) {
    if (config.min_qubits < 1 || config.min_qubits > config.max_qubits ||
        config.max_qubits > kMaxQubits)
        throw std::invalid_argument("invalid qubit range");
    if (config.steps < 1 || config.repeats < 1)
        throw std::invalid_argument("steps and repeats must be at least 1");

    std::vector<BenchRecord> records;
    for (int m = config.min_qubits; m <= config.max_qubits; ++m) {
        const Circuit circuit = random_circuit(m, config.steps, config.seed + m);

        // Fixed non-basis input so every amplitude exercises the full
        // product path.
        InputState input(m);
        for (QubitPair& q : input.qubits) q = {complex_t{0.6, 0.0}, complex_t{0.8, 0.0}};

        ExecutionPlan plan;
        plan.start = 0;
        plan.end = circuit.dim();
        plan.chunk_size = std::min<addr_t>(config.chunk_size, circuit.dim());
        plan.workers = config.workers;

        std::vector<double> times;
        std::uint64_t hash = 0;
        for (int r = 0; r < config.repeats; ++r) {
            HashingSink sink;
            const RunReport rep = run_parallel(circuit, input, plan, sink);
            times.push_back(rep.elapsed_seconds);
            hash = sink.digest();
        }

        BenchRecord rec;
        rec.num_qubits = m;
        rec.steps = config.steps;
        rec.workers = config.workers;
        rec.chunk_size = plan.chunk_size;
        rec.seconds = median(times);
        rec.output_hash = hash;
        if (!records.empty() && records.back().seconds > 0.0) {
            rec.has_growth = true;
            rec.growth = rec.seconds / records.back().seconds;
        }
        records.push_back(rec);
    }
    return records;
}

void write_bench_csv(const std::vector<BenchRecord>& records, std::ostream& out) {
    out << "M,steps,W,chunk,seconds,growth,output_hash\n";
    char buf[128];
    for (const BenchRecord& r : records) {
        std::snprintf(buf, sizeof(buf), "%d,%d,%u,%llu,%.9g,", r.num_qubits, r.steps,
                      r.workers, static_cast<unsigned long long>(r.chunk_size), r.seconds);
        out << buf;
        if (r.has_growth) {
            std::snprintf(buf, sizeof(buf), "%.4g", r.growth);
            out << buf;
        }
        std::snprintf(buf, sizeof(buf), ",%016llx\n",
                      static_cast<unsigned long long>(r.output_hash));
        out << buf;
    }
    if (!out) throw std::runtime_error("bench CSV write failed");
}

}  // namespace qsim
