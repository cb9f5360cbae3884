#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "qsim/types.hpp"

namespace qsim {

// Brute-force dense reference, deliberately kept apart from the mask-based
// address math in step.hpp/compose.hpp so the two routes can check each
// other. Everything here assembles matrices out of 2x2 blocks by Kronecker
// products.
//
// Ordering: the assembled operator is F_M (x) F_{M-1} (x) ... (x) F_1, so
// qubit 1 owns the least significant address bit. Getting this backwards is
// a silent error; every function below follows this rule.

inline constexpr int kDenseQubitCap = 10;  // 2^20 dense entries at most

struct DenseMatrix {
    addr_t dim{0};
    std::vector<complex_t> a;  // row-major

    DenseMatrix() = default;
    explicit DenseMatrix(addr_t dim_) : dim(dim_), a(dim_ * dim_) {}

    complex_t& at(addr_t r, addr_t c) { return a[r * dim + c]; }
    const complex_t& at(addr_t r, addr_t c) const { return a[r * dim + c]; }

    static DenseMatrix identity(addr_t dim);
};

using Block2 = std::array<std::array<complex_t, 2>, 2>;

// q_M (x) ... (x) q_1 of per-qubit 2x2 blocks (factors[j-1] belongs to
// qubit j).
DenseMatrix kron_blocks(const std::vector<Block2>& factors);

// Full 2^M input vector by iterated Kronecker expansion of the qubit pairs.
// Independent of kron_element, which multiplies per-bit components instead.
std::vector<complex_t> dense_input_vector(const InputState& input);

// Single-step 2^M matrix built from projector/Pauli block sums. Throws when
// M exceeds kDenseQubitCap.
DenseMatrix dense_step(const GateStep& step, int num_qubits);

// Product U_n * ... * U_1 of dense step matrices.
DenseMatrix dense_circuit_matrix(const Circuit& circuit);

// Applies the circuit to a dense vector one step matrix at a time.
std::vector<complex_t> dense_apply_circuit(const Circuit& circuit,
                                           const std::vector<complex_t>& v);

std::vector<complex_t> dense_matvec(const DenseMatrix& m, const std::vector<complex_t>& v);
DenseMatrix dense_multiply(const DenseMatrix& lhs, const DenseMatrix& rhs);
DenseMatrix to_dense(const SparseUnitary& u);

struct UnitaryReport {
    bool is_unitary{false};
    double max_deviation{0.0};
    std::string detail;
};

// Sparse path: exact column bijectivity plus |val| = 1 within tol.
UnitaryReport verify_unitary(const SparseUnitary& u, double tol = 1e-12);

// Dense path: max |(U^H U - I)| entry.
UnitaryReport verify_unitary(const DenseMatrix& u, double tol = 1e-12);

// Same checks as the sparse verify_unitary but streamed row by row off the
// lazy address walk; scratch is one bit per row instead of the matrix.
UnitaryReport verify_circuit(const Circuit& circuit, double tol = 1e-12);

// True when the step's matrix equals its own transpose: col(col(i)) == i
// and val(col(i)) == val(i) for every row.
bool step_matrix_is_symmetric(const GateStep& step, int num_qubits);

struct BasisProbability {
    addr_t index{0};
    double probability{0.0};
};

struct ProbabilityReport {
    double total_norm2{0.0};
    std::vector<BasisProbability> top;      // by probability desc, index asc
    std::vector<double> marginal_one;       // P(a(j)=1), entry j-1
    addr_t covered_start{0};
    addr_t covered_end{0};
};

// Streaming post-processor: feed chunks in ascending, gap-free order and
// read the report at the end. O(top_k + M) state beyond the current chunk.
class ProbabilityAccumulator {
  public:
    explicit ProbabilityAccumulator(int num_qubits, int top_k = 16);

    void feed(const StateChunk& chunk);
    ProbabilityReport report() const;

  private:
    struct KahanSum {
        double sum{0.0};
        double carry{0.0};
        void add(double x) {
            const double y = x - carry;
            const double t = sum + y;
            carry = (t - sum) - y;
            sum = t;
        }
    };

    int num_qubits_;
    int top_k_;
    bool started_{false};
    addr_t covered_start_{0};
    addr_t next_expected_{0};
    KahanSum total_;
    std::vector<KahanSum> marginal_;
    std::vector<BasisProbability> top_;  // kept sorted, worst entry last
};

}  // namespace qsim
