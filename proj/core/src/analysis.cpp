#include "qsim/analysis.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>

#include "qsim/compose.hpp"
#include "qsim/step.hpp"

namespace qsim {

namespace {

const Block2 kBlockI{{{complex_t{1, 0}, complex_t{0, 0}}, {complex_t{0, 0}, complex_t{1, 0}}}};
const Block2 kBlockX{{{complex_t{0, 0}, complex_t{1, 0}}, {complex_t{1, 0}, complex_t{0, 0}}}};
const Block2 kBlockY{{{complex_t{0, 0}, complex_t{0, -1}}, {complex_t{0, 1}, complex_t{0, 0}}}};
const Block2 kBlockZ{{{complex_t{1, 0}, complex_t{0, 0}}, {complex_t{0, 0}, complex_t{-1, 0}}}};
const Block2 kBlockP1{{{complex_t{0, 0}, complex_t{0, 0}}, {complex_t{0, 0}, complex_t{1, 0}}}};

void check_dense_cap(int num_qubits) {
    if (num_qubits < 1) throw std::invalid_argument("need at least one qubit");
    if (num_qubits > kDenseQubitCap)
        throw std::invalid_argument("dense path capped at " + std::to_string(kDenseQubitCap) +
                                    " qubits");
}

std::vector<Block2> identity_factors(int num_qubits) {
    return std::vector<Block2>(num_qubits, kBlockI);
}

DenseMatrix add_scaled(const DenseMatrix& base, complex_t scale, const DenseMatrix& term) {
    DenseMatrix out = base;
    for (addr_t k = 0; k < out.a.size(); ++k) out.a[k] += scale * term.a[k];
    return out;
}

}  // namespace

DenseMatrix DenseMatrix::identity(addr_t dim) {
    DenseMatrix m(dim);
    for (addr_t i = 0; i < dim; ++i) m.at(i, i) = complex_t{1, 0};
    return m;
}

DenseMatrix kron_blocks(const std::vector<Block2>& factors) {
    // Fold from the highest qubit down so each new factor lands on the
    // less significant side: acc = acc (x) F_j.
    DenseMatrix acc(1);
    acc.a[0] = complex_t{1, 0};
    for (auto it = factors.rbegin(); it != factors.rend(); ++it) {
        const Block2& f = *it;
        DenseMatrix next(acc.dim * 2);
        for (addr_t i = 0; i < acc.dim; ++i)
            for (addr_t j = 0; j < acc.dim; ++j) {
                const complex_t aij = acc.at(i, j);
                if (aij == complex_t{}) continue;
                for (int r = 0; r < 2; ++r)
                    for (int c = 0; c < 2; ++c)
                        next.at(i * 2 + r, j * 2 + c) = aij * f[r][c];
            }
        acc = std::move(next);
    }
    return acc;
}

std::vector<complex_t> dense_input_vector(const InputState& input) {
    input.validate();
    if (input.num_qubits() > kDenseQubitCap + 2)
        throw std::invalid_argument("dense input vector capped at " +
                                    std::to_string(kDenseQubitCap + 2) + " qubits");
    std::vector<complex_t> acc{complex_t{1, 0}};
    for (auto it = input.qubits.rbegin(); it != input.qubits.rend(); ++it) {
        std::vector<complex_t> next(acc.size() * 2);
        for (std::size_t i = 0; i < acc.size(); ++i) {
            next[i * 2] = acc[i] * it->amp0;
            next[i * 2 + 1] = acc[i] * it->amp1;
        }
        acc = std::move(next);
    }
    return acc;
}

DenseMatrix dense_step(const GateStep& step, int num_qubits) {
    check_dense_cap(num_qubits);
    step.validate(num_qubits);
    const addr_t dim = dim_for_qubits(num_qubits);

    // Projector onto "every control bit is 1".
    auto control_projector = [&]() {
        auto factors = identity_factors(num_qubits);
        for (int c : step.controls) factors[c - 1] = kBlockP1;
        return kron_blocks(factors);
    };

    switch (step.kind) {
        case GateKind::BitFlip: {
            auto flip_factors = identity_factors(num_qubits);
            for (int c : step.controls) flip_factors[c - 1] = kBlockP1;
            flip_factors[step.target - 1] = kBlockX;
            const DenseMatrix flip = kron_blocks(flip_factors);
            const DenseMatrix proj = control_projector();
            // I - P + (X on target)P: identity off the control subspace.
            DenseMatrix out = add_scaled(DenseMatrix::identity(dim), complex_t{-1, 0}, proj);
            return add_scaled(out, complex_t{1, 0}, flip);
        }
        case GateKind::ControlledPhase: {
            const DenseMatrix proj = control_projector();
            const complex_t phase = std::polar(1.0, step.theta);
            return add_scaled(DenseMatrix::identity(dim), phase - complex_t{1, 0}, proj);
        }
        case GateKind::Swap: {
            // (II + XX + YY + ZZ) / 2 on the swapped pair.
            DenseMatrix out(dim);
            for (const Block2& pauli : {kBlockI, kBlockX, kBlockY, kBlockZ}) {
                auto factors = identity_factors(num_qubits);
                factors[step.swap_a - 1] = pauli;
                factors[step.swap_b - 1] = pauli;
                out = add_scaled(out, complex_t{0.5, 0}, kron_blocks(factors));
            }
            return out;
        }
    }
    throw std::logic_error("unreachable gate kind");
}

DenseMatrix dense_circuit_matrix(const Circuit& circuit) {
    check_dense_cap(circuit.num_qubits);
    DenseMatrix acc = DenseMatrix::identity(circuit.dim());
    for (const GateStep& step : circuit.steps)
        acc = dense_multiply(dense_step(step, circuit.num_qubits), acc);
    return acc;
}

std::vector<complex_t> dense_apply_circuit(const Circuit& circuit,
                                           const std::vector<complex_t>& v) {
    check_dense_cap(circuit.num_qubits);
    if (v.size() != circuit.dim()) throw std::invalid_argument("vector length mismatch");
    std::vector<complex_t> acc = v;
    for (const GateStep& step : circuit.steps)
        acc = dense_matvec(dense_step(step, circuit.num_qubits), acc);
    return acc;
}

std::vector<complex_t> dense_matvec(const DenseMatrix& m, const std::vector<complex_t>& v) {
    if (v.size() != m.dim) throw std::invalid_argument("vector length mismatch");
    std::vector<complex_t> out(m.dim);
    for (addr_t r = 0; r < m.dim; ++r) {
        complex_t s{};
        for (addr_t c = 0; c < m.dim; ++c) s += m.at(r, c) * v[c];
        out[r] = s;
    }
    return out;
}

DenseMatrix dense_multiply(const DenseMatrix& lhs, const DenseMatrix& rhs) {
    if (lhs.dim != rhs.dim) throw std::invalid_argument("dimension mismatch");
    DenseMatrix out(lhs.dim);
    for (addr_t i = 0; i < lhs.dim; ++i)
        for (addr_t k = 0; k < lhs.dim; ++k) {
            const complex_t lik = lhs.at(i, k);
            if (lik == complex_t{}) continue;
            for (addr_t j = 0; j < rhs.dim; ++j) out.at(i, j) += lik * rhs.at(k, j);
        }
    return out;
}

DenseMatrix to_dense(const SparseUnitary& u) {
    if (u.dim > (addr_t{1} << kDenseQubitCap))
        throw std::invalid_argument("matrix too large for dense expansion");
    DenseMatrix m(u.dim);
    for (addr_t r = 0; r < u.dim; ++r) m.at(r, u.col[r]) = u.val[r];
    return m;
}

UnitaryReport verify_unitary(const SparseUnitary& u, double tol) {
    UnitaryReport rep;
    if (!u.is_permutation()) {
        rep.detail = "column map is not a bijection";
        rep.max_deviation = 1.0;
        return rep;
    }
    double worst = 0.0;
    for (const complex_t& v : u.val) worst = std::max(worst, std::abs(std::abs(v) - 1.0));
    rep.max_deviation = worst;
    rep.is_unitary = worst <= tol;
    if (!rep.is_unitary) rep.detail = "row value modulus deviates from 1";
    return rep;
}

UnitaryReport verify_unitary(const DenseMatrix& u, double tol) {
    UnitaryReport rep;
    double worst = 0.0;
    for (addr_t i = 0; i < u.dim; ++i)
        for (addr_t j = 0; j < u.dim; ++j) {
            complex_t s{};
            for (addr_t k = 0; k < u.dim; ++k) s += std::conj(u.at(k, i)) * u.at(k, j);
            if (i == j) s -= complex_t{1, 0};
            worst = std::max(worst, std::abs(s));
        }
    rep.max_deviation = worst;
    rep.is_unitary = worst <= tol;
    if (!rep.is_unitary) rep.detail = "U^H U deviates from identity";
    return rep;
}

UnitaryReport verify_circuit(const Circuit& circuit, double tol) {
    const CompiledCircuit cc(circuit);
    const addr_t dim = cc.dim();
    UnitaryReport rep;
    std::vector<std::uint64_t> seen((dim + 63) / 64, 0);
    double worst = 0.0;
    for (addr_t i = 0; i < dim; ++i) {
        const SourceAmp r = cc.map_output_address(i);
        std::uint64_t& word = seen[r.address >> 6];
        const std::uint64_t bit = std::uint64_t{1} << (r.address & 63);
        if (word & bit) {
            rep.detail = "column map is not a bijection";
            rep.max_deviation = 1.0;
            return rep;
        }
        word |= bit;
        worst = std::max(worst, std::abs(std::abs(r.phase) - 1.0));
    }
    rep.max_deviation = worst;
    rep.is_unitary = worst <= tol;
    if (!rep.is_unitary) rep.detail = "row value modulus deviates from 1";
    return rep;
}

bool step_matrix_is_symmetric(const GateStep& step, int num_qubits) {
    step.validate(num_qubits);
    const CompiledStep cs(step);
    const addr_t dim = dim_for_qubits(num_qubits);
    for (addr_t i = 0; i < dim; ++i) {
        const addr_t c = cs.col(i);
        if (cs.col(c) != i || cs.val(c) != cs.val(i)) return false;
    }
    return true;
}

ProbabilityAccumulator::ProbabilityAccumulator(int num_qubits, int top_k)
    : num_qubits_(num_qubits), top_k_(top_k), marginal_(num_qubits) {
    if (num_qubits < 1 || num_qubits > kMaxQubits)
        throw std::invalid_argument("qubit count out of range");
    if (top_k < 0) throw std::invalid_argument("top_k must be non-negative");
}

void ProbabilityAccumulator::feed(const StateChunk& chunk) {
    if (started_ && chunk.start != next_expected_)
        throw std::invalid_argument("chunks must arrive contiguous and ascending");
    if (!started_) {
        covered_start_ = chunk.start;
        started_ = true;
    }
    if (chunk.end() > dim_for_qubits(num_qubits_))
        throw std::out_of_range("chunk exceeds state dimension");
    next_expected_ = chunk.end();

    for (addr_t k = 0; k < chunk.size(); ++k) {
        const addr_t index = chunk.start + k;
        const double p = std::norm(chunk.amps[k]);
        total_.add(p);
        addr_t bits = index;
        while (bits) {
            marginal_[std::countr_zero(bits)].add(p);
            bits &= bits - 1;
        }
        // Ties keep the earlier index; the stream is ascending, so a later
        // equal probability never displaces an entry.
        if (static_cast<int>(top_.size()) < top_k_) {
            top_.push_back({index, p});
            std::sort(top_.begin(), top_.end(), [](const auto& a, const auto& b) {
                return a.probability > b.probability ||
                       (a.probability == b.probability && a.index < b.index);
            });
        } else if (top_k_ > 0 && p > top_.back().probability) {
            top_.back() = {index, p};
            for (std::size_t i = top_.size() - 1; i > 0; --i) {
                const bool better = top_[i].probability > top_[i - 1].probability ||
                                    (top_[i].probability == top_[i - 1].probability &&
                                     top_[i].index < top_[i - 1].index);
                if (!better) break;
                std::swap(top_[i], top_[i - 1]);
            }
        }
    }
}

ProbabilityReport ProbabilityAccumulator::report() const {
    ProbabilityReport rep;
    rep.total_norm2 = total_.sum;
    rep.top = top_;
    rep.marginal_one.reserve(marginal_.size());
    for (const KahanSum& m : marginal_) rep.marginal_one.push_back(m.sum);
    rep.covered_start = covered_start_;
    rep.covered_end = next_expected_;
    return rep;
}

}  // namespace qsim
