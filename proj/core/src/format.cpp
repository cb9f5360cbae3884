#include "qsim/format.hpp"

#include <bit>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <istream>
#include <numbers>
#include <ostream>
#include <sstream>

namespace qsim {

static_assert(std::endian::native == std::endian::little,
              "binary chunk format assumes a little-endian host");

namespace {

std::vector<std::string> tokenize(const std::string& line) {
    std::vector<std::string> tokens;
    std::string current;
    for (char ch : line) {
        if (ch == '#') break;
        if (std::isspace(static_cast<unsigned char>(ch))) {
            if (!current.empty()) tokens.push_back(std::move(current));
            current.clear();
        } else {
            current.push_back(ch);
        }
    }
    if (!current.empty()) tokens.push_back(std::move(current));
    return tokens;
}

double parse_double(const std::string& token, int line, const char* what) {
    double value = 0.0;
    const char* begin = token.data();
    const char* end = begin + token.size();
    auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc{} || ptr != end)
        throw ParseError(line, std::string("malformed ") + what + " '" + token + "'");
    if (!std::isfinite(value))
        throw ParseError(line, std::string(what) + " must be finite, got '" + token + "'");
    return value;
}

double parse_angle(const std::string& token, int line) {
    if (token == "pi") return std::numbers::pi;
    if (token == "-pi") return -std::numbers::pi;
    return parse_double(token, line, "angle");
}

int parse_bit_index(const std::string& token, int line, const char* what) {
    int value = 0;
    const char* begin = token.data();
    const char* end = begin + token.size();
    auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc{} || ptr != end || value < 1)
        throw ParseError(line, std::string("malformed ") + what + " '" + token + "'");
    return value;
}

std::uint64_t parse_u64(const std::string& token, int line, const char* what) {
    std::uint64_t value = 0;
    const char* begin = token.data();
    const char* end = begin + token.size();
    auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc{} || ptr != end)
        throw ParseError(line, std::string("malformed ") + what + " '" + token + "'");
    return value;
}

// Reads a trailing "c <c1> <c2> ..." clause starting at tokens[from].
std::vector<int> parse_control_clause(const std::vector<std::string>& tokens, std::size_t from,
                                      int line) {
    if (from >= tokens.size()) return {};
    if (tokens[from] != "c")
        throw ParseError(line, "expected control clause 'c ...', got '" + tokens[from] + "'");
    if (from + 1 >= tokens.size())
        throw ParseError(line, "control clause 'c' needs at least one bit index");
    std::vector<int> controls;
    for (std::size_t i = from + 1; i < tokens.size(); ++i)
        controls.push_back(parse_bit_index(tokens[i], line, "control"));
    return controls;
}

void append_double(std::string& out, double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    out += buf;
}

}  // namespace

CircuitDocument parse_circuit_document(std::istream& in) {
    CircuitDocument doc;
    bool seen_qubits = false;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto tokens = tokenize(line);
        if (tokens.empty()) continue;
        const std::string& keyword = tokens[0];

        if (keyword == "qubits") {
            if (seen_qubits) throw ParseError(line_no, "duplicate 'qubits' directive");
            if (tokens.size() != 2) throw ParseError(line_no, "usage: qubits <M>");
            doc.num_qubits = parse_bit_index(tokens[1], line_no, "qubit count");
            if (doc.num_qubits > kMaxQubits)
                throw ParseError(line_no, "qubit count exceeds limit " +
                                              std::to_string(kMaxQubits));
            seen_qubits = true;
            continue;
        }
        if (!seen_qubits)
            throw ParseError(line_no, "'qubits <M>' must come before '" + keyword + "'");

        if (keyword == "init") {
            if (tokens.size() != 6)
                throw ParseError(line_no, "usage: init <q> <re0> <im0> <re1> <im1>");
            CircuitDocument::InitDirective init;
            init.qubit = parse_bit_index(tokens[1], line_no, "qubit index");
            init.value.amp0 = complex_t{parse_double(tokens[2], line_no, "amplitude"),
                                        parse_double(tokens[3], line_no, "amplitude")};
            init.value.amp1 = complex_t{parse_double(tokens[4], line_no, "amplitude"),
                                        parse_double(tokens[5], line_no, "amplitude")};
            init.line = line_no;
            doc.inits.push_back(init);
        } else if (keyword == "x") {
            if (tokens.size() < 2) throw ParseError(line_no, "usage: x <target> [c <bits>...]");
            const int target = parse_bit_index(tokens[1], line_no, "target");
            auto controls = parse_control_clause(tokens, 2, line_no);
            doc.gates.push_back({GateStep::bit_flip(target, std::move(controls)), line_no});
        } else if (keyword == "cphase") {
            if (tokens.size() < 4)
                throw ParseError(line_no, "usage: cphase <theta> c <bits>...");
            const double theta = parse_angle(tokens[1], line_no);
            auto controls = parse_control_clause(tokens, 2, line_no);
            doc.gates.push_back({GateStep::cphase(theta, std::move(controls)), line_no});
        } else if (keyword == "swap") {
            if (tokens.size() != 3) throw ParseError(line_no, "usage: swap <a> <b>");
            const int a = parse_bit_index(tokens[1], line_no, "swap bit");
            const int b = parse_bit_index(tokens[2], line_no, "swap bit");
            doc.gates.push_back({GateStep::swap(a, b), line_no});
        } else {
            throw ParseError(line_no, "unknown keyword '" + keyword + "'");
        }
    }
    if (!seen_qubits) throw ParseError(line_no ? line_no : 1, "missing 'qubits <M>' directive");
    return doc;
}

ParsedCircuit parse_circuit(std::istream& in) {
    const CircuitDocument doc = parse_circuit_document(in);

    ParsedCircuit result;
    result.circuit.num_qubits = doc.num_qubits;
    result.input = InputState(doc.num_qubits);

    std::vector<bool> initialized(doc.num_qubits + 1, false);
    for (const auto& init : doc.inits) {
        if (init.qubit > doc.num_qubits)
            throw ParseError(init.line, "init qubit " + std::to_string(init.qubit) +
                                            " out of range [1, " +
                                            std::to_string(doc.num_qubits) + "]");
        if (initialized[init.qubit])
            throw ParseError(init.line,
                             "duplicate init for qubit " + std::to_string(init.qubit));
        initialized[init.qubit] = true;
        result.input.qubits[init.qubit - 1] = init.value;
    }

    for (const auto& gate : doc.gates) {
        try {
            gate.step.validate(doc.num_qubits);
        } catch (const std::invalid_argument& e) {
            throw ParseError(gate.line, e.what());
        }
        result.circuit.steps.push_back(gate.step);
    }
    return result;
}

ParsedCircuit parse_circuit(const std::string& text) {
    std::istringstream in(text);
    return parse_circuit(in);
}

std::string serialize_circuit(const Circuit& circuit, const InputState& input) {
    std::string out = "qubits " + std::to_string(circuit.num_qubits) + "\n";
    const QubitPair ground;
    for (int q = 1; q <= input.num_qubits(); ++q) {
        const QubitPair& p = input.qubits[q - 1];
        if (p.amp0 == ground.amp0 && p.amp1 == ground.amp1) continue;
        out += "init " + std::to_string(q);
        for (double v : {p.amp0.real(), p.amp0.imag(), p.amp1.real(), p.amp1.imag()}) {
            out += ' ';
            append_double(out, v);
        }
        out += '\n';
    }
    for (const GateStep& step : circuit.steps) {
        switch (step.kind) {
            case GateKind::BitFlip:
                out += "x " + std::to_string(step.target);
                if (!step.controls.empty()) {
                    out += " c";
                    for (int c : step.controls) out += ' ' + std::to_string(c);
                }
                break;
            case GateKind::ControlledPhase:
                out += "cphase ";
                append_double(out, step.theta);
                out += " c";
                for (int c : step.controls) out += ' ' + std::to_string(c);
                break;
            case GateKind::Swap:
                out += "swap " + std::to_string(step.swap_a) + ' ' +
                       std::to_string(step.swap_b);
                break;
        }
        out += '\n';
    }
    return out;
}

void serialize_sparse(const SparseUnitary& u, std::ostream& out) {
    out << "sparse-u v1 dim=" << u.dim << '\n';
    std::string line;
    for (addr_t r = 0; r < u.dim; ++r) {
        line = std::to_string(r) + ' ' + std::to_string(u.col[r]) + ' ';
        append_double(line, u.val[r].real());
        line += ' ';
        append_double(line, u.val[r].imag());
        line += '\n';
        out << line;
    }
    if (!out) throw std::runtime_error("sparse matrix write failed");
}

SparseUnitary parse_sparse(std::istream& in) {
    std::string line;
    int line_no = 0;
    // Header.
    while (std::getline(in, line)) {
        ++line_no;
        const auto tokens = tokenize(line);
        if (tokens.empty()) continue;
        if (tokens.size() != 3 || tokens[0] != "sparse-u" || tokens[1] != "v1" ||
            tokens[2].rfind("dim=", 0) != 0)
            throw ParseError(line_no, "malformed header, expected 'sparse-u v1 dim=<N>'");
        break;
    }
    if (line_no == 0) throw ParseError(1, "empty sparse matrix file");

    const auto header = tokenize(line);
    const addr_t dim = parse_u64(header[2].substr(4), line_no, "dimension");
    if (dim == 0 || !std::has_single_bit(dim))
        throw ParseError(line_no, "dimension must be a power of two, got " +
                                      std::to_string(dim));

    SparseUnitary u;
    u.dim = dim;
    u.col.assign(dim, 0);
    u.val.assign(dim, complex_t{});
    std::vector<bool> row_seen(dim, false);
    addr_t rows = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto tokens = tokenize(line);
        if (tokens.empty()) continue;
        if (tokens.size() != 4)
            throw ParseError(line_no, "expected '<row> <col> <re> <im>'");
        const addr_t row = parse_u64(tokens[0], line_no, "row");
        const addr_t col = parse_u64(tokens[1], line_no, "column");
        if (row >= dim) throw ParseError(line_no, "row index out of range");
        if (col >= dim) throw ParseError(line_no, "column index out of range");
        if (row_seen[row]) throw ParseError(line_no, "duplicate row " + std::to_string(row));
        row_seen[row] = true;
        u.col[row] = col;
        u.val[row] = complex_t{parse_double(tokens[2], line_no, "value"),
                               parse_double(tokens[3], line_no, "value")};
        ++rows;
    }
    if (rows != dim)
        throw ParseError(line_no, "row count mismatch: header says " + std::to_string(dim) +
                                      ", file has " + std::to_string(rows));
    if (!u.is_permutation())
        throw ParseError(line_no, "column map is not a bijection");
    return u;
}

void write_chunk(const StateChunk& chunk, ChunkFormat format, std::ostream& out) {
    if (format == ChunkFormat::Text) {
        std::string line;
        for (addr_t k = 0; k < chunk.size(); ++k) {
            line = std::to_string(chunk.start + k) + ' ';
            append_double(line, chunk.amps[k].real());
            line += ' ';
            append_double(line, chunk.amps[k].imag());
            line += '\n';
            out << line;
        }
    } else {
        const std::uint64_t start = chunk.start;
        const std::uint64_t len = chunk.size();
        out.write(reinterpret_cast<const char*>(&start), sizeof(start));
        out.write(reinterpret_cast<const char*>(&len), sizeof(len));
        out.write(reinterpret_cast<const char*>(chunk.amps.data()),
                  static_cast<std::streamsize>(len * sizeof(complex_t)));
    }
    if (!out) throw std::runtime_error("chunk write failed");
}

bool read_chunk_binary(std::istream& in, StateChunk& chunk) {
    std::uint64_t start = 0;
    in.read(reinterpret_cast<char*>(&start), sizeof(start));
    if (in.gcount() == 0 && in.eof()) return false;
    std::uint64_t len = 0;
    if (in.gcount() != sizeof(start) ||
        !in.read(reinterpret_cast<char*>(&len), sizeof(len)))
        throw std::runtime_error("truncated chunk header");
    chunk.start = start;
    chunk.amps.resize(len);
    if (!in.read(reinterpret_cast<char*>(chunk.amps.data()),
                 static_cast<std::streamsize>(len * sizeof(complex_t))))
        throw std::runtime_error("truncated chunk payload");
    return true;
}

}  // namespace qsim
