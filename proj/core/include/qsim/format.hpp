#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "qsim/types.hpp"

namespace qsim {

// Circuit text format, one directive per line, '#' starts a comment:
//
//   qubits M
//   init <q> <re0> <im0> <re1> <im1>
//   x <target> [c <c1> <c2> ...]
//   cphase <theta> c <c1> ...
//   swap <a> <b>
//
// Bit indices are 1-based (bit 1 is the LSB of the state-vector address).
// Steps apply top to bottom. Qubits without an init line start as [1 0].
// <theta> is radians; the token `pi` (or `-pi`) is accepted literally.

class ParseError : public std::runtime_error {
  public:
    ParseError(int line, const std::string& message)
        : std::runtime_error("line " + std::to_string(line) + ": " + message), line_(line) {}
    int line() const { return line_; }

  private:
    int line_;
};

// Raw parse of one circuit file, with source lines kept for diagnostics.
struct CircuitDocument {
    struct InitDirective {
        int qubit{0};
        QubitPair value;
        int line{0};
    };
    struct GateLine {
        GateStep step;
        int line{0};
    };

    int num_qubits{0};
    std::vector<InitDirective> inits;
    std::vector<GateLine> gates;
};

struct ParsedCircuit {
    Circuit circuit;
    InputState input;
};

CircuitDocument parse_circuit_document(std::istream& in);

// Full strict parse: syntax and semantic errors throw ParseError with the
// offending line number.
ParsedCircuit parse_circuit(std::istream& in);
ParsedCircuit parse_circuit(const std::string& text);

std::string serialize_circuit(const Circuit& circuit, const InputState& input);

// Sparse matrix text form: header "sparse-u v1 dim=<N>" then one row per
// line, "<row> <col> <re> <im>". parse(serialize(u)) == u.
void serialize_sparse(const SparseUnitary& u, std::ostream& out);
SparseUnitary parse_sparse(std::istream& in);

enum class ChunkFormat { Text, Binary };

// Text: one "<index> <re> <im>" line per amplitude, ascending from start.
// Binary: little-endian u64 start, u64 len, then len (re, im) f64 pairs,
// bit-exact.
void write_chunk(const StateChunk& chunk, ChunkFormat format, std::ostream& out);

// Reads one binary chunk record. Returns false at clean end-of-stream,
// throws on a truncated record.
bool read_chunk_binary(std::istream& in, StateChunk& chunk);

}  // namespace qsim
