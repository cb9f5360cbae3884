// qsim: chunked state-vector simulator for phased-permutation circuits.
//
// Subcommands:
//   run      evaluate a range of output amplitudes and write them out
//   compile  materialize the whole-circuit sparse matrix to a file
//   verify   run the invariant suite on a circuit or a sparse matrix file
//   bench    timed scaling sweep over qubit counts, CSV output

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <thread>

#include <CLI11.hpp>

#include "qsim/analysis.hpp"
#include "qsim/compose.hpp"
#include "qsim/evaluate.hpp"
#include "qsim/executor.hpp"
#include "qsim/format.hpp"
#include "qsim/step.hpp"
#include "qsim/types.hpp"
#include "qsim/workload.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitInput = 2;
constexpr int kExitRuntime = 3;

class InputError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

class UsageError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

qsim::ParsedCircuit load_circuit(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open circuit file '" + path + "'");
    try {
        return qsim::parse_circuit(in);
    } catch (const qsim::ParseError& e) {
        throw InputError(path + ": " + e.what());
    }
}

void warn_if_unnormalized(const qsim::InputState& input) {
    const double norm = input.norm();
    if (std::abs(norm - 1.0) > 1e-9)
        std::fprintf(stderr, "warning: input state norm is %.17g; accepting unnormalized input\n",
                     norm);
}

int explicit_cap(const std::optional<int>& flag) {
    if (flag) return *flag;
    if (const char* env = std::getenv("QSIM_MAX_EXPLICIT_QUBITS")) {
        try {
            return std::stoi(env);
        } catch (const std::exception&) {
            throw InputError("QSIM_MAX_EXPLICIT_QUBITS is not a number: '" + std::string(env) +
                             "'");
        }
    }
    return qsim::kDefaultExplicitQubitCap;
}

unsigned default_workers() {
    const unsigned n = std::thread::hardware_concurrency();
    return n ? n : 1;
}

void print_probability_report(const qsim::ProbabilityReport& rep, const std::string& style,
                              std::ostream& out) {
    char buf[160];
    if (style == "kv") {
        std::snprintf(buf, sizeof(buf), "total_norm2=%.17g\n", rep.total_norm2);
        out << buf;
        out << "covered_start=" << rep.covered_start << "\ncovered_end=" << rep.covered_end
            << "\n";
        for (std::size_t i = 0; i < rep.top.size(); ++i) {
            std::snprintf(buf, sizeof(buf), "top.%zu.index=%llu\ntop.%zu.p=%.17g\n", i + 1,
                          static_cast<unsigned long long>(rep.top[i].index), i + 1,
                          rep.top[i].probability);
            out << buf;
        }
        for (std::size_t j = 0; j < rep.marginal_one.size(); ++j) {
            std::snprintf(buf, sizeof(buf), "marginal.%zu=%.17g\n", j + 1, rep.marginal_one[j]);
            out << buf;
        }
        return;
    }
    std::snprintf(buf, sizeof(buf), "total |amp|^2 over [%llu, %llu): %.12g\n",
                  static_cast<unsigned long long>(rep.covered_start),
                  static_cast<unsigned long long>(rep.covered_end), rep.total_norm2);
    out << buf;
    out << "top basis states:\n";
    for (const auto& t : rep.top) {
        std::snprintf(buf, sizeof(buf), "  %llu  p=%.12g\n",
                      static_cast<unsigned long long>(t.index), t.probability);
        out << buf;
    }
    out << "P(a(j)=1) per qubit:\n";
    for (std::size_t j = 0; j < rep.marginal_one.size(); ++j) {
        std::snprintf(buf, sizeof(buf), "  a(%zu): %.12g\n", j + 1, rep.marginal_one[j]);
        out << buf;
    }
}

struct RunOptions {
    std::string circuit_path;
    std::uint64_t start = 0;
    std::optional<std::uint64_t> len;
    std::uint64_t chunk_size = std::uint64_t{1} << 16;
    unsigned workers = default_workers();
    std::string out_path;
    std::string format = "text";
    bool post = false;
    std::string report_style = "text";
    int top_k = 16;
};

int cmd_run(const RunOptions& opt) {
    if (opt.chunk_size < 1) throw UsageError("--chunk-size must be at least 1");
    if (opt.workers < 1) throw UsageError("--workers must be at least 1");
    if (opt.top_k < 0) throw UsageError("--top-k must be non-negative");

    const auto [circuit, input] = load_circuit(opt.circuit_path);
    warn_if_unnormalized(input);

    const qsim::addr_t dim = circuit.dim();
    if (opt.start >= dim)
        throw InputError("--start " + std::to_string(opt.start) + " is outside the 2^" +
                         std::to_string(circuit.num_qubits) + " state vector");
    const std::uint64_t len = opt.len.value_or(dim - opt.start);
    if (len == 0 || len > dim - opt.start)
        throw InputError("--len " + std::to_string(len) + " exceeds the state vector end");

    qsim::ExecutionPlan plan;
    plan.start = opt.start;
    plan.end = opt.start + len;
    plan.chunk_size = opt.chunk_size;
    plan.workers = opt.workers;

    std::ofstream file;
    std::ostream* out = &std::cout;
    if (!opt.out_path.empty() && opt.out_path != "-") {
        const auto mode = opt.format == "binary" ? std::ios::binary | std::ios::out
                                                 : std::ios::out;
        file.open(opt.out_path, mode);
        if (!file) throw InputError("cannot open output file '" + opt.out_path + "'");
        out = &file;
    }
    const qsim::ChunkFormat chunk_format =
        opt.format == "binary" ? qsim::ChunkFormat::Binary : qsim::ChunkFormat::Text;

    std::optional<qsim::ProbabilityAccumulator> post;
    if (opt.post) post.emplace(circuit.num_qubits, opt.top_k);

    qsim::FunctionSink sink([&](const qsim::StateChunk& chunk) {
        qsim::write_chunk(chunk, chunk_format, *out);
        if (post) post->feed(chunk);
    });

    const qsim::RunReport report = qsim::run_parallel(circuit, input, plan, sink);
    out->flush();
    if (!*out) throw std::runtime_error("output stream failed");

    std::fprintf(stderr, "computed %llu amplitudes in %.3f s (%llu chunks, peak buffer %llu amps)\n",
                 static_cast<unsigned long long>(len), report.elapsed_seconds,
                 static_cast<unsigned long long>(report.tasks_completed),
                 static_cast<unsigned long long>(report.peak_amp_elements));

    if (post) print_probability_report(post->report(), opt.report_style, std::cout);
    return kExitOk;
}

struct CompileOptions {
    std::string circuit_path;
    std::string out_path;
    std::optional<int> max_qubits;
};

int cmd_compile(const CompileOptions& opt) {
    const auto [circuit, input] = load_circuit(opt.circuit_path);
    const int cap = explicit_cap(opt.max_qubits);
    if (circuit.num_qubits > cap)
        throw InputError("circuit has " + std::to_string(circuit.num_qubits) +
                         " qubits but the explicit-matrix cap is " + std::to_string(cap) +
                         "; use 'qsim run' (lazy evaluation) or raise --max-qubits");

    const qsim::SparseUnitary u = qsim::compose_explicit(circuit, cap);
    std::ofstream out(opt.out_path);
    if (!out) throw InputError("cannot open output file '" + opt.out_path + "'");
    qsim::serialize_sparse(u, out);
    out.flush();
    if (!out) throw std::runtime_error("output stream failed");

    const qsim::UnitaryReport rep = qsim::verify_unitary(u);
    std::printf("wrote %llu rows to %s\n", static_cast<unsigned long long>(u.dim),
                opt.out_path.c_str());
    std::printf("unitary: %s (max value deviation %.3g)\n", rep.is_unitary ? "yes" : "NO",
                rep.max_deviation);
    if (!rep.is_unitary) {
        std::printf("  %s\n", rep.detail.c_str());
        return kExitRuntime;
    }
    return kExitOk;
}

struct VerifyOptions {
    std::string circuit_path;
    std::string sparse_path;
    bool against_dense = false;
    std::optional<int> max_qubits;
};

int verify_circuit_file(const VerifyOptions& opt) {
    const auto [circuit, input] = load_circuit(opt.circuit_path);
    warn_if_unnormalized(input);
    const int cap = explicit_cap(opt.max_qubits);
    if (circuit.num_qubits > cap)
        throw InputError("verification scans all 2^M rows; cap is " + std::to_string(cap) +
                         " qubits (override with --max-qubits)");

    bool all_ok = true;
    auto check = [&](const char* name, bool ok, const std::string& detail) {
        std::printf("check %-18s %s%s%s\n", name, ok ? "ok" : "FAIL",
                    detail.empty() ? "" : "  ", detail.c_str());
        all_ok = all_ok && ok;
    };

    char detail[128];

    const qsim::UnitaryReport lazy = qsim::verify_circuit(circuit);
    std::snprintf(detail, sizeof(detail), "(max value deviation %.3g)", lazy.max_deviation);
    check("bijectivity+values", lazy.is_unitary, lazy.is_unitary ? detail : lazy.detail);

    bool symmetric = true;
    for (const qsim::GateStep& step : circuit.steps)
        if (step.kind != qsim::GateKind::ControlledPhase &&
            !qsim::step_matrix_is_symmetric(step, circuit.num_qubits))
            symmetric = false;
    check("step symmetry", symmetric, "");

    // Norm conservation over the full range.
    {
        qsim::ProbabilityAccumulator acc(circuit.num_qubits, 0);
        qsim::ExecutionPlan plan;
        plan.start = 0;
        plan.end = circuit.dim();
        plan.chunk_size = std::min<qsim::addr_t>(plan.end, std::uint64_t{1} << 16);
        plan.workers = default_workers();
        qsim::FunctionSink sink([&](const qsim::StateChunk& c) { acc.feed(c); });
        qsim::run_parallel(circuit, input, plan, sink);
        const double out_norm = std::sqrt(acc.report().total_norm2);
        const double in_norm = input.norm();
        const bool ok = std::abs(out_norm - in_norm) <= 1e-10 * std::max(1.0, in_norm);
        std::snprintf(detail, sizeof(detail), "(|out| %.12g vs |in| %.12g)", out_norm, in_norm);
        check("norm conservation", ok, detail);
    }

    if (opt.against_dense) {
        if (circuit.num_qubits > qsim::kDenseQubitCap)
            throw InputError("--against-dense needs at most " +
                             std::to_string(qsim::kDenseQubitCap) + " qubits");
        const auto reference = qsim::dense_apply_circuit(circuit, qsim::dense_input_vector(input));
        const qsim::StateChunk full = qsim::evaluate_chunk(circuit, input, 0, circuit.dim());
        double worst = 0.0;
        for (qsim::addr_t i = 0; i < circuit.dim(); ++i)
            worst = std::max(worst, std::abs(full.amps[i] - reference[i]));
        std::snprintf(detail, sizeof(detail), "(max abs difference %.3g)", worst);
        check("dense oracle", worst <= 1e-12, detail);
    }

    return all_ok ? kExitOk : kExitRuntime;
}

int verify_sparse_file(const VerifyOptions& opt) {
    std::ifstream in(opt.sparse_path);
    if (!in) throw InputError("cannot open sparse matrix file '" + opt.sparse_path + "'");
    qsim::SparseUnitary u;
    try {
        u = qsim::parse_sparse(in);
    } catch (const qsim::ParseError& e) {
        throw InputError(opt.sparse_path + ": " + e.what());
    }
    const qsim::UnitaryReport rep = qsim::verify_unitary(u);
    std::printf("check %-18s %s  (max value deviation %.3g)%s%s\n", "unitary",
                rep.is_unitary ? "ok" : "FAIL", rep.max_deviation,
                rep.detail.empty() ? "" : "  ", rep.detail.c_str());
    return rep.is_unitary ? kExitOk : kExitRuntime;
}

struct BenchOptions {
    qsim::BenchConfig config;
    std::string csv_path;
};

int cmd_bench(const BenchOptions& opt) {
    const auto& c = opt.config;
    if (c.min_qubits < 1 || c.min_qubits > c.max_qubits || c.max_qubits > qsim::kMaxQubits)
        throw UsageError("qubit range must satisfy 1 <= min <= max <= " +
                         std::to_string(qsim::kMaxQubits));
    if (c.steps < 1 || c.repeats < 1 || c.workers < 1 || c.chunk_size < 1)
        throw UsageError("--steps, --repeats, --workers, and --chunk-size must be at least 1");

    const auto records = qsim::run_bench_sweep(opt.config);

    if (!opt.csv_path.empty()) {
        std::ofstream csv(opt.csv_path);
        if (!csv) throw InputError("cannot open CSV file '" + opt.csv_path + "'");
        qsim::write_bench_csv(records, csv);
        if (!csv) throw std::runtime_error("CSV write failed");
    } else {
        qsim::write_bench_csv(records, std::cout);
    }

    std::ostream& summary = opt.csv_path.empty() ? std::cerr : std::cout;
    char buf[128];
    for (const qsim::BenchRecord& r : records) {
        std::snprintf(buf, sizeof(buf), "M=%d: %.6g s", r.num_qubits, r.seconds);
        summary << buf;
        if (r.has_growth) {
            std::snprintf(buf, sizeof(buf), "  (x%.3g per added qubit)", r.growth);
            summary << buf;
        }
        summary << '\n';
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Chunked state-vector simulator for phased-permutation circuits"};
    app.require_subcommand(1);

    RunOptions run_opt;
    CLI::App* run = app.add_subcommand("run", "Evaluate output amplitudes over a range");
    run->add_option("--circuit", run_opt.circuit_path, "Circuit file")->required();
    run->add_option("--start", run_opt.start, "First output index");
    run->add_option("--len", run_opt.len, "Number of amplitudes (default: through the end)");
    run->add_option("--chunk-size", run_opt.chunk_size, "Amplitudes per task");
    run->add_option("--workers", run_opt.workers, "Worker thread count");
    run->add_option("--out", run_opt.out_path, "Output path (default: stdout)");
    run->add_option("--format", run_opt.format, "Output format")
        ->check(CLI::IsMember({"text", "binary"}));
    run->add_flag("--post", run_opt.post, "Append probability post-processing report");
    run->add_option("--report", run_opt.report_style, "Post report style")
        ->check(CLI::IsMember({"text", "kv"}));
    run->add_option("--top-k", run_opt.top_k, "Top basis states in the post report");

    CompileOptions compile_opt;
    CLI::App* compile = app.add_subcommand("compile", "Write the explicit sparse matrix");
    compile->add_option("--circuit", compile_opt.circuit_path, "Circuit file")->required();
    compile->add_option("--out", compile_opt.out_path, "Sparse matrix output path")->required();
    compile->add_option("--max-qubits", compile_opt.max_qubits,
                        "Explicit materialization cap (default 26, or QSIM_MAX_EXPLICIT_QUBITS)");

    VerifyOptions verify_opt;
    CLI::App* verify = app.add_subcommand("verify", "Run the invariant suite");
    verify->add_option("--circuit", verify_opt.circuit_path, "Circuit file");
    verify->add_option("--sparse", verify_opt.sparse_path, "Sparse matrix file");
    verify->add_flag("--against-dense", verify_opt.against_dense,
                     "Also compare against the dense oracle (M <= 10)");
    verify->add_option("--max-qubits", verify_opt.max_qubits, "Full-scan cap override");

    BenchOptions bench_opt;
    bench_opt.config.workers = default_workers();
    bench_opt.config.repeats = 3;
    CLI::App* bench = app.add_subcommand("bench", "Scaling sweep with CSV output");
    bench->add_option("--min-qubits", bench_opt.config.min_qubits, "Sweep start (default 16)");
    bench->add_option("--max-qubits", bench_opt.config.max_qubits, "Sweep end (default 22)");
    bench->add_option("--steps", bench_opt.config.steps, "Gates per generated circuit");
    bench->add_option("--workers", bench_opt.config.workers, "Worker thread count");
    bench->add_option("--chunk-size", bench_opt.config.chunk_size, "Amplitudes per task");
    bench->add_option("--repeats", bench_opt.config.repeats, "Timed repeats per qubit count");
    bench->add_option("--seed", bench_opt.config.seed, "Circuit generator seed");
    bench->add_option("--csv", bench_opt.csv_path, "CSV output path (default: stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (*run) {
            if (run_opt.format == "binary" && (run_opt.out_path.empty() || run_opt.out_path == "-")) {
                std::fprintf(stderr, "error: --format binary requires --out <file>\n");
                return kExitUsage;
            }
            return cmd_run(run_opt);
        }
        if (*compile) return cmd_compile(compile_opt);
        if (*verify) {
            if (verify_opt.circuit_path.empty() == verify_opt.sparse_path.empty()) {
                std::fprintf(stderr, "error: verify needs exactly one of --circuit or --sparse\n");
                return kExitUsage;
            }
            return verify_opt.sparse_path.empty() ? verify_circuit_file(verify_opt)
                                                  : verify_sparse_file(verify_opt);
        }
        if (*bench) return cmd_bench(bench_opt);
    } catch (const UsageError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitUsage;
    } catch (const InputError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitInput;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitInput;
    } catch (const std::out_of_range& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitInput;
    } catch (const qsim::PartialRunError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitRuntime;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitRuntime;
    }
    return kExitUsage;
}
