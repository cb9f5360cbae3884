#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "qsim/types.hpp"

namespace qsim {

// How to split the output index range across workers. Each task computes one
// chunk of chunk_size amplitudes (the last task may be short).
struct ExecutionPlan {
    addr_t start{0};
    addr_t end{0};  // exclusive
    addr_t chunk_size{1u << 16};
    unsigned workers{1};

    addr_t total() const { return end - start; }
    std::uint64_t task_count() const {
        return total() == 0 ? 0 : (total() + chunk_size - 1) / chunk_size;
    }

    void validate(addr_t dim) const;
};

struct TaskRange {
    addr_t start{0};
    addr_t len{0};
};

// The exact partition of the plan's range into per-task chunks, in order.
std::vector<TaskRange> plan_tasks(const ExecutionPlan& plan);

// Receives chunks strictly in ascending start order. run_parallel calls it
// from one thread at a time.
class ChunkSink {
  public:
    virtual ~ChunkSink() = default;
    virtual void write(const StateChunk& chunk) = 0;
};

class FunctionSink final : public ChunkSink {
  public:
    explicit FunctionSink(std::function<void(const StateChunk&)> fn) : fn_(std::move(fn)) {}
    void write(const StateChunk& chunk) override { fn_(chunk); }

  private:
    std::function<void(const StateChunk&)> fn_;
};

struct RunReport {
    double elapsed_seconds{0.0};
    std::uint64_t tasks_completed{0};
    std::uint64_t peak_amp_elements{0};  // accounting counter, not OS memory
};

// Raised when the run stops early (sink failure); what was already emitted
// is a valid prefix of the output.
class PartialRunError : public std::runtime_error {
  public:
    PartialRunError(const std::string& message, std::uint64_t tasks_emitted,
                    std::uint64_t tasks_total)
        : std::runtime_error(message + " (partial output: " + std::to_string(tasks_emitted) +
                             " of " + std::to_string(tasks_total) + " chunks emitted)"),
          tasks_emitted_(tasks_emitted),
          tasks_total_(tasks_total) {}
    std::uint64_t tasks_emitted() const { return tasks_emitted_; }
    std::uint64_t tasks_total() const { return tasks_total_; }

  private:
    std::uint64_t tasks_emitted_;
    std::uint64_t tasks_total_;
};

// Computes every index in [plan.start, plan.end) exactly once and delivers
// chunks to the sink in ascending order no matter how tasks finish. Output
// is bit-identical for every worker count. At most `workers` chunk buffers
// are live at once, so buffered amplitudes stay within workers * chunk_size
// elements.
RunReport run_parallel(const Circuit& circuit, const InputState& input,
                       const ExecutionPlan& plan, ChunkSink& sink);

}  // namespace qsim
