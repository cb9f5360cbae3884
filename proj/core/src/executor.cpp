#include "qsim/executor.hpp"

#include <atomic>
#include <chrono>
#include <condition_variable>
#include <map>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "qsim/evaluate.hpp"

namespace qsim {

void ExecutionPlan::validate(addr_t dim) const {
    if (end <= start) throw std::invalid_argument("execution range is empty");
    if (end > dim) throw std::out_of_range("execution range exceeds state dimension");
    if (chunk_size < 1) throw std::invalid_argument("chunk size must be at least 1");
    if (workers < 1) throw std::invalid_argument("worker count must be at least 1");
}

std::vector<TaskRange> plan_tasks(const ExecutionPlan& plan) {
    std::vector<TaskRange> tasks;
    tasks.reserve(plan.task_count());
    for (addr_t s = plan.start; s < plan.end; s += plan.chunk_size)
        tasks.push_back({s, std::min<addr_t>(plan.chunk_size, plan.end - s)});
    return tasks;
}

RunReport run_parallel(const Circuit& circuit, const InputState& input,
                       const ExecutionPlan& plan, ChunkSink& sink) {
    circuit.validate();
    input.validate();
    if (input.num_qubits() != circuit.num_qubits)
        throw std::invalid_argument("input state qubit count does not match circuit");
    plan.validate(circuit.dim());

    const std::vector<TaskRange> tasks = plan_tasks(plan);
    const CompiledCircuit compiled(circuit);
    const unsigned num_workers =
        static_cast<unsigned>(std::min<std::uint64_t>(plan.workers, tasks.size()));

    std::atomic<std::uint64_t> next_task{0};
    std::atomic<std::uint64_t> live_amps{0};
    std::atomic<std::uint64_t> peak_amps{0};

    std::mutex mu;
    std::condition_variable cv;
    std::uint64_t emitted = 0;          // tasks written to the sink
    std::map<std::uint64_t, StateChunk> ready;  // finished, waiting on order
    std::exception_ptr failure;
    bool aborted = false;

    // A task may hold a buffer only while its index is inside the reorder
    // window [emitted, emitted + num_workers), which bounds live amplitude
    // storage to num_workers chunks.
    auto worker = [&]() {
        for (;;) {
            const std::uint64_t t = next_task.fetch_add(1);
            if (t >= tasks.size()) return;
            {
                std::unique_lock lk(mu);
                cv.wait(lk, [&] { return aborted || t < emitted + num_workers; });
                if (aborted) return;
            }

            const std::uint64_t cur = live_amps.fetch_add(tasks[t].len) + tasks[t].len;
            std::uint64_t prev_peak = peak_amps.load();
            while (cur > prev_peak && !peak_amps.compare_exchange_weak(prev_peak, cur)) {
            }

            StateChunk chunk;
            try {
                chunk = evaluate_chunk(compiled, input, tasks[t].start, tasks[t].len);
            } catch (...) {
                std::lock_guard lk(mu);
                if (!failure) failure = std::current_exception();
                aborted = true;
                cv.notify_all();
                return;
            }

            std::lock_guard lk(mu);
            if (aborted) return;
            ready.emplace(t, std::move(chunk));
            for (auto it = ready.find(emitted); it != ready.end();
                 it = ready.find(emitted)) {
                try {
                    sink.write(it->second);
                } catch (...) {
                    if (!failure) failure = std::current_exception();
                    aborted = true;
                    ready.clear();
                    cv.notify_all();
                    return;
                }
                live_amps.fetch_sub(it->second.size());
                ready.erase(it);
                ++emitted;
            }
            cv.notify_all();
        }
    };

    const auto t0 = std::chrono::steady_clock::now();
    std::vector<std::thread> pool;
    pool.reserve(num_workers);
    for (unsigned w = 0; w < num_workers; ++w) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    const auto t1 = std::chrono::steady_clock::now();

    if (failure) {
        std::string why = "task failure";
        try {
            std::rethrow_exception(failure);
        } catch (const std::exception& e) {
            why = e.what();
        } catch (...) {
        }
        throw PartialRunError(why, emitted, tasks.size());
    }

    RunReport report;
    report.elapsed_seconds = std::chrono::duration<double>(t1 - t0).count();
    report.tasks_completed = emitted;
    report.peak_amp_elements = peak_amps.load();
    return report;
}

}  // namespace qsim
