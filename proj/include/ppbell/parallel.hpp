#pragma once

#include <cstdint>
#include <functional>

namespace ppbell {

/// Environment variable holding the default worker count.
inline constexpr const char* kWorkersEnv = "PPBELL_WORKERS";

/// Worker count from PPBELL_WORKERS, else the hardware concurrency (at least 1).
unsigned default_workers();

/// Runs fn(task, worker) for task in [0, n_tasks) on `workers` threads
/// (0 = default_workers()). Tasks are handed out through an atomic counter.
/// If tasks throw, the exception of the lowest-numbered failing task is
/// rethrown after all workers stop.
void parallel_for(std::uint64_t n_tasks, unsigned workers,
                  const std::function<void(std::uint64_t task, unsigned worker)>& fn);

/// Number of workers parallel_for will actually start.
unsigned effective_workers(std::uint64_t n_tasks, unsigned workers);

}  // namespace ppbell
