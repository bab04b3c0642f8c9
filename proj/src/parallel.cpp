#include "ppbell/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <limits>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "ppbell/error.hpp"

namespace ppbell {

unsigned default_workers() {
  if (const char* env = std::getenv(kWorkersEnv); env != nullptr && *env != '\0') {
    try {
      const long v = std::stol(env);
      if (v >= 1) return static_cast<unsigned>(v);
    } catch (const std::exception&) {
    }
    throw ConfigError(std::string(kWorkersEnv) + " must be a positive integer, got '" + env + "'");
  }
  return std::max(1U, std::thread::hardware_concurrency());
}

unsigned effective_workers(std::uint64_t n_tasks, unsigned workers) {
  if (workers == 0) workers = default_workers();
  const std::uint64_t cap = std::max<std::uint64_t>(1, n_tasks);
  return static_cast<unsigned>(std::min<std::uint64_t>(workers, cap));
}

void parallel_for(std::uint64_t n_tasks, unsigned workers,
                  const std::function<void(std::uint64_t, unsigned)>& fn) {
  if (n_tasks == 0) return;
  const unsigned n_workers = effective_workers(n_tasks, workers);

  std::atomic<std::uint64_t> next{0};
  std::mutex error_mutex;
  std::uint64_t error_task = std::numeric_limits<std::uint64_t>::max();
  std::exception_ptr error;

  auto body = [&](unsigned worker) {
    for (;;) {
      const std::uint64_t task = next.fetch_add(1, std::memory_order_relaxed);
      if (task >= n_tasks) return;
      try {
        fn(task, worker);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (task < error_task) {
          error_task = task;
          error = std::current_exception();
        }
      }
    }
  };

  if (n_workers == 1) {
    body(0);
  } else {
    std::vector<std::jthread> threads;
    threads.reserve(n_workers);
    for (unsigned w = 0; w < n_workers; ++w) threads.emplace_back(body, w);
  }
  if (error) std::rethrow_exception(error);
}

}  // namespace ppbell
