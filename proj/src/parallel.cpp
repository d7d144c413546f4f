#include "fracfem/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace fracfem {
namespace {
// Nested parallel_for calls run inline so an outer pool is never oversubscribed.
thread_local bool inside_pool = false;
}  // namespace

unsigned worker_count() {
  if (const char* env = std::getenv("FRACFEM_THREADS")) {
    try {
      const long n = std::stol(env);
      if (n >= 1) return static_cast<unsigned>(n);
    } catch (const std::exception&) {
      // fall through to the hardware default
    }
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body,
                  unsigned max_workers) {
  unsigned workers = worker_count();
  if (max_workers > 0) workers = std::min(workers, max_workers);
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, n));
  if (workers <= 1 || inside_pool) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    const bool outer = inside_pool;
    inside_pool = true;
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        body(i);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = n;
      }
    }
    inside_pool = outer;
  };
  std::vector<std::thread> pool;
  pool.reserve(workers - 1);
  for (unsigned w = 1; w < workers; ++w) pool.emplace_back(worker);
  worker();
  for (auto& thread : pool) thread.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace fracfem
