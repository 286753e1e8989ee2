#include "textlab/parallel.hpp"

#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace textlab {

namespace {
std::atomic<unsigned> g_threads{0};

unsigned effective_threads() {
  unsigned n = g_threads.load();
  if (n == 0) n = std::thread::hardware_concurrency();
  return n == 0 ? 1 : n;
}

void spawn_workers(size_t begin, size_t end,
                   const std::function<void(size_t)>& fn, unsigned workers) {
  size_t total = end - begin;
  std::vector<std::thread> pool;
  std::exception_ptr first_error = nullptr;
  std::atomic<bool> failed{false};
  std::mutex err_mutex;
  size_t chunk = (total + workers - 1) / workers;
  for (unsigned w = 0; w < workers; ++w) {
    size_t lo = begin + size_t(w) * chunk;
    size_t hi = std::min(end, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([&, lo, hi] {
      try {
        for (size_t i = lo; i < hi && !failed.load(std::memory_order_relaxed);
             ++i)
          fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(err_mutex);
        if (!first_error) first_error = std::current_exception();
        failed.store(true);
      }
    });
  }
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}
}  // namespace

void set_thread_count(unsigned n) { g_threads.store(n); }
unsigned thread_count() { return effective_threads(); }

void parallel_for(size_t begin, size_t end,
                  const std::function<void(size_t)>& fn) {
  if (end <= begin) return;
  size_t total = end - begin;
  unsigned workers = effective_threads();
  // iterations here are cheap (one row each); below this count the thread
  // spawn/join overhead dominates. Serial and parallel runs produce
  // identical results, so this is purely a speed knob.
  constexpr size_t kSerialThreshold = 64;
  if (workers <= 1 || total < kSerialThreshold) {
    for (size_t i = begin; i < end; ++i) fn(i);
    return;
  }
  if (workers > total) workers = static_cast<unsigned>(total);
  spawn_workers(begin, end, fn, workers);
}

void parallel_jobs(const std::vector<std::function<void()>>& jobs) {
  // jobs are few but heavy (a whole restart or training run each): fan out
  // whenever there is more than one worker
  if (jobs.empty()) return;
  unsigned workers = effective_threads();
  if (workers > jobs.size()) workers = static_cast<unsigned>(jobs.size());
  std::function<void(size_t)> call = [&](size_t i) { jobs[i](); };
  if (workers <= 1 || jobs.size() < 2) {
    for (size_t i = 0; i < jobs.size(); ++i) call(i);
    return;
  }
  spawn_workers(0, jobs.size(), call, workers);
}

}  // namespace textlab
