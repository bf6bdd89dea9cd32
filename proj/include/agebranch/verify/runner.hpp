#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace agebranch::verify {

// Evaluates fn(r) for r = 0..R-1 on `threads` workers. Results are stored
// by replicate index, so the output does not depend on scheduling.
template <class T, class F>
std::vector<T> run_replicates(std::size_t R, unsigned threads, F&& fn) {
  std::vector<T> out(R);
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(R, 1))));
  if (threads == 1) {
    for (std::size_t r = 0; r < R; ++r) out[r] = fn(r);
    return out;
  }
  constexpr std::size_t kChunk = 64;
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&] {
    for (;;) {
      const std::size_t lo = next.fetch_add(kChunk);
      if (lo >= R) return;
      const std::size_t hi = std::min(R, lo + kChunk);
      try {
        for (std::size_t r = lo; r < hi; ++r) out[r] = fn(r);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
        next.store(R);
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned i = 0; i < threads; ++i) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
  return out;
}

}  // namespace agebranch::verify
