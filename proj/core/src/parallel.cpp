#include "voxcell/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <thread>
#include <vector>

namespace voxcell {
namespace {

int default_threads() {
  if (const char* env = std::getenv("VOXCELL_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

std::atomic<int>& threads_setting() {
  static std::atomic<int> n{default_threads()};
  return n;
}

}  // namespace

int thread_count() { return threads_setting().load(); }

void set_thread_count(int n) { threads_setting().store(std::max(1, n)); }

int chunk_count(std::size_t n) {
  // Small ranges are not worth a thread.
  constexpr std::size_t kMinChunk = 64;
  const auto by_size = static_cast<int>(std::max<std::size_t>(1, n / kMinChunk));
  return std::max(1, std::min(thread_count(), by_size));
}

void parallel_for(std::size_t n,
                  const std::function<void(std::size_t, std::size_t, int)>& fn) {
  const int chunks = chunk_count(n);
  if (chunks == 1) {
    fn(0, n, 0);
    return;
  }
  std::vector<std::thread> workers;
  std::vector<std::exception_ptr> errors(chunks);
  workers.reserve(chunks - 1);
  const std::size_t step = (n + chunks - 1) / chunks;
  for (int c = 1; c < chunks; ++c) {
    const std::size_t b = std::min(n, c * step);
    const std::size_t e = std::min(n, b + step);
    workers.emplace_back([&fn, &errors, b, e, c] {
      try {
        fn(b, e, c);
      } catch (...) {
        errors[c] = std::current_exception();
      }
    });
  }
  try {
    fn(0, std::min(n, step), 0);
  } catch (...) {
    errors[0] = std::current_exception();
  }
  for (auto& w : workers) w.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace voxcell
