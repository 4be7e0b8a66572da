#include "cubound/parallel.hpp"

#include <algorithm>
#include <cstdlib>
#include <exception>
#include <string>
#include <thread>
#include <vector>

namespace cubound {

std::size_t worker_count() {
  std::size_t workers = std::max(1u, std::thread::hardware_concurrency());
  if (const char* cap = std::getenv("CU_BOUND_THREADS")) {
    try {
      const auto limit = std::stoul(cap);
      if (limit >= 1) workers = std::min<std::size_t>(workers, limit);
    } catch (const std::exception&) {
      // Unparseable values are ignored.
    }
  }
  return workers;
}

std::size_t chunk_count(std::size_t n, std::size_t min_chunk) {
  if (n == 0) return 0;
  return std::clamp<std::size_t>(n / std::max<std::size_t>(min_chunk, 1), 1, worker_count());
}

void parallel_chunks(std::size_t n,
                     const std::function<void(std::size_t, std::size_t, std::size_t)>& fn,
                     std::size_t min_chunk) {
  const auto chunks = chunk_count(n, min_chunk);
  if (chunks <= 1) {
    if (n > 0) fn(0, 0, n);
    return;
  }
  std::vector<std::exception_ptr> errors(chunks);
  std::vector<std::thread> threads;
  threads.reserve(chunks);
  for (std::size_t c = 0; c < chunks; ++c) {
    const auto begin = n * c / chunks;
    const auto end = n * (c + 1) / chunks;
    threads.emplace_back([&, c, begin, end] {
      try {
        fn(c, begin, end);
      } catch (...) {
        errors[c] = std::current_exception();
      }
    });
  }
  for (auto& t : threads) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace cubound
