#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace mtprep {

// Runs fn(block_index, begin, end) for every fixed-size block of [0, n).
// Block boundaries depend only on `n` and `block_size`, never on the thread
// count, so callers that reduce per-block results in block order get
// bitwise-identical output for any `threads` value. The first exception
// thrown by a block is rethrown on the calling thread.
template <typename Fn>
void for_each_block(std::size_t n, std::size_t block_size, unsigned threads,
                    Fn&& fn) {
  if (n == 0) return;
  block_size = std::max<std::size_t>(block_size, 1);
  const std::size_t blocks = (n + block_size - 1) / block_size;
  auto run = [&](std::size_t b) {
    const std::size_t begin = b * block_size;
    fn(b, begin, std::min(n, begin + block_size));
  };
  if (threads <= 1 || blocks == 1) {
    for (std::size_t b = 0; b < blocks; ++b) run(b);
    return;
  }
  std::atomic<std::size_t> cursor{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  const unsigned workers =
      static_cast<unsigned>(std::min<std::size_t>(threads, blocks));
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t b; (b = cursor.fetch_add(1)) < blocks;) {
        try {
          run(b);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

inline std::size_t block_count(std::size_t n, std::size_t block_size) {
  return (n + block_size - 1) / block_size;
}

}  // namespace mtprep
