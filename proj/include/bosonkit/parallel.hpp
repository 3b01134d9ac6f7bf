// Copyright 2026 The bosonkit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace bosonkit {

namespace detail {
inline std::atomic<unsigned>& thread_limit_storage() {
  static std::atomic<unsigned> limit{0};
  return limit;
}
}  // namespace detail

/// Caps the worker threads used by library kernels. 0 means one per core.
inline void set_thread_limit(unsigned threads) { detail::thread_limit_storage() = threads; }

inline unsigned thread_limit() {
  unsigned limit = detail::thread_limit_storage();
  if (limit == 0) limit = std::max(1u, std::thread::hardware_concurrency());
  return limit;
}

/// Runs fn(chunk, begin, end) for every chunk of [0, total) of size \p chunk.
/// Chunk boundaries depend only on (total, chunk), never on the thread count,
/// so callers that write per-chunk results get identical output for any
/// thread limit.
template <class Fn>
void for_each_chunk(std::size_t total, std::size_t chunk, Fn&& fn) {
  if (total == 0) return;
  chunk = std::max<std::size_t>(chunk, 1);
  const std::size_t chunks = (total + chunk - 1) / chunk;
  const auto run = [&](std::size_t c) {
    const std::size_t begin = c * chunk;
    fn(c, begin, std::min(total, begin + chunk));
  };
  const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(thread_limit(), chunks));
  if (workers <= 1) {
    for (std::size_t c = 0; c < chunks; ++c) run(c);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t c = next++; c < chunks; c = next++) {
        try {
          run(c);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
          next = chunks;
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace bosonkit
