// Copyright 2026 The deceptive-pi Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef DECEPTIVE_PARALLEL_H_
#define DECEPTIVE_PARALLEL_H_

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace deceptive {

// Runs body(begin, end) over [0, n) in chunks on up to `threads` workers.
// Chunks are claimed dynamically, so callers must write results by index;
// any reduction happens afterwards on the calling thread. The first
// exception thrown by a worker is rethrown here.
template <class Body>
void ParallelFor(size_t n, int threads, size_t chunk, Body&& body) {
  if (n == 0) return;
  chunk = std::max<size_t>(chunk, 1);
  const size_t num_chunks = (n + chunk - 1) / chunk;
  const size_t workers =
      std::min<size_t>(static_cast<size_t>(std::max(threads, 1)), num_chunks);
  if (workers <= 1) {
    body(size_t{0}, n);
    return;
  }

  std::atomic<size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto work = [&] {
    for (;;) {
      const size_t c = next.fetch_add(1);
      if (c >= num_chunks) return;
      const size_t begin = c * chunk;
      const size_t end = std::min(n, begin + chunk);
      try {
        body(begin, end);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
        next.store(num_chunks);
        return;
      }
    }
  };

  std::vector<std::thread> pool;
  pool.reserve(workers - 1);
  for (size_t w = 1; w < workers; ++w) pool.emplace_back(work);
  work();
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace deceptive

#endif  // DECEPTIVE_PARALLEL_H_
