// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <thread>
#include <vector>

namespace lvsd {

/// Runs fn(row) for every row in [0, rows). Rows are distributed in
/// contiguous blocks; each row is processed exactly once, so any
/// row-independent computation produces output identical to the
/// sequential order.
inline void parallel_for_rows(int rows, int threads, const std::function<void(int)>& fn) {
  if (threads <= 1 || rows <= 1) {
    for (int r = 0; r < rows; ++r) fn(r);
    return;
  }
  const int workers = std::min(threads, rows);
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([=, &fn] {
      for (int r = w; r < rows; r += workers) fn(r);
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace lvsd
