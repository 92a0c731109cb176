#pragma once

#include <algorithm>
#include <functional>
#include <thread>
#include <vector>

namespace landau {

// Chunked parallel loop over [0, n).  Each index writes only its own output
// slot, so results are deterministic regardless of scheduling.
inline void parallel_for(int n, const std::function<void(int)>& body, int max_threads = 0) {
  const int hw = max_threads > 0 ? max_threads
                                 : static_cast<int>(std::thread::hardware_concurrency());
  const int workers = std::max(1, std::min(hw, n));
  if (workers == 1) {
    for (int i = 0; i < n; ++i) body(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w)
    pool.emplace_back([&, w] {
      for (int i = w; i < n; i += workers) body(i);
    });
  for (std::thread& t : pool) t.join();
}

}  // namespace landau
