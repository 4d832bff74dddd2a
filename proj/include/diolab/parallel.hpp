#ifndef DIOLAB_PARALLEL_HPP
#define DIOLAB_PARALLEL_HPP

#include <cstdint>
#include <functional>
#include <thread>
#include <vector>

namespace diolab {

// Runs fn(i) for i in [0, count).  Each index writes only its own output slot,
// so results are identical for any worker count.
inline void parallel_for(uint64_t count, int threads, const std::function<void(uint64_t)>& fn) {
  if (threads <= 1 || count < 2) {
    for (uint64_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  for (int w = 0; w < threads; ++w)
    pool.emplace_back([&, w] {
      for (uint64_t i = (uint64_t)w; i < count; i += (uint64_t)threads) fn(i);
    });
  for (auto& t : pool) t.join();
}

}  // namespace diolab

#endif  // DIOLAB_PARALLEL_HPP
