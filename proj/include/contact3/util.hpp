#pragma once

#include <atomic>
#include <cstdint>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace contact3 {

// splitmix64: tiny, seedable, identical on every platform.
class Rng {
public:
  explicit Rng(uint64_t seed) : s_(seed) {}
  uint64_t next() {
    uint64_t z = (s_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }
  // uniform in [0,1)
  double uniform() { return (next() >> 11) * 0x1.0p-53; }
  // uniform in [lo,hi)
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  // integer in [0,n)
  uint64_t below(uint64_t n) { return next() % n; }

private:
  uint64_t s_;
};

// Runs f(i) for i in [0,n) across hardware threads.  Each index writes only
// its own output slot, so results are deterministic regardless of scheduling.
inline void parallel_for(int n, const std::function<void(int)>& f) {
  unsigned hw = std::thread::hardware_concurrency();
  if (hw <= 1 || n < 4) {
    for (int i = 0; i < n; ++i) f(i);
    return;
  }
  const unsigned workers = hw < 8u ? hw : 8u;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  std::atomic<int> cursor{0};
  std::exception_ptr err;
  std::mutex err_mu;
  for (unsigned w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      try {
        for (int i = cursor.fetch_add(1); i < n; i = cursor.fetch_add(1)) f(i);
      } catch (...) {
        std::lock_guard<std::mutex> lk(err_mu);
        if (!err) err = std::current_exception();
      }
    });
  for (auto& t : pool) t.join();
  if (err) std::rethrow_exception(err);
}

}  // namespace contact3
