#pragma once

#include <atomic>
#include <condition_variable>
#include <cstdint>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace pepevolve::util {

/// Fixed worker pool for index-parallel loops. Results are written by index,
/// so output is identical to the serial path regardless of thread count.
class ThreadPool {
 public:
  explicit ThreadPool(int threads);
  ~ThreadPool();
  ThreadPool(const ThreadPool&) = delete;
  ThreadPool& operator=(const ThreadPool&) = delete;

  int size() const { return static_cast<int>(workers_.size()) + 1; }
  void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

 private:
  void worker_loop();

  std::vector<std::thread> workers_;
  std::mutex mutex_;
  std::condition_variable cv_task_;
  std::condition_variable cv_done_;
  const std::function<void(std::size_t)>* task_ = nullptr;
  std::size_t task_n_ = 0;
  std::uint64_t generation_ = 0;
  std::atomic<std::size_t> next_{0};
  std::size_t active_ = 0;
  bool stop_ = false;
};

std::uint64_t fnv1a64(const std::string& s);

/// Deterministic stream-salting for per-epoch rngs.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt);

}  // namespace pepevolve::util
