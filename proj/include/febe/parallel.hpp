#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <type_traits>
#include <vector>

namespace febe {

/// Worker count for parallel_map; never less than one.
inline unsigned default_thread_count() { return std::max(1u, std::thread::hardware_concurrency()); }

/// Applies f to every input on a small thread pool. Output order matches the
/// input order, so results do not depend on scheduling. The first exception
/// thrown by f is rethrown on the calling thread.
template <typename T, typename F>
auto parallel_map(const std::vector<T>& inputs, F&& f, unsigned threads = default_thread_count())
    -> std::vector<std::invoke_result_t<F&, const T&>> {
  using R = std::invoke_result_t<F&, const T&>;
  std::vector<R> out(inputs.size());
  const unsigned workers = std::min<std::size_t>(std::max(threads, 1u), std::max<std::size_t>(inputs.size(), 1));
  if (workers <= 1) {
    for (std::size_t i = 0; i < inputs.size(); ++i) out[i] = f(inputs[i]);
    return out;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto work = [&] {
    for (std::size_t i = next++; i < inputs.size(); i = next++) {
      try {
        out[i] = f(inputs[i]);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
  return out;
}

}  // namespace febe
