#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace lambdap {

/// Number of worker threads used when a call passes threads = 0.
/// Defaults to std::thread::hardware_concurrency().
unsigned default_threads();
void set_default_threads(unsigned threads);

/// Runs body(i) for i in [0, count).  Iterations must only write to
/// slot i of caller-owned storage; the first exception is rethrown.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body,
                  unsigned threads = 0);

/// Indexed map: result[i] = fn(i).  Reductions over the result are then
/// independent of scheduling.
template <class T, class Fn>
std::vector<T> parallel_map(std::size_t count, Fn&& fn, unsigned threads = 0) {
  std::vector<T> out(count);
  parallel_for(
      count, [&](std::size_t i) { out[i] = fn(i); }, threads);
  return out;
}

}  // namespace lambdap
