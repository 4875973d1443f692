#include "pindelay/parallel.hpp"

#include <cstdlib>
#include <exception>
#include <string>
#include <thread>
#include <vector>

namespace pindelay {

int thread_budget() {
  int hw = static_cast<int>(std::thread::hardware_concurrency());
  if (hw < 1) hw = 1;
  if (const char* env = std::getenv("PINDELAY_THREADS")) {
    try {
      int cap = std::stoi(env);
      if (cap >= 1 && cap < hw) return cap;
      if (cap >= 1) return cap;  // allow oversubscription if asked
    } catch (...) {
      // unreadable value: ignore and fall through to hardware count
    }
  }
  return hw;
}

namespace {
thread_local bool inside_parallel_region = false;
}

void parallel_for(std::ptrdiff_t count,
                  const std::function<void(std::ptrdiff_t)>& fn) {
  if (count <= 0) return;
  int workers = thread_budget();
  if (workers > count) workers = static_cast<int>(count);
  // nested regions run serially instead of multiplying threads
  if (workers <= 1 || inside_parallel_region) {
    for (std::ptrdiff_t i = 0; i < count; ++i) fn(i);
    return;
  }

  std::vector<std::exception_ptr> errors(static_cast<size_t>(workers));
  std::vector<std::thread> pool;
  pool.reserve(static_cast<size_t>(workers));
  const std::ptrdiff_t chunk = (count + workers - 1) / workers;
  for (int w = 0; w < workers; ++w) {
    const std::ptrdiff_t lo = static_cast<std::ptrdiff_t>(w) * chunk;
    const std::ptrdiff_t hi = std::min<std::ptrdiff_t>(lo + chunk, count);
    pool.emplace_back([&, lo, hi, w] {
      inside_parallel_region = true;
      try {
        for (std::ptrdiff_t i = lo; i < hi; ++i) fn(i);
      } catch (...) {
        errors[static_cast<size_t>(w)] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace pindelay
