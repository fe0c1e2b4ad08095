#include "dgelast/common.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace dgelast {

namespace {
std::atomic<int> g_threads{1};
}

void set_num_threads(int n) { g_threads = std::max(1, n); }

int num_threads() { return g_threads; }

void parallel_for(int count, const std::function<void(int)>& body) {
  const int nt = std::min(num_threads(), std::max(1, count));
  if (nt <= 1) {
    for (int i = 0; i < count; ++i) body(i);
    return;
  }
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> workers;
  workers.reserve(nt);
  const int chunk = (count + nt - 1) / nt;
  for (int t = 0; t < nt; ++t) {
    const int begin = t * chunk;
    const int end = std::min(count, begin + chunk);
    workers.emplace_back([&, begin, end] {
      try {
        for (int i = begin; i < end; ++i) body(i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    });
  }
  for (auto& w : workers) w.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace dgelast
