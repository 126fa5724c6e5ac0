#include "vcs/parallel.hpp"

#include <atomic>
#include <cstdlib>

namespace vcs {

namespace {

int env_thread_count() {
  if (const char* env = std::getenv("VCSAMPLE_THREADS")) {
    const int parsed = std::atoi(env);
    if (parsed > 0) return parsed;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

std::atomic<int> g_thread_override{0};

}  // namespace

int thread_count() {
  const int v = g_thread_override.load(std::memory_order_relaxed);
  if (v > 0) return v;
  static const int from_env = env_thread_count();
  return from_env;
}

void set_thread_count(int count) {
  g_thread_override.store(count > 0 ? count : 0, std::memory_order_relaxed);
}

}  // namespace vcs
