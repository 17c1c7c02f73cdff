#include "nok/parallel.hpp"

#include <atomic>
#include <cstdlib>
#include <thread>

namespace nok {

namespace {

int detect_jobs() {
  if (const char* env = std::getenv("NOKLAB_JOBS")) {
    const int v = std::atoi(env);
    if (v >= 1) return v;
  }
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
#endif
}

std::atomic<int> g_jobs{0};

}  // namespace

int max_jobs() {
  int v = g_jobs.load(std::memory_order_relaxed);
  if (v <= 0) {
    v = detect_jobs();
    g_jobs.store(v, std::memory_order_relaxed);
  }
  return v;
}

void set_max_jobs(int jobs) {
  g_jobs.store(jobs > 0 ? jobs : detect_jobs(), std::memory_order_relaxed);
}

}  // namespace nok
