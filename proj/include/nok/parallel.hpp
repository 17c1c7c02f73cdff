#ifndef NOK_PARALLEL_HPP
#define NOK_PARALLEL_HPP

#ifdef _OPENMP
#include <omp.h>
#endif

namespace nok {

// Serial is the reference path; Parallel fans independent iterations out
// over OpenMP threads. Every kernel written against parallel_for must give
// bit-identical results under both policies (iterations write disjoint
// slots and do their own ordered accumulation).
enum class Exec { Serial, Parallel };

// Worker cap: NOKLAB_JOBS env var, overridable via set_max_jobs(); 0 resets
// to the environment/hardware default.
int max_jobs();
void set_max_jobs(int jobs);

template <typename F>
void parallel_for(int begin, int end, Exec exec, F&& body) {
#ifdef _OPENMP
  const int jobs = max_jobs();
  if (exec == Exec::Parallel && jobs > 1 && end - begin > 1) {
#pragma omp parallel for schedule(dynamic) num_threads(jobs)
    for (int i = begin; i < end; ++i) {
      body(i);
    }
    return;
  }
#else
  (void)exec;
#endif
  for (int i = begin; i < end; ++i) {
    body(i);
  }
}

}  // namespace nok

#endif
