#include "cinemagraph/parallel.hpp"

#include <omp.h>

namespace cinemagraph {

namespace {
int g_budget = 0;
}

void set_thread_budget(int threads) {
  g_budget = threads;
  if (threads > 0) omp_set_num_threads(threads);
}

int thread_budget() { return g_budget > 0 ? g_budget : omp_get_max_threads(); }

}  // namespace cinemagraph
