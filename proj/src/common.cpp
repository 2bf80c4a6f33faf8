#include "qatlab/common.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace qat {

void ModelParams::validate() const {
  if (!(beta > 0.0) || !std::isfinite(beta)) throw std::invalid_argument("beta must be positive");
  if (!(b >= 0.0) || !std::isfinite(b)) throw std::invalid_argument("b must be nonnegative");
  if (!std::isfinite(lambda1) || !std::isfinite(lambda2))
    throw std::invalid_argument("lambda must be finite");
}

ModelParams make_params(double beta, double b, double lambda1, double lambda2) {
  ModelParams p{beta, b, lambda1, lambda2};
  p.validate();
  return p;
}

namespace {
int g_threads = 0;
}

int thread_count() {
  if (g_threads > 0) return g_threads;
  if (const char* env = std::getenv("QATLAB_THREADS")) {
    int n = std::atoi(env);
    if (n > 0) return n;
  }
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

void set_thread_count(int n) { g_threads = std::max(0, n); }

double log_sum_exp(const double* x, std::size_t n) {
  double mx = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) mx = std::max(mx, x[i]);
  if (!std::isfinite(mx)) return mx;
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += std::exp(x[i] - mx);
  return mx + std::log(s);
}

double log_2cosh(double x) {
  double a = std::abs(x);
  return a + std::log1p(std::exp(-2.0 * a));
}

}  // namespace qat
