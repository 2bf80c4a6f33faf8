#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace qat {

// Raised when an iterative method gives up or produces a non-finite value.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ModelParams {
  double beta = 1.0;
  double b = 0.0;
  double lambda1 = 1.0;
  double lambda2 = 1.0;

  double beta_b() const { return beta * b; }
  void validate() const;
};

ModelParams make_params(double beta, double b, double lambda1 = 1.0, double lambda2 = 1.0);

// Number of OpenMP threads to use; honours QATLAB_THREADS when set.
int thread_count();
void set_thread_count(int n);

double log_sum_exp(const double* x, std::size_t n);
double log_2cosh(double x);

}  // namespace qat
