#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "qatlab/common.hpp"

namespace qat {

// sigma^2 = (1/2)[1 + tanh^2(x) - tanh(x)/x], x = beta b; series near 0.
double sigma_squared(double beta_b);
// The same quantity as the kernel integral int int (1 - mu(t,s)^2) ds dt.
double sigma_squared_quadrature(double beta_b, double tol = 1e-14);

// 2 exp(-(3N/2) eps^2 / (3 sigma^2 + 2 eps)), capped at 1.
double pinelis_bound(std::size_t n, double epsilon, double beta_b);

// HS distance between the grid self-overlap of n free paths and mu_grid, one
// entry per independent ensemble. Sample i uses substream i of seed.
std::vector<double> overlap_deviations(std::size_t n, double beta_b, std::size_t L, std::size_t samples,
                                       std::uint64_t seed);

// Fraction of ensembles with deviation > epsilon.
double empirical_tail(std::size_t n, double epsilon, double beta_b, std::size_t L, std::size_t samples,
                      std::uint64_t seed);
double tail_fraction(const std::vector<double>& deviations, double epsilon);

struct GipCheck {
  double lhs = 0.0;             // d/d lambda1 of (1/N) E ln W, central difference
  double rhs = 0.0;             // lambda1 beta^2/2 (E<||Q||^2> - E<<||R||^2>>)
  double combined_sigma = 0.0;  // standard error of the paired difference
  double lhs_sigma = 0.0;
  double rhs_sigma = 0.0;
  std::size_t samples = 0;
  bool fd_step_warning = false;

  bool within(double k) const { return std::abs(lhs - rhs) <= k * combined_sigma; }
};

// Corrected model, lambda2 held at p.lambda2. Exact enumeration per disorder
// sample; Monte Carlo only over the disorder. Needs n*L <= 10.
GipCheck gip_identity_check(const ModelParams& p, std::size_t n, std::size_t L, std::size_t disorder_samples,
                            double fd_step, std::uint64_t seed);

namespace reference {
std::vector<double> overlap_deviations(std::size_t n, double beta_b, std::size_t L, std::size_t samples,
                                       std::uint64_t seed);
}  // namespace reference

}  // namespace qat

namespace qat {

struct CheckResult {
  std::string name;
  bool passed = false;
  double measured = 0.0;   // the quantity compared against the threshold
  double threshold = 0.0;
  std::string detail;
};

// Suites: "all", "identities", "sigma", "pinelis", "gip".
std::vector<CheckResult> run_verification_suite(const std::string& suite, std::uint64_t seed);

}  // namespace qat
