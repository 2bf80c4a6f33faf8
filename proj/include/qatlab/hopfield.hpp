#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "qatlab/exact_oracle.hpp"

namespace qat {

// (1/N) sum_j ln 2cosh sqrt((beta b)^2 + (2 beta g/M sum_k eta_j(k) y_k)^2) - beta g/M sum_k y_k^2
double cw_pressure(std::span<const double> y, const PatternSet& patterns, double g, double beta, double b);

struct CwEvaluation {
  std::vector<double> y;
  double value = 0.0;
};
CwEvaluation evaluate_cw(std::vector<double> y, const PatternSet& patterns, double g, double beta, double b);

// Largest eigenvalue of Q(k,k') = (1/N) sum_j eta_j(k) eta_j(k').
double pattern_overlap_norm(const PatternSet& patterns);

struct SupBound {
  double value = 0.0;
  double maximizer = 0.0;
  double x_max = 0.0;  // right end of the search interval
};

// sup_{x>=0} ln 2cosh sqrt((beta b)^2 + x c) - x with c = 4 beta g ||Q|| / M.
SupBound sup_bound(const PatternSet& patterns, double g, double beta, double b);
SupBound sup_bound_scalar(double c, double beta_b);

// 2 g tanh(beta b)/b * ||Q||/M <= 1; tanh(beta b)/b is replaced by beta when b < 1e-12.
double rs_ratio(const PatternSet& patterns, double g, double beta, double b);
bool rs_condition(const PatternSet& patterns, double g, double beta, double b);

// Diagnostic bound exp(C N max{2^D/sqrt N, N^{-1/3}}) with L = 2^D.
struct SecondMomentBound {
  double exponent_rate = 0.0;  // C max{2^D/sqrt N, N^{-1/3}}
  double log_bound = 0.0;      // N * exponent_rate
};
SecondMomentBound second_moment_bound(std::size_t n, std::size_t L, double C = 1.0);

}  // namespace qat
