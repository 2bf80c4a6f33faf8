#include "qatlab/hopfield.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "qatlab/common.hpp"
#include "qatlab/linalg.hpp"

namespace qat {

double cw_pressure(std::span<const double> y, const PatternSet& patterns, double g, double beta, double b) {
  patterns.validate();
  if (y.size() != patterns.m) throw std::invalid_argument("y must have one entry per pattern");
  const double a = beta * b;
  const double M = static_cast<double>(patterns.m);
  double sum = 0.0;
  for (std::size_t j = 0; j < patterns.n; ++j) {
    double field = 0.0;
    for (std::size_t k = 0; k < patterns.m; ++k) field += patterns(k, j) * y[k];
    field *= 2.0 * beta * g / M;
    sum += log_2cosh(std::hypot(a, field));
  }
  double penalty = 0.0;
  for (double v : y) penalty += v * v;
  return sum / static_cast<double>(patterns.n) - beta * g / M * penalty;
}

CwEvaluation evaluate_cw(std::vector<double> y, const PatternSet& patterns, double g, double beta, double b) {
  double v = cw_pressure(y, patterns, g, beta, b);
  return {std::move(y), v};
}

double pattern_overlap_norm(const PatternSet& patterns) {
  patterns.validate();
  SymmetricMatrix q(patterns.m);
  for (std::size_t k = 0; k < patterns.m; ++k)
    for (std::size_t kp = 0; kp <= k; ++kp) {
      double s = 0.0;
      for (std::size_t j = 0; j < patterns.n; ++j) s += patterns(k, j) * patterns(kp, j);
      q(k, kp) = q(kp, k) = s / static_cast<double>(patterns.n);
    }
  auto ev = jacobi_eigenvalues(q);
  return std::max(ev.back(), 0.0);
}

SupBound sup_bound_scalar(double c, double a) {
  if (c < 0.0) throw std::invalid_argument("coupling constant must be nonnegative");
  auto h = [&](double x) { return log_2cosh(std::sqrt(a * a + c * x)) - x; };
  SupBound out;
  out.value = h(0.0);
  out.maximizer = 0.0;
  if (c == 0.0) return out;
  // h'(x) = c tanh(u)/(2u) - 1 with u = sqrt(a^2 + c x), and tanh(u)/u < 1/u,
  // so h' < 0 once u > c/2.
  out.x_max = std::max(0.0, (c * c / 4.0 - a * a) / c) + 1.0;
  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  double lo = 0.0, hi = out.x_max;
  double x1 = hi - invphi * (hi - lo), x2 = lo + invphi * (hi - lo);
  double f1 = h(x1), f2 = h(x2);
  while (hi - lo > 1e-12 * std::max(1.0, out.x_max)) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + invphi * (hi - lo);
      f2 = h(x2);
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - invphi * (hi - lo);
      f1 = h(x1);
    }
  }
  double xs = 0.5 * (lo + hi), fs = h(xs);
  if (fs > out.value) {
    out.value = fs;
    out.maximizer = xs;
  }
  return out;
}

SupBound sup_bound(const PatternSet& patterns, double g, double beta, double b) {
  if (g < 0.0) throw std::invalid_argument("g must be nonnegative");
  const double c = 4.0 * beta * g * pattern_overlap_norm(patterns) / static_cast<double>(patterns.m);
  return sup_bound_scalar(c, beta * b);
}

double rs_ratio(const PatternSet& patterns, double g, double beta, double b) {
  if (b < 0.0) throw std::invalid_argument("b must be nonnegative");
  const double t = b < 1e-12 ? beta : std::tanh(beta * b) / b;
  return 2.0 * g * t * pattern_overlap_norm(patterns) / static_cast<double>(patterns.m);
}

bool rs_condition(const PatternSet& patterns, double g, double beta, double b) {
  return rs_ratio(patterns, g, beta, b) <= 1.0;
}

SecondMomentBound second_moment_bound(std::size_t n, std::size_t L, double C) {
  if (n == 0) throw std::invalid_argument("n must be positive");
  if (L == 0 || (L & (L - 1)) != 0) throw std::invalid_argument("L must be a power of two");
  const double N = static_cast<double>(n);
  SecondMomentBound out;
  out.exponent_rate = C * std::max(static_cast<double>(L) / std::sqrt(N), std::cbrt(1.0 / N));
  out.log_bound = N * out.exponent_rate;
  return out;
}

}  // namespace qat
