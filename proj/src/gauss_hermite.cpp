#include "qatlab/gauss_hermite.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "qatlab/common.hpp"

namespace qat {

// Newton iteration on orthonormal Hermite polynomials (weight e^{-x^2}),
// with the usual asymptotic starting guesses; then rescaled to N(0,1).
GaussHermiteRule gauss_hermite(std::size_t n) {
  if (n == 0) throw std::invalid_argument("Gauss-Hermite needs at least one node");
  const double pim4 = std::pow(std::numbers::pi, -0.25);
  std::vector<double> x(n), w(n);
  const std::size_t m = (n + 1) / 2;
  const double nd = static_cast<double>(n);
  double z = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    if (i == 0)
      z = std::sqrt(2.0 * nd + 1.0) - 1.85575 * std::pow(2.0 * nd + 1.0, -1.0 / 6.0);
    else if (i == 1)
      z -= 1.14 * std::pow(nd, 0.426) / z;
    else if (i == 2)
      z = 1.86 * z - 0.86 * x[0];
    else if (i == 3)
      z = 1.91 * z - 0.91 * x[1];
    else
      z = 2.0 * z - x[i - 2];
    double pp = 0.0;
    int it = 0;
    for (; it < 100; ++it) {
      double p1 = pim4, p2 = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        double p3 = p2;
        p2 = p1;
        double jd = static_cast<double>(j);
        p1 = z * std::sqrt(2.0 / (jd + 1.0)) * p2 - std::sqrt(jd / (jd + 1.0)) * p3;
      }
      pp = std::sqrt(2.0 * nd) * p2;
      double z1 = z;
      z = z1 - p1 / pp;
      if (std::abs(z - z1) <= 1e-15 * std::max(1.0, std::abs(z))) break;
    }
    if (it == 100) throw NumericalError("Gauss-Hermite Newton iteration failed at node " + std::to_string(i));
    x[i] = z;
    x[n - 1 - i] = -z;
    w[i] = 2.0 / (pp * pp);
    w[n - 1 - i] = w[i];
  }
  GaussHermiteRule r;
  r.nodes.resize(n);
  r.weights.resize(n);
  const double isp = 1.0 / std::sqrt(std::numbers::pi);
  for (std::size_t i = 0; i < n; ++i) {
    r.nodes[i] = std::sqrt(2.0) * x[n - 1 - i];
    r.weights[i] = w[n - 1 - i] * isp;
  }
  return r;
}

}  // namespace qat
