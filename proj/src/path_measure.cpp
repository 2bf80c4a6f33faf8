#include "qatlab/path_measure.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <random>
#include <stdexcept>

#include "qatlab/common.hpp"

namespace qat {

int Path::operator()(double t) const {
  auto flips = std::upper_bound(jumps.begin(), jumps.end(), t) - jumps.begin();
  return (flips % 2 == 0) ? initial_spin : -initial_spin;
}

Path sample_path(double beta_b, CounterRng& rng) {
  if (!(beta_b >= 0.0)) throw std::invalid_argument("beta_b must be nonnegative");
  Path p;
  p.initial_spin = rng.spin();
  if (beta_b == 0.0) return p;
  std::poisson_distribution<long> pois(beta_b);
  long k;
  do {
    k = pois(rng);
  } while (k % 2 != 0);
  p.jumps.resize(static_cast<std::size_t>(k));
  for (double& t : p.jumps) t = rng.uniform();
  std::sort(p.jumps.begin(), p.jumps.end());
  return p;
}

Path sample_path(double beta_b, std::uint64_t seed) {
  CounterRng rng(seed);
  return sample_path(beta_b, rng);
}

Matrix2 transfer_matrix(double beta_b, double delta) {
  if (!(delta > 0.0)) throw std::invalid_argument("slice width must be positive");
  double c = std::cosh(beta_b * delta), s = std::sinh(beta_b * delta);
  return {{{c, s}, {s, c}}};
}

double marginal_probability(std::span<const int> spins, double beta_b) {
  const std::size_t L = spins.size();
  if (L == 0) throw std::invalid_argument("empty spin list");
  double x = beta_b / static_cast<double>(L);
  double c = std::cosh(x), s = std::sinh(x);
  double logw = 0.0;
  for (std::size_t l = 0; l < L; ++l) {
    int a = spins[l], b = spins[(l + 1) % L];
    if (a != 1 && a != -1) throw std::invalid_argument("spins must be +-1");
    if (a == b) {
      logw += std::log(c);
    } else {
      if (s == 0.0) return 0.0;
      logw += std::log(s);
    }
  }
  return std::exp(logw - log_2cosh(beta_b));
}

double TimeAveragePmf::moment(int p) const {
  double m = 0.0;
  for (std::size_t k = 0; k < masses.size(); ++k) m += masses[k] * std::pow(value(k), p);
  return m;
}

double TimeAveragePmf::total() const {
  double t = 0.0;
  for (double w : masses) t += w;
  return t;
}

TimeAveragePmf time_average_pmf(double beta_b, std::size_t L) {
  if (L == 0) throw std::invalid_argument("time_average_pmf needs L >= 1");
  if (!(beta_b >= 0.0)) throw std::invalid_argument("beta_b must be nonnegative");
  // Factors divided by e^{x}: diag (1+e^{-2x})/2, off (1-e^{-2x})/2.
  double x = beta_b / static_cast<double>(L);
  double e = std::exp(-2.0 * x);
  double d = 0.5 * (1.0 + e), o = -0.5 * std::expm1(-2.0 * x);
  // Condition on the first slice being +1; the -1 branch is the mirror image.
  // up[c], dn[c]: weight of prefixes ending at +1 / -1 with c slices at +1.
  std::vector<double> up(L + 1, 0.0), dn(L + 1, 0.0), nu(L + 1), nd(L + 1);
  up[1] = 1.0;
  for (std::size_t l = 2; l <= L; ++l) {
    for (std::size_t c = 0; c <= l; ++c) {
      double from_up = c >= 1 ? up[c - 1] : 0.0;
      double from_dn = c >= 1 ? dn[c - 1] : 0.0;
      nu[c] = from_up * d + from_dn * o;
      nd[c] = up[c] * o + dn[c] * d;
    }
    std::swap(up, nu);
    std::swap(dn, nd);
  }
  TimeAveragePmf pmf;
  pmf.L = L;
  pmf.masses.assign(L + 1, 0.0);
  std::vector<double> plus(L + 1);
  for (std::size_t c = 0; c <= L; ++c) plus[c] = up[c] * d + dn[c] * o;  // close the cycle
  double norm = 1.0 + std::exp(-2.0 * beta_b);  // 2 cosh(beta b) / e^{beta b}
  for (std::size_t c = 0; c <= L; ++c) pmf.masses[c] = (plus[c] + plus[L - c]) / norm;
  return pmf;
}

void write_csv(std::ostream& os, const TimeAveragePmf& pmf) {
  os << "value,mass\n" << std::setprecision(17);
  for (std::size_t k = 0; k < pmf.masses.size(); ++k) os << pmf.value(k) << ',' << pmf.masses[k] << '\n';
}

double telegraph_mgf(double s, double beta_b) {
  return std::exp(log_2cosh(std::sqrt(beta_b * beta_b + s * s)) - log_2cosh(beta_b));
}

double log_base_case_expectation(double a, double c, const TimeAveragePmf& pmf) {
  const std::size_t n = pmf.masses.size();
  std::vector<double> t;
  t.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    if (pmf.masses[k] <= 0.0) continue;
    double v = pmf.value(k);
    t.push_back(std::log(pmf.masses[k]) + a * v - c * v * v);
  }
  return log_sum_exp(t.data(), t.size());
}

double base_case_expectation(double a, double c, const TimeAveragePmf& pmf) {
  if (std::abs(a) > 30.0) return std::exp(log_base_case_expectation(a, c, pmf));
  double s = 0.0;
  for (std::size_t k = 0; k < pmf.masses.size(); ++k) {
    double v = pmf.value(k);
    s += pmf.masses[k] * std::exp(a * v - c * v * v);
  }
  return s;
}

double base_case_expectation(double a, double c, double beta_b, std::size_t L) {
  return base_case_expectation(a, c, time_average_pmf(beta_b, L));
}

namespace reference {

TimeAveragePmf time_average_pmf(double beta_b, std::size_t L) {
  if (L == 0 || L > 20) throw std::invalid_argument("reference pmf limited to 1 <= L <= 20");
  TimeAveragePmf pmf;
  pmf.L = L;
  pmf.masses.assign(L + 1, 0.0);
  std::vector<int> spins(L);
  for (std::uint64_t cfg = 0; cfg < (std::uint64_t{1} << L); ++cfg) {
    std::size_t ups = 0;
    for (std::size_t l = 0; l < L; ++l) {
      spins[l] = (cfg >> l) & 1 ? 1 : -1;
      ups += spins[l] == 1;
    }
    pmf.masses[ups] += marginal_probability(spins, beta_b);
  }
  return pmf;
}

}  // namespace reference

}  // namespace qat
