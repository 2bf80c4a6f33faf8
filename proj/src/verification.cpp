#include "qatlab/verification.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <exception>
#include <stdexcept>

#include "qatlab/exact_oracle.hpp"
#include "qatlab/kernel_grid.hpp"
#include "qatlab/path_measure.hpp"
#include "qatlab/rng.hpp"

namespace qat {

double sigma_squared(double x) {
  if (x < 0.0) throw std::invalid_argument("beta_b must be nonnegative");
  if (x < 1e-3) {
    const double x2 = x * x;
    return x2 * (2.0 / 3.0 + x2 * (-2.0 / 5.0 + x2 * 68.0 / 315.0));
  }
  const double t = std::tanh(x);
  return 0.5 * (1.0 + t * t - t / x);
}

double sigma_squared_quadrature(double x, double tol) {
  // the kernel depends on |t - s| only: int int f(|t-s|) = int_0^1 2(1-u) f(u) du
  auto f = [x](double u) {
    double mu = mu_kernel(0.0, u, x);
    return 2.0 * (1.0 - u) * (1.0 - mu * mu);
  };
  using boost::math::quadrature::gauss_kronrod;
  return gauss_kronrod<double, 61>::integrate(f, 0.0, 0.5, 15, tol) +
         gauss_kronrod<double, 61>::integrate(f, 0.5, 1.0, 15, tol);
}

double pinelis_bound(std::size_t n, double eps, double beta_b) {
  if (n == 0) throw std::invalid_argument("n must be positive");
  if (!(eps > 0.0)) throw std::invalid_argument("epsilon must be positive");
  if (std::isinf(eps)) return 0.0;
  const double s2 = sigma_squared(beta_b);
  double v = 2.0 * std::exp(-1.5 * static_cast<double>(n) * eps * eps / (3.0 * s2 + 2.0 * eps));
  return std::min(v, 1.0);
}

namespace {

double one_deviation(std::size_t n, double beta_b, std::size_t L, const KernelGrid& mu, CounterRng rng) {
  std::vector<int> xi(n * L);
  for (std::size_t j = 0; j < n; ++j) {
    Path path = sample_path(beta_b, rng);
    for (std::size_t l = 0; l < L; ++l)
      xi[j * L + l] = path((static_cast<double>(l) + 0.5) / static_cast<double>(L));
  }
  KernelGrid Q(L);
  for (std::size_t l = 0; l < L; ++l)
    for (std::size_t lp = l; lp < L; ++lp) {
      long s = 0;
      for (std::size_t j = 0; j < n; ++j) s += xi[j * L + l] * xi[j * L + lp];
      Q(l, lp) = Q(lp, l) = static_cast<double>(s) / static_cast<double>(n);
    }
  return hs_norm(Q - mu);
}

void check_args(std::size_t n, std::size_t L, std::size_t samples) {
  if (n == 0 || L == 0) throw std::invalid_argument("n and L must be positive");
  if (samples == 0) throw std::invalid_argument("need at least one sample");
}

}  // namespace

std::vector<double> overlap_deviations(std::size_t n, double beta_b, std::size_t L, std::size_t samples,
                                       std::uint64_t seed) {
  check_args(n, L, samples);
  const KernelGrid mu = mu_grid(L, beta_b);
  const CounterRng master(seed);
  std::vector<double> out(samples);
  std::exception_ptr failure;
#pragma omp parallel for num_threads(thread_count()) schedule(static)
  for (std::int64_t i = 0; i < static_cast<std::int64_t>(samples); ++i) {
    try {
      out[static_cast<std::size_t>(i)] =
          one_deviation(n, beta_b, L, mu, master.split(static_cast<std::uint64_t>(i)));
    } catch (...) {
#pragma omp critical
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

double tail_fraction(const std::vector<double>& dev, double eps) {
  std::size_t c = 0;
  for (double d : dev) c += d > eps;
  return static_cast<double>(c) / static_cast<double>(dev.size());
}

double empirical_tail(std::size_t n, double eps, double beta_b, std::size_t L, std::size_t samples,
                      std::uint64_t seed) {
  if (samples < 1000) throw std::invalid_argument("empirical tail needs at least 1000 samples");
  return tail_fraction(overlap_deviations(n, beta_b, L, samples, seed), eps);
}

GipCheck gip_identity_check(const ModelParams& p, std::size_t n, std::size_t L, std::size_t disorder_samples,
                            double fd_step, std::uint64_t seed) {
  p.validate();
  if (n * L > 10) throw std::invalid_argument("gip check needs n*L <= 10");
  if (disorder_samples < 100) throw std::invalid_argument("gip check needs at least 100 disorder samples");
  if (!(fd_step > 0.0)) throw std::invalid_argument("fd_step must be positive");
  GipCheck out;
  out.samples = disorder_samples;
  out.fd_step_warning = fd_step < 1e-4 || fd_step > 1e-1;
  ModelParams plus = p, minus = p;
  plus.lambda1 += fd_step;
  minus.lambda1 -= fd_step;
  const double N = static_cast<double>(n);
  std::vector<double> lhs(disorder_samples), rhs(disorder_samples);
  std::exception_ptr failure;
#pragma omp parallel for num_threads(thread_count()) schedule(dynamic)
  for (std::int64_t i = 0; i < static_cast<std::int64_t>(disorder_samples); ++i) {
    try {
      const auto k = static_cast<std::size_t>(i);
      DisorderSample d = make_disorder(n, seed * 1000003ULL + k);
      double zp = enumerate_path_partition(plus, d, L, PathMode::corrected);
      double zm = enumerate_path_partition(minus, d, L, PathMode::corrected);
      lhs[k] = (std::log(zp) - std::log(zm)) / (2.0 * fd_step * N);
      OverlapMoments mom = gibbs_overlap_exact(p, d, L, PathMode::corrected);
      rhs[k] = p.lambda1 * p.beta * p.beta / 2.0 * (mom.self_overlap_sq - mom.replica_overlap_sq);
    } catch (...) {
#pragma omp critical
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  const double S = static_cast<double>(disorder_samples);
  auto mean_sd = [&](auto&& f) {
    double m = 0.0, v = 0.0;
    for (std::size_t k = 0; k < disorder_samples; ++k) m += f(k);
    m /= S;
    for (std::size_t k = 0; k < disorder_samples; ++k) v += (f(k) - m) * (f(k) - m);
    return std::pair{m, std::sqrt(v / (S - 1.0) / S)};
  };
  auto [lm, ls] = mean_sd([&](std::size_t k) { return lhs[k]; });
  auto [rm, rs] = mean_sd([&](std::size_t k) { return rhs[k]; });
  auto [dm, ds] = mean_sd([&](std::size_t k) { return lhs[k] - rhs[k]; });
  (void)dm;
  out.lhs = lm;
  out.rhs = rm;
  out.lhs_sigma = ls;
  out.rhs_sigma = rs;
  out.combined_sigma = ds;
  return out;
}

namespace reference {

std::vector<double> overlap_deviations(std::size_t n, double beta_b, std::size_t L, std::size_t samples,
                                       std::uint64_t seed) {
  check_args(n, L, samples);
  const KernelGrid mu = mu_grid(L, beta_b);
  const CounterRng master(seed);
  std::vector<double> out(samples);
  for (std::size_t i = 0; i < samples; ++i) out[i] = one_deviation(n, beta_b, L, mu, master.split(i));
  return out;
}

}  // namespace reference

}  // namespace qat
