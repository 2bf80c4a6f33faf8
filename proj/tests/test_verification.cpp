#include <doctest.h>

#include <cmath>
#include <set>

#include "qatlab/kernel_grid.hpp"
#include "qatlab/verification.hpp"

using namespace qat;

namespace {

// int int (1 - mu^2) over the unit square by a plain midpoint rule on mu_kernel
double sigma_midpoint(double x, int n) {
  double s = 0.0;
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) {
      double m = mu_kernel((i + 0.5) / n, (k + 0.5) / n, x);
      s += 1.0 - m * m;
    }
  return s / (static_cast<double>(n) * n);
}

}  // namespace

TEST_CASE("sigma squared limits and values") {
  CHECK(std::abs(sigma_squared(1e-8)) < 1e-8);
  // 1 - 1/(2x) once tanh(x) = 1 in double precision
  CHECK(sigma_squared(50.0) == doctest::Approx(1.0 - 1.0 / 100.0).epsilon(1e-14));
  CHECK(sigma_squared(1e12) == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(sigma_squared(1.0) == doctest::Approx(0.5 * (1.0 + std::pow(std::tanh(1.0), 2) - std::tanh(1.0))));
  // series and closed form agree across the switch
  for (double x : {9e-4, 1.1e-3, 2e-3})
    CHECK(sigma_squared(x) == doctest::Approx(0.5 * (1.0 + std::pow(std::tanh(x), 2) - std::tanh(x) / x)).epsilon(1e-6));
  for (double x : {0.01, 0.5, 3.0, 20.0}) {
    CHECK(sigma_squared(x) > 0.0);
    CHECK(sigma_squared(x) < 1.0);
  }
}

TEST_CASE("sigma squared equals the kernel integral") {
  for (double x : {0.25, 1.0, 4.0}) {
    CHECK(std::abs(sigma_squared(x) - sigma_squared_quadrature(x)) < 1e-8);
    CHECK(sigma_midpoint(x, 400) == doctest::Approx(sigma_squared(x)).epsilon(1e-4));
  }
}

TEST_CASE("Pinelis bound") {
  const double s2 = sigma_squared(1.0);
  CHECK(pinelis_bound(50, 0.3, 1.0) == doctest::Approx(2.0 * std::exp(-75.0 * 0.09 / (3.0 * s2 + 0.6))));
  CHECK(pinelis_bound(50, 1e6, 1.0) < 1e-300);
  CHECK(pinelis_bound(2, 0.01, 1.0) == 1.0);
  // exponent linear in n: bound(2n) = bound(n)^2 / 2
  double b1 = pinelis_bound(200, 0.3, 1.0), b2 = pinelis_bound(400, 0.3, 1.0);
  CHECK(b2 == doctest::Approx(b1 * b1 / 2.0).epsilon(1e-12));
}

TEST_CASE("overlap deviations") {
  auto d = overlap_deviations(20, 1.0, 16, 300, 9);
  CHECK(d.size() == 300);
  for (double v : d) {
    CHECK(v >= 0.0);
    CHECK(v <= 2.0);
  }
  CHECK(tail_fraction(d, 2.0) == 0.0);
  CHECK(tail_fraction(d, -1.0) == 1.0);
  // parallel and serial paths draw the same ensembles
  auto r = reference::overlap_deviations(20, 1.0, 16, 300, 9);
  CHECK(d == r);
  // distinct samples really are distinct
  CHECK(std::set<double>(d.begin(), d.end()).size() > 250);
}

TEST_CASE("empirical tail shrinks with n and sits under the bound") {
  double t50 = empirical_tail(50, 0.1, 1.0, 16, 2000, 4);
  double t200 = empirical_tail(200, 0.1, 1.0, 16, 2000, 4);
  CHECK(t50 > 0.05);
  CHECK(t200 < t50);
  CHECK(empirical_tail(50, 2.0, 1.0, 16, 1000, 4) == 0.0);
  for (double eps : {0.1, 0.3}) {
    double bound = pinelis_bound(50, eps, 1.0);
    CHECK(empirical_tail(50, eps, 1.0, 16, 2000, 4) <= bound + 3.0 * std::sqrt(bound * (1.0 - bound) / 2000.0));
  }
  CHECK_THROWS_AS(empirical_tail(50, 0.1, 1.0, 16, 999, 4), std::invalid_argument);
}

TEST_CASE("integration by parts identity") {
  ModelParams p = make_params(1.0, 0.5, 1.0, 1.0);
  for (std::uint64_t seed : {1, 2}) {
    GipCheck g = gip_identity_check(p, 2, 4, 200, 1e-3, seed);
    INFO("lhs " << g.lhs << " rhs " << g.rhs << " sigma " << g.combined_sigma);
    CHECK(g.samples == 200);
    CHECK(g.combined_sigma > 0.0);
    CHECK(g.within(3.0));
    CHECK_FALSE(g.fd_step_warning);
  }
}

TEST_CASE("integration by parts degenerate cases") {
  GipCheck z = gip_identity_check(make_params(1.0, 0.5, 0.0, 1.0), 2, 4, 100, 1e-3, 3);
  // at lambda1 = 0 only the disorder average of the slope vanishes
  CHECK(z.rhs == 0.0);
  CHECK(std::abs(z.lhs) <= 3.0 * z.combined_sigma);
  GipCheck cold = gip_identity_check(make_params(1e-3, 0.5, 1.0, 1.0), 2, 4, 100, 1e-3, 3);
  CHECK(std::abs(cold.lhs) < 1e-5);
  CHECK(std::abs(cold.rhs) < 1e-5);
  CHECK(gip_identity_check(make_params(1.0, 0.5, 1.0, 1.0), 2, 4, 100, 0.5, 3).fd_step_warning);
  CHECK_THROWS_AS(gip_identity_check(make_params(1.0, 0.5, 1.0, 1.0), 3, 4, 100, 1e-3, 3), std::invalid_argument);
  CHECK_THROWS_AS(gip_identity_check(make_params(1.0, 0.5, 1.0, 1.0), 2, 4, 50, 1e-3, 3), std::invalid_argument);
}

TEST_CASE("suite runner") {
  auto r = run_verification_suite("sigma", 1);
  CHECK(r.size() == 3);
  for (const auto& c : r) {
    CHECK(c.passed);
    CHECK_FALSE(c.name.empty());
  }
  auto ids = run_verification_suite("identities", 1);
  CHECK_FALSE(ids.empty());
  for (const auto& c : ids) {
    INFO(c.name << ": " << c.detail);
    CHECK(c.passed);
  }
  CHECK_THROWS_AS(run_verification_suite("nope", 1), std::invalid_argument);
}
