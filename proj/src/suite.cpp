#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <string>

#include "qatlab/exact_oracle.hpp"
#include "qatlab/parisi.hpp"
#include "qatlab/verification.hpp"

namespace qat {

namespace {

std::string fmt(const char* f, double a, double b = 0.0) {
  char buf[160];
  std::snprintf(buf, sizeof buf, f, a, b);
  return buf;
}

void sigma_checks(std::vector<CheckResult>& out) {
  for (double x : {0.25, 1.0, 4.0}) {
    double err = std::abs(sigma_squared(x) - sigma_squared_quadrature(x));
    out.push_back({"sigma_squared_vs_kernel_integral", err <= 1e-8, err, 1e-8, fmt("beta_b=%g", x)});
  }
}

void pinelis_checks(std::vector<CheckResult>& out, std::uint64_t seed) {
  const std::size_t samples = 10000, L = 16;
  for (std::size_t n : {20, 50, 100}) {
    auto dev = overlap_deviations(n, 1.0, L, samples, seed + n);
    for (double eps : {0.2, 0.3, 0.5, 0.8}) {
      double p = tail_fraction(dev, eps), bound = pinelis_bound(n, eps, 1.0);
      double slack = 3.0 * std::sqrt(std::max(bound * (1.0 - bound), 1e-12) / samples);
      out.push_back({"pinelis_domination", p <= bound + slack, p, bound + slack,
                     fmt("n=%g eps=%g", static_cast<double>(n), eps)});
    }
  }
}

void gip_checks(std::vector<CheckResult>& out, std::uint64_t seed) {
  GipCheck g = gip_identity_check(make_params(1.0, 0.5), 2, 4, 200, 1e-3, seed);
  double gap = std::abs(g.lhs - g.rhs);
  out.push_back({"gip_identity", g.within(3.0), gap, 3.0 * g.combined_sigma,
                 fmt("lhs=%.6g rhs=%.6g", g.lhs, g.rhs)});
}

void identity_checks(std::vector<CheckResult>& out, std::uint64_t seed) {
  double worst = 0.0;
  for (std::size_t n = 1; n <= 6; ++n)
    for (double b : {0.0, 0.5, 2.0}) {
      DisorderSample d = make_disorder(n, seed + n);
      worst = std::max(worst, std::abs(trace_partition(make_params(1.0, b, 0.0, 0.0), d) - 1.0));
      worst = std::max(worst,
                       std::abs(enumerate_path_partition(make_params(1.0, b, 0.0, 0.0), d, 3, PathMode::plain) - 1.0));
    }
  out.push_back({"normalization", worst <= 1e-10, worst, 1e-10, "N<=6, b in {0,0.5,2}"});
  double ann = 0.0;
  for (auto [n, L] : {std::pair<std::size_t, std::size_t>{2, 4}, {4, 4}, {2, 8}, {8, 2}})
    ann = std::max(ann, std::abs(annealed_path_partition(make_params(1.3, 0.7), n, L, PathMode::corrected) - 1.0));
  out.push_back({"annealed_cancellation", ann <= 1e-10, ann, 1e-10, "N*L<=16"});
  ParisiFunctional f(2.0, 0.5);
  double p1 = 0.0;
  for (double q : {0.0, 0.3, 1.0}) p1 = std::max(p1, std::abs(f.one_rsb(1.0, q)));
  out.push_back({"parisi_unit_level", p1 <= 1e-8, p1, 1e-8, "P(1,q), q in {0,0.3,1}"});
  double d0 = std::max(std::abs(f.d_pm(0.0)), std::abs(f.d_pmq(0.0)));
  out.push_back({"parisi_derivatives_at_zero", d0 <= 1e-6, d0, 1e-6, "d_pm(0), d_pmq(0)"});
}

}  // namespace

std::vector<CheckResult> run_verification_suite(const std::string& suite, std::uint64_t seed) {
  const bool all = suite == "all";
  if (!all && suite != "identities" && suite != "sigma" && suite != "pinelis" && suite != "gip")
    throw std::invalid_argument("unknown suite '" + suite + "'");
  std::vector<CheckResult> out;
  if (all || suite == "identities") identity_checks(out, seed);
  if (all || suite == "sigma") sigma_checks(out);
  if (all || suite == "pinelis") pinelis_checks(out, seed);
  if (all || suite == "gip") gip_checks(out, seed);
  return out;
}

}  // namespace qat
