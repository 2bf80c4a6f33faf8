// Acceptance run: one PASS/FAIL line per criterion. Pass criterion numbers as
// arguments to run a subset. Exit status is nonzero if any criterion fails.
#include <algorithm>
#include <cstdarg>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <set>
#include <string>
#include <vector>

#include "qatlab/common.hpp"
#include "qatlab/exact_oracle.hpp"
#include "qatlab/hopfield.hpp"
#include "qatlab/kernel_grid.hpp"
#include "qatlab/parisi.hpp"
#include "qatlab/path_measure.hpp"
#include "qatlab/phase_diagram.hpp"
#include "qatlab/pimc.hpp"
#include "qatlab/rng.hpp"
#include "qatlab/verification.hpp"

using namespace qat;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, ...) __attribute__((format(printf, 1, 2)));
std::string fmt(const char* f, ...) {
  char buf[1024];
  va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf, sizeof buf, f, ap);
  va_end(ap);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// 1. Normalization identities
Outcome normalization() {
  const double tol = 1e-10, time_limit = 10.0;
  auto t0 = std::chrono::steady_clock::now();
  double worst = 0.0;
  for (std::size_t n = 1; n <= 8; ++n)
    for (double b : {0.0, 0.5, 2.0}) {
      ModelParams p = make_params(1.0, b, 0.0, 0.0);
      DisorderSample d = make_disorder(n, 100 + n);
      worst = std::max(worst, std::abs(trace_partition(p, d) - 1.0));
      const std::size_t L = std::max<std::size_t>(1, std::min<std::size_t>(4, 16 / n));
      worst = std::max(worst, std::abs(enumerate_path_partition(p, d, L, PathMode::plain) - 1.0));
    }
  double dt = seconds_since(t0);
  return {worst <= tol && dt < time_limit,
          fmt("max |Z - 1| = %.2e (tol %.0e), %.2f s (limit %.0f s)", worst, tol, dt, time_limit)};
}

// 2. Feynman-Kac convergence ratio per doubling
Outcome feynman_kac() {
  const double lo = 1.6, hi = 2.4, time_limit = 60.0;
  auto t0 = std::chrono::steady_clock::now();
  ModelParams p = make_params(1.0, 0.5, 1.0, 1.0);
  bool ok = true;
  std::string ratios;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    DisorderSample d = make_disorder(2, seed);
    const double z = trace_partition(p, d);
    double e[3];
    for (int i = 0; i < 3; ++i) e[i] = std::abs(enumerate_path_partition(p, d, std::size_t{2} << i, PathMode::plain) - z);
    for (int i = 0; i < 2; ++i) {
      double r = e[i] / e[i + 1];
      ok = ok && r >= lo && r <= hi;
      ratios += fmt("%.2f ", r);
    }
  }
  double dt = seconds_since(t0);
  return {ok && dt < time_limit, fmt("error ratios L=2->4->8 over 5 seeds: %s(required in [%.1f, %.1f]), %.2f s", ratios.c_str(),
                                     lo, hi, dt)};
}

// 3. Annealed cancellation
Outcome annealed() {
  const double tol = 1e-10;
  double worst = 0.0;
  int cases = 0;
  for (std::size_t n = 1; n <= 16; ++n)
    for (std::size_t L = 1; n * L <= 16; ++L)
      for (auto [beta, b] : {std::pair{1.0, 0.5}, std::pair{2.5, 1.5}}) {
        worst = std::max(worst, std::abs(annealed_path_partition(make_params(beta, b), n, L, PathMode::corrected) - 1.0));
        ++cases;
      }
  return {worst <= tol, fmt("max |E Z_hat - 1| = %.2e over %d (N, L, params) cases (tol %.0e)", worst, cases, tol)};
}

// 4. Self-overlap law and pmf second moment
Outcome self_overlap_law() {
  const double k_sigma = 3.0, pmf_tol = 2e-3;
  const std::size_t paths = 100000;
  int failures = 0, checks = 0;
  double worst_z = 0.0, worst_pmf = 0.0;
  for (double x : {0.5, 1.0, 2.0}) {
    std::vector<std::pair<double, double>> pairs;
    CounterRng pick(static_cast<std::uint64_t>(x * 1000));
    for (int i = 0; i < 20; ++i) pairs.push_back({pick.uniform(), pick.uniform()});
    std::vector<double> sum(20, 0.0), sum2(20, 0.0);
    CounterRng base(4242);
    for (std::size_t k = 0; k < paths; ++k) {
      CounterRng rng = base.split(k);
      Path path = sample_path(x, rng);
      for (int i = 0; i < 20; ++i) {
        double v = path(pairs[i].first) * path(pairs[i].second);
        sum[i] += v;
        sum2[i] += v * v;
      }
    }
    for (int i = 0; i < 20; ++i) {
      const double n = static_cast<double>(paths);
      double mean = sum[i] / n, var = sum2[i] / n - mean * mean;
      double se = std::sqrt(var / (n - 1.0));
      double want = mu_kernel(pairs[i].first, pairs[i].second, x);
      double z = se > 0 ? std::abs(mean - want) / se : (mean == want ? 0.0 : 1e300);
      worst_z = std::max(worst_z, z);
      ++checks;
      if (z > k_sigma) ++failures;
    }
    TimeAveragePmf pmf = time_average_pmf(x, 1024);
    worst_pmf = std::max(worst_pmf, std::abs(pmf.moment(2) - std::tanh(x) / x));
  }
  return {failures == 0 && worst_pmf <= pmf_tol,
          fmt("%d/%d pairs beyond %.0f SE (worst %.2f SE); max |E v^2 - tanh(x)/x| = %.2e (tol %.0e)", failures,
              checks, k_sigma, worst_z, worst_pmf, pmf_tol)};
}

// 5. MGF identity and convergence order
Outcome mgf_identity() {
  const double rel_tol = 1e-3, order_lo = 0.75, order_hi = 1.25;
  double worst = 0.0;
  const TimeAveragePmf pmf = time_average_pmf(1.0, 2048);
  for (int i = 0; i <= 60; ++i) {
    double s = -3.0 + 0.1 * i;
    double exact = telegraph_mgf(s, 1.0);
    worst = std::max(worst, std::abs(base_case_expectation(s, 0.0, pmf) / exact - 1.0));
  }
  // observed order from successive doublings at s = 3
  std::vector<double> err;
  for (std::size_t L : {128, 256, 512, 1024, 2048})
    err.push_back(std::abs(base_case_expectation(3.0, 0.0, time_average_pmf(1.0, L)) / telegraph_mgf(3.0, 1.0) - 1.0));
  double order = std::log2(err[err.size() - 2] / err.back());
  bool first_order = order >= order_lo && order <= order_hi;
  return {worst < rel_tol && first_order,
          fmt("max rel error at L=2048 = %.2e (tol %.0e); observed order %.2f (first order required: [%.2f, %.2f])",
              worst, rel_tol, order, order_lo, order_hi)};
}

// 6. Parisi identities
Outcome parisi_identities() {
  const double p1_tol = 1e-8, d_tol = 1e-6, k_tol = 1e-3;
  double worst_p1 = 0.0, worst_d = 0.0, worst_k = 0.0;
  for (auto [beta, b] : {std::pair{1.0, 0.5}, std::pair{2.0, 0.2}, std::pair{3.0, 1.0}, std::pair{0.5, 1.0}}) {
    ParisiFunctional f(beta, b);
    // also with m = 1 integrated numerically rather than in closed form
    QuadratureSpec open_quad;
    open_quad.collapse_unit_levels = false;
    ParisiFunctional g(beta, b, open_quad);
    for (double q : {0.0, 0.3, 1.0})
      worst_p1 = std::max({worst_p1, std::abs(f.one_rsb(1.0, q)), std::abs(g.one_rsb(1.0, q))});
    worst_d = std::max({worst_d, std::abs(f.d_pm(0.0)), std::abs(f.d_pmq(0.0))});
    // dP/dm(1, q) by Richardson in m; it behaves like k q^2/2, so 2 D(q)/q^2
    // is extrapolated to q = 0 with a two-level Richardson table
    auto Dm = [&](double q) {
      const double h = 1e-3;
      auto D = [&](double hh) { return (f.one_rsb(1.0, q) - f.one_rsb(1.0 - hh, q)) / hh; };
      return 2.0 * D(h / 2) - D(h);
    };
    auto K = [&](double q) { return 2.0 * Dm(q) / (q * q); };
    const double q0 = 0.02;
    double k1 = K(q0), k2 = K(q0 / 2), k3 = K(q0 / 4);
    double r1 = 2.0 * k2 - k1, r2 = 2.0 * k3 - k2;
    double fd = (4.0 * r2 - r1) / 3.0;
    double exact = d_pmqq_at_zero(make_params(beta, b));
    worst_k = std::max(worst_k, std::abs(fd - exact) / std::max(1.0, std::abs(exact)));
  }
  return {worst_p1 <= p1_tol && worst_d <= d_tol && worst_k <= k_tol,
          fmt("max |P(1,q)| = %.1e (tol %.0e); max |dP/dm(1,0)|, |d2P/dqdm(1,0)| = %.1e (tol %.0e); "
              "d_pmqq_at_zero vs finite differences %.1e (tol %.0e)",
              worst_p1, p1_tol, worst_d, d_tol, worst_k, k_tol)};
}

// 7. Quantum AT line
Outcome quantum_at() {
  const double cell_tol = 1.0, time_limit = 1800.0;
  auto t0 = std::chrono::steady_clock::now();
  Tolerances tol;
  tol.levels = 1;
  ScanResult r = scan_grid(ScanWindow{}, tol);
  double dt = seconds_since(t0);
  int mis = 0, band = 0;
  for (const auto& p : r.points) {
    if (p.in_band) {
      ++band;
      continue;
    }
    if (p.glass_by_value != p.glass_predicate) ++mis;
  }
  double dev = contour_deviation_cells(r);
  return {mis == 0 && dev <= cell_tol && dt < time_limit,
          fmt("%d misclassified of %zu (%d in band); contour deviation %.2f cells (tol %.0f); %.0f s on %d thread(s) "
              "(limit %.0f s)",
              mis, r.points.size() - band, band, dev, cell_tol, dt, thread_count(), time_limit)};
}

// 8. Classical AT line at h = 0
Outcome classical_at() {
  const double tol = 1e-6;
  double bc = classical_critical_beta(0.0, 0.5, 2.0, 1e-10);
  return {std::abs(bc - 1.0) <= tol, fmt("critical beta %.10f (tol %.0e)", bc, tol)};
}

// 9. Pinelis domination and sigma^2
Outcome pinelis() {
  const double k_sigma = 3.0, sigma_tol = 1e-8;
  const std::size_t samples = 10000, L = 16;
  int bad = 0;
  double worst_margin = -1e300;
  for (std::size_t n : {20, 50, 100})
    for (double eps : {0.2, 0.3, 0.5, 0.8}) {
      double emp = empirical_tail(n, eps, 1.0, L, samples, 9000 + n);
      double bound = pinelis_bound(n, eps, 1.0);
      double slack = k_sigma * std::sqrt(bound * (1.0 - bound) / static_cast<double>(samples));
      worst_margin = std::max(worst_margin, emp - bound - slack);
      if (emp > bound + slack) ++bad;
    }
  double sig = 0.0;
  for (double x : {0.25, 1.0, 4.0}) sig = std::max(sig, std::abs(sigma_squared(x) - sigma_squared_quadrature(x)));
  return {bad == 0 && sig <= sigma_tol,
          fmt("%d/12 grid points above bound + %.0f sigma (largest excess %.3f); sigma^2 vs quadrature %.1e (tol %.0e)",
              bad, k_sigma, worst_margin, sig, sigma_tol)};
}

// 10. Hopfield replica-symmetric condition
Outcome hopfield() {
  const double tol = 1e-10;
  int held_ok = 0, broken_ok = 0;
  double worst = 0.0;
  CounterRng rng(10);
  for (int i = 0; i < 20; ++i) {
    std::size_t n = 6 + rng.below(20), m = 1 + rng.below(5);
    PatternSet P = random_sign_patterns(n, m, 500 + i);
    double beta = 0.5 + 2.5 * rng.uniform(), b = 0.1 + 1.9 * rng.uniform();
    double g_crit = 1.0 / rs_ratio(P, 1.0, beta, b);
    double g_in = g_crit * (0.05 + 0.9 * rng.uniform()), g_out = g_crit * (1.1 + 2.0 * rng.uniform());
    SupBound in = sup_bound(P, g_in, beta, b);
    double err = std::abs(in.value - log_2cosh(beta * b));
    worst = std::max(worst, err);
    if (rs_condition(P, g_in, beta, b) && err <= tol && in.maximizer == 0.0) ++held_ok;
    SupBound out = sup_bound(P, g_out, beta, b);
    if (!rs_condition(P, g_out, beta, b) && out.maximizer > 0.0) ++broken_ok;
  }
  return {held_ok == 20 && broken_ok == 20,
          fmt("%d/20 satisfying sets at x=0 with |sup - ln 2cosh| <= %.0e (worst %.1e); %d/20 violating sets with x* > 0",
              held_ok, tol, worst, broken_ok)};
}

// 11. Gaussian integration by parts
Outcome gip() {
  const double k_sigma = 3.0;
  int ok = 0;
  std::string zs;
  ModelParams p = make_params(1.0, 0.5, 1.0, 1.0);
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    GipCheck g = gip_identity_check(p, 2, 4, 200, 1e-3, seed);
    if (g.within(k_sigma)) ++ok;
    zs += fmt("%.2f ", std::abs(g.lhs - g.rhs) / g.combined_sigma);
  }
  return {ok == 5, fmt("%d/5 seeds within %.0f sigma; |lhs - rhs|/sigma = %s", ok, k_sigma, zs.c_str())};
}

// 12. Monte Carlo against exact enumeration
Outcome mc_vs_exact() {
  const double k_sigma = 3.0;
  const std::size_t n = 2, L = 4;
  int bad = 0, total = 0;
  double worst = 0.0;
  std::vector<double> grid;
  for (int i = 0; i <= 32; ++i) grid.push_back(i / 32.0);
  int point = 0;
  for (auto [beta, b] : {std::pair{1.0, 0.5}, std::pair{2.0, 0.3}, std::pair{0.5, 1.5}}) {
    ModelParams p = make_params(beta, b, 1.0, 1.0);
    DisorderSample d = make_disorder(n, 70 + point);
    RunConfig cfg;
    cfg.slices = L;
    cfg.sweeps = 100000;
    cfg.burn_in = 2000;
    cfg.seed = 1200 + point;
    ++point;
    OverlapMoments ex = gibbs_overlap_exact(p, d, L, PathMode::corrected);
    auto check = [&](double est, double se, double want) {
      double z = std::abs(est - want) / se;
      worst = std::max(worst, z);
      ++total;
      if (!(z <= k_sigma)) ++bad;
    };
    SelfOverlapEstimate self = estimate_self_overlap(p, d, cfg);
    check(self.norm_sq.mean, self.norm_sq.std_error, ex.self_overlap_sq);
    McEstimate rep = estimate_replica_overlap(p, d, cfg);
    check(rep.mean, rep.std_error, ex.replica_overlap_sq);
    RunConfig ti_cfg = cfg;
    ti_cfg.sweeps = 20000;
    ThermoIntegration ti = pressure_thermo_integration(p, d, grid, ti_cfg);
    check(ti.value, ti.std_error, std::log(ex.partition) / static_cast<double>(n));
  }
  return {bad == 0, fmt("%d/%d estimates beyond %.0f SE (worst %.2f SE); expected beyond 3 SE under Gaussian tails: %.2f",
                        bad, total, k_sigma, worst, total * 0.0027)};
}

// 13. Finite-N glass contrast in the replica overlap
Outcome glass_contrast() {
  const double factor = 2.0;
  const std::size_t n = 32, L = 32, samples = 20;
  auto average = [&](double beta, double b) {
    ModelParams p = make_params(beta, b, 1.0, 1.0);
    RunConfig cfg;
    cfg.slices = L;
    cfg.sweeps = 4000;
    cfg.burn_in = 2000;
    cfg.thin = 4;
    cfg.check_interval = 500;
    std::vector<McEstimate> parts;
    for (std::size_t s = 0; s < samples; ++s) {
      cfg.seed = 77 + s;
      parts.push_back(estimate_replica_overlap(p, make_disorder(n, 5000 + s), cfg));
    }
    return pool_independent(parts);
  };
  McEstimate glass = average(4.0, 0.2), para = average(0.5, 1.0);
  double ratio = glass.mean / para.mean;
  return {ratio >= factor, fmt("<<R^2>> = %.4f +- %.4f at (4, 0.2) vs %.4f +- %.4f at (0.5, 1): ratio %.2f (need >= %.0f)",
                               glass.mean, glass.std_error, para.mean, para.std_error, ratio, factor)};
}

}  // namespace

int main(int argc, char** argv) {
  std::setvbuf(stdout, nullptr, _IONBF, 0);
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"normalization identities", normalization},
      {"Feynman-Kac convergence ratio", feynman_kac},
      {"annealed cancellation", annealed},
      {"self-overlap law", self_overlap_law},
      {"MGF identity", mgf_identity},
      {"Parisi identities", parisi_identities},
      {"quantum AT line scan", quantum_at},
      {"classical AT crossing", classical_at},
      {"Pinelis domination", pinelis},
      {"Hopfield RS condition", hopfield},
      {"integration by parts identity", gip},
      {"Monte Carlo vs exact", mc_vs_exact},
      {"glass signal in replica overlap", glass_contrast},
  };
  std::set<int> only;
  for (int i = 1; i < argc; ++i) only.insert(std::atoi(argv[i]));
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i) + 1;
    if (!only.empty() && !only.count(id)) continue;
    auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    if (!o.pass) ++failed;
    std::printf("criterion %2d %s: %s [%s] (%.1f s)\n", id, o.pass ? "PASS" : "FAIL", criteria[i].first,
                o.detail.c_str(), seconds_since(t0));
  }
  std::printf("%d criteria failed\n", failed);
  return failed == 0 ? 0 : 1;
}
