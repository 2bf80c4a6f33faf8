#include <doctest.h>

#include <cmath>
#include <sstream>
#include <unsupported/Eigen/KroneckerProduct>
#include <unsupported/Eigen/MatrixFunctions>

#include <Eigen/Dense>

#include "qatlab/exact_oracle.hpp"

using namespace qat;

namespace {

// Tr e^{-beta H} / (2 cosh beta b)^N with H assembled from Kronecker products.
double trace_by_kronecker(const ModelParams& p, const DisorderSample& d) {
  const std::size_t n = d.n;
  Eigen::Matrix2d sz, sx, id;
  sz << 1, 0, 0, -1;
  sx << 0, 1, 1, 0;
  id.setIdentity();
  auto site = [&](std::size_t j, const Eigen::Matrix2d& op) {
    Eigen::MatrixXd m = Eigen::MatrixXd::Identity(1, 1);
    for (std::size_t k = 0; k < n; ++k) {
      Eigen::MatrixXd next = Eigen::kroneckerProduct(k == j ? op : id, m);
      m = next;
    }
    return m;
  };
  const auto dim = static_cast<Eigen::Index>(1) << n;
  Eigen::MatrixXd H = Eigen::MatrixXd::Zero(dim, dim);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t k = 0; k < n; ++k) H += p.lambda1 * d(j, k) / std::sqrt(2.0 * n) * site(j, sz) * site(k, sz);
  for (std::size_t j = 0; j < n; ++j) H -= p.b * site(j, sx);
  Eigen::MatrixXd E = (-p.beta * H).exp();
  return E.trace() / std::pow(2.0 * std::cosh(p.beta * p.b), static_cast<double>(n));
}

}  // namespace

TEST_CASE("SK energy by hand") {
  DisorderSample d = disorder_from_matrix(2, {1.0, 2.0, -0.5, 3.0});
  std::vector<int> s{1, -1};
  // (1 - 2 + 0.5 + 3) / 2
  CHECK(sk_energy(s, d) == doctest::Approx(1.25));
  CHECK_THROWS_AS(sk_energy(std::vector<int>{1}, d), std::invalid_argument);
}

TEST_CASE("disorder samples are reproducible and written with a header") {
  DisorderSample a = make_disorder(4, 17), b = make_disorder(4, 17), c = make_disorder(4, 18);
  CHECK(a.g == b.g);
  CHECK(a.g != c.g);
  std::stringstream ss;
  write_csv(ss, a);
  std::string line;
  std::getline(ss, line);
  CHECK(line == "n,seed");
}

TEST_CASE("Hamiltonian is symmetric and the trace matches a Kronecker construction") {
  for (std::size_t n : {1u, 2u, 3u, 4u}) {
    DisorderSample d = make_disorder(n, 40 + n);
    ModelParams p = make_params(0.9, 0.6, 1.1, 1.0);
    SymmetricMatrix h = qsk_hamiltonian(p, d);
    for (std::size_t i = 0; i < h.size(); ++i)
      for (std::size_t j = 0; j < h.size(); ++j) CHECK(h(i, j) == h(j, i));
    CHECK(trace_partition(p, d) == doctest::Approx(trace_by_kronecker(p, d)).epsilon(1e-11));
  }
  CHECK_THROWS_AS(qsk_hamiltonian(make_params(1, 1), make_disorder(13, 1)), std::invalid_argument);
}

TEST_CASE("normalization at zero coupling") {
  for (std::size_t n = 1; n <= 6; ++n)
    for (double b : {0.0, 0.5, 2.0}) {
      DisorderSample d = make_disorder(n, n);
      CHECK(trace_partition(make_params(1.0, b, 0.0, 0.0), d) == doctest::Approx(1.0).epsilon(1e-12));
      CHECK(enumerate_path_partition(make_params(1.0, b, 0.0, 0.0), d, 2, PathMode::plain) ==
            doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("Gray-code enumeration matches brute force in every mode") {
  DisorderSample d = make_disorder(3, 8);
  ModelParams p = make_params(1.4, 0.7, 1.0, 0.8);
  Constraint c{mu_grid(3, 0.98), 0.6};
  for (PathMode m : {PathMode::plain, PathMode::corrected, PathMode::constrained}) {
    std::optional<Constraint> oc;
    if (m == PathMode::constrained) oc = c;
    double fast = enumerate_path_partition(p, d, 3, m, oc);
    double slow = reference::enumerate_path_partition(p, d, 3, m, oc);
    CHECK(fast == doctest::Approx(slow).epsilon(1e-12));
  }
  CHECK_THROWS_AS(enumerate_path_partition(p, d, 3, PathMode::constrained), std::invalid_argument);
  CHECK_THROWS_AS(enumerate_path_partition(p, make_disorder(5, 1), 5, PathMode::plain), std::invalid_argument);
}

TEST_CASE("path enumeration converges to the trace") {
  DisorderSample d = make_disorder(2, 3);
  ModelParams p = make_params(1.0, 0.8);
  double exact = trace_partition(p, d), prev = 1e300;
  for (std::size_t L : {2u, 4u, 8u}) {
    double err = std::abs(enumerate_path_partition(p, d, L, PathMode::plain) - exact);
    CHECK(err < prev);
    prev = err;
  }
  CHECK(prev < 1e-2);
}

TEST_CASE("exact overlaps match the pair double loop") {
  DisorderSample d = make_disorder(2, 12);
  for (PathMode m : {PathMode::plain, PathMode::corrected}) {
    ModelParams p = make_params(1.5, 0.4);
    OverlapMoments a = gibbs_overlap_exact(p, d, 4, m), b = reference::gibbs_overlap_exact(p, d, 4, m);
    CHECK(a.self_overlap_sq == doctest::Approx(b.self_overlap_sq).epsilon(1e-12));
    CHECK(a.replica_overlap_sq == doctest::Approx(b.replica_overlap_sq).epsilon(1e-12));
    CHECK(a.partition == doctest::Approx(b.partition).epsilon(1e-12));
    CHECK(a.replica_overlap_sq <= a.self_overlap_sq + 1e-12);
  }
}

TEST_CASE("annealed cancellation for the corrected weight") {
  for (auto [n, L] : {std::pair<std::size_t, std::size_t>{1, 4}, {2, 4}, {4, 4}, {2, 8}, {8, 2}, {16, 1}})
    CHECK(annealed_path_partition(make_params(1.7, 0.9), n, L, PathMode::corrected) ==
          doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("annealed plain partition against a disorder average") {
  ModelParams p = make_params(0.8, 0.5);
  const std::size_t n = 2, L = 2, samples = 20000;
  double exact = annealed_path_partition(p, n, L, PathMode::plain);
  double s = 0.0, s2 = 0.0;
  for (std::size_t i = 0; i < samples; ++i) {
    double z = enumerate_path_partition(p, make_disorder(n, 5000 + i), L, PathMode::plain);
    s += z;
    s2 += z * z;
  }
  double mean = s / samples, se = std::sqrt((s2 / samples - mean * mean) / samples);
  CHECK(exact > 1.0);
  CHECK(std::abs(mean - exact) < 4.0 * se);
}

TEST_CASE("second moment against a disorder average") {
  ModelParams p = make_params(0.7, 0.6);
  const std::size_t n = 2, L = 2, samples = 20000;
  SecondMoment m = exact_second_moment(p, n, L);
  CHECK(m.first == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(m.second >= m.first * m.first);
  double s = 0.0, s2 = 0.0;
  for (std::size_t i = 0; i < samples; ++i) {
    double w = enumerate_path_partition(p, make_disorder(n, 9000 + i), L, PathMode::corrected);
    s += w * w;
    s2 += w * w * w * w;
  }
  double mean = s / samples, se = std::sqrt((s2 / samples - mean * mean) / samples);
  CHECK(std::abs(mean - m.second) < 4.0 * se);
}

TEST_CASE("Hopfield pressure matches a Kronecker construction") {
  PatternSet pat = random_sign_patterns(4, 2, 3);
  const double g = 0.7, beta = 1.2, b = 0.4;
  const std::size_t n = 4, m = 2;
  Eigen::Matrix2d sz, sx, id;
  sz << 1, 0, 0, -1;
  sx << 0, 1, 1, 0;
  id.setIdentity();
  auto site = [&](std::size_t j, const Eigen::Matrix2d& op) {
    Eigen::MatrixXd r = Eigen::MatrixXd::Identity(1, 1);
    for (std::size_t k = 0; k < n; ++k) {
      Eigen::MatrixXd next = Eigen::kroneckerProduct(k == j ? op : id, r);
      r = next;
    }
    return r;
  };
  Eigen::MatrixXd H = Eigen::MatrixXd::Zero(16, 16);
  for (std::size_t k = 0; k < m; ++k) {
    Eigen::MatrixXd mk = Eigen::MatrixXd::Zero(16, 16);
    for (std::size_t j = 0; j < n; ++j) mk += pat(k, j) * site(j, sz);
    H -= g / (n * m) * mk * mk;
  }
  for (std::size_t j = 0; j < n; ++j) H -= b * site(j, sx);
  double expect = std::log((-beta * H).exp().trace()) / n;
  CHECK(hopfield_pressure_exact(g, beta, b, pat) == doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("path modes parse") {
  CHECK(parse_path_mode("corrected") == PathMode::corrected);
  CHECK(to_string(PathMode::plain) == "plain");
  CHECK_THROWS_AS(parse_path_mode("bogus"), std::invalid_argument);
}
