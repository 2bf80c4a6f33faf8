#include <doctest.h>

#include <cmath>
#include <sstream>
#include <vector>

#include "qatlab/path_measure.hpp"

using namespace qat;

TEST_CASE("sampled paths are closed and sorted") {
  CounterRng rng(3);
  for (int i = 0; i < 2000; ++i) {
    Path p = sample_path(2.5, rng);
    CHECK(p.jumps.size() % 2 == 0);
    CHECK(std::is_sorted(p.jumps.begin(), p.jumps.end()));
    for (double t : p.jumps) CHECK((t >= 0.0 && t < 1.0));
    CHECK(p(0.0) == p(0.999999) * (p.jumps.empty() || p.jumps.back() < 0.999999 ? 1 : -1));
  }
  CHECK(sample_path(0.0, 5).jumps.empty());
}

TEST_CASE("paths are reproducible from the seed") {
  Path a = sample_path(1.7, 99), b = sample_path(1.7, 99);
  CHECK(a.initial_spin == b.initial_spin);
  CHECK(a.jumps == b.jumps);
}

TEST_CASE("path evaluation is right-continuous") {
  Path p{1, {0.25, 0.5}};
  CHECK(p(0.0) == 1);
  CHECK(p(0.2499) == 1);
  CHECK(p(0.25) == -1);
  CHECK(p(0.5) == 1);
}

TEST_CASE("transfer matrix") {
  Matrix2 t = transfer_matrix(2.0, 0.25);
  CHECK(t[0][0] == doctest::Approx(std::cosh(0.5)));
  CHECK(t[0][1] == doctest::Approx(std::sinh(0.5)));
  CHECK(t[1][0] == t[0][1]);
  CHECK_THROWS_AS(transfer_matrix(1.0, 0.0), std::invalid_argument);
}

TEST_CASE("slice marginals are a probability law") {
  for (double x : {0.0, 0.4, 3.0}) {
    const std::size_t L = 6;
    double total = 0.0;
    std::vector<int> s(L);
    for (unsigned c = 0; c < (1u << L); ++c) {
      for (std::size_t l = 0; l < L; ++l) s[l] = (c >> l) & 1 ? 1 : -1;
      double p = marginal_probability(s, x);
      CHECK(p >= 0.0);
      total += p;
    }
    CHECK(total == doctest::Approx(1.0).epsilon(1e-13));
  }
  std::vector<int> up{1, 1, 1}, mixed{1, -1, 1};
  CHECK(marginal_probability(up, 0.0) == doctest::Approx(0.5));
  CHECK(marginal_probability(mixed, 0.0) == 0.0);
  std::vector<int> a{1, -1, -1, 1}, b{-1, -1, 1, 1};
  CHECK(marginal_probability(a, 1.2) == doctest::Approx(marginal_probability(b, 1.2)));
}

TEST_CASE("slice marginals agree with sampled paths") {
  // frequencies of (xi(0), xi(1/3), xi(2/3)) over sampled paths
  const double x = 1.3;
  const int n = 100000;
  std::vector<int> counts(8, 0);
  CounterRng rng(2024);
  for (int i = 0; i < n; ++i) {
    Path p = sample_path(x, rng);
    unsigned c = 0;
    for (int l = 0; l < 3; ++l) c |= (p(l / 3.0) == 1 ? 1u : 0u) << l;
    counts[c]++;
  }
  std::vector<int> s(3);
  for (unsigned c = 0; c < 8; ++c) {
    for (int l = 0; l < 3; ++l) s[l] = (c >> l) & 1 ? 1 : -1;
    double p = marginal_probability(s, x);
    double se = std::sqrt(p * (1 - p) / n);
    CHECK(std::abs(counts[c] / double(n) - p) < 4.0 * se + 1e-12);
  }
}

TEST_CASE("time-average law matches brute force") {
  for (double x : {0.0, 0.3, 1.0, 4.0})
    for (std::size_t L : {1u, 2u, 5u, 12u}) {
      TimeAveragePmf fast = time_average_pmf(x, L), slow = reference::time_average_pmf(x, L);
      REQUIRE(fast.masses.size() == L + 1);
      for (std::size_t k = 0; k <= L; ++k) CHECK(fast.masses[k] == doctest::Approx(slow.masses[k]).epsilon(1e-12));
    }
}

TEST_CASE("time-average law basics") {
  TimeAveragePmf p = time_average_pmf(2.0, 300);
  CHECK(p.total() == doctest::Approx(1.0).epsilon(1e-13));
  for (std::size_t k = 0; k <= 300; ++k) CHECK(p.masses[k] == doctest::Approx(p.masses[300 - k]).epsilon(1e-12));
  CHECK(p.moment(1) == doctest::Approx(0.0).epsilon(1e-12));
  TimeAveragePmf frozen = time_average_pmf(0.0, 64);
  CHECK(frozen.masses[0] == doctest::Approx(0.5));
  CHECK(frozen.masses[64] == doctest::Approx(0.5));
  // large beta b stays finite
  TimeAveragePmf hot = time_average_pmf(800.0, 256);
  CHECK(hot.total() == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("second moment of the time average") {
  for (double x : {0.5, 1.0, 2.0}) {
    double m2 = time_average_pmf(x, 1024).moment(2);
    CHECK(std::abs(m2 - std::tanh(x) / x) < 2e-3);
  }
}

TEST_CASE("moment generating function converges to the closed form") {
  const double x = 1.0;
  double prev = 0.0;
  for (std::size_t L : {256u, 512u, 1024u, 2048u}) {
    TimeAveragePmf p = time_average_pmf(x, L);
    double err = 0.0;
    for (double s = -3.0; s <= 3.0; s += 0.5)
      err = std::max(err, std::abs(base_case_expectation(s, 0.0, p) / telegraph_mgf(s, x) - 1.0));
    if (prev > 0.0) CHECK(err < prev);
    prev = err;
  }
  CHECK(prev < 1e-3);
  CHECK(telegraph_mgf(0.0, 2.0) == doctest::Approx(1.0));
}

TEST_CASE("base case expectation") {
  TimeAveragePmf p = time_average_pmf(0.8, 128);
  CHECK(base_case_expectation(0.0, 0.0, p) == doctest::Approx(1.0));
  CHECK(base_case_expectation(0.7, 0.2, p) == doctest::Approx(base_case_expectation(-0.7, 0.2, p)));
  CHECK(std::log(base_case_expectation(40.0, 3.0, p)) ==
        doctest::Approx(log_base_case_expectation(40.0, 3.0, p)).epsilon(1e-12));
  CHECK(std::log(base_case_expectation(10.0, 1.0, p)) ==
        doctest::Approx(log_base_case_expectation(10.0, 1.0, p)).epsilon(1e-12));
  CHECK(std::isfinite(log_base_case_expectation(5000.0, 10.0, p)));
}

TEST_CASE("pmf CSV") {
  std::stringstream ss;
  write_csv(ss, time_average_pmf(1.0, 4));
  std::string header;
  std::getline(ss, header);
  CHECK(header == "value,mass");
  int rows = 0;
  for (std::string line; std::getline(ss, line);) rows++;
  CHECK(rows == 5);
}
