#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "qatlab/rng.hpp"

namespace qat {

// Telegraph trajectory on [0,1): starts at initial_spin and flips at each jump.
struct Path {
  int initial_spin = 1;
  std::vector<double> jumps;  // sorted, even count

  // Right-continuous evaluation: a jump at t is already applied at t.
  int operator()(double t) const;
};

Path sample_path(double beta_b, CounterRng& rng);
Path sample_path(double beta_b, std::uint64_t seed);

using Matrix2 = std::array<std::array<double, 2>, 2>;
Matrix2 transfer_matrix(double beta_b, double delta);

// Probability of the slice spins under the discretized single-spin measure
// (cyclic product of transfer factors over 2 cosh(beta b)).
double marginal_probability(std::span<const int> spins, double beta_b);

// Law of (1/L) sum_l xi(t_{l-1}) on the support -1 + 2k/L.
struct TimeAveragePmf {
  std::size_t L = 0;
  std::vector<double> masses;  // index k <-> value -1 + 2k/L

  double value(std::size_t k) const { return -1.0 + 2.0 * static_cast<double>(k) / static_cast<double>(L); }
  double moment(int p) const;
  double total() const;
};

TimeAveragePmf time_average_pmf(double beta_b, std::size_t L);
void write_csv(std::ostream& os, const TimeAveragePmf& pmf);

double telegraph_mgf(double s, double beta_b);

// sum_v pmf(v) exp(a v - c v^2)
double base_case_expectation(double a, double c, const TimeAveragePmf& pmf);
double base_case_expectation(double a, double c, double beta_b, std::size_t L);
double log_base_case_expectation(double a, double c, const TimeAveragePmf& pmf);

namespace reference {
// Brute force over all 2^L slice configurations, L <= 20.
TimeAveragePmf time_average_pmf(double beta_b, std::size_t L);
}  // namespace reference

}  // namespace qat
