#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "qatlab/parisi.hpp"

namespace qat {

// T(b) = b / arctanh(b) on [0, 1], with T(0) = 1 and T(1) = 0.
double at_line_temperature(double b);

enum class Phase { annealed, glass, boundary_band };
std::string to_string(Phase p);

struct Tolerances {
  double value_tol = 1e-6;
  double q_tol = 1e-4;
  double noise_floor = 1e-9;  // values above -noise_floor count as zero
  double band = 0.01;         // |tanh(beta b)/b - 1| < band
  std::size_t levels = 2;
  QuadratureSpec quad{};
  OptConfig opt{};
};

struct PhasePoint {
  double b = 0.0;
  double temperature = 0.0;
  Phase classification = Phase::annealed;
  double parisi_value = 0.0;
  double optimal_q = 0.0;
  bool glass_predicate = false;  // b < tanh(beta b), i.e. tanh(beta b)/b > 1
  bool in_band = false;
  bool glass_by_value = false;   // the variational verdict, also reported inside the band
};

// tanh(beta b)/b, with the limit beta at b = 0.
double critical_ratio(double beta, double b);

PhasePoint classify_point(double beta, double b, const Tolerances& tol = {});

struct ScanResult {
  std::vector<PhasePoint> points;  // sorted by (T, b)
  std::size_t nb = 0, nt = 0;
  std::vector<double> b_values, t_values;
  std::vector<std::vector<std::pair<double, double>>> boundary;  // polylines in (b, T)
  std::vector<std::pair<double, double>> analytic;               // (b, T(b)) inside the window

  const PhasePoint& at(std::size_t ib, std::size_t it) const { return points[it * nb + ib]; }
};

struct ScanWindow {
  double b_min = 0.0, b_max = 1.2;
  double t_min = 0.05, t_max = 1.5;
  std::size_t nb = 50, nt = 50;
};

ScanResult scan_grid(const ScanWindow& w, const Tolerances& tol = {});

// Marching squares on the glass indicator (glass_by_value), edges cut at midpoints.
std::vector<std::vector<std::pair<double, double>>> sign_change_contour(const ScanResult& r);

// Largest distance from a contour vertex to the analytic curve, in grid cells
// (max-norm after scaling each axis by its spacing).
double contour_deviation_cells(const ScanResult& r);

struct ClassicalAt {
  double q_star = 0.0;
  double at_value = 0.0;
  bool is_rs = true;
  int iterations = 0;
  bool used_fallback = false;
};

// q = E tanh^2(beta sqrt(q) z + beta h), at = beta^2 E sech^4(...).
ClassicalAt classical_at_line(double beta, double h);

// Bisection for beta where at_value crosses 1.
double classical_critical_beta(double h, double lo, double hi, double tol = 1e-10);

void write_csv(std::ostream& os, const ScanResult& r);
void write_svg(std::ostream& os, const ScanResult& r);
// Rebuilds a scan (points only, then contour and analytic curve) from its CSV.
ScanResult read_scan_csv(std::istream& is);

namespace reference {
ScanResult scan_grid(const ScanWindow& w, const Tolerances& tol = {});
}  // namespace reference

}  // namespace qat
