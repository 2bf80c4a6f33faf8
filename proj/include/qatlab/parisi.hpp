#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "qatlab/common.hpp"
#include "qatlab/gauss_hermite.hpp"

namespace qat {

// Classical step path: pi = 0 on [0, m_1), q_j on [m_j, m_{j+1}), m_{r+1} = 1.
// Levels 0 < m_1 < ... < m_r <= 1, values 0 <= q_1 <= ... <= q_r.
struct StepPath {
  std::vector<double> m;
  std::vector<double> q;

  std::size_t levels() const { return m.size(); }
  void validate() const;
  static StepPath zero() { return {{1.0}, {0.0}}; }
};

enum class GaussianRule {
  grid,           // uniform-grid (trapezoid) convolution, step tied to 1/beta
  gauss_hermite,  // rescaled Gauss-Hermite, gh_nodes per level
};

struct QuadratureSpec {
  std::size_t gh_nodes = 64;
  std::size_t pmf_slices = 256;
  GaussianRule rule = GaussianRule::grid;
  double grid_step = 0.2;        // grid spacing in units of 1/beta (also capped by sigma/5)
  bool richardson = true;        // combine pmf at 2L and L with weights 4/3, -1/3
  bool collapse_unit_levels = true;  // integrate a level with m = 1 in closed form

  void validate() const;
};

// The functional at fixed (beta, b), lambda = 1. Holds the base law of the
// path time-average so repeated evaluations share it.
class ParisiFunctional {
 public:
  ParisiFunctional(double beta, double b, const QuadratureSpec& quad = {});

  double beta() const { return beta_; }
  double b() const { return b_; }
  const QuadratureSpec& quad() const { return quad_; }

  double value(const StepPath& path) const;
  double one_rsb(double m, double q) const;
  double d_pm(double q) const;
  double d_pmq(double q) const;

  // ln sum_v w(v) exp(a v - c v^2), symmetric in a.
  double log_base(double a, double c) const;
  // Tilted mean of v under the same weights.
  double tilted_mean(double a, double c) const;

  const std::vector<double>& support() const { return v_; }
  const std::vector<double>& weights() const { return w_; }

 private:
  double value_unchecked(std::vector<double> m, std::vector<double> q) const;
  double value_grid(const std::vector<double>& m, const std::vector<double>& q) const;
  double value_gh(const std::vector<double>& m, const std::vector<double>& q) const;
  double gh_level(std::size_t j, double y, const std::vector<double>& m, const std::vector<double>& sig,
                  double c) const;

  double beta_, b_;
  QuadratureSpec quad_;
  std::vector<double> v_, w_;
  GaussHermiteRule gh_;
};

double parisi_classical(const StepPath& path, const ModelParams& p, const QuadratureSpec& quad = {});
double one_rsb_pressure(double m, double q, const ModelParams& p, const QuadratureSpec& quad = {});
double d_pm(double q, const ModelParams& p, const QuadratureSpec& quad = {});
double d_pmq(double q, const ModelParams& p, const QuadratureSpec& quad = {});
double d_pmqq_at_zero(const ModelParams& p);

struct OptConfig {
  int restarts = 5;
  int max_evals = 4000;     // per restart
  double ftol = 1e-14;      // absolute spread of simplex values
  double xtol = 1e-9;       // simplex diameter in unconstrained coordinates
  double m_floor = 1e-6;
  double q_max = 1.0;       // pi(1) = <1, rho 1> never exceeds 1
  bool seed_from_lower = true;  // start r levels from the (r-1)-level optimum
};

struct KrsbResult {
  StepPath path;
  double value = 0.0;
  bool stagnated = false;
  int evaluations = 0;
};

KrsbResult minimize_k_rsb(const ModelParams& p, std::size_t r, const QuadratureSpec& quad = {},
                          const OptConfig& opt = {});
KrsbResult minimize_k_rsb(const ParisiFunctional& f, std::size_t r, const OptConfig& opt = {});

}  // namespace qat
