#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qatlab/common.hpp"
#include "qatlab/exact_oracle.hpp"
#include "qatlab/kernel_grid.hpp"
#include "qatlab/rng.hpp"

namespace qat {

struct McEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::size_t n_samples = 0;
  double autocorrelation_time = 0.5;
};

// Integrated autocorrelation time with automatic windowing (window grows
// until W >= c * tau(W)); the standard error is inflated by sqrt(2 tau).
McEstimate estimate_from_series(std::span<const double> x, double window_factor = 6.0);

// Average over independent estimates (e.g. disorder samples): the error is the
// spread of the means when more than one, else the single reported error.
McEstimate pool_independent(std::span<const McEstimate> parts);

// N x L spin-time lattice with cached energy and self-overlap.
class LatticeState {
 public:
  LatticeState(std::size_t n, std::size_t L);

  std::size_t n() const { return n_; }
  std::size_t slices() const { return L_; }
  int spin(std::size_t j, std::size_t l) const { return s_[j * L_ + l]; }
  std::span<const signed char> spins() const { return s_; }

  // (1/L) sum_l U(sigma_l)
  double energy() const { return energy_sum_ / static_cast<double>(L_); }
  double overlap_norm_sq() const;
  KernelGrid overlap() const;
  std::size_t flip_count() const { return flips_; }

  // Set spins and rebuild every cache from scratch.
  void assign(std::span<const int> spins, const DisorderSample& d, const KernelGrid* target = nullptr);
  // Largest discrepancy between caches and a full recomputation.
  double consistency_error(const DisorderSample& d) const;
  void resync(const DisorderSample& d);

  // Incremental updates (caller guarantees the disorder matches).
  void flip(std::size_t j, std::size_t l, const std::vector<double>& h);
  void flip_timeline(std::size_t j, double delta_energy_sum);
  double local_field(std::size_t j, std::size_t l, const std::vector<double>& h) const;

  // Changes caused by flipping (j, l), without applying it.
  long flip_delta_flips(std::size_t j, std::size_t l) const;
  long flip_delta_sumsq(std::size_t j, std::size_t l) const;
  double flip_delta_dot(std::size_t j, std::size_t l) const;
  double distance_sq_to_target(double sumsq_shift = 0, double dot_shift = 0) const;

 private:
  void rebuild(const DisorderSample& d);

  std::size_t n_, L_;
  std::vector<signed char> s_;
  std::vector<long> S_;
  long sumsq_ = 0;
  std::size_t flips_ = 0;
  double energy_sum_ = 0.0;
  const KernelGrid* target_ = nullptr;
  double dot_ = 0.0;
  double target_sq_ = 0.0;
};

struct SweepOptions {
  PathMode mode = PathMode::corrected;
  const Constraint* constraint = nullptr;
  bool timeline_flips = true;
};

// Precomputed couplings h_jk = (g_jk + g_kj)/sqrt(2N), zero diagonal.
std::vector<double> symmetric_fields(const DisorderSample& d);

// Full stationary log weight of a state (recomputed from scratch).
double lattice_log_weight(const LatticeState& s, const ModelParams& p, const DisorderSample& d,
                          const SweepOptions& opt);

// Log acceptance ratio of flipping (j, l), computed incrementally.
double flip_log_ratio(const LatticeState& s, std::size_t j, std::size_t l, const ModelParams& p,
                      const std::vector<double>& h, const SweepOptions& opt);

// One sweep = N*L single-site proposals (+ N whole-timeline proposals).
// Returns the single-site acceptance rate.
double metropolis_sweep(LatticeState& s, const ModelParams& p, const DisorderSample& d, const std::vector<double>& h,
                        const SweepOptions& opt, CounterRng& rng);

struct RunConfig {
  std::size_t slices = 16;
  std::size_t sweeps = 10000;
  std::size_t burn_in = 1000;
  std::size_t thin = 1;
  std::uint64_t seed = 1;
  PathMode mode = PathMode::corrected;
  std::optional<Constraint> constraint;
  bool timeline_flips = true;
  std::size_t check_interval = 1000;
  std::size_t anneal_sweeps = 5000;
};

struct ChainTrace {
  std::vector<double> energy;       // (1/L) sum_l U per retained sample
  std::vector<double> q_norm_sq;    // ||Q||^2 per retained sample
  std::vector<std::vector<double>> pair_blocks;  // A_jj' per sample (if requested)
  KernelGrid q_sum;                 // running sum of Q
  std::vector<std::vector<double>> q_blocks;     // block means of Q entries
  double acceptance = 0.0;
  double max_cache_error = 0.0;
};

// Runs one chain; stream selects an independent RNG substream of cfg.seed.
ChainTrace run_chain(const ModelParams& p, const DisorderSample& d, const RunConfig& cfg, std::uint64_t stream,
                     bool keep_pair_matrices = false, bool keep_q_blocks = false);

// Starting state inside the constraint ball, by simulated annealing on ||Q - target||.
LatticeState constrained_start(const DisorderSample& d, std::size_t L, const Constraint& c, CounterRng& rng,
                               std::size_t max_sweeps);

struct SelfOverlapEstimate {
  KernelGrid mean;
  KernelGrid std_error;
  McEstimate norm_sq;  // <||Q||^2>
};
SelfOverlapEstimate estimate_self_overlap(const ModelParams& p, const DisorderSample& d, const RunConfig& cfg);

McEstimate estimate_replica_overlap(const ModelParams& p, const DisorderSample& d, const RunConfig& cfg);

enum class TiForm { direct, gip };

struct ThermoIntegration {
  double value = 0.0;
  double std_error = 0.0;
  double coarse_value = 0.0;
  double coarse_std_error = 0.0;
  bool refinement_warning = false;
  std::vector<McEstimate> derivative;  // per grid point
};

// (1/N) ln Z_hat(lambda) at the last grid point, lambda1 = lambda2 = lambda,
// corrected weight. direct integrates the fixed-disorder derivative
// <-beta E - N lambda beta^2/2 ||Q||^2>/N; gip integrates
// (beta^2 lambda/2)(<||Q||^2> - <<||R||^2>>), which equals the former only
// after disorder averaging.
ThermoIntegration pressure_thermo_integration(const ModelParams& p, const DisorderSample& d,
                                              std::span<const double> lambda_grid, const RunConfig& cfg,
                                              TiForm form = TiForm::direct);

}  // namespace qat
