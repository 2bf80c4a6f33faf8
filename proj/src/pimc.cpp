#include "qatlab/pimc.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <stdexcept>

namespace qat {

McEstimate estimate_from_series(std::span<const double> x, double window_factor) {
  const std::size_t n = x.size();
  if (n == 0) throw std::invalid_argument("empty series");
  McEstimate e;
  e.n_samples = n;
  double m = 0.0;
  for (double v : x) m += v;
  m /= static_cast<double>(n);
  e.mean = m;
  double c0 = 0.0;
  for (double v : x) c0 += (v - m) * (v - m);
  c0 /= static_cast<double>(n);
  if (c0 <= 0.0 || n < 2) return e;
  double tau = 0.5;
  for (std::size_t w = 1; w < n; ++w) {
    double c = 0.0;
    for (std::size_t i = 0; i + w < n; ++i) c += (x[i] - m) * (x[i + w] - m);
    tau += c / static_cast<double>(n) / c0;
    if (static_cast<double>(w) >= window_factor * tau) break;
  }
  tau = std::max(tau, 0.5);
  e.autocorrelation_time = tau;
  e.std_error = std::sqrt(2.0 * tau * c0 / static_cast<double>(n));
  return e;
}

McEstimate pool_independent(std::span<const McEstimate> parts) {
  if (parts.empty()) throw std::invalid_argument("nothing to pool");
  McEstimate out;
  const double k = static_cast<double>(parts.size());
  double tau = 0.0;
  for (const auto& p : parts) {
    out.mean += p.mean;
    out.n_samples += p.n_samples;
    tau += p.autocorrelation_time;
  }
  out.mean /= k;
  out.autocorrelation_time = tau / k;
  if (parts.size() == 1) {
    out.std_error = parts[0].std_error;
    return out;
  }
  double v = 0.0;
  for (const auto& p : parts) v += (p.mean - out.mean) * (p.mean - out.mean);
  out.std_error = std::sqrt(v / (k - 1.0) / k);
  return out;
}

LatticeState::LatticeState(std::size_t n, std::size_t L) : n_(n), L_(L), s_(n * L, 1), S_(L * L, 0) {
  if (n == 0 || L == 0) throw std::invalid_argument("lattice needs n, L >= 1");
}

void LatticeState::assign(std::span<const int> spins, const DisorderSample& d, const KernelGrid* target) {
  if (spins.size() != n_ * L_) throw std::invalid_argument("spin array has wrong size");
  if (d.n != n_) throw std::invalid_argument("disorder size does not match lattice");
  if (target && target->size() != L_) throw std::invalid_argument("target grid size does not match lattice");
  for (std::size_t i = 0; i < spins.size(); ++i) {
    if (spins[i] != 1 && spins[i] != -1) throw std::invalid_argument("spins must be +-1");
    s_[i] = static_cast<signed char>(spins[i]);
  }
  target_ = target;
  target_sq_ = 0.0;
  if (target)
    for (double v : target->values()) target_sq_ += v * v;
  rebuild(d);
}

void LatticeState::rebuild(const DisorderSample& d) {
  flips_ = 0;
  for (std::size_t j = 0; j < n_; ++j)
    for (std::size_t l = 0; l < L_; ++l)
      if (s_[j * L_ + l] != s_[j * L_ + (l + 1) % L_]) ++flips_;
  energy_sum_ = 0.0;
  std::vector<int> col(n_);
  for (std::size_t l = 0; l < L_; ++l) {
    for (std::size_t j = 0; j < n_; ++j) col[j] = s_[j * L_ + l];
    energy_sum_ += sk_energy(col, d);
  }
  std::fill(S_.begin(), S_.end(), 0);
  for (std::size_t j = 0; j < n_; ++j)
    for (std::size_t l = 0; l < L_; ++l)
      for (std::size_t lp = 0; lp < L_; ++lp) S_[l * L_ + lp] += s_[j * L_ + l] * s_[j * L_ + lp];
  sumsq_ = 0;
  dot_ = 0.0;
  for (std::size_t i = 0; i < L_ * L_; ++i) {
    sumsq_ += S_[i] * S_[i];
    if (target_) dot_ += static_cast<double>(S_[i]) * target_->data()[i];
  }
}

double LatticeState::overlap_norm_sq() const {
  double nl = static_cast<double>(n_ * L_);
  return static_cast<double>(sumsq_) / (nl * nl);
}

KernelGrid LatticeState::overlap() const {
  KernelGrid q(L_);
  for (std::size_t i = 0; i < L_ * L_; ++i) q.data()[i] = static_cast<double>(S_[i]) / static_cast<double>(n_);
  return q;
}

double LatticeState::consistency_error(const DisorderSample& d) const {
  LatticeState fresh(*this);
  fresh.rebuild(d);
  double err = std::abs(fresh.energy_sum_ - energy_sum_) / static_cast<double>(L_);
  err = std::max(err, std::abs(fresh.overlap_norm_sq() - overlap_norm_sq()));
  err = std::max(err, std::abs(static_cast<double>(fresh.flips_) - static_cast<double>(flips_)));
  err = std::max(err, std::abs(fresh.dot_ - dot_));
  for (std::size_t i = 0; i < S_.size(); ++i)
    err = std::max(err, std::abs(static_cast<double>(fresh.S_[i] - S_[i])));
  return err;
}

void LatticeState::resync(const DisorderSample& d) { rebuild(d); }

double LatticeState::local_field(std::size_t j, std::size_t l, const std::vector<double>& h) const {
  double f = 0.0;
  const double* row = h.data() + j * n_;
  for (std::size_t k = 0; k < n_; ++k) f += row[k] * s_[k * L_ + l];
  return f;
}

long LatticeState::flip_delta_flips(std::size_t j, std::size_t l) const {
  if (L_ == 1) return 0;
  const int s = s_[j * L_ + l];
  const std::size_t prev = (l + L_ - 1) % L_, next = (l + 1) % L_;
  long d = 0;
  d += s_[j * L_ + prev] != s ? -1 : 1;
  d += s_[j * L_ + next] != s ? -1 : 1;
  return d;
}

long LatticeState::flip_delta_sumsq(std::size_t j, std::size_t l) const {
  const int s = s_[j * L_ + l];
  long d = 0;
  for (std::size_t lp = 0; lp < L_; ++lp) {
    if (lp == l) continue;
    long delta = -2L * s * s_[j * L_ + lp];
    long old = S_[l * L_ + lp];
    d += 2 * (2 * old * delta + delta * delta);
  }
  return d;
}

double LatticeState::flip_delta_dot(std::size_t j, std::size_t l) const {
  if (!target_) return 0.0;
  const int s = s_[j * L_ + l];
  double d = 0.0;
  for (std::size_t lp = 0; lp < L_; ++lp) {
    if (lp == l) continue;
    double delta = -2.0 * s * s_[j * L_ + lp];
    d += delta * (target_->data()[l * L_ + lp] + target_->data()[lp * L_ + l]);
  }
  return d;
}

double LatticeState::distance_sq_to_target(double sumsq_shift, double dot_shift) const {
  const double nn = static_cast<double>(n_), LL = static_cast<double>(L_);
  double v = ((static_cast<double>(sumsq_) + sumsq_shift) / (nn * nn) - 2.0 * (dot_ + dot_shift) / nn + target_sq_) /
             (LL * LL);
  return std::max(v, 0.0);
}

void LatticeState::flip(std::size_t j, std::size_t l, const std::vector<double>& h) {
  const int s = s_[j * L_ + l];
  flips_ += static_cast<std::size_t>(flip_delta_flips(j, l));
  dot_ += flip_delta_dot(j, l);
  energy_sum_ -= 2.0 * s * local_field(j, l, h);
  for (std::size_t lp = 0; lp < L_; ++lp) {
    if (lp == l) continue;
    long delta = -2L * s * s_[j * L_ + lp];
    long old = S_[l * L_ + lp];
    sumsq_ += 2 * (2 * old * delta + delta * delta);
    S_[l * L_ + lp] = old + delta;
    S_[lp * L_ + l] = old + delta;
  }
  s_[j * L_ + l] = static_cast<signed char>(-s);
}

void LatticeState::flip_timeline(std::size_t j, double delta_energy_sum) {
  for (std::size_t l = 0; l < L_; ++l) s_[j * L_ + l] = static_cast<signed char>(-s_[j * L_ + l]);
  energy_sum_ += delta_energy_sum;
}

std::vector<double> symmetric_fields(const DisorderSample& d) {
  const std::size_t n = d.n;
  std::vector<double> h(n * n, 0.0);
  const double c = 1.0 / std::sqrt(2.0 * static_cast<double>(n));
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t k = 0; k < n; ++k)
      if (j != k) h[j * n + k] = c * (d(j, k) + d(k, j));
  return h;
}

namespace {

double penalty_coefficient(const ModelParams& p, std::size_t n, PathMode mode) {
  if (mode == PathMode::plain) return 0.0;
  return static_cast<double>(n) * p.lambda2 * p.lambda2 * p.beta * p.beta / 4.0;
}

}  // namespace

double lattice_log_weight(const LatticeState& s, const ModelParams& p, const DisorderSample& d,
                          const SweepOptions& opt) {
  const std::size_t n = s.n(), L = s.slices();
  const double x = p.beta_b() / static_cast<double>(L);
  double lw = 0.0;
  std::size_t flips = 0;
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t l = 0; l < L; ++l)
      if (s.spin(j, l) != s.spin(j, (l + 1) % L)) ++flips;
  if (flips > 0 && x == 0.0) return -std::numeric_limits<double>::infinity();
  lw += static_cast<double>(n * L - flips) * std::log(std::cosh(x));
  if (flips > 0) lw += static_cast<double>(flips) * std::log(std::sinh(x));
  lw -= static_cast<double>(n) * log_2cosh(p.beta_b());
  double e = 0.0;
  std::vector<int> col(n);
  for (std::size_t l = 0; l < L; ++l) {
    for (std::size_t j = 0; j < n; ++j) col[j] = s.spin(j, l);
    e += sk_energy(col, d);
  }
  lw -= p.beta * p.lambda1 * e / static_cast<double>(L);
  KernelGrid q(L);
  for (std::size_t l = 0; l < L; ++l)
    for (std::size_t lp = 0; lp < L; ++lp) {
      double v = 0.0;
      for (std::size_t j = 0; j < n; ++j) v += s.spin(j, l) * s.spin(j, lp);
      q(l, lp) = v / static_cast<double>(n);
    }
  lw -= penalty_coefficient(p, n, opt.mode) * hs_inner(q, q);
  if (opt.mode == PathMode::constrained) {
    if (!opt.constraint) throw std::invalid_argument("constrained mode needs a constraint");
    if (hs_norm(q - opt.constraint->target) > opt.constraint->radius) return -std::numeric_limits<double>::infinity();
  }
  return lw;
}

double flip_log_ratio(const LatticeState& s, std::size_t j, std::size_t l, const ModelParams& p,
                      const std::vector<double>& h, const SweepOptions& opt) {
  const std::size_t n = s.n(), L = s.slices();
  const double x = p.beta_b() / static_cast<double>(L);
  double lr = 0.0;
  long df = s.flip_delta_flips(j, l);
  if (df != 0) {
    if (x == 0.0) return df > 0 ? -std::numeric_limits<double>::infinity() : std::numeric_limits<double>::infinity();
    lr += static_cast<double>(df) * std::log(std::tanh(x));
  }
  const int sp = s.spin(j, l);
  double de = -2.0 * sp * s.local_field(j, l, h);
  lr -= p.beta * p.lambda1 / static_cast<double>(L) * de;
  long dsq = 0;
  if (opt.mode != PathMode::plain) {
    dsq = s.flip_delta_sumsq(j, l);
    double nl = static_cast<double>(n * L);
    lr -= penalty_coefficient(p, n, opt.mode) * static_cast<double>(dsq) / (nl * nl);
  }
  if (opt.mode == PathMode::constrained) {
    double r2 = opt.constraint->radius * opt.constraint->radius;
    if (s.distance_sq_to_target(static_cast<double>(dsq), s.flip_delta_dot(j, l)) > r2)
      return -std::numeric_limits<double>::infinity();
  }
  return lr;
}

double metropolis_sweep(LatticeState& s, const ModelParams& p, const DisorderSample& d, const std::vector<double>& h,
                        const SweepOptions& opt, CounterRng& rng) {
  (void)d;
  const std::size_t n = s.n(), L = s.slices();
  if (opt.mode == PathMode::constrained && !opt.constraint)
    throw std::invalid_argument("constrained mode needs a constraint");
  std::size_t accepted = 0;
  for (std::size_t step = 0; step < n * L; ++step) {
    std::size_t j = static_cast<std::size_t>(rng.below(n));
    std::size_t l = static_cast<std::size_t>(rng.below(L));
    double lr = flip_log_ratio(s, j, l, p, h, opt);
    if (lr >= 0.0 || rng.uniform() < std::exp(lr)) {
      s.flip(j, l, h);
      ++accepted;
    }
  }
  if (opt.timeline_flips) {
    const double field = p.beta * p.lambda1 / static_cast<double>(L);
    for (std::size_t step = 0; step < n; ++step) {
      std::size_t j = static_cast<std::size_t>(rng.below(n));
      double de = 0.0;
      for (std::size_t l = 0; l < L; ++l) de -= 2.0 * s.spin(j, l) * s.local_field(j, l, h);
      double lr = -field * de;
      if (lr >= 0.0 || rng.uniform() < std::exp(lr)) s.flip_timeline(j, de);
    }
  }
  return static_cast<double>(accepted) / static_cast<double>(n * L);
}

LatticeState constrained_start(const DisorderSample& d, std::size_t L, const Constraint& c, CounterRng& rng,
                               std::size_t max_sweeps) {
  const std::size_t n = d.n;
  LatticeState s(n, L);
  std::vector<int> init(n * L);
  for (std::size_t j = 0; j < n; ++j) {
    int v = rng.spin();
    for (std::size_t l = 0; l < L; ++l) init[j * L + l] = v;
  }
  s.assign(init, d, &c.target);
  auto h = symmetric_fields(d);
  const double r2 = c.radius * c.radius;
  double dist = s.distance_sq_to_target();
  if (dist <= r2) return s;
  double temp = 0.1 * std::max(dist, 1e-6);
  const double cool = std::pow(1e-8, 1.0 / static_cast<double>(std::max<std::size_t>(max_sweeps, 1)));
  for (std::size_t sweep = 0; sweep < max_sweeps; ++sweep) {
    for (std::size_t step = 0; step < n * L; ++step) {
      std::size_t j = static_cast<std::size_t>(rng.below(n));
      std::size_t l = static_cast<std::size_t>(rng.below(L));
      double nd = s.distance_sq_to_target(static_cast<double>(s.flip_delta_sumsq(j, l)), s.flip_delta_dot(j, l));
      double delta = nd - dist;
      if (delta <= 0.0 || rng.uniform() < std::exp(-delta / temp)) {
        s.flip(j, l, h);
        dist = nd;
        if (dist <= r2) return s;
      }
    }
    temp *= cool;
  }
  throw NumericalError("simulated annealing found no configuration inside the constraint ball after " +
                       std::to_string(max_sweeps) + " sweeps");
}

ChainTrace run_chain(const ModelParams& p, const DisorderSample& d, const RunConfig& cfg, std::uint64_t stream,
                     bool keep_pair_matrices, bool keep_q_blocks) {
  p.validate();
  const std::size_t n = d.n, L = cfg.slices;
  if (L == 0) throw std::invalid_argument("need at least one slice");
  if (cfg.thin == 0) throw std::invalid_argument("thinning must be positive");
  if (cfg.mode == PathMode::constrained) {
    if (!cfg.constraint) throw std::invalid_argument("constrained mode needs a constraint");
    if (cfg.constraint->target.size() != L) throw std::invalid_argument("constraint grid size does not match slices");
  }
  CounterRng rng = CounterRng(cfg.seed).split(stream);
  const KernelGrid* target = cfg.constraint ? &cfg.constraint->target : nullptr;
  LatticeState s(n, L);
  if (cfg.mode == PathMode::constrained) {
    s = constrained_start(d, L, *cfg.constraint, rng, cfg.anneal_sweeps);
  } else {
    std::vector<int> init(n * L);
    for (std::size_t j = 0; j < n; ++j) {
      int v = rng.spin();
      for (std::size_t l = 0; l < L; ++l) init[j * L + l] = v;
    }
    s.assign(init, d, target);
  }
  auto h = symmetric_fields(d);
  SweepOptions opt{cfg.mode, cfg.constraint ? &*cfg.constraint : nullptr, cfg.timeline_flips};

  ChainTrace tr;
  tr.q_sum = KernelGrid(L);
  const std::size_t expected = cfg.sweeps / cfg.thin;
  const std::size_t block = std::max<std::size_t>(1, (expected + 1023) / 1024);
  std::vector<double> block_acc(L * L, 0.0);
  std::size_t in_block = 0;
  double acc_sum = 0.0;
  const std::size_t total = cfg.burn_in + cfg.sweeps;
  for (std::size_t sweep = 1; sweep <= total; ++sweep) {
    acc_sum += metropolis_sweep(s, p, d, h, opt, rng);
    if (cfg.check_interval && sweep % cfg.check_interval == 0) {
      double err = s.consistency_error(d);
      tr.max_cache_error = std::max(tr.max_cache_error, err);
      if (err > 1e-8 * std::max(1.0, std::abs(s.energy())))
        throw NumericalError("cached lattice values drifted from recomputation by " + std::to_string(err));
      s.resync(d);
    }
    if (sweep <= cfg.burn_in || (sweep - cfg.burn_in) % cfg.thin != 0) continue;
    tr.energy.push_back(s.energy());
    tr.q_norm_sq.push_back(s.overlap_norm_sq());
    KernelGrid q = s.overlap();
    tr.q_sum += q;
    if (keep_q_blocks) {
      for (std::size_t i = 0; i < L * L; ++i) block_acc[i] += q.data()[i];
      if (++in_block == block) {
        for (double& v : block_acc) v /= static_cast<double>(block);
        tr.q_blocks.push_back(block_acc);
        std::fill(block_acc.begin(), block_acc.end(), 0.0);
        in_block = 0;
      }
    }
    if (keep_pair_matrices) {
      std::vector<double> A(n * n);
      for (std::size_t j = 0; j < n; ++j)
        for (std::size_t jp = j; jp < n; ++jp) {
          long v = 0;
          for (std::size_t l = 0; l < L; ++l) v += s.spin(j, l) * s.spin(jp, l);
          A[j * n + jp] = A[jp * n + j] = static_cast<double>(v);
        }
      tr.pair_blocks.push_back(std::move(A));
    }
  }
  tr.acceptance = acc_sum / static_cast<double>(total);
  return tr;
}

SelfOverlapEstimate estimate_self_overlap(const ModelParams& p, const DisorderSample& d, const RunConfig& cfg) {
  ChainTrace tr = run_chain(p, d, cfg, 0, false, true);
  const std::size_t ns = tr.q_norm_sq.size();
  if (ns < 10) throw std::invalid_argument("fewer than 10 retained samples");
  const std::size_t L = cfg.slices;
  SelfOverlapEstimate out;
  out.mean = tr.q_sum;
  out.mean *= 1.0 / static_cast<double>(ns);
  out.std_error = KernelGrid(L);
  out.norm_sq = estimate_from_series(tr.q_norm_sq);
  const std::size_t nb = tr.q_blocks.size();
  std::vector<double> series(nb);
  for (std::size_t k = 0; k < L; ++k)
    for (std::size_t kp = k; kp < L; ++kp) {
      double se = 0.0;
      if (nb >= 2) {
        for (std::size_t b = 0; b < nb; ++b) series[b] = tr.q_blocks[b][k * L + kp];
        se = estimate_from_series(series).std_error;
      }
      out.std_error(k, kp) = out.std_error(kp, k) = se;
    }
  return out;
}

namespace {

std::vector<double> replica_series(const ChainTrace& a, const ChainTrace& b, std::size_t n, std::size_t L) {
  const std::size_t ns = std::min(a.pair_blocks.size(), b.pair_blocks.size());
  std::vector<double> r(ns);
  const double nl = static_cast<double>(n * L);
  for (std::size_t i = 0; i < ns; ++i) {
    double s = 0.0;
    for (std::size_t e = 0; e < n * n; ++e) s += a.pair_blocks[i][e] * b.pair_blocks[i][e];
    r[i] = s / (nl * nl);
  }
  return r;
}

}  // namespace

McEstimate estimate_replica_overlap(const ModelParams& p, const DisorderSample& d, const RunConfig& cfg) {
  ChainTrace a = run_chain(p, d, cfg, 1, true);
  ChainTrace b = run_chain(p, d, cfg, 2, true);
  auto r = replica_series(a, b, d.n, cfg.slices);
  if (r.size() < 10) throw std::invalid_argument("fewer than 10 retained samples");
  return estimate_from_series(r);
}

namespace {

double trapezoid(std::span<const double> x, std::span<const double> f, std::span<const double> se, double& err) {
  double v = 0.0, var = 0.0;
  for (std::size_t i = 0; i + 1 < x.size(); ++i) {
    double h = x[i + 1] - x[i];
    v += 0.5 * h * (f[i] + f[i + 1]);
  }
  for (std::size_t i = 0; i < x.size(); ++i) {
    double w = 0.0;
    if (i > 0) w += 0.5 * (x[i] - x[i - 1]);
    if (i + 1 < x.size()) w += 0.5 * (x[i + 1] - x[i]);
    var += w * w * se[i] * se[i];
  }
  err = std::sqrt(var);
  return v;
}

}  // namespace

ThermoIntegration pressure_thermo_integration(const ModelParams& p, const DisorderSample& d,
                                              std::span<const double> lambda_grid, const RunConfig& cfg,
                                              TiForm form) {
  const std::size_t G = lambda_grid.size();
  if (G < 8) throw std::invalid_argument("lambda grid needs at least 8 points");
  if (lambda_grid[0] != 0.0) throw std::invalid_argument("lambda grid must start at 0");
  for (std::size_t i = 1; i < G; ++i)
    if (lambda_grid[i] < lambda_grid[i - 1]) throw std::invalid_argument("lambda grid must be nondecreasing");
  if (cfg.mode == PathMode::plain) throw std::invalid_argument("thermodynamic integration uses the corrected weight");
  const std::size_t n = d.n, L = cfg.slices;
  ThermoIntegration out;
  out.derivative.resize(G);
  std::exception_ptr failure;
#pragma omp parallel for num_threads(thread_count()) schedule(dynamic)
  for (std::int64_t i = 0; i < static_cast<std::int64_t>(G); ++i) {
    try {
      ModelParams pi = p;
      pi.lambda1 = pi.lambda2 = lambda_grid[i];
      const double lam = lambda_grid[i], b2 = p.beta * p.beta, nn = static_cast<double>(n);
      std::vector<double> series;
      if (form == TiForm::direct) {
        ChainTrace tr = run_chain(pi, d, cfg, 100 + static_cast<std::uint64_t>(i));
        series.resize(tr.energy.size());
        for (std::size_t k = 0; k < series.size(); ++k)
          series[k] = (-p.beta * tr.energy[k] - nn * lam * b2 / 2.0 * tr.q_norm_sq[k]) / nn;
      } else {
        ChainTrace a = run_chain(pi, d, cfg, 100 + static_cast<std::uint64_t>(i), true);
        ChainTrace b = run_chain(pi, d, cfg, 100000 + static_cast<std::uint64_t>(i), true);
        auto r = replica_series(a, b, n, L);
        series.resize(r.size());
        for (std::size_t k = 0; k < series.size(); ++k)
          series[k] = b2 * lam / 2.0 * (0.5 * (a.q_norm_sq[k] + b.q_norm_sq[k]) - r[k]);
      }
      if (series.size() < 10) throw std::invalid_argument("fewer than 10 retained samples");
      out.derivative[i] = estimate_from_series(series);
    } catch (...) {
#pragma omp critical
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  std::vector<double> f(G), se(G);
  for (std::size_t i = 0; i < G; ++i) {
    f[i] = out.derivative[i].mean;
    se[i] = out.derivative[i].std_error;
  }
  out.value = trapezoid(lambda_grid, f, se, out.std_error);
  // coarse grid: every other point, always keeping the endpoint
  std::vector<double> cx, cf, cs;
  for (std::size_t i = 0; i < G; i += 2) {
    cx.push_back(lambda_grid[i]);
    cf.push_back(f[i]);
    cs.push_back(se[i]);
  }
  if ((G - 1) % 2 != 0) {
    cx.push_back(lambda_grid[G - 1]);
    cf.push_back(f[G - 1]);
    cs.push_back(se[G - 1]);
  }
  out.coarse_value = trapezoid(cx, cf, cs, out.coarse_std_error);
  double comb = std::hypot(out.std_error, out.coarse_std_error);
  out.refinement_warning = std::abs(out.value - out.coarse_value) > 3.0 * comb;
  return out;
}

}  // namespace qat
