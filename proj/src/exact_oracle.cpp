#include "qatlab/exact_oracle.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>
#include <random>
#include <stdexcept>

#include "qatlab/path_measure.hpp"
#include "qatlab/rng.hpp"

namespace qat {

DisorderSample make_disorder(std::size_t n, std::uint64_t seed) {
  if (n == 0) throw std::invalid_argument("disorder needs n >= 1");
  DisorderSample d;
  d.n = n;
  d.seed = seed;
  d.g.resize(n * n);
  CounterRng rng(seed);
  std::normal_distribution<double> normal;
  for (double& x : d.g) x = normal(rng);
  return d;
}

DisorderSample disorder_from_matrix(std::size_t n, std::vector<double> g) {
  if (g.size() != n * n) throw std::invalid_argument("coupling matrix has wrong size");
  DisorderSample d;
  d.n = n;
  d.g = std::move(g);
  return d;
}

void write_csv(std::ostream& os, const DisorderSample& d) {
  os << "n,seed\n" << d.n << ',' << d.seed << '\n' << std::setprecision(17);
  for (std::size_t j = 0; j < d.n; ++j) {
    for (std::size_t k = 0; k < d.n; ++k) {
      if (k) os << ',';
      os << d(j, k);
    }
    os << '\n';
  }
}

void PatternSet::validate() const {
  if (values.size() != n * m) throw std::invalid_argument("pattern matrix has wrong size");
  for (double v : values)
    if (!(v * v <= 1.0)) throw std::invalid_argument("pattern entries must lie in [-1, 1]");
}

PatternSet random_sign_patterns(std::size_t n, std::size_t m, std::uint64_t seed) {
  PatternSet p;
  p.n = n;
  p.m = m;
  p.values.resize(n * m);
  CounterRng rng(seed);
  for (double& v : p.values) v = rng.spin();
  return p;
}

PathMode parse_path_mode(const std::string& s) {
  if (s == "plain") return PathMode::plain;
  if (s == "corrected") return PathMode::corrected;
  if (s == "constrained") return PathMode::constrained;
  throw std::invalid_argument("unknown path mode '" + s + "'");
}

std::string to_string(PathMode m) {
  switch (m) {
    case PathMode::plain: return "plain";
    case PathMode::corrected: return "corrected";
    case PathMode::constrained: return "constrained";
  }
  return "?";
}

double sk_energy(std::span<const int> spins, const DisorderSample& d) {
  if (spins.size() != d.n) throw std::invalid_argument("spin vector length does not match disorder");
  double s = 0.0;
  for (std::size_t j = 0; j < d.n; ++j) {
    double row = 0.0;
    for (std::size_t k = 0; k < d.n; ++k) row += d(j, k) * spins[k];
    s += spins[j] * row;
  }
  return s / std::sqrt(2.0 * static_cast<double>(d.n));
}

SymmetricMatrix qsk_hamiltonian(const ModelParams& p, const DisorderSample& d, std::size_t cap) {
  p.validate();
  if (d.n > cap) throw std::invalid_argument("system size exceeds the dense Hamiltonian cap");
  const std::size_t n = d.n, dim = std::size_t{1} << n;
  SymmetricMatrix h(dim);
  std::vector<int> spins(n);
  for (std::size_t x = 0; x < dim; ++x) {
    for (std::size_t j = 0; j < n; ++j) spins[j] = (x >> j) & 1 ? -1 : 1;
    h(x, x) = p.lambda1 * sk_energy(spins, d);
    for (std::size_t j = 0; j < n; ++j) h(x, x ^ (std::size_t{1} << j)) = -p.b;
  }
  return h;
}

double trace_partition(const ModelParams& p, const DisorderSample& d, std::size_t cap) {
  auto ev = symmetric_eigenvalues(qsk_hamiltonian(p, d, cap));
  for (double& e : ev) e *= -p.beta;
  double lz = log_sum_exp(ev.data(), ev.size());
  return std::exp(lz - static_cast<double>(d.n) * log_2cosh(p.beta_b()));
}

namespace {

void check_constraint(PathMode mode, const std::optional<Constraint>& c, std::size_t L) {
  if (mode == PathMode::constrained) {
    if (!c) throw std::invalid_argument("constrained mode needs a constraint");
    if (c->target.size() != L) throw std::invalid_argument("constraint grid size does not match L");
  }
}

// Shared per-model constants of the discretised weight.
struct WeightModel {
  std::size_t n, L;
  double log_diag, log_off;  // log cosh(x), log sinh(x) with x = beta b / L
  double log_norm;           // n log 2cosh(beta b)
  double field;              // beta lambda1 / L
  double penalty;            // n lambda2^2 beta^2 / 4, or 0 in plain mode
  bool constrained;
  double radius2 = 0.0;

  WeightModel(const ModelParams& p, std::size_t n_, std::size_t L_, PathMode mode) : n(n_), L(L_) {
    p.validate();
    double x = p.beta_b() / static_cast<double>(L);
    log_diag = std::log(std::cosh(x));
    log_off = x > 0.0 ? std::log(std::sinh(x)) : -std::numeric_limits<double>::infinity();
    log_norm = static_cast<double>(n) * log_2cosh(p.beta_b());
    field = p.beta * p.lambda1 / static_cast<double>(L);
    penalty = mode == PathMode::plain ? 0.0 : static_cast<double>(n) * p.lambda2 * p.lambda2 * p.beta * p.beta / 4.0;
    constrained = mode == PathMode::constrained;
  }

  double log_transfer(std::size_t flips) const {
    if (flips == 0) return static_cast<double>(n * L) * log_diag - log_norm;
    return static_cast<double>(n * L - flips) * log_diag + static_cast<double>(flips) * log_off - log_norm;
  }
};

// Running state of a configuration for Gray-code enumeration.
struct GrayState {
  const WeightModel* w;
  const DisorderSample* d;
  const KernelGrid* target;
  std::vector<double> h;  // (g_jk + g_kj)/sqrt(2N), zero diagonal
  std::vector<int> spin;  // spin[j*L + l]
  std::vector<long> S;    // S[l*L + l'] = sum_j spin_jl spin_jl'
  std::size_t flips = 0;
  double energy = 0.0;    // sum_l U(sigma_l)
  long sumsq = 0;
  double dot = 0.0;       // sum S * target
  double target_sq = 0.0;

  GrayState(const WeightModel& wm, const DisorderSample& dis, const KernelGrid* tgt) : w(&wm), d(&dis), target(tgt) {
    const std::size_t n = wm.n;
    h.assign(n * n, 0.0);
    double c = 1.0 / std::sqrt(2.0 * static_cast<double>(n));
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k)
        if (j != k) h[j * n + k] = c * (dis(j, k) + dis(k, j));
    if (tgt)
      for (double v : tgt->values()) target_sq += v * v;
  }

  void load(std::uint64_t code) {
    const std::size_t n = w->n, L = w->L;
    spin.assign(n * L, 1);
    for (std::size_t b = 0; b < n * L; ++b) spin[b] = (code >> b) & 1 ? -1 : 1;
    flips = 0;
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t l = 0; l < L; ++l)
        if (spin[j * L + l] != spin[j * L + (l + 1) % L]) ++flips;
    energy = 0.0;
    std::vector<int> col(n);
    for (std::size_t l = 0; l < L; ++l) {
      for (std::size_t j = 0; j < n; ++j) col[j] = spin[j * L + l];
      energy += sk_energy(col, *d);
    }
    S.assign(L * L, 0);
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t l = 0; l < L; ++l)
        for (std::size_t lp = 0; lp < L; ++lp) S[l * L + lp] += spin[j * L + l] * spin[j * L + lp];
    sumsq = 0;
    dot = 0.0;
    for (std::size_t i = 0; i < L * L; ++i) {
      sumsq += S[i] * S[i];
      if (target) dot += static_cast<double>(S[i]) * target->data()[i];
    }
  }

  void flip(std::size_t bit) {
    const std::size_t n = w->n, L = w->L;
    const std::size_t j = bit / L, l = bit % L;
    const int s = spin[bit];
    if (L > 1) {
      std::size_t prev = (l + L - 1) % L, next = (l + 1) % L;
      flips += spin[j * L + prev] != s ? -1 : 1;
      flips += spin[j * L + next] != s ? -1 : 1;
    }
    double field = 0.0;
    for (std::size_t k = 0; k < n; ++k) field += h[j * n + k] * spin[k * L + l];
    energy -= 2.0 * s * field;
    for (std::size_t lp = 0; lp < L; ++lp) {
      if (lp == l) continue;
      long delta = -2L * s * spin[j * L + lp];
      long old = S[l * L + lp];
      sumsq += 2 * ((old + delta) * (old + delta) - old * old);
      S[l * L + lp] = old + delta;
      S[lp * L + l] = old + delta;
      if (target) dot += static_cast<double>(delta) * (target->data()[l * L + lp] + target->data()[lp * L + l]);
    }
    spin[bit] = -s;
  }

  double q_norm_sq() const {
    double nl = static_cast<double>(w->n * w->L);
    return static_cast<double>(sumsq) / (nl * nl);
  }

  double log_weight() const {
    if (flips > 0 && !std::isfinite(w->log_off)) return -std::numeric_limits<double>::infinity();
    if (w->constrained) {
      double nn = static_cast<double>(w->n), LL = static_cast<double>(w->L);
      double dist2 = (static_cast<double>(sumsq) / (nn * nn) - 2.0 * dot / nn + target_sq) / (LL * LL);
      if (dist2 > w->radius2 * (1.0 + 1e-12) + 1e-14) return -std::numeric_limits<double>::infinity();
    }
    return w->log_transfer(flips) - w->field * energy - w->penalty * q_norm_sq();
  }
};

struct Neumaier {
  double sum = 0.0, c = 0.0;
  void add(double x) {
    double t = sum + x;
    if (std::abs(sum) >= std::abs(x))
      c += (sum - t) + x;
    else
      c += (x - t) + sum;
    sum = t;
  }
  double value() const { return sum + c; }
};

}  // namespace

double enumerate_path_partition(const ModelParams& p, const DisorderSample& d, std::size_t L, PathMode mode,
                                const std::optional<Constraint>& constraint) {
  if (L == 0) throw std::invalid_argument("L must be positive");
  if (d.n * L > kEnumerationCap) throw std::invalid_argument("N*L exceeds the enumeration cap");
  check_constraint(mode, constraint, L);
  WeightModel wm(p, d.n, L, mode);
  const KernelGrid* target = nullptr;
  if (mode == PathMode::constrained) {
    target = &constraint->target;
    wm.radius2 = constraint->radius * constraint->radius;
  }
  const std::uint64_t total = std::uint64_t{1} << (d.n * L);
  // Fixed chunking keeps the reduction order, and so the result, independent of thread count.
  const std::uint64_t chunks = std::min<std::uint64_t>(total, 256);
  const std::uint64_t per = total / chunks;
  std::vector<double> partial(chunks, 0.0);
#pragma omp parallel num_threads(thread_count())
  {
    GrayState st(wm, d, target);
#pragma omp for schedule(dynamic)
    for (std::int64_t c = 0; c < static_cast<std::int64_t>(chunks); ++c) {
      std::uint64_t i0 = static_cast<std::uint64_t>(c) * per;
      st.load(i0 ^ (i0 >> 1));
      Neumaier acc;
      for (std::uint64_t i = i0; i < i0 + per; ++i) {
        acc.add(std::exp(st.log_weight()));
        if (i + 1 < i0 + per) st.flip(static_cast<std::size_t>(std::countr_zero(i + 1)));
      }
      partial[c] = acc.value();
    }
  }
  Neumaier total_sum;
  for (double x : partial) total_sum.add(x);
  return total_sum.value();
}

namespace {

// Full description of one configuration, used by the overlap code.
struct ConfigData {
  double log_w;
  std::vector<double> A;  // A[j*n + j'] = sum_l s_jl s_j'l
  double q2;
};

ConfigData evaluate_config(const WeightModel& wm, const DisorderSample& d, std::uint64_t code,
                           const KernelGrid* target) {
  GrayState st(wm, d, target);
  st.load(code);
  ConfigData c;
  c.log_w = st.log_weight();
  c.q2 = st.q_norm_sq();
  const std::size_t n = wm.n, L = wm.L;
  c.A.assign(n * n, 0.0);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t jp = 0; jp < n; ++jp) {
      long s = 0;
      for (std::size_t l = 0; l < L; ++l) s += st.spin[j * L + l] * st.spin[jp * L + l];
      c.A[j * n + jp] = static_cast<double>(s);
    }
  return c;
}

}  // namespace

OverlapMoments gibbs_overlap_exact(const ModelParams& p, const DisorderSample& d, std::size_t L, PathMode mode,
                                   const std::optional<Constraint>& constraint) {
  if (L == 0) throw std::invalid_argument("L must be positive");
  if (d.n * L > kOverlapCap) throw std::invalid_argument("N*L exceeds the overlap enumeration cap");
  check_constraint(mode, constraint, L);
  WeightModel wm(p, d.n, L, mode);
  const KernelGrid* target = nullptr;
  if (mode == PathMode::constrained) {
    target = &constraint->target;
    wm.radius2 = constraint->radius * constraint->radius;
  }
  const std::size_t n = d.n;
  const std::uint64_t total = std::uint64_t{1} << (n * L);
  std::vector<ConfigData> cfg(total);
#pragma omp parallel for num_threads(thread_count()) schedule(static)
  for (std::int64_t i = 0; i < static_cast<std::int64_t>(total); ++i)
    cfg[i] = evaluate_config(wm, d, static_cast<std::uint64_t>(i), target);
  double mx = -std::numeric_limits<double>::infinity();
  for (const auto& c : cfg) mx = std::max(mx, c.log_w);
  if (!std::isfinite(mx)) throw std::invalid_argument("no configuration carries positive weight");
  double z = 0.0, q2 = 0.0;
  std::vector<double> meanA(n * n, 0.0);
  for (const auto& c : cfg) {
    double w = std::exp(c.log_w - mx);
    z += w;
    q2 += w * c.q2;
    for (std::size_t i = 0; i < n * n; ++i) meanA[i] += w * c.A[i];
  }
  OverlapMoments out;
  out.self_overlap_sq = q2 / z;
  double r2 = 0.0;
  for (double a : meanA) r2 += (a / z) * (a / z);
  double nl = static_cast<double>(n * L);
  out.replica_overlap_sq = r2 / (nl * nl);
  out.partition = z * std::exp(mx);
  return out;
}

double annealed_path_partition(const ModelParams& p, std::size_t n, std::size_t L, PathMode mode,
                               const std::optional<Constraint>& constraint) {
  if (L == 0 || n == 0) throw std::invalid_argument("n and L must be positive");
  if (n * L > kAnnealedCap) throw std::invalid_argument("N*L exceeds the annealed enumeration cap");
  check_constraint(mode, constraint, L);
  p.validate();
  const double nn = static_cast<double>(n), LL = static_cast<double>(L);
  // Coefficient of g_jk in the exponent: -(beta l1 / (L sqrt(2N))) A_jk.
  const double coef = p.beta * p.lambda1 / (LL * std::sqrt(2.0 * nn));
  const double penalty = mode == PathMode::plain ? 0.0 : nn * p.lambda2 * p.lambda2 * p.beta * p.beta / 4.0;
  const std::uint64_t total = std::uint64_t{1} << (n * L);
  Neumaier acc;
  std::vector<int> spins(L);
  std::vector<int> cfg(n * L);
  for (std::uint64_t code = 0; code < total; ++code) {
    for (std::size_t b = 0; b < n * L; ++b) cfg[b] = (code >> b) & 1 ? -1 : 1;
    double logp = 0.0;
    bool zero = false;
    for (std::size_t j = 0; j < n && !zero; ++j) {
      double m = marginal_probability(std::span<const int>(cfg.data() + j * L, L), p.beta_b());
      if (m == 0.0) zero = true;
      logp += std::log(m);
    }
    if (zero) continue;
    // Gaussian average: exp(variance / 2) of the linear form in g.
    double var = 0.0;
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k) {
        double a = 0.0;
        for (std::size_t l = 0; l < L; ++l) a += cfg[j * L + l] * cfg[k * L + l];
        var += coef * coef * a * a;
      }
    KernelGrid Q(L);
    for (std::size_t l = 0; l < L; ++l)
      for (std::size_t lp = 0; lp < L; ++lp) {
        double s = 0.0;
        for (std::size_t j = 0; j < n; ++j) s += cfg[j * L + l] * cfg[j * L + lp];
        Q(l, lp) = s / nn;
      }
    if (mode == PathMode::constrained && hs_norm(Q - constraint->target) > constraint->radius) continue;
    acc.add(std::exp(logp + 0.5 * var - penalty * hs_inner(Q, Q)));
  }
  return acc.value();
}

namespace {

struct PairType {
  std::vector<int> xi, eta;  // length-L slice strings
  double log_prob;
};

}  // namespace

SecondMoment exact_second_moment(const ModelParams& p, std::size_t n, std::size_t L,
                                 const std::optional<Constraint>& constraint) {
  p.validate();
  if (n == 0 || L == 0 || L > 3) throw std::invalid_argument("second moment enumeration supports 1 <= L <= 3");
  if (constraint && constraint->target.size() != L) throw std::invalid_argument("constraint grid size mismatch");
  const double nn = static_cast<double>(n), LL = static_cast<double>(L);
  const double a1 = nn * p.beta * p.beta * p.lambda1 * p.lambda1 / 4.0;
  const double a2 = nn * p.beta * p.beta * p.lambda2 * p.lambda2 / 4.0;
  const std::size_t strings = std::size_t{1} << L;
  std::vector<std::vector<int>> str(strings, std::vector<int>(L));
  std::vector<double> logp(strings);
  for (std::size_t s = 0; s < strings; ++s) {
    for (std::size_t l = 0; l < L; ++l) str[s][l] = (s >> l) & 1 ? -1 : 1;
    double m = marginal_probability(str[s], p.beta_b());
    logp[s] = m > 0.0 ? std::log(m) : -std::numeric_limits<double>::infinity();
  }
  std::vector<double> lfact(n + 1, 0.0);
  for (std::size_t i = 1; i <= n; ++i) lfact[i] = lfact[i - 1] + std::log(static_cast<double>(i));

  auto in_ball = [&](const std::vector<long>& S) {
    if (!constraint) return true;
    double d2 = 0.0;
    for (std::size_t i = 0; i < L * L; ++i) {
      double e = static_cast<double>(S[i]) / nn - constraint->target.data()[i];
      d2 += e * e;
    }
    return std::sqrt(d2) / LL <= constraint->radius;
  };
  auto norm_sq = [&](const std::vector<long>& S) {
    double s = 0.0;
    for (long v : S) s += static_cast<double>(v) * static_cast<double>(v);
    return s / (nn * nn * LL * LL);
  };

  // First moment: compositions of n over single strings.
  SecondMoment out;
  {
    std::vector<std::size_t> alive;
    for (std::size_t s = 0; s < strings; ++s)
      if (std::isfinite(logp[s])) alive.push_back(s);
    std::vector<long> S(L * L, 0);
    Neumaier acc;
    auto rec = [&](auto&& self, std::size_t t, std::size_t left, double lw) -> void {
      if (t + 1 == alive.size()) {
        std::size_t s = alive[t];
        for (std::size_t a = 0; a < L; ++a)
          for (std::size_t b = 0; b < L; ++b) S[a * L + b] += static_cast<long>(left) * str[s][a] * str[s][b];
        double lw2 = lw + static_cast<double>(left) * logp[s] - lfact[left];
        if (in_ball(S)) acc.add(std::exp(lw2 + (a1 - a2) * norm_sq(S)));
        for (std::size_t a = 0; a < L; ++a)
          for (std::size_t b = 0; b < L; ++b) S[a * L + b] -= static_cast<long>(left) * str[s][a] * str[s][b];
        return;
      }
      std::size_t s = alive[t];
      for (std::size_t c = 0; c <= left; ++c) {
        self(self, t + 1, left - c, lw + static_cast<double>(c) * logp[s] - lfact[c]);
        for (std::size_t a = 0; a < L; ++a)
          for (std::size_t b = 0; b < L; ++b) S[a * L + b] += str[s][a] * str[s][b];
      }
      for (std::size_t a = 0; a < L; ++a)
        for (std::size_t b = 0; b < L; ++b) S[a * L + b] -= static_cast<long>(left + 1) * str[s][a] * str[s][b];
    };
    rec(rec, 0, n, lfact[n]);
    out.first = acc.value();
  }

  // Second moment: compositions of n over pairs of strings.
  {
    std::vector<std::pair<std::size_t, std::size_t>> alive;
    for (std::size_t s = 0; s < strings; ++s)
      for (std::size_t u = 0; u < strings; ++u)
        if (std::isfinite(logp[s]) && std::isfinite(logp[u])) alive.emplace_back(s, u);
    std::vector<long> Sx(L * L, 0), Sy(L * L, 0), R(L * L, 0);
    Neumaier acc;
    auto add = [&](std::size_t t, long c) {
      auto [s, u] = alive[t];
      for (std::size_t a = 0; a < L; ++a)
        for (std::size_t b = 0; b < L; ++b) {
          Sx[a * L + b] += c * str[s][a] * str[s][b];
          Sy[a * L + b] += c * str[u][a] * str[u][b];
          R[a * L + b] += c * str[s][a] * str[u][b];
        }
    };
    auto rec = [&](auto&& self, std::size_t t, std::size_t left, double lw) -> void {
      auto [s, u] = alive[t];
      double lp = logp[s] + logp[u];
      if (t + 1 == alive.size()) {
        add(t, static_cast<long>(left));
        double lw2 = lw + static_cast<double>(left) * lp - lfact[left];
        if (in_ball(Sx) && in_ball(Sy)) {
          double qx = norm_sq(Sx), qy = norm_sq(Sy), r = norm_sq(R);
          acc.add(std::exp(lw2 + a1 * (qx + qy + 2.0 * r) - a2 * (qx + qy)));
        }
        add(t, -static_cast<long>(left));
        return;
      }
      for (std::size_t c = 0; c <= left; ++c) {
        self(self, t + 1, left - c, lw + static_cast<double>(c) * lp - lfact[c]);
        add(t, 1);
      }
      add(t, -static_cast<long>(left + 1));
    };
    rec(rec, 0, n, lfact[n]);
    out.second = acc.value();
  }
  return out;
}

double hopfield_pressure_exact(double g, double beta, double b, const PatternSet& patterns) {
  patterns.validate();
  if (patterns.n > kDefaultHamiltonianCap) throw std::invalid_argument("pattern size exceeds the dense cap");
  if (!(beta > 0.0) || !(b >= 0.0) || !(g >= 0.0)) throw std::invalid_argument("need beta > 0, b >= 0, g >= 0");
  if (patterns.m == 0) throw std::invalid_argument("need at least one pattern");
  const std::size_t n = patterns.n, m = patterns.m, dim = std::size_t{1} << n;
  SymmetricMatrix h(dim);
  for (std::size_t x = 0; x < dim; ++x) {
    double e = 0.0;
    for (std::size_t k = 0; k < m; ++k) {
      double mk = 0.0;
      for (std::size_t j = 0; j < n; ++j) mk += patterns(k, j) * ((x >> j) & 1 ? -1.0 : 1.0);
      e += mk * mk;
    }
    h(x, x) = -g / (static_cast<double>(n) * static_cast<double>(m)) * e;
    for (std::size_t j = 0; j < n; ++j) h(x, x ^ (std::size_t{1} << j)) = -b;
  }
  auto ev = symmetric_eigenvalues(std::move(h));
  for (double& e : ev) e *= -beta;
  return log_sum_exp(ev.data(), ev.size()) / static_cast<double>(n);
}

namespace reference {

namespace {

struct Slices {
  std::size_t n, L;
  std::vector<int> s;  // s[j*L + l]
  int operator()(std::size_t j, std::size_t l) const { return s[j * L + l]; }
};

Slices decode(std::uint64_t code, std::size_t n, std::size_t L) {
  Slices c{n, L, std::vector<int>(n * L)};
  for (std::size_t b = 0; b < n * L; ++b) c.s[b] = (code >> b) & 1 ? -1 : 1;
  return c;
}

KernelGrid self_overlap(const Slices& c) {
  KernelGrid Q(c.L);
  for (std::size_t l = 0; l < c.L; ++l)
    for (std::size_t lp = 0; lp < c.L; ++lp) {
      double s = 0.0;
      for (std::size_t j = 0; j < c.n; ++j) s += c(j, l) * c(j, lp);
      Q(l, lp) = s / static_cast<double>(c.n);
    }
  return Q;
}

double weight(const ModelParams& p, const DisorderSample& d, const Slices& c, PathMode mode,
              const std::optional<Constraint>& constraint) {
  double w = 1.0;
  for (std::size_t j = 0; j < c.n; ++j)
    w *= marginal_probability(std::span<const int>(c.s.data() + j * c.L, c.L), p.beta_b());
  if (w == 0.0) return 0.0;
  double e = 0.0;
  std::vector<int> col(c.n);
  for (std::size_t l = 0; l < c.L; ++l) {
    for (std::size_t j = 0; j < c.n; ++j) col[j] = c(j, l);
    e += sk_energy(col, d);
  }
  KernelGrid Q = self_overlap(c);
  double expo = -p.beta * p.lambda1 / static_cast<double>(c.L) * e;
  if (mode != PathMode::plain)
    expo -= static_cast<double>(c.n) * p.lambda2 * p.lambda2 * p.beta * p.beta / 4.0 * qat::hs_inner(Q, Q);
  if (mode == PathMode::constrained && qat::hs_norm(Q - constraint->target) > constraint->radius) return 0.0;
  return w * std::exp(expo);
}

}  // namespace

double enumerate_path_partition(const ModelParams& p, const DisorderSample& d, std::size_t L, PathMode mode,
                                const std::optional<Constraint>& constraint) {
  if (d.n * L > kEnumerationCap) throw std::invalid_argument("N*L exceeds the enumeration cap");
  check_constraint(mode, constraint, L);
  double z = 0.0;
  for (std::uint64_t code = 0; code < (std::uint64_t{1} << (d.n * L)); ++code)
    z += weight(p, d, decode(code, d.n, L), mode, constraint);
  return z;
}

OverlapMoments gibbs_overlap_exact(const ModelParams& p, const DisorderSample& d, std::size_t L, PathMode mode,
                                   const std::optional<Constraint>& constraint) {
  if (d.n * L > kOverlapCap) throw std::invalid_argument("N*L exceeds the overlap enumeration cap");
  check_constraint(mode, constraint, L);
  const std::uint64_t total = std::uint64_t{1} << (d.n * L);
  std::vector<Slices> cfg;
  std::vector<double> w;
  for (std::uint64_t code = 0; code < total; ++code) {
    cfg.push_back(decode(code, d.n, L));
    w.push_back(weight(p, d, cfg.back(), mode, constraint));
  }
  double z = 0.0, q2 = 0.0;
  for (std::size_t i = 0; i < total; ++i) {
    z += w[i];
    KernelGrid Q = self_overlap(cfg[i]);
    q2 += w[i] * qat::hs_inner(Q, Q);
  }
  double r2 = 0.0;
  for (std::size_t a = 0; a < total; ++a) {
    if (w[a] == 0.0) continue;
    for (std::size_t b = 0; b < total; ++b) {
      if (w[b] == 0.0) continue;
      KernelGrid R(L);
      for (std::size_t t = 0; t < L; ++t)
        for (std::size_t s = 0; s < L; ++s) {
          double x = 0.0;
          for (std::size_t j = 0; j < d.n; ++j) x += cfg[a](j, t) * cfg[b](j, s);
          R(t, s) = x / static_cast<double>(d.n);
        }
      r2 += w[a] * w[b] * qat::hs_inner(R, R);
    }
  }
  return {q2 / z, r2 / (z * z), z};
}

}  // namespace reference

}  // namespace qat
