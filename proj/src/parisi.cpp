#include "qatlab/parisi.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>

#include "qatlab/path_measure.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace qat {

void StepPath::validate() const {
  if (m.empty() || m.size() != q.size()) throw std::invalid_argument("step path needs matching nonempty m and q");
  for (std::size_t j = 0; j < m.size(); ++j) {
    if (!(m[j] > 0.0 && m[j] <= 1.0)) throw std::invalid_argument("levels must lie in (0, 1]");
    if (j > 0 && !(m[j] > m[j - 1])) throw std::invalid_argument("levels must be strictly increasing");
    if (!(q[j] >= 0.0) || !std::isfinite(q[j])) throw std::invalid_argument("values must be finite and nonnegative");
    if (j > 0 && q[j] < q[j - 1]) throw std::invalid_argument("values must be nondecreasing");
  }
}

void QuadratureSpec::validate() const {
  if (gh_nodes < 8) throw std::invalid_argument("gh_nodes must be at least 8");
  if (pmf_slices < 64) throw std::invalid_argument("pmf_slices must be at least 64");
  if (!(grid_step > 0.0)) throw std::invalid_argument("grid_step must be positive");
}

namespace {

// Base integrand for a fixed quadratic coefficient c, evaluated by Horner in
// s = e^{-a dv} over the uniform support.
class BaseEval {
 public:
  BaseEval(const std::vector<double>& v, const std::vector<double>& w, double c) : v_(v) {
    u_.resize(v.size());
    double mx = 0.0;
    for (std::size_t k = 0; k < v.size(); ++k) {
      u_[k] = w[k] * std::exp(-c * v[k] * v[k]);
      mx = std::max(mx, std::abs(u_[k]));
    }
    for (double& x : u_) x /= mx;
    log_scale_ = std::log(mx);
    dv_ = v.size() > 1 ? v[1] - v[0] : 1.0;
    vmax_ = v.back();
  }

  double log(double a) const {
    a = std::abs(a);
    const double s = std::exp(-a * dv_);
    double p = 0.0;
    for (double x : u_) p = p * s + x;
    if (!(p > 0.0)) throw NumericalError("base integrand lost positivity");
    return a * vmax_ + log_scale_ + std::log(p);
  }

  // (J/I)(a) = tilted mean of v
  double mean(double a) const {
    const double sign = a < 0 ? -1.0 : 1.0;
    a = std::abs(a);
    const double s = std::exp(-a * dv_);
    double p = 0.0, pv = 0.0;
    for (std::size_t k = 0; k < u_.size(); ++k) {
      p = p * s + u_[k];
      pv = pv * s + u_[k] * v_[k];
    }
    return sign * pv / p;
  }

 private:
  const std::vector<double>& v_;
  std::vector<double> u_;
  double log_scale_ = 0.0, dv_ = 1.0, vmax_ = 1.0;
};

// (1/m) ln sum_k w_k e^{m f_k} with sum w = 1, accurate for small m.
double soft_mean(double m, const double* f, const double* w, std::size_t n) {
  double fbar = 0.0;
  for (std::size_t k = 0; k < n; ++k) fbar += w[k] * f[k];
  double dmax = 0.0;
  for (std::size_t k = 0; k < n; ++k) dmax = std::max(dmax, std::abs(m * (f[k] - fbar)));
  if (dmax < 0.5) {
    double s = 0.0;
    for (std::size_t k = 0; k < n; ++k) s += w[k] * std::expm1(m * (f[k] - fbar));
    return fbar + std::log1p(s) / m;
  }
  double mx = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < n; ++k)
    if (w[k] > 0.0) mx = std::max(mx, m * (f[k] - fbar));
  double s = 0.0;
  for (std::size_t k = 0; k < n; ++k) s += w[k] * std::exp(m * (f[k] - fbar) - mx);
  return fbar + (mx + std::log(s)) / m;
}

std::vector<double> gaussian_kernel(double sigma, double h, std::size_t K) {
  std::vector<double> w(2 * K + 1);
  double total = 0.0;
  for (std::size_t i = 0; i <= 2 * K; ++i) {
    double y = (static_cast<double>(i) - static_cast<double>(K)) * h;
    w[i] = std::exp(-0.5 * y * y / (sigma * sigma));
    total += w[i];
  }
  for (double& x : w) x /= total;
  return w;
}

}  // namespace

ParisiFunctional::ParisiFunctional(double beta, double b, const QuadratureSpec& quad)
    : beta_(beta), b_(b), quad_(quad) {
  if (!(beta > 0.0)) throw std::invalid_argument("beta must be positive");
  if (!(b >= 0.0)) throw std::invalid_argument("b must be nonnegative");
  quad_.validate();
  const std::size_t L = quad_.pmf_slices;
  const double bb = beta * b;
  if (quad_.richardson) {
    TimeAveragePmf coarse = time_average_pmf(bb, L);
    TimeAveragePmf fine = time_average_pmf(bb, 2 * L);
    v_.resize(2 * L + 1);
    w_.resize(2 * L + 1);
    for (std::size_t k = 0; k <= 2 * L; ++k) {
      v_[k] = fine.value(k);
      w_[k] = 4.0 / 3.0 * fine.masses[k] - (k % 2 == 0 ? coarse.masses[k / 2] / 3.0 : 0.0);
    }
  } else {
    TimeAveragePmf pmf = time_average_pmf(bb, L);
    v_.resize(L + 1);
    for (std::size_t k = 0; k <= L; ++k) v_[k] = pmf.value(k);
    w_ = pmf.masses;
  }
  if (quad_.rule == GaussianRule::gauss_hermite) gh_ = gauss_hermite(quad_.gh_nodes);
}

double ParisiFunctional::log_base(double a, double c) const { return BaseEval(v_, w_, c).log(a); }

double ParisiFunctional::tilted_mean(double a, double c) const { return BaseEval(v_, w_, c).mean(a); }

double ParisiFunctional::value(const StepPath& path) const {
  path.validate();
  return value_unchecked(path.m, path.q);
}

double ParisiFunctional::one_rsb(double m, double q) const {
  if (!(m > 0.0 && m <= 1.0)) throw std::invalid_argument("m must lie in (0, 1]");
  if (!(q >= 0.0)) throw std::invalid_argument("q must be nonnegative");
  return value_unchecked({m}, {q});
}

double ParisiFunctional::value_unchecked(std::vector<double> m, std::vector<double> q) const {
  const double b2 = beta_ * beta_;
  double quadratic = 0.0;
  for (std::size_t j = 0; j < m.size(); ++j) {
    double next = j + 1 < m.size() ? m[j + 1] : 1.0;
    quadratic += (next - m[j]) * q[j] * q[j];
  }
  quadratic *= b2 / 4.0;
  if (q.empty() || q.back() == 0.0) return 0.0;
  if (quad_.collapse_unit_levels)
    while (!m.empty() && m.back() >= 1.0) {
      m.pop_back();
      q.pop_back();
    }
  if (q.empty() || q.back() == 0.0) return quadratic;
  double f0 = quad_.rule == GaussianRule::grid ? value_grid(m, q) : value_gh(m, q);
  if (!std::isfinite(f0)) throw NumericalError("non-finite value in the Parisi recursion");
  return f0 + quadratic;
}

double ParisiFunctional::value_grid(const std::vector<double>& m, const std::vector<double>& q) const {
  const double c = beta_ * beta_ * q.back() / 2.0;
  BaseEval base(v_, w_, c);
  // active levels: positive variance increments
  std::vector<double> lm, ls;
  double prev = 0.0;
  for (std::size_t j = 0; j < m.size(); ++j) {
    double var = q[j] - prev;
    prev = q[j];
    if (var > 1e-300) {
      lm.push_back(m[j]);
      ls.push_back(std::sqrt(var));
    }
  }
  if (lm.empty()) return base.log(0.0);
  const std::size_t R = lm.size();
  // Level j convolves on a grid of step h[j]; each step divides the one
  // above it so outputs of level j sit on the input grid of level j - 1.
  std::vector<double> h(R);
  std::vector<std::size_t> mult(R, 1), K(R);
  for (std::size_t j = 0; j < R; ++j) {
    double want = std::min(quad_.grid_step / beta_, ls[j] / 5.0);
    if (j == 0) {
      h[j] = want;
    } else {
      mult[j] = static_cast<std::size_t>(std::ceil(h[j - 1] / want - 1e-9));
      h[j] = h[j - 1] / static_cast<double>(mult[j]);
    }
    double W = std::min(lm[j], 1.0) * beta_ * ls[j] * ls[j] + 9.0 * ls[j];
    K[j] = static_cast<std::size_t>(std::ceil(W / h[j]));
  }
  // Index sets (nonnegative, f is even). out[j] are the output points of
  // level j on grid h[j-1]; out[j+1] are its inputs on grid h[j].
  std::vector<std::vector<long>> out(R + 1);
  out[0] = {0};
  for (std::size_t j = 0; j < R; ++j) {
    std::vector<long> in;
    const long Mj = static_cast<long>(mult[j]), Kj = static_cast<long>(K[j]);
    for (long i : out[j])
      for (long k = -Kj; k <= Kj; ++k) in.push_back(std::labs(i * Mj + k));
    std::sort(in.begin(), in.end());
    in.erase(std::unique(in.begin(), in.end()), in.end());
    if (in.size() > 4000000) throw NumericalError("Parisi grid too large; increase grid_step");
    out[j + 1] = std::move(in);
  }
  std::vector<double> f(out[R].size());
  for (std::size_t i = 0; i < f.size(); ++i) f[i] = base.log(beta_ * h[R - 1] * static_cast<double>(out[R][i]));
  std::vector<double> buf;
  for (std::size_t j = R; j-- > 0;) {
    const auto& in = out[j + 1];
    auto ker = gaussian_kernel(ls[j], h[j], K[j]);
    const long Mj = static_cast<long>(mult[j]), Kj = static_cast<long>(K[j]);
    std::vector<double> g(out[j].size());
    buf.resize(2 * K[j] + 1);
    for (std::size_t o = 0; o < out[j].size(); ++o) {
      const long centre = out[j][o] * Mj;
      // the indices |centre + k| form one or two runs of consecutive entries in `in`
      for (long k = -Kj; k <= Kj;) {
        long idx = std::labs(centre + k);
        std::size_t pos = static_cast<std::size_t>(std::lower_bound(in.begin(), in.end(), idx) - in.begin());
        if (centre + k < 0) {
          for (; k <= Kj && centre + k < 0; ++k) buf[static_cast<std::size_t>(k + Kj)] = f[pos--];
        } else {
          for (; k <= Kj; ++k) buf[static_cast<std::size_t>(k + Kj)] = f[pos++];
        }
      }
      g[o] = soft_mean(lm[j], buf.data(), ker.data(), buf.size());
    }
    f.swap(g);
  }
  return f[0];
}

double ParisiFunctional::gh_level(std::size_t j, double y, const std::vector<double>& m,
                                  const std::vector<double>& sig, double c) const {
  if (j == m.size()) return BaseEval(v_, w_, c).log(beta_ * y);
  const double mj = m[j], sj = sig[j];
  if (sj == 0.0) return gh_level(j + 1, y, m, sig, c);
  const std::size_t n = gh_.nodes.size();
  const double zmax = gh_.nodes.back();
  // ln I grows linearly, so e^{m f} is a pair of Gaussians shifted by about
  // m beta sj; widen the rule only when that shift nears the outer node.
  double s = std::max(1.0, (mj * beta_ * sj + 6.0) / zmax);
  std::vector<double> fv(n), wv(n);
  double tot = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double z = s * gh_.nodes[i];
    wv[i] = gh_.weights[i] * s * std::exp(-0.5 * (s * s - 1.0) * gh_.nodes[i] * gh_.nodes[i]);
    tot += wv[i];
    fv[i] = gh_level(j + 1, y + sj * z, m, sig, c);
  }
  for (double& w : wv) w /= tot;
  return soft_mean(mj, fv.data(), wv.data(), n);
}

double ParisiFunctional::value_gh(const std::vector<double>& m, const std::vector<double>& q) const {
  const double c = beta_ * beta_ * q.back() / 2.0;
  std::vector<double> sig(m.size());
  double prev = 0.0;
  for (std::size_t j = 0; j < m.size(); ++j) {
    sig[j] = std::sqrt(std::max(q[j] - prev, 0.0));
    prev = q[j];
  }
  return gh_level(0, 0.0, m, sig, c);
}

namespace {

// E_y[F(y)] for y ~ N(0, q) with the tilt e^{beta |y|} taken into account.
template <class Fn>
double gaussian_expectation(const ParisiFunctional& f, double q, Fn&& fn) {
  const double beta = f.beta();
  const double sd = std::sqrt(q);
  if (f.quad().rule == GaussianRule::grid) {
    double h = std::min(f.quad().grid_step / beta, sd / 5.0);
    double W = beta * q + 9.0 * sd;
    std::size_t K = static_cast<std::size_t>(std::ceil(W / h));
    auto ker = gaussian_kernel(sd, h, K);
    double s = 0.0;
    for (std::size_t i = 0; i <= 2 * K; ++i) s += ker[i] * fn((static_cast<double>(i) - static_cast<double>(K)) * h);
    return s;
  }
  auto gh = gauss_hermite(f.quad().gh_nodes);
  double scale = std::max(1.0, (beta * sd + 6.0) / gh.nodes.back());
  double s = 0.0, tot = 0.0;
  for (std::size_t i = 0; i < gh.nodes.size(); ++i) {
    double w = gh.weights[i] * scale * std::exp(-0.5 * (scale * scale - 1.0) * gh.nodes[i] * gh.nodes[i]);
    tot += w;
    s += w * fn(sd * scale * gh.nodes[i]);
  }
  return s / tot;
}

}  // namespace

double ParisiFunctional::d_pm(double q) const {
  if (!(q >= 0.0)) throw std::invalid_argument("q must be nonnegative");
  if (q == 0.0) return 0.0;
  const double c = beta_ * beta_ * q / 2.0;
  BaseEval base(v_, w_, c);
  double e = gaussian_expectation(*this, q, [&](double y) {
    double l = base.log(beta_ * y);
    return std::exp(l) * l;
  });
  return e - beta_ * beta_ * q * q / 4.0;
}

double ParisiFunctional::d_pmq(double q) const {
  if (!(q >= 0.0)) throw std::invalid_argument("q must be nonnegative");
  if (q == 0.0) return 0.0;
  const double c = beta_ * beta_ * q / 2.0;
  BaseEval base(v_, w_, c);
  double e = gaussian_expectation(*this, q, [&](double y) {
    double t = base.mean(beta_ * y);
    return std::exp(base.log(beta_ * y)) * t * t;
  });
  return beta_ * beta_ / 2.0 * e - beta_ * beta_ * q / 2.0;
}

double parisi_classical(const StepPath& path, const ModelParams& p, const QuadratureSpec& quad) {
  p.validate();
  return ParisiFunctional(p.beta, p.b, quad).value(path);
}

double one_rsb_pressure(double m, double q, const ModelParams& p, const QuadratureSpec& quad) {
  p.validate();
  return ParisiFunctional(p.beta, p.b, quad).one_rsb(m, q);
}

double d_pm(double q, const ModelParams& p, const QuadratureSpec& quad) {
  p.validate();
  return ParisiFunctional(p.beta, p.b, quad).d_pm(q);
}

double d_pmq(double q, const ModelParams& p, const QuadratureSpec& quad) {
  p.validate();
  return ParisiFunctional(p.beta, p.b, quad).d_pmq(q);
}

double d_pmqq_at_zero(const ModelParams& p) {
  p.validate();
  const double x = p.beta_b();
  const double ratio = x == 0.0 ? 1.0 : std::tanh(x) / x;
  return p.beta * p.beta / 2.0 * (p.beta * p.beta * ratio * ratio - 1.0);
}

namespace {

struct NmResult {
  std::vector<double> x;
  double fx;
  int evals;
  bool converged;
};

NmResult nelder_mead(const std::function<double(const std::vector<double>&)>& f, std::vector<double> x0,
                     double step, int max_evals, double ftol, double xtol) {
  const std::size_t d = x0.size();
  std::vector<std::vector<double>> s(d + 1, x0);
  std::vector<double> fs(d + 1);
  for (std::size_t i = 0; i < d; ++i) s[i + 1][i] += step;
  int evals = 0;
  for (std::size_t i = 0; i <= d; ++i) {
    fs[i] = f(s[i]);
    ++evals;
  }
  std::vector<std::size_t> idx(d + 1);
  bool converged = false;
  while (evals < max_evals) {
    for (std::size_t i = 0; i <= d; ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return fs[a] < fs[b]; });
    const std::size_t best = idx[0], worst = idx[d], second = idx[d - 1];
    double diam = 0.0;
    for (std::size_t i = 1; i <= d; ++i)
      for (std::size_t k = 0; k < d; ++k) diam = std::max(diam, std::abs(s[idx[i]][k] - s[best][k]));
    if (fs[worst] - fs[best] <= ftol && diam <= xtol) {
      converged = true;
      break;
    }
    if (diam <= 1e-3 * xtol) {
      converged = true;
      break;
    }
    std::vector<double> cen(d, 0.0);
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t k = 0; k < d; ++k) cen[k] += s[idx[i]][k] / static_cast<double>(d);
    auto along = [&](double t) {
      std::vector<double> y(d);
      for (std::size_t k = 0; k < d; ++k) y[k] = cen[k] + t * (s[worst][k] - cen[k]);
      return y;
    };
    auto xr = along(-1.0);
    double fr = f(xr);
    ++evals;
    if (fr < fs[best]) {
      auto xe = along(-2.0);
      double fe = f(xe);
      ++evals;
      if (fe < fr) {
        s[worst] = xe;
        fs[worst] = fe;
      } else {
        s[worst] = xr;
        fs[worst] = fr;
      }
    } else if (fr < fs[second]) {
      s[worst] = xr;
      fs[worst] = fr;
    } else {
      bool outside = fr < fs[worst];
      auto xc = along(outside ? -0.5 : 0.5);
      double fc = f(xc);
      ++evals;
      if (fc < (outside ? fr : fs[worst])) {
        s[worst] = xc;
        fs[worst] = fc;
      } else {
        for (std::size_t i = 1; i <= d; ++i) {
          auto& xi = s[idx[i]];
          for (std::size_t k = 0; k < d; ++k) xi[k] = s[best][k] + 0.5 * (xi[k] - s[best][k]);
          fs[idx[i]] = f(xi);
          ++evals;
        }
      }
    }
  }
  std::size_t b = static_cast<std::size_t>(std::min_element(fs.begin(), fs.end()) - fs.begin());
  return {s[b], fs[b], evals, converged};
}

double sigmoid(double u) { return 1.0 / (1.0 + std::exp(-u)); }
double logit(double t) { return std::log(t / (1.0 - t)); }
double softplus(double v) { return v > 30.0 ? v : std::log1p(std::exp(v)); }
double softplus_inv(double e) { return e > 30.0 ? e : std::log(std::expm1(std::max(e, 1e-12))); }

struct Param {
  std::size_t r;
  double floor, qmax;

  void decode(const std::vector<double>& x, std::vector<double>& m, std::vector<double>& q) const {
    m.resize(r);
    q.resize(r);
    double prev = floor, cum = 0.0;
    for (std::size_t j = 0; j < r; ++j) {
      double t = sigmoid(x[j]);
      m[j] = j == 0 ? floor + (1.0 - floor) * t : prev + (1.0 - prev) * t;
      prev = m[j];
      cum += softplus(x[r + j]);
      q[j] = -qmax * std::expm1(-cum);
    }
  }

  std::vector<double> encode(const std::vector<double>& m, const std::vector<double>& q) const {
    std::vector<double> x(2 * r);
    double prev = floor, cum_prev = 0.0;
    for (std::size_t j = 0; j < r; ++j) {
      double denom = 1.0 - (j == 0 ? floor : prev);
      double t = std::clamp((m[j] - (j == 0 ? floor : prev)) / denom, 1e-9, 1.0 - 1e-9);
      x[j] = logit(t);
      prev = m[j];
      double qq = std::clamp(q[j] / qmax, 0.0, 1.0 - 1e-12);
      double cum = -std::log1p(-qq);
      x[r + j] = softplus_inv(std::max(cum - cum_prev, 1e-10));
      cum_prev = std::max(cum, cum_prev + 1e-10);
    }
    return x;
  }
};

}  // namespace

KrsbResult minimize_k_rsb(const ParisiFunctional& f, std::size_t r, const OptConfig& opt) {
  if (r == 0) throw std::invalid_argument("need at least one level");
  Param par{r, opt.m_floor, opt.q_max};
  auto objective = [&](const std::vector<double>& x) {
    StepPath p;
    par.decode(x, p.m, p.q);
    // decoded levels can tie in floating point; separate them by one ulp
    for (std::size_t j = 1; j < p.m.size(); ++j)
      if (p.m[j] <= p.m[j - 1]) p.m[j] = std::nextafter(p.m[j - 1], 2.0);
    for (double& v : p.m) v = std::min(v, 1.0);
    for (std::size_t j = 1; j < p.m.size(); ++j)
      if (p.m[j] <= p.m[j - 1]) return f.value(StepPath{{p.m[0]}, {p.q.back()}});
    return f.value(p);
  };

  // deterministic seeds
  const double seeds[5][2] = {{0.5, 0.5}, {0.1, 0.05}, {0.9, 0.9}, {0.02, 0.01}, {0.3, 0.2}};
  std::vector<std::vector<double>> starts;
  if (opt.seed_from_lower && r > 1) {
    KrsbResult lower = minimize_k_rsb(f, r - 1, opt);
    if (lower.path.q.back() > 0.0) {
      std::vector<double> m = lower.path.m, q = lower.path.q;
      while (m.size() < r) {
        double top = m.back();
        m.push_back(top + 0.5 * (1.0 - top));
        q.push_back(q.back());
      }
      starts.push_back(par.encode(m, q));
    }
  }
  for (int s = 0; s < opt.restarts; ++s) {
    const double m0 = seeds[s % 5][0], q0 = seeds[s % 5][1];
    std::vector<double> m(r), q(r);
    for (std::size_t j = 0; j < r; ++j) {
      m[j] = m0 + (1.0 - m0) * 0.5 * static_cast<double>(j) / static_cast<double>(r);
      q[j] = q0 * static_cast<double>(j + 1) / static_cast<double>(r);
    }
    starts.push_back(par.encode(m, q));
  }

  std::vector<NmResult> runs(starts.size());
  std::exception_ptr failure;
#ifdef _OPENMP
  const bool nested = omp_in_parallel();
#else
  const bool nested = true;
#endif
#pragma omp parallel for num_threads(thread_count()) schedule(dynamic) if (!nested)
  for (std::int64_t i = 0; i < static_cast<std::int64_t>(starts.size()); ++i) {
    try {
      NmResult a = nelder_mead(objective, starts[i], 1.0, opt.max_evals, opt.ftol, opt.xtol);
      // one restart from the best vertex to escape a collapsed simplex
      NmResult b = nelder_mead(objective, a.x, 0.25, opt.max_evals, opt.ftol, opt.xtol);
      b.evals += a.evals;
      runs[i] = b.fx <= a.fx ? b : NmResult{a.x, a.fx, b.evals, a.converged && b.converged};
    } catch (...) {
#pragma omp critical
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);

  KrsbResult best;
  best.value = std::numeric_limits<double>::infinity();
  double best_qsum = 0.0;
  for (const auto& run : runs) {
    std::vector<double> m, q;
    par.decode(run.x, m, q);
    double qsum = 0.0;
    for (double v : q) qsum += v;
    best.evaluations += run.evals;
    bool better = run.fx < best.value - 1e-10 || (std::abs(run.fx - best.value) <= 1e-10 && qsum < best_qsum);
    if (better) {
      best.value = run.fx;
      best.path = StepPath{m, q};
      best.stagnated = !run.converged;
      best_qsum = qsum;
    }
  }
  // the zero path is always admissible and gives exactly 0; anything above
  // -1e-12 is rounding in the recursion
  if (!(best.value < -1e-12)) {
    best.value = 0.0;
    best.path = StepPath{std::vector<double>(r, 1.0), std::vector<double>(r, 0.0)};
    for (std::size_t j = 0; j < r; ++j) best.path.m[j] = static_cast<double>(j + 1) / static_cast<double>(r);
  }
  return best;
}

KrsbResult minimize_k_rsb(const ModelParams& p, std::size_t r, const QuadratureSpec& quad, const OptConfig& opt) {
  p.validate();
  return minimize_k_rsb(ParisiFunctional(p.beta, p.b, quad), r, opt);
}

}  // namespace qat
