#include "qatlab/phase_diagram.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/roots.hpp>
#include <cmath>
#include <exception>
#include <functional>
#include <iomanip>
#include <istream>
#include <limits>
#include <map>
#include <numbers>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "qatlab/common.hpp"

namespace qat {

double at_line_temperature(double b) {
  if (!(b >= 0.0 && b <= 1.0)) throw std::invalid_argument("b must lie in [0, 1]");
  if (b == 0.0) return 1.0;
  if (b == 1.0) return 0.0;
  return b / std::atanh(b);
}

std::string to_string(Phase p) {
  switch (p) {
    case Phase::annealed: return "annealed";
    case Phase::glass: return "glass";
    case Phase::boundary_band: return "boundary-band";
  }
  return "?";
}

double critical_ratio(double beta, double b) { return b < 1e-12 ? beta : std::tanh(beta * b) / b; }

namespace {

// q of the highest level that is not integrated out in closed form (m < 1).
double effective_q(const StepPath& path) {
  for (std::size_t j = path.m.size(); j-- > 0;)
    if (path.m[j] < 1.0) return path.q[j];
  return 0.0;
}

bool glass_verdict(double value, double q, const Tolerances& tol) {
  return value < -tol.value_tol || (value < -tol.noise_floor && q > tol.q_tol);
}

Phase phase_of(const PhasePoint& p) {
  if (p.in_band) return Phase::boundary_band;
  return p.glass_by_value ? Phase::glass : Phase::annealed;
}

}  // namespace

PhasePoint classify_point(double beta, double b, const Tolerances& tol) {
  if (!(beta > 0.0) || !std::isfinite(beta)) throw std::invalid_argument("beta must be positive");
  if (!(b >= 0.0)) throw std::invalid_argument("b must be nonnegative");
  PhasePoint pt;
  pt.b = b;
  pt.temperature = 1.0 / beta;
  const double ratio = critical_ratio(beta, b);
  pt.glass_predicate = ratio > 1.0;
  pt.in_band = std::abs(ratio - 1.0) < tol.band;
  KrsbResult res = minimize_k_rsb(ParisiFunctional(beta, b, tol.quad), tol.levels, tol.opt);
  pt.parisi_value = res.value;
  pt.optimal_q = res.value > -tol.noise_floor ? 0.0 : effective_q(res.path);
  pt.glass_by_value = glass_verdict(pt.parisi_value, pt.optimal_q, tol);
  pt.classification = phase_of(pt);
  return pt;
}

namespace {

std::vector<double> axis(double lo, double hi, std::size_t n) {
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i)
    v[i] = i + 1 == n ? hi : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
  return v;
}

void check_window(const ScanWindow& w) {
  if (w.nb < 2 || w.nt < 2) throw std::invalid_argument("resolution must be at least 2 per axis");
  if (!(w.b_min >= 0.0 && w.b_max > w.b_min)) throw std::invalid_argument("bad b range");
  if (!(w.t_min > 0.0 && w.t_max > w.t_min)) throw std::invalid_argument("bad T range");
}

// b on the analytic curve for temperature T in (0, 1): root of b = tanh(b/T).
double curve_b(double T) {
  double lo = 1e-300, hi = 1.0;
  for (int i = 0; i < 200; ++i) {
    double mid = 0.5 * (lo + hi);
    (std::tanh(mid / T) > mid ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

std::vector<std::pair<double, double>> analytic_curve(const ScanWindow& w) {
  std::vector<std::pair<double, double>> c;
  const std::size_t n = 4000;
  for (std::size_t i = 0; i <= n; ++i) {
    double T = static_cast<double>(n - i) / static_cast<double>(n);
    double b = T >= 1.0 ? 0.0 : (T <= 0.0 ? 1.0 : curve_b(T));
    c.emplace_back(b, T);
  }
  std::vector<std::pair<double, double>> out;
  for (auto [b, T] : c)
    if (b >= w.b_min && b <= w.b_max && T >= w.t_min && T <= w.t_max) out.emplace_back(b, T);
  return out;
}

ScanResult finish(ScanResult r, const ScanWindow& w) {
  std::sort(r.points.begin(), r.points.end(), [](const PhasePoint& a, const PhasePoint& c) {
    return a.temperature != c.temperature ? a.temperature < c.temperature : a.b < c.b;
  });
  r.boundary = sign_change_contour(r);
  r.analytic = analytic_curve(w);
  return r;
}

ScanResult prepare(const ScanWindow& w) {
  check_window(w);
  ScanResult r;
  r.nb = w.nb;
  r.nt = w.nt;
  r.b_values = axis(w.b_min, w.b_max, w.nb);
  r.t_values = axis(w.t_min, w.t_max, w.nt);
  r.points.resize(w.nb * w.nt);
  return r;
}

}  // namespace

ScanResult scan_grid(const ScanWindow& w, const Tolerances& tol) {
  ScanResult r = prepare(w);
  std::exception_ptr failure;
#pragma omp parallel for num_threads(thread_count()) schedule(dynamic)
  for (std::int64_t i = 0; i < static_cast<std::int64_t>(r.points.size()); ++i) {
    try {
      const auto k = static_cast<std::size_t>(i);
      r.points[k] = classify_point(1.0 / r.t_values[k / w.nb], r.b_values[k % w.nb], tol);
    } catch (...) {
#pragma omp critical
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return finish(std::move(r), w);
}

namespace reference {
ScanResult scan_grid(const ScanWindow& w, const Tolerances& tol) {
  ScanResult r = prepare(w);
  for (std::size_t k = 0; k < r.points.size(); ++k)
    r.points[k] = classify_point(1.0 / r.t_values[k / w.nb], r.b_values[k % w.nb], tol);
  return finish(std::move(r), w);
}
}  // namespace reference

std::vector<std::vector<std::pair<double, double>>> sign_change_contour(const ScanResult& r) {
  const std::size_t nb = r.nb, nt = r.nt;
  auto g = [&](std::size_t ib, std::size_t it) { return r.at(ib, it).glass_by_value; };
  // edge ids: horizontal (ib,it)-(ib+1,it) -> 2*(it*nb+ib); vertical (ib,it)-(ib,it+1) -> +1
  auto hid = [&](std::size_t ib, std::size_t it) { return 2 * (it * nb + ib); };
  auto vid = [&](std::size_t ib, std::size_t it) { return 2 * (it * nb + ib) + 1; };
  auto point = [&](std::size_t id) {
    std::size_t cell = id / 2, ib = cell % nb, it = cell / nb;
    if (id % 2 == 0) return std::pair{0.5 * (r.b_values[ib] + r.b_values[ib + 1]), r.t_values[it]};
    return std::pair{r.b_values[ib], 0.5 * (r.t_values[it] + r.t_values[it + 1])};
  };
  std::map<std::size_t, std::vector<std::size_t>> adj;
  for (std::size_t it = 0; it + 1 < nt; ++it)
    for (std::size_t ib = 0; ib + 1 < nb; ++ib) {
      // corners in counter-clockwise order with the edge leaving each corner
      bool c[4] = {g(ib, it), g(ib + 1, it), g(ib + 1, it + 1), g(ib, it + 1)};
      std::size_t e[4] = {hid(ib, it), vid(ib + 1, it), hid(ib, it + 1), vid(ib, it)};
      std::vector<std::size_t> cut;
      for (int k = 0; k < 4; ++k)
        if (c[k] != c[(k + 1) % 4]) cut.push_back(e[k]);
      // zero, two or four crossings; a saddle is split by pairing neighbours
      for (std::size_t k = 0; k + 1 < cut.size(); k += 2) {
        adj[cut[k]].push_back(cut[k + 1]);
        adj[cut[k + 1]].push_back(cut[k]);
      }
    }
  std::vector<std::vector<std::pair<double, double>>> lines;
  std::map<std::size_t, bool> seen;
  auto walk = [&](std::size_t start) {
    std::vector<std::pair<double, double>> line{point(start)};
    seen[start] = true;
    std::size_t cur = start;
    for (;;) {
      std::size_t next = std::numeric_limits<std::size_t>::max();
      for (std::size_t nb2 : adj[cur])
        if (!seen[nb2]) {
          next = nb2;
          break;
        }
      if (next == std::numeric_limits<std::size_t>::max()) break;
      seen[next] = true;
      line.push_back(point(next));
      cur = next;
    }
    lines.push_back(std::move(line));
  };
  for (auto& [id, nbrs] : adj)
    if (nbrs.size() == 1 && !seen[id]) walk(id);
  for (auto& [id, nbrs] : adj)
    if (!seen[id]) walk(id);
  return lines;
}

double contour_deviation_cells(const ScanResult& r) {
  const double db = r.b_values[1] - r.b_values[0], dt = r.t_values[1] - r.t_values[0];
  // dense samples of the full curve, by b and by T so steep parts are covered
  std::vector<std::pair<double, double>> curve;
  for (int i = 0; i <= 20000; ++i) {
    double b = i / 20000.0;
    curve.emplace_back(b, at_line_temperature(b));
    double T = i / 20000.0;
    curve.emplace_back(T >= 1.0 ? 0.0 : (T <= 0.0 ? 1.0 : curve_b(T)), T);
  }
  double worst = 0.0;
  for (const auto& line : r.boundary)
    for (auto [b, T] : line) {
      double best = std::numeric_limits<double>::infinity();
      for (auto [cb, cT] : curve) best = std::min(best, std::max(std::abs(b - cb) / db, std::abs(T - cT) / dt));
      worst = std::max(worst, best);
    }
  return worst;
}

namespace {

double gaussian_expectation(const std::function<double(double)>& f, double split) {
  using boost::math::quadrature::gauss_kronrod;
  const double inv = 1.0 / std::sqrt(2.0 * std::numbers::pi);
  auto g = [&](double z) { return f(z) * inv * std::exp(-0.5 * z * z); };
  split = std::clamp(split, -40.0, 40.0);
  const double inf = std::numeric_limits<double>::infinity();
  return gauss_kronrod<double, 61>::integrate(g, -inf, split, 20, 1e-14) +
         gauss_kronrod<double, 61>::integrate(g, split, inf, 20, 1e-14);
}

}  // namespace

ClassicalAt classical_at_line(double beta, double h) {
  if (!(beta > 0.0)) throw std::invalid_argument("beta must be positive");
  if (!(h >= 0.0)) throw std::invalid_argument("h must be nonnegative");
  auto split = [&](double q) { return q > 0.0 ? -h / std::sqrt(q) : 0.0; };
  auto F = [&](double q) {
    const double sq = std::sqrt(q);
    return gaussian_expectation(
        [&](double z) {
          double t = std::tanh(beta * (sq * z + h));
          return t * t;
        },
        split(q));
  };
  ClassicalAt out;
  double q = 1.0;
  bool converged = false;
  for (int it = 0; it < 1000; ++it) {
    double next = 0.5 * q + 0.5 * F(q);
    out.iterations = it + 1;
    if (std::abs(next - q) <= 1e-14) {
      q = next;
      converged = true;
      break;
    }
    q = next;
  }
  if (!converged) {
    // slow contraction near a critical point: bracket the largest root of F(q) - q
    out.used_fallback = true;
    auto G = [&](double x) { return F(x) - x; };
    const double lo = h > 0.0 ? 0.0 : 1e-14;
    if (h == 0.0 && G(lo) <= 0.0) {
      q = 0.0;
    } else {
      std::uintmax_t iters = 200;
      auto tol = boost::math::tools::eps_tolerance<double>(50);
      auto [a, b] = boost::math::tools::toms748_solve(G, lo, 1.0, tol, iters);
      q = 0.5 * (a + b);
    }
  }
  // at h = 0 the iteration only creeps geometrically toward the trivial root
  if (h == 0.0 && q < 1e-10) q = 0.0;
  out.q_star = q;
  const double sq = std::sqrt(q);
  double e4 = gaussian_expectation(
      [&](double z) {
        double c = std::cosh(beta * (sq * z + h));
        double s = 1.0 / (c * c);
        return s * s;
      },
      split(q));
  out.at_value = beta * beta * e4;
  out.is_rs = out.at_value <= 1.0;
  return out;
}

double classical_critical_beta(double h, double lo, double hi, double tol) {
  auto f = [&](double beta) { return classical_at_line(beta, h).at_value - 1.0; };
  double flo = f(lo), fhi = f(hi);
  if (!(flo < 0.0 && fhi > 0.0)) throw NumericalError("AT value does not cross 1 inside the bracket");
  while (hi - lo > tol) {
    double mid = 0.5 * (lo + hi);
    (f(mid) < 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

void write_csv(std::ostream& os, const ScanResult& r) {
  os << "b,T,classification,value,q_star\n" << std::setprecision(17);
  for (const auto& p : r.points)
    os << p.b << ',' << p.temperature << ',' << to_string(p.classification) << ',' << p.parisi_value << ','
       << p.optimal_q << '\n';
}

ScanResult read_scan_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line.rfind("b,T,classification", 0) != 0)
    throw std::invalid_argument("not a phase-diagram CSV");
  Tolerances tol;
  std::vector<PhasePoint> pts;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string f[5];
    for (auto& s : f)
      if (!std::getline(ss, s, ',')) throw std::invalid_argument("short CSV row: " + line);
    PhasePoint p;
    p.b = std::stod(f[0]);
    p.temperature = std::stod(f[1]);
    p.parisi_value = std::stod(f[3]);
    p.optimal_q = std::stod(f[4]);
    p.classification = f[2] == "glass" ? Phase::glass : f[2] == "annealed" ? Phase::annealed : Phase::boundary_band;
    p.in_band = p.classification == Phase::boundary_band;
    p.glass_predicate = critical_ratio(1.0 / p.temperature, p.b) > 1.0;
    p.glass_by_value = glass_verdict(p.parisi_value, p.optimal_q, tol);
    pts.push_back(p);
  }
  ScanResult r;
  for (const auto& p : pts) {
    r.b_values.push_back(p.b);
    r.t_values.push_back(p.temperature);
  }
  auto uniq = [](std::vector<double>& v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
  };
  uniq(r.b_values);
  uniq(r.t_values);
  r.nb = r.b_values.size();
  r.nt = r.t_values.size();
  if (r.nb < 2 || r.nt < 2 || r.nb * r.nt != pts.size()) throw std::invalid_argument("CSV is not a full grid");
  r.points = std::move(pts);
  ScanWindow w{r.b_values.front(), r.b_values.back(), r.t_values.front(), r.t_values.back(), r.nb, r.nt};
  return finish(std::move(r), w);
}

void write_svg(std::ostream& os, const ScanResult& r) {
  const double W = 640, H = 520, left = 60, right = 20, top = 20, bottom = 50;
  const double pw = W - left - right, ph = H - top - bottom;
  const double b0 = r.b_values.front(), b1 = r.b_values.back();
  const double t0 = r.t_values.front(), t1 = r.t_values.back();
  const double cw = pw / static_cast<double>(r.nb), ch = ph / static_cast<double>(r.nt);
  auto X = [&](double b) { return left + cw / 2 + (b - b0) / (b1 - b0) * (pw - cw); };
  auto Y = [&](double T) { return top + ph - ch / 2 - (T - t0) / (t1 - t0) * (ph - ch); };
  os << std::fixed << std::setprecision(2);
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  for (const auto& p : r.points) {
    const char* fill = p.classification == Phase::glass      ? "#4a7fb5"
                       : p.classification == Phase::annealed ? "#f2e6c9"
                                                             : "#b8b8b8";
    os << "<rect x=\"" << X(p.b) - cw / 2 << "\" y=\"" << Y(p.temperature) - ch / 2 << "\" width=\"" << cw
       << "\" height=\"" << ch << "\" fill=\"" << fill << "\"/>\n";
  }
  auto poly = [&](const std::vector<std::pair<double, double>>& pts, const char* colour, const char* dash) {
    if (pts.size() < 2) return;
    os << "<polyline fill=\"none\" stroke=\"" << colour << "\" stroke-width=\"2\"" << dash << " points=\"";
    for (auto [b, T] : pts) os << X(b) << ',' << Y(T) << ' ';
    os << "\"/>\n";
  };
  poly(r.analytic, "black", "");
  for (const auto& line : r.boundary) poly(line, "#c0392b", " stroke-dasharray=\"6,3\"");
  os << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << pw << "\" height=\"" << ph
     << "\" fill=\"none\" stroke=\"black\"/>\n";
  os << std::setprecision(3);
  for (int k = 0; k <= 4; ++k) {
    double b = b0 + (b1 - b0) * k / 4.0, T = t0 + (t1 - t0) * k / 4.0;
    os << "<text x=\"" << X(b) << "\" y=\"" << H - bottom + 18 << "\" font-size=\"12\" text-anchor=\"middle\">" << b
       << "</text>\n";
    os << "<text x=\"" << left - 6 << "\" y=\"" << Y(T) + 4 << "\" font-size=\"12\" text-anchor=\"end\">" << T
       << "</text>\n";
  }
  os << "<text x=\"" << left + pw / 2 << "\" y=\"" << H - 10 << "\" font-size=\"14\" text-anchor=\"middle\">b</text>\n";
  os << "<text x=\"16\" y=\"" << top + ph / 2 << "\" font-size=\"14\">T</text>\n";
  os << "</svg>\n";
}

}  // namespace qat
