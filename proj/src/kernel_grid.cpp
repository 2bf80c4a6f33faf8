#include "qatlab/kernel_grid.hpp"

#include <cmath>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "qatlab/common.hpp"

namespace qat {

KernelGrid::KernelGrid(std::size_t L, double fill) : L_(L), v_(L * L, fill) {
  if (L == 0) throw std::invalid_argument("kernel grid needs at least one slice");
}

bool KernelGrid::is_symmetric(double tol) const {
  for (std::size_t k = 0; k < L_; ++k)
    for (std::size_t kp = k + 1; kp < L_; ++kp)
      if (std::abs((*this)(k, kp) - (*this)(kp, k)) > tol) return false;
  return true;
}

static void check_same(const KernelGrid& a, const KernelGrid& b) {
  if (a.size() != b.size()) throw std::invalid_argument("kernel grid size mismatch");
}

KernelGrid& KernelGrid::operator+=(const KernelGrid& o) {
  check_same(*this, o);
  for (std::size_t i = 0; i < v_.size(); ++i) v_[i] += o.v_[i];
  return *this;
}

KernelGrid& KernelGrid::operator-=(const KernelGrid& o) {
  check_same(*this, o);
  for (std::size_t i = 0; i < v_.size(); ++i) v_[i] -= o.v_[i];
  return *this;
}

KernelGrid& KernelGrid::operator*=(double s) {
  for (double& x : v_) x *= s;
  return *this;
}

KernelGrid operator-(KernelGrid a, const KernelGrid& b) { return a -= b; }

double mu_kernel(double t, double s, double beta_b) {
  if (beta_b == 0.0) return 1.0;
  double d = std::abs(t - s);
  // cosh(x(1-2d))/cosh(x) written with exponentials that cannot overflow
  double x = beta_b;
  double a = x * (1.0 - 2.0 * d);
  double num = std::exp(std::abs(a) - x) * (1.0 + std::exp(-2.0 * std::abs(a)));
  double den = 1.0 + std::exp(-2.0 * x);
  return num / den;
}

KernelGrid mu_grid(std::size_t L, double beta_b) {
  if (L == 0) throw std::invalid_argument("mu_grid needs L >= 1");
  KernelGrid g(L);
  // translation invariant in |k - k'|, so only L distinct values
  std::vector<double> row(L);
  for (std::size_t d = 0; d < L; ++d) row[d] = mu_kernel(0.0, static_cast<double>(d) / L, beta_b);
  for (std::size_t k = 0; k < L; ++k)
    for (std::size_t kp = 0; kp < L; ++kp) g(k, kp) = row[k > kp ? k - kp : kp - k];
  return g;
}

double hs_inner(const KernelGrid& a, const KernelGrid& b) {
  check_same(a, b);
  const std::size_t n = a.size() * a.size();
  const double* x = a.data();
  const double* y = b.data();
  double s = 0.0;
#pragma omp parallel for reduction(+ : s) num_threads(thread_count()) if (n > 65536)
  for (std::size_t i = 0; i < n; ++i) s += x[i] * y[i];
  double L = static_cast<double>(a.size());
  return s / (L * L);
}

double hs_norm(const KernelGrid& a) { return std::sqrt(hs_inner(a, a)); }

namespace {

template <class MatVec>
double power_iterate(std::size_t L, MatVec&& apply, double tol, int max_iter) {
  std::vector<double> x(L), y(L);
  auto norm2 = [](const std::vector<double>& v) {
    double s = 0.0;
    for (double e : v) s += e * e;
    return std::sqrt(s);
  };
  for (int attempt = 0; attempt < 2; ++attempt) {
    for (std::size_t k = 0; k < L; ++k)
      x[k] = attempt == 0 ? 1.0 : 1.0 + 0.5 * std::sin(1.3 * static_cast<double>(k) + 0.7);
    double nx = norm2(x);
    for (double& e : x) e /= nx;
    double prev = -1.0;
    for (int it = 0; it < max_iter; ++it) {
      apply(x, y);
      double est = norm2(y);
      if (est == 0.0) break;
      if (prev >= 0.0 && std::abs(est - prev) <= tol * est) return est;
      prev = est;
      for (std::size_t k = 0; k < L; ++k) x[k] = y[k] / est;
      if (it + 1 == max_iter)
        throw NumericalError("power iteration did not converge after " + std::to_string(max_iter) +
                             " iterations");
    }
  }
  return 0.0;
}

}  // namespace

double operator_norm(const KernelGrid& a, double tol, int max_iter) {
  const std::size_t L = a.size();
  const double inv = 1.0 / static_cast<double>(L);
  return power_iterate(
      L,
      [&](const std::vector<double>& x, std::vector<double>& y) {
#pragma omp parallel for num_threads(thread_count()) if (L >= 256)
        for (std::size_t k = 0; k < L; ++k) {
          const double* row = a.data() + k * L;
          double s = 0.0;
          for (std::size_t kp = 0; kp < L; ++kp) s += row[kp] * x[kp];
          y[k] = s * inv;
        }
      },
      tol, max_iter);
}

namespace reference {

double hs_inner(const KernelGrid& a, const KernelGrid& b) {
  check_same(a, b);
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k)
    for (std::size_t kp = 0; kp < a.size(); ++kp) s += a(k, kp) * b(k, kp);
  double L = static_cast<double>(a.size());
  return s / (L * L);
}

double operator_norm(const KernelGrid& a, double tol, int max_iter) {
  const std::size_t L = a.size();
  return power_iterate(
      L,
      [&](const std::vector<double>& x, std::vector<double>& y) {
        for (std::size_t k = 0; k < L; ++k) {
          double s = 0.0;
          for (std::size_t kp = 0; kp < L; ++kp) s += a(k, kp) * x[kp];
          y[k] = s / static_cast<double>(L);
        }
      },
      tol, max_iter);
}

}  // namespace reference

KernelGrid project_dyadic(const KernelGrid& a, int D) {
  const std::size_t L = a.size();
  if (D < 0 || D > 62) throw std::invalid_argument("dyadic level out of range");
  const std::size_t blocks = std::size_t{1} << D;
  if (L % blocks != 0) throw std::invalid_argument("grid size not divisible by 2^D");
  const std::size_t w = L / blocks;
  KernelGrid out(L);
  for (std::size_t bi = 0; bi < blocks; ++bi)
    for (std::size_t bj = 0; bj < blocks; ++bj) {
      double s = 0.0;
      for (std::size_t k = bi * w; k < (bi + 1) * w; ++k)
        for (std::size_t kp = bj * w; kp < (bj + 1) * w; ++kp) s += a(k, kp);
      s /= static_cast<double>(w * w);
      for (std::size_t k = bi * w; k < (bi + 1) * w; ++k)
        for (std::size_t kp = bj * w; kp < (bj + 1) * w; ++kp) out(k, kp) = s;
    }
  return out;
}

void write_csv(std::ostream& os, const KernelGrid& a) {
  os << a.size() << '\n' << std::setprecision(17);
  for (std::size_t k = 0; k < a.size(); ++k) {
    for (std::size_t kp = 0; kp < a.size(); ++kp) {
      if (kp) os << ',';
      os << a(k, kp);
    }
    os << '\n';
  }
}

KernelGrid read_kernel_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw std::invalid_argument("empty kernel csv");
  std::size_t L = std::stoul(line);
  KernelGrid a(L);
  for (std::size_t k = 0; k < L; ++k) {
    if (!std::getline(is, line)) throw std::invalid_argument("kernel csv truncated");
    std::stringstream ss(line);
    std::string cell;
    for (std::size_t kp = 0; kp < L; ++kp) {
      if (!std::getline(ss, cell, ',')) throw std::invalid_argument("kernel csv row too short");
      a(k, kp) = std::stod(cell);
    }
  }
  return a;
}

}  // namespace qat
