#include "qatlab/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "qatlab/common.hpp"

namespace qat {

namespace {

// Reduce to tridiagonal form in place; d gets the diagonal, e[i] couples i and i+1.
void tridiagonalize(SymmetricMatrix& a, std::vector<double>& d, std::vector<double>& e) {
  const std::size_t n = a.size();
  d.assign(n, 0.0);
  e.assign(n, 0.0);
  std::vector<double> v(n), p(n);
  for (std::size_t k = 0; k + 2 < n; ++k) {
    const std::size_t m = n - k - 1;  // length of the column below the diagonal
    double norm = 0.0;
    for (std::size_t i = 0; i < m; ++i) norm = std::hypot(norm, a(k + 1 + i, k));
    d[k] = a(k, k);
    if (norm == 0.0) {
      e[k] = 0.0;
      continue;
    }
    double x0 = a(k + 1, k);
    double alpha = x0 > 0 ? -norm : norm;
    for (std::size_t i = 0; i < m; ++i) v[i] = a(k + 1 + i, k);
    v[0] -= alpha;
    double vn = 0.0;
    for (std::size_t i = 0; i < m; ++i) vn = std::hypot(vn, v[i]);
    e[k] = alpha;
    if (vn == 0.0) continue;
    for (std::size_t i = 0; i < m; ++i) v[i] /= vn;
    // p = A_sub v
    for (std::size_t i = 0; i < m; ++i) {
      const double* row = &a(k + 1 + i, k + 1);
      double s = 0.0;
      for (std::size_t j = 0; j < m; ++j) s += row[j] * v[j];
      p[i] = s;
    }
    double vp = 0.0;
    for (std::size_t i = 0; i < m; ++i) vp += v[i] * p[i];
    for (std::size_t i = 0; i < m; ++i) p[i] -= vp * v[i];
    for (std::size_t i = 0; i < m; ++i) {
      double* row = &a(k + 1 + i, k + 1);
      const double vi = 2.0 * v[i], pi = 2.0 * p[i];
      for (std::size_t j = 0; j < m; ++j) row[j] -= vi * p[j] + pi * v[j];
    }
  }
  if (n >= 2) {
    d[n - 2] = a(n - 2, n - 2);
    d[n - 1] = a(n - 1, n - 1);
    e[n - 2] = a(n - 1, n - 2);
  } else if (n == 1) {
    d[0] = a(0, 0);
  }
}

void implicit_ql(std::vector<double>& d, std::vector<double>& e, int max_sweeps) {
  const int n = static_cast<int>(d.size());
  const double eps = std::numeric_limits<double>::epsilon();
  for (int l = 0; l < n; ++l) {
    int iter = 0;
    int m;
    do {
      for (m = l; m < n - 1; ++m) {
        double dd = std::abs(d[m]) + std::abs(d[m + 1]);
        if (std::abs(e[m]) <= eps * dd) break;
      }
      if (m != l) {
        if (iter++ == max_sweeps)
          throw NumericalError("QL iteration failed to converge for eigenvalue " + std::to_string(l) +
                               " after " + std::to_string(max_sweeps) + " iterations");
        double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
        double r = std::hypot(g, 1.0);
        g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
        double s = 1.0, c = 1.0, p = 0.0;
        int i;
        bool underflow = false;
        for (i = m - 1; i >= l; --i) {
          double f = s * e[i], b = c * e[i];
          r = std::hypot(f, g);
          e[i + 1] = r;
          if (r == 0.0) {
            d[i + 1] -= p;
            e[m] = 0.0;
            underflow = true;
            break;
          }
          s = f / r;
          c = g / r;
          g = d[i + 1] - p;
          r = (d[i] - g) * s + 2.0 * c * b;
          p = s * r;
          d[i + 1] = g + p;
          g = c * r - b;
        }
        if (underflow) continue;
        d[l] -= p;
        e[l] = g;
        e[m] = 0.0;
      }
    } while (m != l);
  }
}

}  // namespace

std::vector<double> symmetric_eigenvalues(SymmetricMatrix a, int max_sweeps) {
  std::vector<double> d, e;
  tridiagonalize(a, d, e);
  implicit_ql(d, e, max_sweeps);
  std::sort(d.begin(), d.end());
  return d;
}

std::vector<double> jacobi_eigenvalues(SymmetricMatrix a, double tol, int max_sweeps) {
  const std::size_t n = a.size();
  auto off = [&] {
    double s = 0.0, t = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) (i == j ? t : s) += a(i, j) * a(i, j);
    return std::pair{s, t};
  };
  int sweep = 0;
  for (;; ++sweep) {
    auto [o, dg] = off();
    if (o <= tol * tol * std::max(dg + o, 1e-300)) break;
    if (sweep == max_sweeps)
      throw NumericalError("Jacobi iteration failed to converge after " + std::to_string(max_sweeps) + " sweeps");
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) {
        double apq = a(p, q);
        if (apq == 0.0) continue;
        double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        double t = std::copysign(1.0, theta) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        double c = 1.0 / std::sqrt(t * t + 1.0), s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          double akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          double apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
      }
  }
  std::vector<double> ev(n);
  for (std::size_t i = 0; i < n; ++i) ev[i] = a(i, i);
  std::sort(ev.begin(), ev.end());
  return ev;
}

}  // namespace qat
