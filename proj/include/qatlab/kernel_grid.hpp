#pragma once

#include <cstddef>
#include <iosfwd>
#include <vector>

namespace qat {

// L x L kernel on [0,1)^2 sampled at slice midpoints. The Hilbert-Schmidt
// inner product carries weight 1/L^2.
class KernelGrid {
 public:
  KernelGrid() = default;
  explicit KernelGrid(std::size_t L, double fill = 0.0);

  static KernelGrid ones(std::size_t L) { return KernelGrid(L, 1.0); }

  std::size_t size() const { return L_; }
  double& operator()(std::size_t k, std::size_t kp) { return v_[k * L_ + kp]; }
  double operator()(std::size_t k, std::size_t kp) const { return v_[k * L_ + kp]; }
  double* data() { return v_.data(); }
  const double* data() const { return v_.data(); }
  const std::vector<double>& values() const { return v_; }

  bool is_symmetric(double tol = 1e-12) const;

  KernelGrid& operator+=(const KernelGrid& o);
  KernelGrid& operator-=(const KernelGrid& o);
  KernelGrid& operator*=(double s);

 private:
  std::size_t L_ = 0;
  std::vector<double> v_;
};

KernelGrid operator-(KernelGrid a, const KernelGrid& b);

double mu_kernel(double t, double s, double beta_b);
KernelGrid mu_grid(std::size_t L, double beta_b);

double hs_inner(const KernelGrid& a, const KernelGrid& b);
double hs_norm(const KernelGrid& a);

// Largest |eigenvalue| of (1/L) a by power iteration.
double operator_norm(const KernelGrid& a, double tol = 1e-12, int max_iter = 100000);

KernelGrid project_dyadic(const KernelGrid& a, int D);

void write_csv(std::ostream& os, const KernelGrid& a);
KernelGrid read_kernel_csv(std::istream& is);

namespace reference {
double hs_inner(const KernelGrid& a, const KernelGrid& b);
double operator_norm(const KernelGrid& a, double tol = 1e-12, int max_iter = 100000);
}  // namespace reference

}  // namespace qat
