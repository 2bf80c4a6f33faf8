#pragma once

#include <cstddef>
#include <vector>

namespace qat {

// Dense row-major symmetric matrix.
class SymmetricMatrix {
 public:
  SymmetricMatrix() = default;
  explicit SymmetricMatrix(std::size_t n) : n_(n), a_(n * n, 0.0) {}

  std::size_t size() const { return n_; }
  double& operator()(std::size_t i, std::size_t j) { return a_[i * n_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return a_[i * n_ + j]; }
  const std::vector<double>& values() const { return a_; }

 private:
  std::size_t n_ = 0;
  std::vector<double> a_;
};

// Eigenvalues (ascending) by Householder tridiagonalisation followed by
// implicit-shift QL. Throws NumericalError with the iteration count when an
// eigenvalue fails to converge.
std::vector<double> symmetric_eigenvalues(SymmetricMatrix a, int max_sweeps = 60);

// Cyclic Jacobi rotations; intended for small matrices. Ascending order.
std::vector<double> jacobi_eigenvalues(SymmetricMatrix a, double tol = 1e-14, int max_sweeps = 100);

}  // namespace qat
