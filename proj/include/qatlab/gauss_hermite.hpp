#pragma once

#include <cstddef>
#include <vector>

namespace qat {

// Nodes and weights for E[f(Z)], Z ~ N(0,1): sum_i w_i f(z_i), weights sum to 1.
struct GaussHermiteRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

GaussHermiteRule gauss_hermite(std::size_t n);

}  // namespace qat
