#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qatlab/common.hpp"
#include "qatlab/kernel_grid.hpp"
#include "qatlab/linalg.hpp"

namespace qat {

struct DisorderSample {
  std::size_t n = 0;
  std::uint64_t seed = 0;
  std::vector<double> g;  // row-major n x n, diagonal included

  double operator()(std::size_t j, std::size_t k) const { return g[j * n + k]; }
};

DisorderSample make_disorder(std::size_t n, std::uint64_t seed);
DisorderSample disorder_from_matrix(std::size_t n, std::vector<double> g);
void write_csv(std::ostream& os, const DisorderSample& d);

struct PatternSet {
  std::size_t n = 0;
  std::size_t m = 0;
  std::vector<double> values;  // row-major m x n, entry (k, j) = eta_j(k)

  double operator()(std::size_t k, std::size_t j) const { return values[k * n + j]; }
  void validate() const;
};

PatternSet random_sign_patterns(std::size_t n, std::size_t m, std::uint64_t seed);

enum class PathMode { plain, corrected, constrained };
PathMode parse_path_mode(const std::string& s);
std::string to_string(PathMode m);

// Hard ball constraint ||Q - target||_HS <= radius.
struct Constraint {
  KernelGrid target;
  double radius = 0.0;
};

double sk_energy(std::span<const int> spins, const DisorderSample& d);

inline constexpr std::size_t kDefaultHamiltonianCap = 12;
SymmetricMatrix qsk_hamiltonian(const ModelParams& p, const DisorderSample& d,
                                 std::size_t cap = kDefaultHamiltonianCap);
double trace_partition(const ModelParams& p, const DisorderSample& d, std::size_t cap = kDefaultHamiltonianCap);

inline constexpr std::size_t kEnumerationCap = 22;
double enumerate_path_partition(const ModelParams& p, const DisorderSample& d, std::size_t L, PathMode mode,
                                const std::optional<Constraint>& constraint = std::nullopt);

struct OverlapMoments {
  double self_overlap_sq = 0.0;     // <||Q||^2>
  double replica_overlap_sq = 0.0;  // <<||R||^2>> under two independent copies
  double partition = 0.0;
};

inline constexpr std::size_t kOverlapCap = 11;
OverlapMoments gibbs_overlap_exact(const ModelParams& p, const DisorderSample& d, std::size_t L, PathMode mode,
                                   const std::optional<Constraint>& constraint = std::nullopt);

// Disorder average of the weighted path sum, with the Gaussian average done
// in closed form per configuration: E_g e^{-beta l1 int U} = e^{beta^2 l1^2 N/4 ||Q||^2}.
inline constexpr std::size_t kAnnealedCap = 16;
double annealed_path_partition(const ModelParams& p, std::size_t n, std::size_t L, PathMode mode,
                               const std::optional<Constraint>& constraint = std::nullopt);

// E[W] and E[W^2] for the corrected (optionally constrained) weight with the
// Gaussian disorder average done per configuration pair. Enumerates spin
// "types" (pairs of length-L slice strings) by multinomial counts.
struct SecondMoment {
  double first = 0.0;
  double second = 0.0;
  double ratio() const { return second / (first * first); }
};
SecondMoment exact_second_moment(const ModelParams& p, std::size_t n, std::size_t L,
                                 const std::optional<Constraint>& constraint = std::nullopt);

double hopfield_pressure_exact(double g, double beta, double b, const PatternSet& patterns);

namespace reference {
// Brute force: every configuration evaluated from scratch, serially.
double enumerate_path_partition(const ModelParams& p, const DisorderSample& d, std::size_t L, PathMode mode,
                                const std::optional<Constraint>& constraint = std::nullopt);
// Explicit double loop over configuration pairs.
OverlapMoments gibbs_overlap_exact(const ModelParams& p, const DisorderSample& d, std::size_t L, PathMode mode,
                                   const std::optional<Constraint>& constraint = std::nullopt);
}  // namespace reference

}  // namespace qat
