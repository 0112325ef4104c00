#pragma once

// Liftings of few-particle operators to many particles, canonical liftings of
// generators, the Lambda / natural-part split, and hierarchies of operators
// with their tensor-derivation test and canonical decomposition.

#include <cstdint>
#include <span>
#include <vector>

#include "nlsh/opcalc.hpp"

namespace nlsh {

/// Zero-based, pairwise distinct particle slots (j1, ..., jl) of {0..m-1}.
using IndexTuple = std::vector<int>;

/// F^J on m-particle states: F acts on the variables indexed by J (in that
/// order); the remaining variables are parameters.  Throws BadTuple.
NonlinearOperator lifting(const NonlinearOperator& F, const IndexTuple& J, int m);

WaveFunction lift_J(const NonlinearOperator& F, const IndexTuple& J, int m, double t, const WaveFunction& phi);

/// All increasing l-tuples of {0..n-1}, in lexicographic order.
std::vector<IndexTuple> increasing_tuples(int l, int n);

/// A canonical generator at threshold l = op.particles().
struct Generator {
  NonlinearOperator op;
  /// Logarithmic indices; (0,0) whenever l > 1.
  IndexPair indices{};

  int threshold() const { return op.particles(); }
};

/// Generator from a one-particle operator with declared indices, or from a
/// multi-particle operator (indices (0,0)).  Throws BadRange on declared
/// nonzero indices above threshold 1.
Generator make_generator(NonlinearOperator op);

struct GeneratorCheck {
  /// Spread and declared deviation of the estimated logarithmic indices.
  double index_residual = 0.0;
  /// sup-norm of op on random tensor products (threshold > 1 only).
  double product_residual = 0.0;
  double permutation_residual = 0.0;
  bool valid = false;
};

/// Samples `count` nowhere-zero states and checks the generator conditions
/// to `tol` (relative to the largest output on the batch).
GeneratorCheck check_generator(const Generator& g, double t, std::uint64_t seed, int count, double tol);

/// check_generator, throwing NotDerivation on failure.
void require_generator(const Generator& g, double t, std::uint64_t seed, int count, double tol);

/// Lambda(a,b) on n-particle states.
NonlinearOperator lambda_op(const IndexPair& idx, const ConfigSpace& space, int n);

/// F - Lambda(p,q); strictly homogeneous when F has logarithmic indices (p,q).
NonlinearOperator natural_part(const NonlinearOperator& F, const IndexPair& idx);

/// sum_j F^(j) - (n-1) Lambda(p,q) for a one-particle generator.
NonlinearOperator canonical_lift_1p(const Generator& g, int n);

/// sum over increasing l-tuples J of F^J for a generator at threshold l.
NonlinearOperator canonical_lift_gen(const Generator& g, int n);

/// Dispatches on the threshold; the zero operator when n < threshold.
NonlinearOperator canonical_lift(const Generator& g, int n);

/// Operators F_1..F_N on a common space.
class Hierarchy {
 public:
  /// levels[k] acts on k+1 particles.
  Hierarchy(ConfigSpace space, std::vector<NonlinearOperator> levels);

  /// F_n = sum_g g^#_n for n = 1..n_max.
  static Hierarchy from_generators(const ConfigSpace& space, std::span<const Generator> gens, int n_max);
  static Hierarchy zero(const ConfigSpace& space, int n_max);

  const ConfigSpace& space() const { return space_; }
  int n_max() const { return static_cast<int>(levels_.size()); }
  const NonlinearOperator& level(int n) const;
  const std::vector<NonlinearOperator>& levels() const { return levels_; }

  friend Hierarchy operator+(const Hierarchy& x, const Hierarchy& y);
  friend Hierarchy operator-(const Hierarchy& x, const Hierarchy& y);
  friend Hierarchy operator*(cplx c, const Hierarchy& x);

 private:
  ConfigSpace space_;
  std::vector<NonlinearOperator> levels_;
};

/// Level-wise Lie bracket.
Hierarchy bracket(const Hierarchy& F, const Hierarchy& G);

/// Seeded random state batch shared by the checks below.
struct BatchSpec {
  double t = 0.0;
  std::uint64_t seed = 1;
  int count = 8;
};

/// |sum_j phi_1 ... F_{n_j}(phi_j) ... phi_r - F_n(phi_1 ... phi_r)|_inf.
double tensor_derivation_residual(const Hierarchy& H, double t, std::span<const WaveFunction> factors);

/// Largest tensor_derivation_residual over every composition n = n_1 + ... + n_r
/// (r >= 2, n <= N) with random nowhere-zero factors.
double derivation_check(const Hierarchy& H, const BatchSpec& batch);

/// Largest permutation defect over all levels.
double permutation_check(const Hierarchy& H, const BatchSpec& batch);

/// Largest |F_n(phi) - G_n(phi)| over levels and batch.
double hierarchy_distance(const Hierarchy& F, const Hierarchy& G, const BatchSpec& batch);

/// Largest |F_n(phi)| over a batch of n-particle states; used for thresholds.
double level_norm(const Hierarchy& F, int n, const BatchSpec& batch);

/// Smallest n whose level exceeds tol on the batch, or n_max + 1.
int threshold(const Hierarchy& F, const BatchSpec& batch, double tol);

double generator_distance(const Generator& g, const Generator& h, const BatchSpec& batch);

struct DecomposeOptions {
  BatchSpec batch{};
  /// Tolerance of the tensor-derivation precheck, relative to max(1, |F|).
  double tol = 1e-8;
};

/// (d_j F)_j for j = 1..N: d_1 = F_1, d_{r+1} = (F - sum_{j<=r} d_j F^#)_{r+1}.
/// Throws NotDerivation when the precheck fails.
std::vector<Generator> canonical_decompose(const Hierarchy& H, const DecomposeOptions& opts = {});

/// d_j F as a hierarchy: the canonical lift of one generator.
Hierarchy component(const ConfigSpace& space, const Generator& g, int n_max);

}  // namespace nlsh
