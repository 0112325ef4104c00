#pragma once

// Finite one-particle configuration sets X, n-particle states on X^n, tensor
// products and particle permutations.
//
// Flat layout: row-major, particle 1 is the most significant digit, so the
// tensor product of two states is a contiguous outer product.

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "nlsh/mixedpow.hpp"

#include <json.hpp>

namespace nlsh {

struct Limits {
  std::size_t max_flat_size = 65536;
  int max_particles = 4;
};

/// Process-wide soft caps on state sizes.
Limits& limits();

class ConfigSpace {
 public:
  explicit ConfigSpace(std::size_t size, bool grid = false);
  /// Factored space, e.g. {2, L} for spin-1/2 times an L-site ring.  When
  /// `grid` is set the last factor is the periodic grid.
  ConfigSpace(std::vector<std::size_t> factors, bool grid);

  std::size_t size() const { return size_; }
  const std::vector<std::size_t>& factors() const { return factors_; }
  bool factored() const { return factors_.size() > 1; }
  bool grid() const { return grid_; }
  std::size_t grid_axis() const { return factors_.size() - 1; }
  std::size_t grid_size() const { return factors_.back(); }
  /// h = 2 pi / (number of grid sites).
  double spacing() const;
  /// Angular coordinate of the grid component of a site.
  double grid_angle(std::size_t site) const;

  std::vector<std::size_t> coords(std::size_t site) const;
  std::size_t site(std::span<const std::size_t> coords) const;
  std::size_t stride(std::size_t axis) const;

  std::string describe() const;

  friend bool operator==(const ConfigSpace&, const ConfigSpace&) = default;

 private:
  std::size_t size_;
  std::vector<std::size_t> factors_;
  bool grid_;
};

std::size_t flat_size(const ConfigSpace& space, int n);

/// Dense n-particle state phi : X^n -> C.  Values are fixed at construction.
class WaveFunction {
 public:
  WaveFunction(ConfigSpace space, int n, std::vector<cplx> data);

  static WaveFunction zeros(const ConfigSpace& space, int n);
  static WaveFunction constant(const ConfigSpace& space, int n, cplx value);

  int particles() const { return n_; }
  const ConfigSpace& space() const { return space_; }
  std::size_t size() const { return data_.size(); }
  std::span<const cplx> data() const { return data_; }
  cplx operator[](std::size_t i) const { return data_[i]; }
  cplx at(std::span<const std::size_t> sites) const;

  double norm_inf() const;
  double min_modulus() const;

  bool same_shape(const WaveFunction& other) const {
    return n_ == other.n_ && space_ == other.space_;
  }

  friend WaveFunction operator+(const WaveFunction& x, const WaveFunction& y);
  friend WaveFunction operator-(const WaveFunction& x, const WaveFunction& y);
  friend WaveFunction operator*(cplx s, const WaveFunction& x);
  friend WaveFunction operator-(const WaveFunction& x) { return cplx{-1.0} * x; }
  /// Pointwise product of same-shape states.
  friend WaveFunction hadamard(const WaveFunction& x, const WaveFunction& y);

 private:
  ConfigSpace space_;
  int n_;
  std::vector<cplx> data_;
};

/// Throws SpaceMismatch unless x and y have the same space and particle count.
void require_same_shape(const WaveFunction& x, const WaveFunction& y, const char* context);

/// sup-norm of x - y.
double distance(const WaveFunction& x, const WaveFunction& y);

WaveFunction tensor(const WaveFunction& f, const WaveFunction& g);
WaveFunction tensor(std::span<const WaveFunction> factors);

/// Zero-based permutation of {0..n-1}.
using Permutation = std::vector<int>;

/// (pi phi)(x) = phi(x_{pi(1)}, ..., x_{pi(n)}).
WaveFunction permute(const WaveFunction& f, const Permutation& pi);

/// permute(permute(f, pi), sigma) == permute(f, then(pi, sigma)).
Permutation then(const Permutation& pi, const Permutation& sigma);
Permutation inverse(const Permutation& pi);
std::vector<Permutation> all_permutations(int n);

struct StateOptions {
  bool nowhere_zero = false;
  bool smooth = false;
};

/// Low-frequency profile phi = exp(g) with g a first-degree trigonometric
/// polynomial in each particle's grid angle, with coefficients depending on the
/// particle's non-grid coordinate, plus weak pair correlations whose amplitudes
/// depend on both particles' non-grid coordinates.  The
/// coefficients depend only on the seed and particle count, so the same
/// continuum profile is sampled on every grid resolution.
class SmoothProfile {
 public:
  SmoothProfile(int n, std::size_t factor_slots, std::uint64_t seed);

  cplx value(const ConfigSpace& space, std::span<const std::size_t> sites) const;
  /// Bound on |second difference / h^2| along any one particle's grid axis.
  double second_difference_bound() const;

 private:
  cplx pair_coefficient(int j, int l, std::size_t sj, std::size_t sl) const;

  int n_;
  cplx offset_;
  std::vector<cplx> modes_;  // [particle][non-grid coordinate slot][k in {-1,0,1}]
  std::vector<cplx> pair_;  // [j][l][slot_j][slot_l], used for j < l
  std::size_t factor_slots_;
};

/// Deterministic pseudo-random state.  nowhere_zero: modulus in [0.5, 1.5] and
/// phase in [-pi/4, pi/4]; smooth: SmoothProfile samples (always nowhere zero).
WaveFunction random_state(int n, const ConfigSpace& space, std::uint64_t seed, StateOptions opts = {});

/// count states with seeds derived from `seed`.
std::vector<WaveFunction> random_batch(int n, const ConfigSpace& space, std::uint64_t seed, int count,
                                       StateOptions opts = {});

/// splitmix64 step, used to derive independent sub-seeds.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt);

nlohmann::json to_json(const WaveFunction& f);
WaveFunction wave_from_json(const nlohmann::json& j, const ConfigSpace& space, int n);

}  // namespace nlsh
