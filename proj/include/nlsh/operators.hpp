#pragma once

// Built-in operators.  Every one registers closed-form first and second
// derivatives so that brackets and nested brackets stay exact to round-off.

#include <optional>
#include <vector>

#include "nlsh/opcalc.hpp"

namespace nlsh {

/// Dense complex matrix acting on flat state vectors.
class DenseMatrix {
 public:
  explicit DenseMatrix(std::size_t dim) : dim_(dim), a_(dim * dim) {}

  static DenseMatrix identity(std::size_t dim);
  static DenseMatrix diagonal(std::span<const cplx> values);

  std::size_t dim() const { return dim_; }
  cplx& operator()(std::size_t r, std::size_t c) { return a_[r * dim_ + c]; }
  cplx operator()(std::size_t r, std::size_t c) const { return a_[r * dim_ + c]; }

  std::vector<cplx> apply(std::span<const cplx> v) const;
  DenseMatrix adjoint() const;
  double max_abs() const;

  friend DenseMatrix operator+(const DenseMatrix& x, const DenseMatrix& y);
  friend DenseMatrix operator-(const DenseMatrix& x, const DenseMatrix& y);
  friend DenseMatrix operator*(cplx s, const DenseMatrix& x);
  friend DenseMatrix operator*(const DenseMatrix& x, const DenseMatrix& y);

 private:
  std::size_t dim_;
  std::vector<cplx> a_;
};

/// Kronecker product x (x) y.
DenseMatrix kron(const DenseMatrix& x, const DenseMatrix& y);

/// Complex-linear phi -> A phi on n-particle states.
NonlinearOperator linear_operator(std::string name, const ConfigSpace& space, int n, DenseMatrix A);

/// Multiplication by a fixed n-particle function, e.g. a pair potential.
NonlinearOperator potential_operator(std::string name, const ConfigSpace& space, int n, std::vector<cplx> values);

/// Lambda(a,b) phi = ((a,b).ln phi) phi, pointwise.  Logarithmic indices (a,b).
NonlinearOperator lambda_operator(const IndexPair& idx, const ConfigSpace& space, int n);

/// H(phi) = phi^(a,b) pointwise; mixed-power homogeneous with exponential indices (a,b).
NonlinearOperator mixed_power_operator(const IndexPair& idx, const ConfigSpace& space, int n);

struct LogModulusParams {
  /// Coefficient of phi ln|phi|; the logarithmic indices are (p, 0).
  cplx p{1.0, 0.0};
  /// Coefficient of the strictly homogeneous part phi ln(|phi| / rho(phi)).
  cplx kappa{0.0, 0.0};
  /// rho is the root mean square of |phi| over the sites that differ from x only
  /// along this factor axis; nullopt takes it over all of X.
  std::optional<std::size_t> rms_axis;
};

/// One-particle F(phi) = p phi ln|phi| + kappa phi ln(|phi| / rho(phi)).
NonlinearOperator log_modulus_operator(const ConfigSpace& space, const LogModulusParams& params);

struct CrossRatioParams {
  cplx coupling{1.0, 0.0};
  /// Reference site r used for both slots; nullopt averages over every r.
  std::optional<std::size_t> reference;
};

/// Two-particle G(phi)(x1,x2) = c phi(x1,x2) ln[phi(x1,x2) phi(r,r) / (phi(x1,r) phi(r,x2))].
/// Strictly homogeneous, permutation symmetric and zero on tensor products.
NonlinearOperator cross_ratio_operator(const ConfigSpace& space, const CrossRatioParams& params);

/// One-particle matrices on structured spaces.  Grid operators act along the
/// grid axis with spacing h = 2 pi / L and periodic wrap.
DenseMatrix grid_gradient(const ConfigSpace& space);
DenseMatrix grid_laplacian(const ConfigSpace& space);
/// phi(x) -> phi(x - steps) along the grid axis.
DenseMatrix grid_shift(const ConfigSpace& space, long steps);
/// Pauli matrix sigma_axis ('x','y','z') on factor 0 (size 2), identity elsewhere.
DenseMatrix spin_pauli(const ConfigSpace& space, char axis);
/// -(i/2) sigma_axis: generator of spin rotations about `axis`.
DenseMatrix spin_rotation_generator(const ConfigSpace& space, char axis);
/// Diagonal matrix of a function of the one-particle site.
DenseMatrix site_multiplier(const ConfigSpace& space, const std::function<cplx(std::size_t)>& f);

}  // namespace nlsh
