#pragma once

// Finite and infinitesimal symmetries of hierarchy evolution equations, point
// space-time generators on periodic grids and the obstruction harnesses built
// on them.

#include <cstdint>
#include <functional>
#include <vector>

#include "nlsh/evolution.hpp"
#include "nlsh/obstruction.hpp"

namespace nlsh {

/// t -> slope t + offset.
struct Affine {
  double slope = 0.0;
  double offset = 0.0;

  double operator()(double t) const { return slope * t + offset; }
  static Affine identity() { return {1.0, 0.0}; }
  static Affine constant(double c) { return {0.0, c}; }
  /// Throws DomainError when slope is zero.
  Affine inverse() const;
  friend bool operator==(const Affine&, const Affine&) = default;
};

/// f o g
Affine compose(const Affine& f, const Affine& g);

/// (V psi)(t) = V(t) psi(T(t)); the levels are time-indexed through their t argument.
struct FiniteSymmetry {
  Hierarchy V;
  Affine T = Affine::identity();
};

/// (V o W)(t) = V(t) o W(T_V(t)), T_{V o W} = T_W o T_V.
FiniteSymmetry compose(const FiniteSymmetry& V, const FiniteSymmetry& W);

/// V^{-1}(t) = V(T^{-1}(t))^{-1} given the pointwise inverses V(t)^{-1}.
FiniteSymmetry inverse(const FiniteSymmetry& V, const Hierarchy& pointwise_inverse);

/// (V psi)(t) for a time-dependent state psi.
WaveFunction apply(const FiniteSymmetry& V, const std::function<WaveFunction(double)>& psi, double t);

struct SymmetryOptions {
  double hbar = 1.0;
  /// Central time step for d/dt of V(t), K(t) and F(t).
  double dt_sym = 1e-4;
};

/// |hbar dV/dt phi - i' F(t)(V(t) phi) + T' DV(t)(phi).(i' F(T(t)) phi)|_inf, i' = -i.
double symmetry_residual(const FiniteSymmetry& V, const Hierarchy& F, double t, const WaveFunction& phi,
                         const SymmetryOptions& opts = {});

/// K(t) with the time-reparametrisation coefficient tau(t).
struct InfinitesimalSymmetry {
  Hierarchy K;
  Affine tau{};
};

/// |hbar dK/dt phi - [i'F(t), K(t)] phi + d/dt(tau i'F(t)) phi|_inf.
double inf_symmetry_residual(const InfinitesimalSymmetry& K, const Hierarchy& F, double t, const WaveFunction& phi,
                             const SymmetryOptions& opts = {});

/// [K,L](t) = [K(t),L(t)] + tau_K dL/dt - tau_L dK/dt, tau_{[K,L]} = tau_K tau_L' - tau_L tau_K'.
InfinitesimalSymmetry inf_symmetry_bracket(const InfinitesimalSymmetry& K, const InfinitesimalSymmetry& L,
                                           const SymmetryOptions& opts = {});

/// Central difference of a time-indexed operator in t.
WaveFunction time_derivative(const NonlinearOperator& K, double t, const WaveFunction& phi, double dt);

/// The operator at a frozen time.
NonlinearOperator frozen(const NonlinearOperator& K, double t);

/// Real-valued space-time profile on grid sites.
/// constant: amplitude; linear: amplitude + slope t; sine: amplitude sin(wavenumber theta + phase) + slope t,
/// theta the grid angle of the site.
struct Profile {
  enum class Kind { Constant, Linear, Sine };
  Kind kind = Kind::Constant;
  double amplitude = 0.0;
  double slope = 0.0;
  double wavenumber = 1.0;
  double phase = 0.0;

  double operator()(double t, double theta) const;
  bool time_dependent() const { return kind != Kind::Constant && slope != 0.0; }
};

struct PointSymmetrySpec {
  Profile eta;
  Profile xi;
  /// Functions of time only; evaluated at theta = 0.
  Profile gamma;
  Profile delta;
  Affine tau{};
};

/// Parts of the one-particle linear generator i eta + xi grad_h + (1/2) grad_h . xi.
enum class PointPart { All, Phase, Multiplication, Derivative };

/// The one-particle real-linear part (no Lambda term) restricted to `part`.
NonlinearOperator point_linear_part(const PointSymmetrySpec& spec, const ConfigSpace& space, PointPart part);

/// K_n(t) phi = sum_j (i eta + xi grad_h + (1/2) grad_h.xi)^(j) phi + Lambda(i gamma(t), i delta(t)) phi.
NonlinearOperator point_symmetry_generator(const PointSymmetrySpec& spec, const ConfigSpace& space, int n);

InfinitesimalSymmetry point_symmetry(const PointSymmetrySpec& spec, const ConfigSpace& space, int n_max);

/// phi(x_1..x_n) -> phi(s(x_1)..s(x_n)) for a site map s of X.
NonlinearOperator site_map_operator(std::string name, const ConfigSpace& space, int n,
                                    std::vector<std::size_t> site_map);

/// V(t) phi = phi(x_1 - steps, ..., x_n - steps) along the grid axis, T = id.
FiniteSymmetry lattice_shift(const ConfigSpace& space, long steps, int n_max);

/// V(t) phi = e^{i(omega t + phase)} phi, T = id.
FiniteSymmetry phase_map(const ConfigSpace& space, double omega, double phase, int n_max);

struct FreeliftOptions {
  std::vector<std::size_t> grid_sizes{8, 16, 32};
  double t = 0.0;
  std::uint64_t seed = 1;
  int batch_size = 2;
  /// Also evaluate corollary 2 with the cross-ratio generator.
  bool corollary2 = true;
};

struct FreeliftReport {
  std::vector<std::size_t> grid_sizes;
  /// Largest value of the phase / multiplication obstructions over the ladder.
  double phase_residual = 0.0;
  double multiplication_residual = 0.0;
  /// Derivative-part obstruction per grid size and successive ratios.
  std::vector<double> derivative_residuals;
  std::vector<double> derivative_ratios;
  std::vector<double> corollary2_derivative_residuals;
  std::vector<double> corollary2_derivative_ratios;
};

using GeneratorFactory = std::function<Generator(const ConfigSpace&)>;

/// Splits the point-symmetry obstructions of F into phase, multiplication and
/// discrete-derivative parts over a ladder of grids, on smooth states.
FreeliftReport freelift_harness(const GeneratorFactory& F, const PointSymmetrySpec& spec,
                                const FreeliftOptions& opts = {});

nlohmann::json to_json(const FreeliftReport& r);

struct InternalDofOptions {
  /// Spin times grid spaces {2, L}.
  std::vector<std::size_t> grid_sizes{8, 16, 32};
  std::vector<std::uint64_t> seeds{1, 2, 3};
  int batch_size = 4;
  /// Particle number of the lift-commutation defect in the report.
  int n = 2;
  double t = 0.0;
};

struct InternalDofResult {
  ObstructionReport report;
  /// Corollary 1 sup-norm on a smooth state for each grid size.
  std::vector<double> grid_norms;
  /// Report rhs_norm on the first grid for each seed.
  std::vector<double> seed_norms;
  /// (max - min) / max of the two lists.
  double grid_spread = 0.0;
  double seed_spread = 0.0;
};

InternalDofResult internal_dof_demo(const GeneratorFactory& F, const GeneratorFactory& K,
                                    const InternalDofOptions& opts = {});

nlohmann::json to_json(const InternalDofResult& r);

/// Solution of hbar (c,d)' = [(i'p, i'q), (c,d)] for constant (p,q):
/// exp(t X / hbar) Y0 exp(-t X / hbar) in the matrix picture.
IndexPair index_flow(const IndexPair& pq, const IndexPair& cd0, double t, double hbar);

/// |hbar d/dt (c,d) - [(i'p,i'q),(c,d)] + d/dt(tau (i'p,i'q))| at t, by central
/// differences with step dt.
double index_law_residual(const std::function<IndexPair(double)>& pq, const std::function<IndexPair(double)>& cd,
                          const Affine& tau, double t, double hbar, double dt);

/// Largest generator distance between d_j of the two sides of the symmetry
/// equation, hbar dK/dt and [i'F, K] - d/dt(tau i'F), for j = 1..N.
double djsymmbrak_residual(const InfinitesimalSymmetry& K, const Hierarchy& F, double t, const BatchSpec& batch,
                           const SymmetryOptions& opts = {});

}  // namespace nlsh
