#pragma once

// Fixed-step RK4 integration of i hbar d/dt psi = F(t) psi, the separation
// test for hierarchies, scaling of evolution operators and the linear ODE
// linking logarithmic and exponential indices.

#include <functional>
#include <vector>

#include "nlsh/hierarchy.hpp"

namespace nlsh {

struct EvolutionConfig {
  double hbar = 1.0;
  double dt = 1e-3;
  double t0 = 0.0;
  double t1 = 1.0;

  /// (t1 - t0) / dt; throws StepMismatch unless a positive integer.
  long steps() const;
};

/// Modulus below which a logarithmic right-hand side aborts the integration.
inline constexpr double kZeroCrossing = 1e-8;

/// psi(t1) from psi(t0) = phi0.  Throws ZeroAmplitude (with the time) when an
/// amplitude of a logarithmic flow drops below kZeroCrossing.
WaveFunction evolve(const NonlinearOperator& F, const WaveFunction& phi0, const EvolutionConfig& cfg);

/// States at t0, t0 + dt, ..., t1.
std::vector<WaveFunction> evolve_trajectory(const NonlinearOperator& F, const WaveFunction& phi0,
                                            const EvolutionConfig& cfg);

/// |psi_1(t1) (x) psi_2(t1) - psi_12(t1)|_inf with psi_12 evolved under F_{n1+n2}.
double separation_test(const Hierarchy& H, const WaveFunction& phi1, const WaveFunction& phi2,
                       const EvolutionConfig& cfg);

using ScalarFunction = std::function<cplx(double)>;

struct IndexTrajectory {
  std::vector<double> times;
  std::vector<cplx> a;
  std::vector<cplx> b;
};

/// i hbar d/dt' a = p Re a + i q Im a, i hbar d/dt' b = q Re b + i p Im b with
/// a(t,t) = b(t,t) = 1, sampled every cfg.dt from t to t'.
IndexTrajectory index_ode_solve(const ScalarFunction& p, const ScalarFunction& q, double t, double t_prime,
                                const EvolutionConfig& cfg);

/// (p(t), q(t)) = i hbar d/dt' (a, b) at t' = t by a one-sided second-order
/// difference of the first three samples.
IndexPair extract_indices(const IndexTrajectory& traj, double hbar);

struct ScalingResult {
  /// |evolve(F, k phi0) - k^(a,b) evolve(F, phi0)|_inf
  double residual = 0.0;
  /// Exponential indices (a(t1,t0), b(t1,t0)) from the index ODE.
  IndexPair exponential{};
};

/// Uses the declared logarithmic indices of F (constant in time).
ScalingResult scaling_test(const NonlinearOperator& F, const WaveFunction& phi0, cplx k, const EvolutionConfig& cfg);

/// Same with time-dependent indices p(t), q(t).
ScalingResult scaling_test(const NonlinearOperator& F, const WaveFunction& phi0, cplx k, const ScalarFunction& p,
                           const ScalarFunction& q, const EvolutionConfig& cfg);

/// (a, b) read off the evolved states: ln(E(k phi)/E(phi)) = a ln|k| + i b arg k
/// with k = 2 for a and k = e^{i theta} for b, averaged over sites.
IndexPair exponential_indices_from_flow(const NonlinearOperator& F, const WaveFunction& phi0,
                                        const EvolutionConfig& cfg, double theta = 0.5);

}  // namespace nlsh
