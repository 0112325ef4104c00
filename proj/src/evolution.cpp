#include "nlsh/evolution.hpp"

#include <cmath>
#include <sstream>

#include "nlsh/errors.hpp"

namespace nlsh {

namespace {

long count_steps(double span, double dt) {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw StepMismatch("time step must be positive and finite");
  if (!(span > 0.0)) throw StepMismatch("integration window must have positive length");
  const double ratio = span / dt;
  const double rounded = std::round(ratio);
  if (rounded < 1.0 || std::abs(ratio - rounded) > 1e-9 * std::max(1.0, rounded)) {
    std::ostringstream os;
    os << "window " << span << " is not an integer multiple of dt = " << dt;
    throw StepMismatch(os.str());
  }
  return static_cast<long>(rounded);
}

class Stepper {
 public:
  Stepper(const NonlinearOperator& F, double hbar) : F_(F), factor_(0.0, -1.0 / hbar) {
    if (!(hbar > 0.0)) throw BadRange("hbar must be positive");
  }

  WaveFunction rhs(double t, const WaveFunction& psi) const {
    if (F_.needs_nonzero() && psi.min_modulus() < kZeroCrossing) {
      std::ostringstream os;
      os << "amplitude fell below " << kZeroCrossing << " at t = " << t << " under '" << F_.name() << "'";
      throw ZeroAmplitude(os.str());
    }
    return factor_ * F_(t, psi);
  }

  WaveFunction step(double t, double h, const WaveFunction& psi) const {
    const cplx hc{h}, half{h / 2};
    const WaveFunction k1 = rhs(t, psi);
    const WaveFunction k2 = rhs(t + h / 2, psi + half * k1);
    const WaveFunction k3 = rhs(t + h / 2, psi + half * k2);
    const WaveFunction k4 = rhs(t + h, psi + hc * k3);
    return psi + cplx{h / 6} * (k1 + cplx{2.0} * k2 + cplx{2.0} * k3 + k4);
  }

 private:
  const NonlinearOperator& F_;
  cplx factor_;
};

}  // namespace

long EvolutionConfig::steps() const { return count_steps(t1 - t0, dt); }

std::vector<WaveFunction> evolve_trajectory(const NonlinearOperator& F, const WaveFunction& phi0,
                                            const EvolutionConfig& cfg) {
  F.check_input(phi0);
  const long n = cfg.steps();
  const double h = (cfg.t1 - cfg.t0) / static_cast<double>(n);
  const Stepper stepper(F, cfg.hbar);
  std::vector<WaveFunction> out{phi0};
  out.reserve(static_cast<std::size_t>(n) + 1);
  for (long k = 0; k < n; ++k) out.push_back(stepper.step(cfg.t0 + static_cast<double>(k) * h, h, out.back()));
  return out;
}

WaveFunction evolve(const NonlinearOperator& F, const WaveFunction& phi0, const EvolutionConfig& cfg) {
  F.check_input(phi0);
  const long n = cfg.steps();
  const double h = (cfg.t1 - cfg.t0) / static_cast<double>(n);
  const Stepper stepper(F, cfg.hbar);
  WaveFunction psi = phi0;
  for (long k = 0; k < n; ++k) psi = stepper.step(cfg.t0 + static_cast<double>(k) * h, h, psi);
  return psi;
}

double separation_test(const Hierarchy& H, const WaveFunction& phi1, const WaveFunction& phi2,
                       const EvolutionConfig& cfg) {
  const int n1 = phi1.particles(), n2 = phi2.particles();
  if (n1 + n2 > H.n_max()) {
    throw BadRange("separation test needs n1 + n2 <= " + std::to_string(H.n_max()));
  }
  const WaveFunction psi1 = evolve(H.level(n1), phi1, cfg);
  const WaveFunction psi2 = evolve(H.level(n2), phi2, cfg);
  const WaveFunction psi12 = evolve(H.level(n1 + n2), tensor(phi1, phi2), cfg);
  return distance(tensor(psi1, psi2), psi12);
}

IndexTrajectory index_ode_solve(const ScalarFunction& p, const ScalarFunction& q, double t, double t_prime,
                                const EvolutionConfig& cfg) {
  if (!(cfg.hbar > 0.0)) throw BadRange("hbar must be positive");
  const double span = t_prime - t;
  const long n = count_steps(std::abs(span), cfg.dt);
  const double h = span / static_cast<double>(n);
  const cplx factor{0.0, -1.0 / cfg.hbar};
  // f(s, z; u, v) = -(i/hbar)(u Re z + i v Im z)
  auto f = [&](const ScalarFunction& u, const ScalarFunction& v, double s, cplx z) {
    return factor * pair_action(IndexPair{u(s), v(s)}, z);
  };
  auto rk4 = [&](const ScalarFunction& u, const ScalarFunction& v, double s, cplx z) {
    const cplx k1 = f(u, v, s, z);
    const cplx k2 = f(u, v, s + h / 2, z + (h / 2) * k1);
    const cplx k3 = f(u, v, s + h / 2, z + (h / 2) * k2);
    const cplx k4 = f(u, v, s + h, z + h * k3);
    return z + (h / 6) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  };
  IndexTrajectory traj;
  traj.times.push_back(t);
  traj.a.push_back(1.0);
  traj.b.push_back(1.0);
  for (long k = 0; k < n; ++k) {
    const double s = t + static_cast<double>(k) * h;
    traj.a.push_back(rk4(p, q, s, traj.a.back()));
    traj.b.push_back(rk4(q, p, s, traj.b.back()));
    traj.times.push_back(t + static_cast<double>(k + 1) * h);
  }
  return traj;
}

IndexPair extract_indices(const IndexTrajectory& traj, double hbar) {
  if (traj.times.size() < 3) throw BadRange("index extraction needs at least three samples");
  const double h = traj.times[1] - traj.times[0];
  const cplx ih{0.0, hbar};
  auto d = [h](const std::vector<cplx>& z) { return (-3.0 * z[0] + 4.0 * z[1] - z[2]) / (2.0 * h); };
  return {ih * d(traj.a), ih * d(traj.b)};
}

ScalingResult scaling_test(const NonlinearOperator& F, const WaveFunction& phi0, cplx k, const ScalarFunction& p,
                           const ScalarFunction& q, const EvolutionConfig& cfg) {
  if (std::abs(k) < kZeroTolerance) throw ZeroBase("scaling factor k must be nonzero");
  const IndexTrajectory traj = index_ode_solve(p, q, cfg.t0, cfg.t1, cfg);
  ScalingResult r;
  r.exponential = {traj.a.back(), traj.b.back()};
  const WaveFunction scaled = evolve(F, k * phi0, cfg);
  const WaveFunction plain = evolve(F, phi0, cfg);
  r.residual = distance(scaled, mixed_power(k, r.exponential) * plain);
  return r;
}

ScalingResult scaling_test(const NonlinearOperator& F, const WaveFunction& phi0, cplx k, const EvolutionConfig& cfg) {
  if (!F.indices()) throw DomainError("operator '" + F.name() + "' declares no logarithmic indices");
  const IndexPair pq = *F.indices();
  return scaling_test(
      F, phi0, k, [pq](double) { return pq.a; }, [pq](double) { return pq.b; }, cfg);
}

IndexPair exponential_indices_from_flow(const NonlinearOperator& F, const WaveFunction& phi0,
                                        const EvolutionConfig& cfg, double theta) {
  const WaveFunction plain = evolve(F, phi0, cfg);
  const WaveFunction doubled = evolve(F, cplx{2.0} * phi0, cfg);
  const WaveFunction turned = evolve(F, std::polar(1.0, theta) * phi0, cfg);
  require_nonzero(plain, "index extraction");
  cplx a{}, b{};
  for (std::size_t x = 0; x < plain.size(); ++x) {
    a += std::log(doubled[x] / plain[x]) / std::log(2.0);
    b += std::log(turned[x] / plain[x]) / cplx{0.0, theta};
  }
  const double count = static_cast<double>(plain.size());
  return {a / count, b / count};
}

}  // namespace nlsh
