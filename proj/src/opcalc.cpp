#include "nlsh/opcalc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "nlsh/errors.hpp"

namespace nlsh {

void require_nonzero(const WaveFunction& phi, const std::string& context) {
  if (phi.min_modulus() < kAmplitudeFloor) {
    throw ZeroAmplitude(context + ": state has an entry of modulus below " + std::to_string(kAmplitudeFloor));
  }
}

NonlinearOperator::NonlinearOperator(std::string name, ConfigSpace space, int n, Parts parts)
    : impl_(std::make_shared<const Impl>(Impl{std::move(name), std::move(space), n, std::move(parts)})) {
  if (!impl_->parts.eval) throw ConfigError("operator '" + impl_->name + "' has no evaluation rule");
  (void)flat_size(impl_->space, n);
}

void NonlinearOperator::check_input(const WaveFunction& phi) const {
  if (phi.particles() != particles() || !(phi.space() == space())) {
    throw SpaceMismatch("operator '" + name() + "' acts on " + std::to_string(particles()) + "-particle states on " +
                        space().describe());
  }
}

WaveFunction NonlinearOperator::operator()(double t, const WaveFunction& phi) const {
  check_input(phi);
  return impl_->parts.eval(t, phi);
}

WaveFunction NonlinearOperator::derivative(double t, const WaveFunction& phi, const WaveFunction& eta) const {
  check_input(phi);
  check_input(eta);
  if (!has_derivative()) throw DomainError("operator '" + name() + "' has no closed-form derivative");
  return impl_->parts.derivative(t, phi, eta);
}

WaveFunction NonlinearOperator::second_derivative(double t, const WaveFunction& phi, const WaveFunction& eta1,
                                                  const WaveFunction& eta2) const {
  check_input(phi);
  check_input(eta1);
  check_input(eta2);
  if (!has_second_derivative()) throw DomainError("operator '" + name() + "' has no closed-form second derivative");
  return impl_->parts.second_derivative(t, phi, eta1, eta2);
}

NonlinearOperator NonlinearOperator::renamed(std::string name) const {
  return NonlinearOperator(std::move(name), space(), particles(), parts());
}

NonlinearOperator NonlinearOperator::with_indices(std::optional<IndexPair> idx) const {
  Parts p = parts();
  p.indices = idx;
  return NonlinearOperator(name(), space(), particles(), std::move(p));
}

WaveFunction frechet(const NonlinearOperator& F, double t, const WaveFunction& phi, const WaveFunction& eta,
                     const FrechetOptions& opts) {
  if (F.has_derivative() && !opts.force_fd) return F.derivative(t, phi, eta);
  F.check_input(eta);
  const double h = opts.fd_step * std::max(1.0, phi.norm_inf()) / std::max(1.0, eta.norm_inf());
  const WaveFunction plus = F(t, phi + cplx{h} * eta);
  const WaveFunction minus = F(t, phi - cplx{h} * eta);
  return cplx{1.0 / (2.0 * h)} * (plus - minus);
}

WaveFunction second_frechet(const NonlinearOperator& F, double t, const WaveFunction& phi, const WaveFunction& eta1,
                            const WaveFunction& eta2, const FrechetOptions& opts) {
  if (F.has_second_derivative() && !opts.force_fd) return F.second_derivative(t, phi, eta1, eta2);
  F.check_input(eta2);
  const double h = opts.fd_step * std::max(1.0, phi.norm_inf()) / std::max(1.0, eta2.norm_inf());
  FrechetOptions inner = opts;
  const WaveFunction plus = frechet(F, t, phi + cplx{h} * eta2, eta1, inner);
  const WaveFunction minus = frechet(F, t, phi - cplx{h} * eta2, eta1, inner);
  return cplx{1.0 / (2.0 * h)} * (plus - minus);
}

NonlinearOperator zero_operator(const ConfigSpace& space, int n) {
  NonlinearOperator::Parts p;
  p.eval = [space, n](double, const WaveFunction&) { return WaveFunction::zeros(space, n); };
  p.derivative = [space, n](double, const WaveFunction&, const WaveFunction&) {
    return WaveFunction::zeros(space, n);
  };
  p.second_derivative = [space, n](double, const WaveFunction&, const WaveFunction&, const WaveFunction&) {
    return WaveFunction::zeros(space, n);
  };
  p.indices = IndexPair{};
  return NonlinearOperator("0", space, n, std::move(p));
}

NonlinearOperator identity_operator(const ConfigSpace& space, int n) {
  NonlinearOperator::Parts p;
  p.eval = [](double, const WaveFunction& phi) { return phi; };
  p.derivative = [](double, const WaveFunction&, const WaveFunction& eta) { return eta; };
  p.second_derivative = [space, n](double, const WaveFunction&, const WaveFunction&, const WaveFunction&) {
    return WaveFunction::zeros(space, n);
  };
  p.indices = IndexPair{};
  return NonlinearOperator("I", space, n, std::move(p));
}

namespace {

void require_compatible(const NonlinearOperator& F, const NonlinearOperator& G, const char* what) {
  if (F.particles() != G.particles() || !(F.space() == G.space())) {
    throw SpaceMismatch(std::string(what) + " of operators '" + F.name() + "' and '" + G.name() +
                        "' acting on different state spaces");
  }
}

std::optional<IndexPair> add_indices(const NonlinearOperator& F, const NonlinearOperator& G, cplx sign) {
  if (F.indices() && G.indices()) return *F.indices() + sign * *G.indices();
  return std::nullopt;
}

NonlinearOperator combine(const NonlinearOperator& F, const NonlinearOperator& G, cplx sign) {
  require_compatible(F, G, "sum");
  NonlinearOperator::Parts p;
  p.eval = [F, G, sign](double t, const WaveFunction& phi) { return F(t, phi) + sign * G(t, phi); };
  if (F.has_derivative() && G.has_derivative()) {
    p.derivative = [F, G, sign](double t, const WaveFunction& phi, const WaveFunction& eta) {
      return F.derivative(t, phi, eta) + sign * G.derivative(t, phi, eta);
    };
  }
  if (F.has_second_derivative() && G.has_second_derivative()) {
    p.second_derivative = [F, G, sign](double t, const WaveFunction& phi, const WaveFunction& e1,
                                       const WaveFunction& e2) {
      return F.second_derivative(t, phi, e1, e2) + sign * G.second_derivative(t, phi, e1, e2);
    };
  }
  p.indices = add_indices(F, G, sign);
  p.time_dependent = F.time_dependent() || G.time_dependent();
  p.needs_nonzero = F.needs_nonzero() || G.needs_nonzero();
  const std::string op = sign == cplx{1.0} ? " + " : " - ";
  return NonlinearOperator("(" + F.name() + op + G.name() + ")", F.space(), F.particles(), std::move(p));
}

}  // namespace

NonlinearOperator operator+(const NonlinearOperator& F, const NonlinearOperator& G) { return combine(F, G, 1.0); }
NonlinearOperator operator-(const NonlinearOperator& F, const NonlinearOperator& G) { return combine(F, G, -1.0); }

NonlinearOperator operator*(cplx c, const NonlinearOperator& F) {
  NonlinearOperator::Parts p;
  p.eval = [F, c](double t, const WaveFunction& phi) { return c * F(t, phi); };
  if (F.has_derivative()) {
    p.derivative = [F, c](double t, const WaveFunction& phi, const WaveFunction& eta) {
      return c * F.derivative(t, phi, eta);
    };
  }
  if (F.has_second_derivative()) {
    p.second_derivative = [F, c](double t, const WaveFunction& phi, const WaveFunction& e1, const WaveFunction& e2) {
      return c * F.second_derivative(t, phi, e1, e2);
    };
  }
  if (F.indices()) p.indices = c * *F.indices();
  p.time_dependent = F.time_dependent();
  p.needs_nonzero = F.needs_nonzero();
  std::string prefix = c == cplx{0, -1} ? "-i" : c == cplx{0, 1} ? "i" : "c";
  return NonlinearOperator(prefix + "*" + F.name(), F.space(), F.particles(), std::move(p));
}

NonlinearOperator sum(std::span<const NonlinearOperator> terms, const ConfigSpace& space, int n) {
  if (terms.empty()) return zero_operator(space, n);
  NonlinearOperator acc = terms.front();
  for (std::size_t k = 1; k < terms.size(); ++k) acc = acc + terms[k];
  return acc;
}

NonlinearOperator compose(const NonlinearOperator& F, const NonlinearOperator& G) {
  require_compatible(F, G, "composition");
  NonlinearOperator::Parts p;
  p.eval = [F, G](double t, const WaveFunction& phi) { return F(t, G(t, phi)); };
  if (F.has_derivative() && G.has_derivative()) {
    p.derivative = [F, G](double t, const WaveFunction& phi, const WaveFunction& eta) {
      return F.derivative(t, G(t, phi), G.derivative(t, phi, eta));
    };
  }
  p.time_dependent = F.time_dependent() || G.time_dependent();
  p.needs_nonzero = F.needs_nonzero() || G.needs_nonzero();
  return NonlinearOperator(F.name() + " o " + G.name(), F.space(), F.particles(), std::move(p));
}

NonlinearOperator lie_bracket(const NonlinearOperator& F, const NonlinearOperator& G) {
  require_compatible(F, G, "bracket");
  NonlinearOperator::Parts p;
  p.eval = [F, G](double t, const WaveFunction& phi) {
    return frechet(F, t, phi, G(t, phi)) - frechet(G, t, phi, F(t, phi));
  };
  if (F.has_second_derivative() && G.has_second_derivative()) {
    p.derivative = [F, G](double t, const WaveFunction& phi, const WaveFunction& eta) {
      const WaveFunction f = F(t, phi);
      const WaveFunction g = G(t, phi);
      return F.second_derivative(t, phi, g, eta) + F.derivative(t, phi, G.derivative(t, phi, eta)) -
             G.second_derivative(t, phi, f, eta) - G.derivative(t, phi, F.derivative(t, phi, eta));
    };
  }
  if (F.indices() && G.indices()) p.indices = pair_bracket(*F.indices(), *G.indices());
  p.time_dependent = F.time_dependent() || G.time_dependent();
  p.needs_nonzero = F.needs_nonzero() || G.needs_nonzero();
  return NonlinearOperator("[" + F.name() + ", " + G.name() + "]", F.space(), F.particles(), std::move(p));
}

LogIndexEstimate estimate_log_indices(const NonlinearOperator& F, double t, std::span<const WaveFunction> batch) {
  if (batch.empty()) throw BadRange("index estimation needs a non-empty batch");
  const cplx k_mod{2.0, 0.0};
  const cplx k_arg = std::polar(1.0, std::numbers::pi / 4);
  const cplx i{0, 1};

  // r = (F(k phi) - k F(phi)) / (k phi) = p ln|k| + i q arg k, pointwise.
  std::vector<cplx> p_samples, q_samples;
  for (const WaveFunction& phi : batch) {
    require_nonzero(phi, "index estimation");
    const WaveFunction base = F(t, phi);
    const WaveFunction scaled_mod = F(t, k_mod * phi);
    const WaveFunction scaled_arg = F(t, k_arg * phi);
    for (std::size_t x = 0; x < phi.size(); ++x) {
      p_samples.push_back((scaled_mod[x] - k_mod * base[x]) / (k_mod * phi[x]) / std::log(2.0));
      q_samples.push_back((scaled_arg[x] - k_arg * base[x]) / (k_arg * phi[x]) / (i * (std::numbers::pi / 4)));
    }
  }
  auto mean = [](const std::vector<cplx>& v) {
    cplx acc{};
    for (const cplx& c : v) acc += c;
    return acc / static_cast<double>(v.size());
  };
  LogIndexEstimate est;
  est.indices = {mean(p_samples), mean(q_samples)};
  for (const cplx& c : p_samples) est.residual = std::max(est.residual, std::abs(c - est.indices.a));
  for (const cplx& c : q_samples) est.residual = std::max(est.residual, std::abs(c - est.indices.b));
  est.declared_deviation =
      F.indices() ? distance(*F.indices(), est.indices) : std::numeric_limits<double>::quiet_NaN();
  return est;
}

double check_permutation_property(const NonlinearOperator& F, double t, std::span<const WaveFunction> batch) {
  double worst = 0.0;
  const auto perms = all_permutations(F.particles());
  for (const WaveFunction& phi : batch) {
    const WaveFunction image = F(t, phi);
    for (const Permutation& pi : perms) {
      worst = std::max(worst, distance(F(t, permute(phi, pi)), permute(image, pi)));
    }
  }
  return worst;
}

double euler_log_residual(const NonlinearOperator& F, const IndexPair& pq, double t, const WaveFunction& phi,
                          cplx eta, const FrechetOptions& opts) {
  const WaveFunction lhs = frechet(F, t, phi, eta * phi, opts);
  const WaveFunction rhs = eta * F(t, phi) + pair_action(pq, eta) * phi;
  return distance(lhs, rhs);
}

double euler_pow_residual(const NonlinearOperator& H, const IndexPair& ab, double t, const WaveFunction& phi,
                          cplx eta, const FrechetOptions& opts) {
  const WaveFunction lhs = frechet(H, t, phi, eta * phi, opts);
  const WaveFunction rhs = pair_action(ab, eta) * H(t, phi);
  return distance(lhs, rhs);
}

}  // namespace nlsh
