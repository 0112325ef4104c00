#pragma once

// Non-linear operators at a fixed particle number, their real-linear Frechet
// derivatives and the vector-field Lie bracket [F,G] = DF.G - DG.F.

#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "nlsh/mixedpow.hpp"
#include "nlsh/space.hpp"

namespace nlsh {

/// Operators containing ln(phi) refuse states with an entry below this modulus.
inline constexpr double kAmplitudeFloor = 1e-8;

void require_nonzero(const WaveFunction& phi, const std::string& context);

class NonlinearOperator {
 public:
  using Eval = std::function<WaveFunction(double t, const WaveFunction& phi)>;
  /// D F(t, phi) . eta
  using Derivative = std::function<WaveFunction(double t, const WaveFunction& phi, const WaveFunction& eta)>;
  /// D^2 F(t, phi)[eta1, eta2], symmetric and real-bilinear.
  using SecondDerivative = std::function<WaveFunction(double t, const WaveFunction& phi, const WaveFunction& eta1,
                                                      const WaveFunction& eta2)>;

  struct Parts {
    Eval eval;
    Derivative derivative;
    SecondDerivative second_derivative;
    std::optional<IndexPair> indices;
    bool time_dependent = false;
    bool needs_nonzero = false;
  };

  NonlinearOperator(std::string name, ConfigSpace space, int n, Parts parts);

  const std::string& name() const { return impl_->name; }
  const ConfigSpace& space() const { return impl_->space; }
  int particles() const { return impl_->n; }
  /// Declared logarithmic indices (p,q), when known.
  const std::optional<IndexPair>& indices() const { return impl_->parts.indices; }
  bool time_dependent() const { return impl_->parts.time_dependent; }
  bool needs_nonzero() const { return impl_->parts.needs_nonzero; }
  bool has_derivative() const { return static_cast<bool>(impl_->parts.derivative); }
  bool has_second_derivative() const { return static_cast<bool>(impl_->parts.second_derivative); }
  const Parts& parts() const { return impl_->parts; }

  WaveFunction operator()(double t, const WaveFunction& phi) const;
  /// Closed-form derivative; throws DomainError when none is registered.
  WaveFunction derivative(double t, const WaveFunction& phi, const WaveFunction& eta) const;
  WaveFunction second_derivative(double t, const WaveFunction& phi, const WaveFunction& eta1,
                                 const WaveFunction& eta2) const;

  NonlinearOperator renamed(std::string name) const;
  NonlinearOperator with_indices(std::optional<IndexPair> idx) const;

  void check_input(const WaveFunction& phi) const;

 private:
  struct Impl {
    std::string name;
    ConfigSpace space;
    int n;
    Parts parts;
  };
  std::shared_ptr<const Impl> impl_;
};

struct FrechetOptions {
  double fd_step = 1e-5;
  /// Ignore registered closed forms and difference centrally.
  bool force_fd = false;
};

/// D F(t,phi).eta; closed form when registered, else a central difference
/// with h = fd_step max(1,|phi|) / max(1,|eta|).
WaveFunction frechet(const NonlinearOperator& F, double t, const WaveFunction& phi, const WaveFunction& eta,
                     const FrechetOptions& opts = {});

/// D^2 F(t,phi)[eta1, eta2]; closed form when registered, else a central
/// difference of the first derivative along eta2.
WaveFunction second_frechet(const NonlinearOperator& F, double t, const WaveFunction& phi, const WaveFunction& eta1,
                            const WaveFunction& eta2, const FrechetOptions& opts = {});

/// True when F and everything it is built from has closed-form derivatives.
inline bool closed_form(const NonlinearOperator& F) { return F.has_derivative(); }

NonlinearOperator zero_operator(const ConfigSpace& space, int n);
NonlinearOperator identity_operator(const ConfigSpace& space, int n);

NonlinearOperator operator+(const NonlinearOperator& F, const NonlinearOperator& G);
NonlinearOperator operator-(const NonlinearOperator& F, const NonlinearOperator& G);
NonlinearOperator operator*(cplx c, const NonlinearOperator& F);
NonlinearOperator sum(std::span<const NonlinearOperator> terms, const ConfigSpace& space, int n);

/// F o G
NonlinearOperator compose(const NonlinearOperator& F, const NonlinearOperator& G);

/// [F,G](phi) = DF(phi).G(phi) - DG(phi).F(phi).  The result carries a
/// closed-form derivative when both inputs carry second derivatives, and the
/// bracket of declared indices.
NonlinearOperator lie_bracket(const NonlinearOperator& F, const NonlinearOperator& G);

struct LogIndexEstimate {
  IndexPair indices;
  /// Largest pointwise deviation from the batch average.
  double residual = 0.0;
  /// Distance to the declared indices, NaN when F declares none.
  double declared_deviation = 0.0;
};

/// Recovers (p,q) from F(k phi) - k F(phi) = k (p ln|k| + i q arg k) phi with
/// k = 2 and k = e^{i pi/4}.  Throws ZeroAmplitude on vanishing entries.
LogIndexEstimate estimate_log_indices(const NonlinearOperator& F, double t, std::span<const WaveFunction> batch);

/// max over the batch and all n! permutations of |F(pi phi) - pi F(phi)|.
double check_permutation_property(const NonlinearOperator& F, double t, std::span<const WaveFunction> batch);

/// |DF(phi).(eta phi) - eta F(phi) - ((p,q).eta) phi| for F mixed-logarithmic
/// homogeneous with indices (p,q).
double euler_log_residual(const NonlinearOperator& F, const IndexPair& pq, double t, const WaveFunction& phi,
                          cplx eta, const FrechetOptions& opts = {});

/// |DH(phi).(eta phi) - ((a,b).eta) H(phi)| for H mixed-power homogeneous
/// with exponential indices (a,b).
double euler_pow_residual(const NonlinearOperator& H, const IndexPair& ab, double t, const WaveFunction& phi,
                          cplx eta, const FrechetOptions& opts = {});

}  // namespace nlsh
