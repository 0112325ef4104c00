#include "nlsh/operators.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "nlsh/errors.hpp"

namespace nlsh {

DenseMatrix DenseMatrix::identity(std::size_t dim) {
  DenseMatrix m(dim);
  for (std::size_t k = 0; k < dim; ++k) m(k, k) = 1.0;
  return m;
}

DenseMatrix DenseMatrix::diagonal(std::span<const cplx> values) {
  DenseMatrix m(values.size());
  for (std::size_t k = 0; k < values.size(); ++k) m(k, k) = values[k];
  return m;
}

std::vector<cplx> DenseMatrix::apply(std::span<const cplx> v) const {
  if (v.size() != dim_) throw SpaceMismatch("matrix dimension differs from vector length");
  std::vector<cplx> out(dim_);
  for (std::size_t r = 0; r < dim_; ++r) {
    cplx acc{};
    const cplx* row = &a_[r * dim_];
    for (std::size_t c = 0; c < dim_; ++c) acc += row[c] * v[c];
    out[r] = acc;
  }
  return out;
}

DenseMatrix DenseMatrix::adjoint() const {
  DenseMatrix m(dim_);
  for (std::size_t r = 0; r < dim_; ++r)
    for (std::size_t c = 0; c < dim_; ++c) m(c, r) = std::conj((*this)(r, c));
  return m;
}

double DenseMatrix::max_abs() const {
  double m = 0.0;
  for (const cplx& v : a_) m = std::max(m, std::abs(v));
  return m;
}

DenseMatrix operator+(const DenseMatrix& x, const DenseMatrix& y) {
  if (x.dim_ != y.dim_) throw SpaceMismatch("matrix sum of different dimensions");
  DenseMatrix m = x;
  for (std::size_t k = 0; k < m.a_.size(); ++k) m.a_[k] += y.a_[k];
  return m;
}

DenseMatrix operator-(const DenseMatrix& x, const DenseMatrix& y) { return x + cplx{-1.0} * y; }

DenseMatrix operator*(cplx s, const DenseMatrix& x) {
  DenseMatrix m = x;
  for (cplx& v : m.a_) v *= s;
  return m;
}

DenseMatrix operator*(const DenseMatrix& x, const DenseMatrix& y) {
  if (x.dim_ != y.dim_) throw SpaceMismatch("matrix product of different dimensions");
  const std::size_t d = x.dim_;
  DenseMatrix m(d);
  for (std::size_t r = 0; r < d; ++r)
    for (std::size_t k = 0; k < d; ++k) {
      const cplx xv = x(r, k);
      if (xv == cplx{}) continue;
      for (std::size_t c = 0; c < d; ++c) m(r, c) += xv * y(k, c);
    }
  return m;
}

DenseMatrix kron(const DenseMatrix& x, const DenseMatrix& y) {
  const std::size_t dx = x.dim(), dy = y.dim();
  DenseMatrix m(dx * dy);
  for (std::size_t r1 = 0; r1 < dx; ++r1)
    for (std::size_t c1 = 0; c1 < dx; ++c1)
      for (std::size_t r2 = 0; r2 < dy; ++r2)
        for (std::size_t c2 = 0; c2 < dy; ++c2) m(r1 * dy + r2, c1 * dy + c2) = x(r1, c1) * y(r2, c2);
  return m;
}

NonlinearOperator linear_operator(std::string name, const ConfigSpace& space, int n, DenseMatrix A) {
  if (A.dim() != flat_size(space, n)) throw SpaceMismatch("matrix dimension differs from |X|^n");
  auto shared = std::make_shared<const DenseMatrix>(std::move(A));
  NonlinearOperator::Parts p;
  p.eval = [shared, space, n](double, const WaveFunction& phi) {
    return WaveFunction(space, n, shared->apply(phi.data()));
  };
  p.derivative = [shared, space, n](double, const WaveFunction&, const WaveFunction& eta) {
    return WaveFunction(space, n, shared->apply(eta.data()));
  };
  p.second_derivative = [space, n](double, const WaveFunction&, const WaveFunction&, const WaveFunction&) {
    return WaveFunction::zeros(space, n);
  };
  p.indices = IndexPair{};
  return NonlinearOperator(std::move(name), space, n, std::move(p));
}

NonlinearOperator potential_operator(std::string name, const ConfigSpace& space, int n, std::vector<cplx> values) {
  const WaveFunction v(space, n, std::move(values));
  NonlinearOperator::Parts p;
  p.eval = [v](double, const WaveFunction& phi) { return hadamard(v, phi); };
  p.derivative = [v](double, const WaveFunction&, const WaveFunction& eta) { return hadamard(v, eta); };
  p.second_derivative = [space, n](double, const WaveFunction&, const WaveFunction&, const WaveFunction&) {
    return WaveFunction::zeros(space, n);
  };
  p.indices = IndexPair{};
  return NonlinearOperator(std::move(name), space, n, std::move(p));
}

namespace {

using Values = std::vector<cplx>;

// F(phi) = phi * g(phi) with g given together with its first two derivatives.
struct LogFactor {
  std::function<Values(const WaveFunction&)> g;
  std::function<Values(const WaveFunction&, const WaveFunction&)> dg;
  std::function<Values(const WaveFunction&, const WaveFunction&, const WaveFunction&)> d2g;
};

NonlinearOperator multiplicative(std::string name, const ConfigSpace& space, int n, LogFactor f,
                                 std::optional<IndexPair> indices) {
  auto shared = std::make_shared<const LogFactor>(std::move(f));
  NonlinearOperator::Parts p;
  const std::string context = name;
  p.eval = [shared, context](double, const WaveFunction& phi) {
    require_nonzero(phi, context);
    Values g = shared->g(phi);
    for (std::size_t x = 0; x < g.size(); ++x) g[x] *= phi[x];
    return WaveFunction(phi.space(), phi.particles(), std::move(g));
  };
  p.derivative = [shared, context](double, const WaveFunction& phi, const WaveFunction& eta) {
    require_nonzero(phi, context);
    const Values g = shared->g(phi);
    Values out = shared->dg(phi, eta);
    for (std::size_t x = 0; x < out.size(); ++x) out[x] = eta[x] * g[x] + phi[x] * out[x];
    return WaveFunction(phi.space(), phi.particles(), std::move(out));
  };
  p.second_derivative = [shared, context](double, const WaveFunction& phi, const WaveFunction& e1,
                                          const WaveFunction& e2) {
    require_nonzero(phi, context);
    const Values d1 = shared->dg(phi, e2);
    const Values d2 = shared->dg(phi, e1);
    Values out = shared->d2g(phi, e1, e2);
    for (std::size_t x = 0; x < out.size(); ++x) out[x] = e1[x] * d1[x] + e2[x] * d2[x] + phi[x] * out[x];
    return WaveFunction(phi.space(), phi.particles(), std::move(out));
  };
  p.indices = indices;
  p.needs_nonzero = true;
  return NonlinearOperator(std::move(name), space, n, std::move(p));
}

std::string format_pair(const IndexPair& idx) {
  std::ostringstream os;
  os << "(" << idx.a.real() << (idx.a.imag() < 0 ? "" : "+") << idx.a.imag() << "i, " << idx.b.real()
     << (idx.b.imag() < 0 ? "" : "+") << idx.b.imag() << "i)";
  return os.str();
}

}  // namespace

NonlinearOperator lambda_operator(const IndexPair& idx, const ConfigSpace& space, int n) {
  LogFactor f;
  f.g = [idx](const WaveFunction& phi) {
    Values out(phi.size());
    for (std::size_t x = 0; x < out.size(); ++x) out[x] = pair_action(idx, principal_log(phi[x]));
    return out;
  };
  f.dg = [idx](const WaveFunction& phi, const WaveFunction& eta) {
    Values out(phi.size());
    for (std::size_t x = 0; x < out.size(); ++x) out[x] = pair_action(idx, eta[x] / phi[x]);
    return out;
  };
  f.d2g = [idx](const WaveFunction& phi, const WaveFunction& e1, const WaveFunction& e2) {
    Values out(phi.size());
    for (std::size_t x = 0; x < out.size(); ++x) out[x] = pair_action(idx, -e1[x] * e2[x] / (phi[x] * phi[x]));
    return out;
  };
  return multiplicative("Lambda" + format_pair(idx), space, n, std::move(f), idx);
}

NonlinearOperator mixed_power_operator(const IndexPair& idx, const ConfigSpace& space, int n) {
  NonlinearOperator::Parts p;
  p.eval = [idx](double, const WaveFunction& phi) {
    require_nonzero(phi, "mixed power");
    Values out(phi.size());
    for (std::size_t x = 0; x < out.size(); ++x) out[x] = mixed_power(phi[x], idx);
    return WaveFunction(phi.space(), phi.particles(), std::move(out));
  };
  p.derivative = [idx](double, const WaveFunction& phi, const WaveFunction& eta) {
    require_nonzero(phi, "mixed power");
    Values out(phi.size());
    for (std::size_t x = 0; x < out.size(); ++x) out[x] = mixed_power_derivative(phi[x], idx, eta[x], IndexPair{});
    return WaveFunction(phi.space(), phi.particles(), std::move(out));
  };
  p.second_derivative = [idx](double, const WaveFunction& phi, const WaveFunction& e1, const WaveFunction& e2) {
    require_nonzero(phi, "mixed power");
    Values out(phi.size());
    for (std::size_t x = 0; x < out.size(); ++x) {
      const cplx z = phi[x];
      const cplx w = mixed_power(z, idx);
      out[x] = w * pair_action(idx, e2[x] / z) * pair_action(idx, e1[x] / z) +
               w * pair_action(idx, -e1[x] * e2[x] / (z * z));
    }
    return WaveFunction(phi.space(), phi.particles(), std::move(out));
  };
  p.needs_nonzero = true;
  return NonlinearOperator("pow" + format_pair(idx), space, n, std::move(p));
}

namespace {

// Sites sharing every coordinate of x except along `axis` (all sites when
// axis is empty).
std::vector<std::vector<std::size_t>> rms_blocks(const ConfigSpace& space, std::optional<std::size_t> axis) {
  const std::size_t d = space.size();
  std::vector<std::vector<std::size_t>> block_of(d);
  if (!axis) {
    std::vector<std::size_t> all(d);
    for (std::size_t x = 0; x < d; ++x) all[x] = x;
    for (auto& b : block_of) b = all;
    return block_of;
  }
  if (*axis >= space.factors().size()) throw ConfigError("rms axis outside the factor list");
  const std::size_t stride = space.stride(*axis);
  const std::size_t extent = space.factors()[*axis];
  for (std::size_t x = 0; x < d; ++x) {
    const std::size_t coord = (x / stride) % extent;
    const std::size_t base = x - coord * stride;
    for (std::size_t k = 0; k < extent; ++k) block_of[x].push_back(base + k * stride);
  }
  return block_of;
}

}  // namespace

NonlinearOperator log_modulus_operator(const ConfigSpace& space, const LogModulusParams& params) {
  const cplx c1 = params.p + params.kappa;
  const cplx kappa = params.kappa;
  const bool use_rms = kappa != cplx{};
  auto blocks = std::make_shared<const std::vector<std::vector<std::size_t>>>(rms_blocks(space, params.rms_axis));

  // g = c1 ln|phi(x)| - kappa ln rho(x),  ln rho = 1/2 ln(S/|B|),  S = sum_B |phi|^2.
  LogFactor f;
  f.g = [=](const WaveFunction& phi) {
    Values out(phi.size());
    for (std::size_t x = 0; x < out.size(); ++x) {
      out[x] = c1 * std::log(std::abs(phi[x]));
      if (use_rms) {
        double s = 0.0;
        for (std::size_t y : (*blocks)[x]) s += std::norm(phi[y]);
        out[x] -= kappa * (0.5 * std::log(s / static_cast<double>((*blocks)[x].size())));
      }
    }
    return out;
  };
  f.dg = [=](const WaveFunction& phi, const WaveFunction& eta) {
    Values out(phi.size());
    for (std::size_t x = 0; x < out.size(); ++x) {
      out[x] = c1 * (eta[x] / phi[x]).real();
      if (use_rms) {
        double s = 0.0, a = 0.0;
        for (std::size_t y : (*blocks)[x]) {
          s += std::norm(phi[y]);
          a += (std::conj(phi[y]) * eta[y]).real();
        }
        out[x] -= kappa * (a / s);
      }
    }
    return out;
  };
  f.d2g = [=](const WaveFunction& phi, const WaveFunction& e1, const WaveFunction& e2) {
    Values out(phi.size());
    for (std::size_t x = 0; x < out.size(); ++x) {
      out[x] = c1 * (-e1[x] * e2[x] / (phi[x] * phi[x])).real();
      if (use_rms) {
        double s = 0.0, a1 = 0.0, a2 = 0.0, c = 0.0;
        for (std::size_t y : (*blocks)[x]) {
          s += std::norm(phi[y]);
          a1 += (std::conj(phi[y]) * e1[y]).real();
          a2 += (std::conj(phi[y]) * e2[y]).real();
          c += (std::conj(e1[y]) * e2[y]).real();
        }
        out[x] -= kappa * (c / s - 2.0 * a1 * a2 / (s * s));
      }
    }
    return out;
  };
  std::ostringstream name;
  name << "logmod(p=" << params.p.real() << ",kappa=" << params.kappa.real();
  if (params.rms_axis) name << ",axis=" << *params.rms_axis;
  name << ")";
  return multiplicative(name.str(), space, 1, std::move(f), IndexPair{params.p, 0.0});
}

NonlinearOperator cross_ratio_operator(const ConfigSpace& space, const CrossRatioParams& params) {
  const std::size_t d = space.size();
  std::vector<std::size_t> refs;
  if (params.reference) {
    if (*params.reference >= d) throw ConfigError("cross-ratio reference site outside X");
    refs.push_back(*params.reference);
  } else {
    for (std::size_t r = 0; r < d; ++r) refs.push_back(r);
  }
  const cplx c = params.coupling / static_cast<double>(refs.size());

  // For x = (x1,x2) and reference r: the four entries (x1,x2), (r,r), (x1,r), (r,x2)
  // enter with signs + + - -.
  auto terms = [d, refs](std::size_t x, auto&& visit) {
    const std::size_t x1 = x / d, x2 = x % d;
    for (std::size_t r : refs) visit(x, r * d + r, x1 * d + r, r * d + x2);
  };

  LogFactor f;
  f.g = [=](const WaveFunction& phi) {
    Values out(phi.size());
    for (std::size_t x = 0; x < out.size(); ++x) {
      cplx acc{};
      terms(x, [&](std::size_t a, std::size_t b, std::size_t m1, std::size_t m2) {
        acc += std::log(phi[a] * phi[b] / (phi[m1] * phi[m2]));
      });
      out[x] = c * acc;
    }
    return out;
  };
  f.dg = [=](const WaveFunction& phi, const WaveFunction& eta) {
    Values out(phi.size());
    for (std::size_t x = 0; x < out.size(); ++x) {
      cplx acc{};
      terms(x, [&](std::size_t a, std::size_t b, std::size_t m1, std::size_t m2) {
        acc += eta[a] / phi[a] + eta[b] / phi[b] - eta[m1] / phi[m1] - eta[m2] / phi[m2];
      });
      out[x] = c * acc;
    }
    return out;
  };
  f.d2g = [=](const WaveFunction& phi, const WaveFunction& e1, const WaveFunction& e2) {
    Values out(phi.size());
    auto q = [&](std::size_t y) { return -e1[y] * e2[y] / (phi[y] * phi[y]); };
    for (std::size_t x = 0; x < out.size(); ++x) {
      cplx acc{};
      terms(x, [&](std::size_t a, std::size_t b, std::size_t m1, std::size_t m2) {
        acc += q(a) + q(b) - q(m1) - q(m2);
      });
      out[x] = c * acc;
    }
    return out;
  };
  std::ostringstream name;
  name << "crossratio(c=" << params.coupling.real() << (params.coupling.imag() < 0 ? "" : "+")
       << params.coupling.imag() << "i,";
  if (params.reference)
    name << "r=" << *params.reference << ")";
  else
    name << "r=all)";
  return multiplicative(name.str(), space, 2, std::move(f), IndexPair{});
}

DenseMatrix grid_gradient(const ConfigSpace& space) {
  const std::size_t d = space.size(), L = space.grid_size();
  const double h = space.spacing();
  DenseMatrix m(d);
  for (std::size_t x = 0; x < d; ++x) {
    const std::size_t g = x % L, base = x - g;
    m(x, base + (g + 1) % L) += 1.0 / (2.0 * h);
    m(x, base + (g + L - 1) % L) -= 1.0 / (2.0 * h);
  }
  return m;
}

DenseMatrix grid_laplacian(const ConfigSpace& space) {
  const std::size_t d = space.size(), L = space.grid_size();
  const double h = space.spacing();
  DenseMatrix m(d);
  for (std::size_t x = 0; x < d; ++x) {
    const std::size_t g = x % L, base = x - g;
    m(x, base + (g + 1) % L) += 1.0 / (h * h);
    m(x, base + (g + L - 1) % L) += 1.0 / (h * h);
    m(x, x) -= 2.0 / (h * h);
  }
  return m;
}

DenseMatrix grid_shift(const ConfigSpace& space, long steps) {
  const std::size_t d = space.size();
  const long L = static_cast<long>(space.grid_size());
  DenseMatrix m(d);
  for (std::size_t x = 0; x < d; ++x) {
    const long g = static_cast<long>(x) % L;
    const std::size_t base = x - static_cast<std::size_t>(g);
    const long src = ((g - steps) % L + L) % L;
    m(x, base + static_cast<std::size_t>(src)) = 1.0;
  }
  return m;
}

DenseMatrix spin_pauli(const ConfigSpace& space, char axis) {
  if (space.factors().size() < 2 || space.factors()[0] != 2) {
    throw ConfigError("spin operators need a factored space whose first factor has size 2");
  }
  DenseMatrix s(2);
  switch (axis) {
    case 'x': s(0, 1) = 1.0; s(1, 0) = 1.0; break;
    case 'y': s(0, 1) = cplx{0, -1}; s(1, 0) = cplx{0, 1}; break;
    case 'z': s(0, 0) = 1.0; s(1, 1) = -1.0; break;
    default: throw ConfigError(std::string("unknown spin axis '") + axis + "'");
  }
  return kron(s, DenseMatrix::identity(space.size() / 2));
}

DenseMatrix spin_rotation_generator(const ConfigSpace& space, char axis) {
  return cplx{0.0, -0.5} * spin_pauli(space, axis);
}

DenseMatrix site_multiplier(const ConfigSpace& space, const std::function<cplx(std::size_t)>& f) {
  std::vector<cplx> v(space.size());
  for (std::size_t x = 0; x < v.size(); ++x) v[x] = f(x);
  return DenseMatrix::diagonal(v);
}

}  // namespace nlsh
