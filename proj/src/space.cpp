#include "nlsh/space.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>
#include <sstream>

#include "nlsh/errors.hpp"

namespace nlsh {

Limits& limits() {
  static Limits l;
  return l;
}

ConfigSpace::ConfigSpace(std::size_t size, bool grid) : ConfigSpace(std::vector<std::size_t>{size}, grid) {}

ConfigSpace::ConfigSpace(std::vector<std::size_t> factors, bool grid) : size_(1), factors_(std::move(factors)), grid_(grid) {
  if (factors_.empty()) throw ConfigError("configuration space needs at least one factor");
  for (std::size_t f : factors_) {
    if (f < 1) throw ConfigError("configuration space factors must be >= 1");
    size_ *= f;
  }
}

double ConfigSpace::spacing() const { return 2.0 * std::numbers::pi / static_cast<double>(grid_size()); }

double ConfigSpace::grid_angle(std::size_t site) const {
  return spacing() * static_cast<double>(site % grid_size());
}

std::size_t ConfigSpace::stride(std::size_t axis) const {
  std::size_t s = 1;
  for (std::size_t k = axis + 1; k < factors_.size(); ++k) s *= factors_[k];
  return s;
}

std::vector<std::size_t> ConfigSpace::coords(std::size_t site) const {
  std::vector<std::size_t> out(factors_.size());
  for (std::size_t k = factors_.size(); k-- > 0;) {
    out[k] = site % factors_[k];
    site /= factors_[k];
  }
  return out;
}

std::size_t ConfigSpace::site(std::span<const std::size_t> coords) const {
  std::size_t s = 0;
  for (std::size_t k = 0; k < factors_.size(); ++k) s = s * factors_[k] + coords[k];
  return s;
}

std::string ConfigSpace::describe() const {
  std::ostringstream os;
  for (std::size_t k = 0; k < factors_.size(); ++k) os << (k ? "x" : "") << factors_[k];
  if (grid_) os << " (grid)";
  return os.str();
}

std::size_t flat_size(const ConfigSpace& space, int n) {
  if (n < 1 || n > limits().max_particles) {
    throw SizeLimit("particle count " + std::to_string(n) + " outside [1, " +
                    std::to_string(limits().max_particles) + "]");
  }
  std::size_t total = 1;
  for (int k = 0; k < n; ++k) {
    total *= space.size();
    if (total > limits().max_flat_size) {
      throw SizeLimit("state on " + space.describe() + " with " + std::to_string(n) +
                      " particles exceeds the flat size cap");
    }
  }
  return total;
}

WaveFunction::WaveFunction(ConfigSpace space, int n, std::vector<cplx> data)
    : space_(std::move(space)), n_(n), data_(std::move(data)) {
  if (data_.size() != flat_size(space_, n_)) {
    throw SpaceMismatch("data length " + std::to_string(data_.size()) + " does not match |X|^n");
  }
  for (const cplx& v : data_) {
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) throw DomainError("non-finite wave function entry");
  }
}

WaveFunction WaveFunction::zeros(const ConfigSpace& space, int n) {
  return WaveFunction(space, n, std::vector<cplx>(flat_size(space, n)));
}

WaveFunction WaveFunction::constant(const ConfigSpace& space, int n, cplx value) {
  return WaveFunction(space, n, std::vector<cplx>(flat_size(space, n), value));
}

cplx WaveFunction::at(std::span<const std::size_t> sites) const {
  std::size_t idx = 0;
  for (std::size_t s : sites) idx = idx * space_.size() + s;
  return data_.at(idx);
}

double WaveFunction::norm_inf() const {
  double m = 0.0;
  for (const cplx& v : data_) m = std::max(m, std::abs(v));
  return m;
}

double WaveFunction::min_modulus() const {
  double m = std::numeric_limits<double>::infinity();
  for (const cplx& v : data_) m = std::min(m, std::abs(v));
  return m;
}

void require_same_shape(const WaveFunction& x, const WaveFunction& y, const char* context) {
  if (!x.same_shape(y)) {
    throw SpaceMismatch(std::string(context) + ": states live on different spaces or particle numbers");
  }
}

namespace {

template <class Op>
WaveFunction zip(const WaveFunction& x, const WaveFunction& y, Op op, const char* context) {
  require_same_shape(x, y, context);
  std::vector<cplx> out(x.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = op(x[i], y[i]);
  return WaveFunction(x.space(), x.particles(), std::move(out));
}

}  // namespace

WaveFunction operator+(const WaveFunction& x, const WaveFunction& y) {
  return zip(x, y, std::plus<>{}, "sum");
}

WaveFunction operator-(const WaveFunction& x, const WaveFunction& y) {
  return zip(x, y, std::minus<>{}, "difference");
}

WaveFunction operator*(cplx s, const WaveFunction& x) {
  std::vector<cplx> out(x.data_.begin(), x.data_.end());
  for (cplx& v : out) v *= s;
  return WaveFunction(x.space_, x.n_, std::move(out));
}

WaveFunction hadamard(const WaveFunction& x, const WaveFunction& y) {
  return zip(x, y, std::multiplies<>{}, "pointwise product");
}

double distance(const WaveFunction& x, const WaveFunction& y) {
  require_same_shape(x, y, "distance");
  double m = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) m = std::max(m, std::abs(x[i] - y[i]));
  return m;
}

WaveFunction tensor(const WaveFunction& f, const WaveFunction& g) {
  if (!(f.space() == g.space())) throw SpaceMismatch("tensor product of states on different spaces");
  const int n = f.particles() + g.particles();
  std::vector<cplx> out(flat_size(f.space(), n));
  std::size_t k = 0;
  for (const cplx& a : f.data())
    for (const cplx& b : g.data()) out[k++] = a * b;
  return WaveFunction(f.space(), n, std::move(out));
}

WaveFunction tensor(std::span<const WaveFunction> factors) {
  if (factors.empty()) throw BadRange("tensor product of zero factors");
  WaveFunction acc = factors.front();
  for (std::size_t k = 1; k < factors.size(); ++k) acc = tensor(acc, factors[k]);
  return acc;
}

WaveFunction permute(const WaveFunction& f, const Permutation& pi) {
  const int n = f.particles();
  if (static_cast<int>(pi.size()) != n) throw BadTuple("permutation length differs from particle count");
  {
    Permutation sorted = pi;
    std::sort(sorted.begin(), sorted.end());
    for (int k = 0; k < n; ++k)
      if (sorted[k] != k) throw BadTuple("not a permutation");
  }
  const std::size_t d = f.space().size();
  std::vector<std::size_t> pow(n, 1);
  for (int k = n - 1; k-- > 0;) pow[k] = pow[k + 1] * d;

  std::vector<cplx> out(f.size());
  std::vector<std::size_t> x(n, 0);
  for (std::size_t idx = 0; idx < f.size(); ++idx) {
    std::size_t rem = idx;
    for (int k = n; k-- > 0;) {
      x[k] = rem % d;
      rem /= d;
    }
    std::size_t src = 0;
    for (int k = 0; k < n; ++k) src += x[pi[k]] * pow[k];
    out[idx] = f[src];
  }
  return WaveFunction(f.space(), n, std::move(out));
}

Permutation then(const Permutation& pi, const Permutation& sigma) {
  Permutation out(pi.size());
  for (std::size_t k = 0; k < pi.size(); ++k) out[k] = sigma[pi[k]];
  return out;
}

Permutation inverse(const Permutation& pi) {
  Permutation out(pi.size());
  for (std::size_t k = 0; k < pi.size(); ++k) out[pi[k]] = static_cast<int>(k);
  return out;
}

std::vector<Permutation> all_permutations(int n) {
  Permutation p(n);
  std::iota(p.begin(), p.end(), 0);
  std::vector<Permutation> out;
  do {
    out.push_back(p);
  } while (std::next_permutation(p.begin(), p.end()));
  return out;
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (salt + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

namespace {

// std distributions are implementation-defined; draw the mantissa directly.
class Uniform {
 public:
  explicit Uniform(std::uint64_t seed) : eng_(seed) {}
  double operator()() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }
  double operator()(double lo, double hi) { return lo + (hi - lo) * (*this)(); }

 private:
  std::mt19937_64 eng_;
};

constexpr int kModes[3] = {-1, 0, 1};
constexpr double kModeAmplitude = 0.05;
constexpr double kPairAmplitude = 0.05;
constexpr double kShiftAmplitude = 0.1;

cplx draw(Uniform& u, double amplitude) { return {u(-amplitude, amplitude), u(-amplitude, amplitude)}; }

}  // namespace

SmoothProfile::SmoothProfile(int n, std::size_t factor_slots, std::uint64_t seed)
    : n_(n), factor_slots_(factor_slots) {
  Uniform u(mix_seed(seed, 0x5eed));
  offset_ = draw(u, 0.1);
  modes_.resize(static_cast<std::size_t>(n) * factor_slots * 3);
  for (std::size_t k = 0; k < modes_.size(); ++k) modes_[k] = draw(u, k % 3 == 1 ? kShiftAmplitude : kModeAmplitude);
  pair_.resize(static_cast<std::size_t>(n) * n * factor_slots * factor_slots);
  for (cplx& c : pair_) c = draw(u, kPairAmplitude);
}

cplx SmoothProfile::pair_coefficient(int j, int l, std::size_t sj, std::size_t sl) const {
  return pair_[((static_cast<std::size_t>(j) * n_ + l) * factor_slots_ + sj) * factor_slots_ + sl];
}

cplx SmoothProfile::value(const ConfigSpace& space, std::span<const std::size_t> sites) const {
  const cplx i{0, 1};
  cplx g = offset_;
  std::vector<double> theta(n_);
  std::vector<std::size_t> slot(n_);
  for (int j = 0; j < n_; ++j) {
    theta[j] = space.grid_angle(sites[j]);
    slot[j] = (sites[j] / space.grid_size()) % factor_slots_;
    const cplx* c = &modes_[(j * factor_slots_ + slot[j]) * 3];
    for (int k = 0; k < 3; ++k) g += c[k] * std::exp(i * (kModes[k] * theta[j]));
  }
  for (int j = 0; j < n_; ++j)
    for (int l = j + 1; l < n_; ++l) g += pair_coefficient(j, l, slot[j], slot[l]) * std::exp(i * (theta[j] - theta[l]));
  return std::exp(g);
}

double SmoothProfile::second_difference_bound() const {
  double m0 = std::abs(offset_);
  auto pair_bound = [&](int j, int l) {
    double b = 0.0;
    for (std::size_t a = 0; a < factor_slots_; ++a)
      for (std::size_t c = 0; c < factor_slots_; ++c) b = std::max(b, std::abs(pair_coefficient(j, l, a, c)));
    return b;
  };
  for (int j = 0; j < n_; ++j)
    for (int l = j + 1; l < n_; ++l) m0 += pair_bound(j, l);
  double worst = 0.0;
  for (int j = 0; j < n_; ++j) {
    double m1 = 0.0, slot_m0 = 0.0;
    for (std::size_t s = 0; s < factor_slots_; ++s) {
      const cplx* c = &modes_[(j * factor_slots_ + s) * 3];
      m1 = std::max(m1, std::abs(c[0]) + std::abs(c[2]));
      slot_m0 = std::max(slot_m0, std::abs(c[0]) + std::abs(c[1]) + std::abs(c[2]));
    }
    m0 += slot_m0;
    for (int l = 0; l < n_; ++l) {
      if (l == j) continue;
      m1 += pair_bound(std::min(j, l), std::max(j, l));
    }
    // |k| = 1 everywhere, so |g''| and |g'| share the bound m1.
    worst = std::max(worst, m1 + m1 * m1);
  }
  // sup|phi''| <= e^{sup|g|} (|g''| + |g'|^2), componentwise mean value theorem.
  return std::sqrt(2.0) * std::exp(m0) * worst;
}

WaveFunction random_state(int n, const ConfigSpace& space, std::uint64_t seed, StateOptions opts) {
  const std::size_t total = flat_size(space, n);
  std::vector<cplx> data(total);
  if (opts.smooth) {
    const SmoothProfile profile(n, space.size() / space.grid_size(), seed);
    std::vector<std::size_t> sites(n);
    for (std::size_t idx = 0; idx < total; ++idx) {
      std::size_t rem = idx;
      for (int k = n; k-- > 0;) {
        sites[k] = rem % space.size();
        rem /= space.size();
      }
      data[idx] = profile.value(space, sites);
    }
  } else {
    Uniform u(mix_seed(seed, 0x57a7e));
    for (cplx& v : data) {
      if (opts.nowhere_zero) {
        const double r = u(0.5, 1.5);
        const double phase = u(-std::numbers::pi / 4, std::numbers::pi / 4);
        v = std::polar(r, phase);
      } else {
        v = {u(-1.0, 1.0), u(-1.0, 1.0)};
      }
    }
  }
  return WaveFunction(space, n, std::move(data));
}

std::vector<WaveFunction> random_batch(int n, const ConfigSpace& space, std::uint64_t seed, int count,
                                       StateOptions opts) {
  std::vector<WaveFunction> out;
  out.reserve(count);
  for (int k = 0; k < count; ++k) out.push_back(random_state(n, space, mix_seed(seed, 1000 + k), opts));
  return out;
}

nlohmann::json to_json(const WaveFunction& f) {
  nlohmann::json arr = nlohmann::json::array();
  for (const cplx& v : f.data()) arr.push_back({v.real(), v.imag()});
  return arr;
}

WaveFunction wave_from_json(const nlohmann::json& j, const ConfigSpace& space, int n) {
  if (!j.is_array()) throw ConfigError("wave function must be a JSON array of [re, im] pairs");
  std::vector<cplx> data;
  data.reserve(j.size());
  for (const auto& e : j) {
    if (!e.is_array() || e.size() != 2) throw ConfigError("wave function entries must be [re, im] pairs");
    data.emplace_back(e[0].get<double>(), e[1].get<double>());
  }
  return WaveFunction(space, n, std::move(data));
}

}  // namespace nlsh
