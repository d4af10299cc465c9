#include "qring/waveforms.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "qring/errors.hpp"
#include "qring/special_functions.hpp"

namespace qring {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kLn2 = std::numbers::ln2;
constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kDensityFloor = 1e-300;

// Truncation level of the u-range and acceptance level of the tail series.
const double kLogEnvelopeCut = std::log(1e-19);
const double kLogSeriesTol = std::log(1e-17);
constexpr double kExpRemainderCut = -42.0;
constexpr int kMaxSeriesTerms = 80;
constexpr double kSwitchScanStart = 2.0;
constexpr double kSwitchScanStep = 0.25;
constexpr double kSwitchScanLimit = 80.0;

struct Signed {
  double log_abs;
  int sign;
};

// W_nu(mu) = 2^{mu-1} Gamma((nu+mu)/2) / Gamma((nu-mu)/2 + 1), the regularised
// value of int_0^inf t^{mu-1} J_nu(t) dt.
Signed weber(int nu, double mu) {
  const sf::LogValue rg = sf::log_reciprocal_gamma(0.5 * (nu - mu) + 1.0);
  if (rg.sign == 0) return {kNegInf, 0};
  return {(mu - 1.0) * kLn2 + sf::ln_gamma(0.5 * (nu + mu)) + rg.log_abs, rg.sign};
}

Signed weber_derivative(int m, double mu) {
  if (m == 0) {
    const Signed w = weber(1, mu);
    return {w.log_abs, -w.sign};
  }
  const Signed lo = weber(m - 1, mu);
  const Signed hi = weber(m + 1, mu);
  if (lo.sign == 0 && hi.sign == 0) return {kNegInf, 0};
  const double top = std::max(lo.log_abs, hi.log_abs);
  const double v = 0.5 * ((lo.sign == 0 ? 0.0 : lo.sign * std::exp(lo.log_abs - top)) -
                          (hi.sign == 0 ? 0.0 : hi.sign * std::exp(hi.log_abs - top)));
  if (v == 0.0) return {kNegInf, 0};
  return {top + std::log(std::abs(v)), v > 0.0 ? 1 : -1};
}

double golden_max(const std::function<double(double)>& f, double lo, double hi, int iterations) {
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = hi - g * (hi - lo);
  double x2 = lo + g * (hi - lo);
  double f1 = f(x1);
  double f2 = f(x2);
  for (int i = 0; i < iterations; ++i) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + g * (hi - lo);
      f2 = f(x2);
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - g * (hi - lo);
      f1 = f(x1);
    }
  }
  return 0.5 * (lo + hi);
}

// Grid scan followed by golden-section refinement around the best node.
std::pair<double, double> scan_max(const std::function<double(double)>& f, double lo, double hi,
                                   int nodes) {
  double best_x = lo;
  double best_f = f(lo);
  const double h = (hi - lo) / nodes;
  for (int i = 1; i <= nodes; ++i) {
    const double x = lo + i * h;
    const double v = f(x);
    if (v > best_f) {
      best_f = v;
      best_x = x;
    }
  }
  const double a = std::max(lo, best_x - h);
  const double b = std::min(hi, best_x + h);
  const double x = golden_max(f, a, b, 60);
  const double v = f(x);
  if (v > best_f) return {x, v};
  return {best_x, best_f};
}

}  // namespace

const char* space_name(Space space) { return space == Space::position ? "position" : "momentum"; }

// ---------------------------------------------------------------------------
// RadialProfile

RadialProfile::RadialProfile(int n, double lambda, int m_abs) : n_(n), lambda_(lambda), m_abs_(m_abs) {
  if (n < 0) throw PreconditionError("RadialProfile: n must be >= 0");
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
    throw PreconditionError("RadialProfile: lambda must be finite and >= 0");
  }
  if (m_abs < 0) throw PreconditionError("RadialProfile: |m| must be >= 0");
  log_norm_ = sf::ln_gamma(n + 1.0) - sf::ln_gamma(n + lambda + 1.0);
  coef_.resize(n + 1);
  const double top = sf::ln_gamma(n + lambda + 1.0);
  for (int i = 0; i <= n; ++i) {
    const double mag = std::exp(top - sf::ln_gamma(n - i + 1.0) - sf::ln_gamma(lambda + i + 1.0) -
                                sf::ln_gamma(i + 1.0));
    coef_[i] = (i % 2 == 0) ? mag : -mag;
  }
}

RadialProfile::RadialProfile(const RingParams& params, const QuantumState& state)
    : RadialProfile(state.n, derive_scales(params, state).lambda, std::abs(state.m)) {}

double RadialProfile::laguerre(double z) const { return sf::laguerre(n_, lambda_, z); }

double RadialProfile::log_position_density(double z) const {
  if (z < 0.0) throw DomainError("position density: z must be >= 0");
  const double l = laguerre(z);
  if (l == 0.0) return kNegInf;
  double power = 0.0;
  if (lambda_ > 0.0) {
    if (z == 0.0) return kNegInf;
    power = lambda_ * std::log(z);
  }
  return log_norm_ - z + power + 2.0 * std::log(std::abs(l));
}

double RadialProfile::position_density(double z) const {
  const double v = std::exp(log_position_density(z));
  return v < kDensityFloor ? 0.0 : v;
}

double RadialProfile::position_density_max() const {
  const double hi = 2.0 * (lambda_ + 2.0 * n_ + 1.0) + 10.0;
  return scan_max([this](double z) { return position_density(z); }, 0.0, hi, 2000).second;
}

// ---------------------------------------------------------------------------
// MomentumKernel

MomentumKernel::MomentumKernel(const RadialProfile& profile, KernelKind kind, const quad::QuadConfig& cfg)
    : profile_(profile), kind_(kind), power_(kind == KernelKind::derivative ? 1 : 0) {
  cfg.validate();
  inner_cfg_ = cfg;
  inner_cfg_.rel_tol = std::max(cfg.rel_tol * 1e-2, 1e-14);
  inner_cfg_.abs_tol = 1e-15;

  const double lambda = profile_.lambda();
  const int n = profile_.n();

  // Integration range in u: where the modulus bound of the integrand exceeds 1e-19.
  const double scan_hi = 2.0 * std::sqrt(lambda + 2.0 * n + power_ + 1.0) + 12.0;
  double peak_u = 0.02;
  double peak_v = log_envelope(peak_u);
  for (double u = 0.04; u <= scan_hi; u += 0.02) {
    const double v = log_envelope(u);
    if (v > peak_v) {
      peak_v = v;
      peak_u = u;
    }
  }
  auto env = [this](double u) { return log_envelope(u); };
  u_lo_ = quad::decay_point(env, peak_u, -0.25, kLogEnvelopeCut, 0.0);
  u_hi_ = quad::decay_point(env, peak_u, 0.25, kLogEnvelopeCut, peak_u + 200.0);

  // Large-argument series: e^{-s/2} L(s) = sum h_k s^k, then term by term
  // int_0^inf u^{mu-1} J(b u) du = W(mu) b^{-mu} with b = sqrt2 xi.
  const auto& coef = profile_.laguerre_coefficients();
  const int m = profile_.m_abs();
  all_terms_.reserve(kMaxSeriesTerms);
  for (int k = 0; k < kMaxSeriesTerms; ++k) {
    double h = 0.0;
    for (int i = 0; i <= std::min(k, n); ++i) {
      const int j = k - i;
      h += coef[i] * std::exp(j * std::log(0.5) - sf::ln_gamma(j + 1.0)) * ((j % 2 == 0) ? 1.0 : -1.0);
    }
    const double mu = lambda + 2.0 + power_ + 2.0 * k;
    const Signed w = power_ == 0 ? weber(m, mu) : weber_derivative(m, mu);
    if (h == 0.0 || w.sign == 0) {
      all_terms_.push_back({mu, kNegInf, 0});
      continue;
    }
    const double log_abs = kLn2 + 0.5 * profile_.log_norm() + std::log(std::abs(h)) + w.log_abs - 0.5 * mu * kLn2;
    all_terms_.push_back({mu, log_abs, (h > 0.0 ? 1 : -1) * w.sign});
  }

  // The remainder bound is an asymptotic statement in xi^2, valid only once xi^2
  // exceeds the largest Kummer parameter; a direct comparison guards the rest.
  const double kummer_max = 0.5 * (m + lambda + 2.0 + power_ + 2.0 * n) + 2.0;
  for (double x = kSwitchScanStart; x <= kSwitchScanLimit; x += kSwitchScanStep) {
    if (x * x < kummer_max || exponential_remainder(x) >= kExpRemainderCut) continue;
    std::vector<Term> kept;
    if (!series_acceptable(x, kept)) continue;
    terms_ = std::move(kept);
    const double series = by_series(x);
    if (std::abs(by_quadrature(x) - series) <= 2e-15 + 1e-11 * std::abs(series)) {
      switch_point_ = x;
      return;
    }
    terms_.clear();
  }
  throw quad::NonConvergence("MomentumKernel: no valid switch point for the large-argument series", {});
}

double MomentumKernel::log_envelope(double u) const {
  if (u <= 0.0) return kNegInf;
  const auto& coef = profile_.laguerre_coefficients();
  double poly = 0.0;
  const double s = u * u;
  double p = 1.0;
  for (double c : coef) {
    poly += std::abs(c) * p;
    p *= s;
  }
  return kLn2 + 0.5 * profile_.log_norm() + (profile_.lambda() + 1.0 + power_) * std::log(u) - 0.5 * s +
         std::log(poly);
}

// Bound on the exponentially small part the algebraic series leaves out.
double MomentumKernel::exponential_remainder(double xi) const {
  const auto& coef = profile_.laguerre_coefficients();
  double best = kNegInf;
  for (std::size_t i = 0; i < coef.size(); ++i) {
    const double mu = profile_.lambda() + 2.0 + power_ + 2.0 * static_cast<double>(i);
    best = std::max(best, std::log(std::abs(coef[i])) + (0.5 * mu - 1.0) * kLn2 + (mu - 2.0) * std::log(xi));
  }
  return kLn2 + 0.5 * profile_.log_norm() + std::log(profile_.n() + 1.0) + best - xi * xi;
}

bool MomentumKernel::series_acceptable(double xi, std::vector<Term>& kept) const {
  kept.clear();
  int last_nonzero = -1;
  for (int k = 0; k < kMaxSeriesTerms; ++k) {
    if (all_terms_[k].sign != 0) last_nonzero = k;
  }
  const double lx = std::log(xi);
  for (int k = 0; k < kMaxSeriesTerms; ++k) {
    if (k > last_nonzero) return true;
    const Term& t = all_terms_[k];
    if (t.sign == 0) continue;
    const double mag = t.log_abs - t.exponent * lx;
    if (mag < kLogSeriesTol && !kept.empty()) return true;
    kept.push_back(t);
  }
  return false;
}

double MomentumKernel::by_quadrature(double xi) const {
  if (xi < 0.0) throw DomainError("momentum kernel: xi must be >= 0");
  const double b = std::numbers::sqrt2 * xi;
  const double lambda = profile_.lambda();
  const int m = profile_.m_abs();
  const double log_pref = kLn2 + 0.5 * profile_.log_norm();
  const bool derivative = power_ == 1;
  auto f = [&](double u) {
    const double s = u * u;
    const double amp = std::exp(log_pref + (lambda + 1.0 + power_) * std::log(u) - 0.5 * s);
    if (amp == 0.0) return 0.0;
    const double bessel = derivative ? sf::bessel_j_prime(m, b * u) : sf::bessel_j(m, b * u);
    return amp * profile_.laguerre(s) * bessel;
  };
  const double span = u_hi_ - u_lo_;
  const double half = b > 0.0 ? std::min(kPi / b, span / 16.0) : span / 16.0;
  return quad::integrate_oscillatory(f, u_lo_, u_hi_, half, span / 4000.0, inner_cfg_).value;
}

double MomentumKernel::by_series(double xi) const {
  if (!(xi > 0.0)) throw DomainError("momentum kernel series: xi must be > 0");
  const double lx = std::log(xi);
  double sum = 0.0;
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    sum += it->sign * std::exp(it->log_abs - it->exponent * lx);
  }
  return sum;
}

double MomentumKernel::operator()(double xi) const {
  if (auto it = memo_.find(xi); it != memo_.end()) return it->second;
  const double v = xi < switch_point_ ? by_quadrature(xi) : by_series(xi);
  memo_.emplace(xi, v);
  return v;
}

double MomentumKernel::tail_exponent() const {
  if (terms_.empty()) throw PreconditionError("momentum kernel: no algebraic tail");
  return terms_.front().exponent;
}

double MomentumKernel::tail_log_scale() const {
  if (terms_.empty()) throw PreconditionError("momentum kernel: no algebraic tail");
  return terms_.front().log_abs;
}

double MomentumKernel::tail_shape(double y) const {
  if (terms_.empty()) throw PreconditionError("momentum kernel: no algebraic tail");
  const Term& lead = terms_.front();
  double sum = 0.0;
  if (y > 0.0) {
    const double ly = std::log(y);
    for (std::size_t k = terms_.size(); k-- > 1;) {
      const Term& t = terms_[k];
      sum += t.sign * std::exp(t.log_abs - lead.log_abs + 0.5 * (t.exponent - lead.exponent) * ly);
    }
  }
  return lead.sign + sum;
}

std::pair<double, double> MomentumKernel::peak() const {
  auto f = [this](double xi) {
    const double v = (*this)(xi);
    return v * v;
  };
  return scan_max(f, 0.0, switch_point_, 200);
}

// ---------------------------------------------------------------------------
// Public waveform operations

std::vector<double> GridSpec::points() const {
  if (count < 1) throw PreconditionError("grid: count must be >= 1");
  if (!std::isfinite(start) || !std::isfinite(stop)) throw PreconditionError("grid: bounds must be finite");
  if (count > 1 && !(stop > start)) throw PreconditionError("grid: stop must exceed start");
  if (log_spaced && !(start > 0.0)) throw PreconditionError("grid: log spacing needs start > 0");
  std::vector<double> pts(count);
  for (int i = 0; i < count; ++i) {
    const double t = count == 1 ? 0.0 : static_cast<double>(i) / (count - 1);
    pts[i] = log_spaced ? std::exp(std::log(start) + t * (std::log(stop) - std::log(start)))
                        : start + t * (stop - start);
  }
  if (count > 1) {
    pts.front() = start;
    pts.back() = stop;
  }
  return pts;
}

double radial_position(const RingParams& params, const QuantumState& state, double r) {
  if (!(r >= 0.0)) throw DomainError("radial_position: r must be >= 0");
  const DerivedScales s = derive_scales(params, state);
  const RadialProfile profile(state.n, s.lambda, std::abs(state.m));
  const double z = r * r / (2.0 * s.r_eff * s.r_eff);
  const double l = profile.laguerre(z);
  double log_mag = 0.5 * profile.log_norm() - 0.5 * z;
  if (s.lambda > 0.0) {
    if (z == 0.0) return 0.0;
    log_mag += 0.5 * s.lambda * std::log(z);
  }
  return std::exp(log_mag) * l / s.r_eff;
}

double radial_momentum(const RingParams& params, const QuantumState& state, double k,
                       const quad::QuadConfig& cfg) {
  if (!(k >= 0.0)) throw DomainError("radial_momentum: k must be >= 0");
  const DerivedScales s = derive_scales(params, state);
  const MomentumKernel kernel(RadialProfile(state.n, s.lambda, std::abs(state.m)), KernelKind::amplitude, cfg);
  return s.r_eff * kernel(s.r_eff * k);
}

double qd_ground_momentum(const RingParams& params, int m, double k) {
  if (params.a != 0.0 || params.nu != 0.0) {
    throw PreconditionError("qd_ground_momentum: requires a = 0 and nu = 0");
  }
  if (!(k >= 0.0)) throw DomainError("qd_ground_momentum: k must be >= 0");
  const DerivedScales s = derive_scales(params, QuantumState{0, m});
  const int am = std::abs(m);
  const double xi = s.r_eff * k;
  const double power = am == 0 ? 1.0 : std::pow(xi, am);
  return s.r_eff * std::exp((0.5 * am + 1.0) * kLn2 - 0.5 * sf::ln_gamma(am + 1.0)) * power *
         std::exp(-xi * xi);
}

GridDump dump_grid(const RingParams& params, const QuantumState& state, Space space, const GridSpec& grid,
                   const quad::QuadConfig& cfg) {
  return dump_grid(params, state, space, grid.points(), cfg);
}

GridDump dump_grid(const RingParams& params, const QuantumState& state, Space space,
                   const std::vector<double>& axis, const quad::QuadConfig& cfg) {
  if (axis.empty()) throw PreconditionError("grid: no points");
  for (std::size_t i = 0; i < axis.size(); ++i) {
    if (!(axis[i] >= 0.0)) throw PreconditionError("grid: radial axis must be >= 0");
    if (i > 0 && !(axis[i] > axis[i - 1])) throw PreconditionError("grid: axis must be strictly increasing");
  }
  GridDump dump;
  dump.params = params;
  dump.state = state;
  dump.space = space;
  dump.axis = axis;
  dump.values.reserve(axis.size());
  if (space == Space::position) {
    for (double r : axis) dump.values.push_back(radial_position(params, state, r));
  } else {
    const DerivedScales s = derive_scales(params, state);
    const MomentumKernel kernel(RadialProfile(state.n, s.lambda, std::abs(state.m)), KernelKind::amplitude, cfg);
    for (double k : axis) dump.values.push_back(s.r_eff * kernel(s.r_eff * k));
  }
  return dump;
}

}  // namespace qring
