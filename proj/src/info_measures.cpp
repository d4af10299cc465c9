#include "qring/info_measures.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "qring/errors.hpp"
#include "qring/special_functions.hpp"

namespace qring {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();
const double kLog2Pi = std::log(2.0 * kPi);
const double kLogFloor = std::log(1e-300);

void check_alpha(double alpha) {
  if (!(alpha >= 0.5 && alpha <= 4.0) || alpha == 1.0) {
    throw RangeError("Renyi/Tsallis order must lie in [0.5, 4] and differ from 1");
  }
}

bool is_qd_ground(const RingParams& params, const QuantumState& state) {
  return params.a == 0.0 && params.nu == 0.0 && state.n == 0;
}

void require_qd(const RingParams& params, const char* what) {
  params.validate();
  if (params.a != 0.0 || params.nu != 0.0) {
    throw PreconditionError(std::string(what) + ": requires a = 0 and nu = 0");
  }
}

Estimate add(Estimate x, Estimate y) { return {x.value + y.value, x.error + y.error}; }

Estimate from(const quad::QuadResult& r) { return {r.value, r.error_estimate}; }

}  // namespace

// ---------------------------------------------------------------------------
// OrbitalAnalysis

OrbitalAnalysis::OrbitalAnalysis(const RingParams& params, const QuantumState& state, const quad::QuadConfig& cfg)
    : params_(params),
      state_(state),
      cfg_(cfg),
      scales_(derive_scales(params, state)),
      profile_(state.n, scales_.lambda, std::abs(state.m)) {
  cfg_.validate();
}

const MomentumKernel& OrbitalAnalysis::kernel() const {
  if (!kernel_) kernel_.emplace(profile_, KernelKind::amplitude, cfg_);
  return *kernel_;
}

const MomentumKernel& OrbitalAnalysis::derivative_kernel() const {
  if (!derivative_kernel_) derivative_kernel_.emplace(profile_, KernelKind::derivative, cfg_);
  return *derivative_kernel_;
}

Estimate OrbitalAnalysis::position_integral(const quad::Integrand& f, double decay_rate) const {
  const double bulk = 2.0 * (profile_.lambda() + 2.0 * profile_.n() + 1.0) + 10.0;
  const double length = std::max(4.0, bulk / std::min(decay_rate, 1.0));
  return from(quad::integrate_semi_infinite(f, cfg_, length));
}

// int_0^inf xi^q |kernel|^p dxi: quadrature up to the switch point, then the
// tail series integrated in y = xi^{-2}, where it becomes
//   (1/2) e^{p ln|a0|} Y^beta [1/beta + int_0^1 t^{beta-1} (|S(Yt)|^p - 1) dt].
Estimate OrbitalAnalysis::momentum_power(const MomentumKernel& kernel, double q, double p) const {
  const double x = kernel.switch_point();
  auto head_f = [&](double xi) {
    const double v = std::abs(kernel(xi));
    if (v == 0.0) return 0.0;
    return std::pow(xi, q) * std::pow(v, p);
  };
  Estimate total = from(quad::integrate_finite(head_f, 0.0, x, cfg_));
  if (!kernel.algebraic_tail()) return total;

  const double beta = 0.5 * (p * kernel.tail_exponent() - q - 1.0);
  if (beta <= 0.0) return {kInf, 0.0};
  const double log_y = -2.0 * std::log(x);
  const double y_max = std::exp(log_y);
  auto corr_f = [&](double t) {
    const double s = std::abs(kernel.tail_shape(y_max * t));
    return std::exp((beta - 1.0) * std::log(t)) * (std::pow(s, p) - 1.0);
  };
  quad::QuadConfig tail_cfg = cfg_;
  tail_cfg.abs_tol = std::min(cfg_.abs_tol, cfg_.rel_tol / beta);
  const Estimate corr = from(quad::integrate_finite(corr_f, 0.0, 1.0, tail_cfg));
  const double pref = 0.5 * std::exp(p * kernel.tail_log_scale() + beta * log_y);
  return add(total, {pref * (1.0 / beta + corr.value), pref * corr.error});
}

// int_0^inf xi kappa^2 ln kappa^2 dxi, with the tail handled as in momentum_power.
Estimate OrbitalAnalysis::momentum_entropy() const {
  const MomentumKernel& k = kernel();
  const double x = k.switch_point();
  auto head_f = [&](double xi) {
    const double v = k(xi);
    const double v2 = v * v;
    if (v2 < 1e-300) return 0.0;
    return xi * v2 * std::log(v2);
  };
  Estimate total = from(quad::integrate_finite(head_f, 0.0, x, cfg_));
  if (!k.algebraic_tail()) return total;

  const double mu0 = k.tail_exponent();
  const double la = k.tail_log_scale();
  const double beta = mu0 - 1.0;
  const double log_y = -2.0 * std::log(x);
  const double y_max = std::exp(log_y);
  auto shape2 = [&](double t) {
    const double s = k.tail_shape(y_max * t);
    return s * s;
  };
  auto weight = [&](double t) { return std::exp((beta - 1.0) * std::log(t)); };
  quad::QuadConfig tail_cfg = cfg_;
  tail_cfg.abs_tol = std::min(cfg_.abs_tol, cfg_.rel_tol / beta);
  const Estimate j0 = from(quad::integrate_finite([&](double t) { return weight(t) * (shape2(t) - 1.0); }, 0.0,
                                                  1.0, tail_cfg));
  const Estimate j1 = from(quad::integrate_finite(
      [&](double t) { return weight(t) * (shape2(t) - 1.0) * std::log(t); }, 0.0, 1.0, tail_cfg));
  const Estimate j2 = from(quad::integrate_finite(
      [&](double t) {
        const double s2 = shape2(t);
        return s2 > 0.0 ? weight(t) * s2 * std::log(s2) : 0.0;
      },
      0.0, 1.0, tail_cfg));
  const double a = 1.0 / beta + j0.value;
  const double pref = 0.5 * std::exp(2.0 * la + beta * log_y);
  const double value = pref * ((2.0 * la + mu0 * log_y) * a + mu0 * (-1.0 / (beta * beta) + j1.value) + j2.value);
  const double err = pref * (std::abs(2.0 * la + mu0 * log_y) * j0.error + mu0 * j1.error + j2.error);
  return add(total, {value, err});
}

Estimate OrbitalAnalysis::position_norm() const {
  return position_integral([this](double z) { return profile_.position_density(z); }, 1.0);
}

Estimate OrbitalAnalysis::momentum_norm() const { return momentum_power(kernel(), 1.0, 2.0); }

Estimate OrbitalAnalysis::shannon_rho() const {
  const Estimate wlnw = position_integral(
      [this](double z) {
        const double lw = profile_.log_position_density(z);
        if (lw < kLogFloor) return 0.0;
        return std::exp(lw) * lw;
      },
      1.0);
  return {2.0 * std::log(scales_.r_eff) + kLog2Pi - wlnw.value, wlnw.error};
}

Estimate OrbitalAnalysis::shannon_gamma() const {
  const Estimate e = momentum_entropy();
  return {-2.0 * std::log(scales_.r_eff) + kLog2Pi - e.value, e.error};
}

Estimate OrbitalAnalysis::fisher_rho_integral() const {
  const double lambda = profile_.lambda();
  const int n = profile_.n();
  const double log_norm = profile_.log_norm();
  const Estimate core = position_integral(
      [&](double z) {
        const double l = profile_.laguerre(z);
        const double shifted = sf::laguerre(n - 1, lambda + 1.0, z);
        const double bracket = 0.5 * ((lambda > 0.0 ? lambda / z : 0.0) - 1.0) * l - shifted;
        return std::exp(log_norm - z + (lambda + 1.0) * std::log(z)) * bracket * bracket;
      },
      1.0);
  const double scale = 8.0 / (scales_.r_eff * scales_.r_eff);
  return {scale * core.value, scale * core.error};
}

Estimate OrbitalAnalysis::fisher_gamma() const {
  const Estimate core = momentum_power(derivative_kernel(), 1.0, 2.0);
  const double scale = 8.0 * scales_.r_eff * scales_.r_eff;
  return {scale * core.value, scale * core.error};
}

Estimate OrbitalAnalysis::onicescu_rho() const {
  const Estimate core = position_integral(
      [this](double z) {
        const double w = profile_.position_density(z);
        return w * w;
      },
      2.0);
  const double scale = 1.0 / (2.0 * kPi * scales_.r_eff * scales_.r_eff);
  return {scale * core.value, scale * core.error};
}

Estimate OrbitalAnalysis::onicescu_gamma() const {
  const Estimate core = momentum_power(kernel(), 1.0, 4.0);
  const double scale = scales_.r_eff * scales_.r_eff / (2.0 * kPi);
  return {scale * core.value, scale * core.error};
}

Estimate OrbitalAnalysis::r2_moment() const {
  const Estimate core = position_integral([this](double z) { return z * profile_.position_density(z); }, 1.0);
  const double scale = 2.0 * scales_.r_eff * scales_.r_eff;
  return {scale * core.value, scale * core.error};
}

Estimate OrbitalAnalysis::k2_moment() const {
  const Estimate core = momentum_power(kernel(), 3.0, 2.0);
  const double scale = 1.0 / (scales_.r_eff * scales_.r_eff);
  return {scale * core.value, scale * core.error};
}

Estimate OrbitalAnalysis::power_integral(Space space, double alpha) const {
  if (!(alpha > 0.0)) throw RangeError("power_integral: alpha must be > 0");
  const double r2 = scales_.r_eff * scales_.r_eff;
  Estimate core;
  double log_scale;
  if (space == Space::position) {
    core = position_integral(
        [&](double z) {
          const double lw = profile_.log_position_density(z);
          return lw < kLogFloor ? 0.0 : std::exp(alpha * lw);
        },
        alpha);
    log_scale = (1.0 - alpha) * std::log(2.0 * kPi * r2);
  } else {
    core = momentum_power(kernel(), 1.0, 2.0 * alpha);
    log_scale = (1.0 - alpha) * kLog2Pi + (alpha - 1.0) * std::log(r2);
  }
  if (std::isinf(core.value)) return core;
  const double scale = std::exp(log_scale);
  return {scale * core.value, scale * core.error};
}

Estimate OrbitalAnalysis::renyi(Space space, double alpha) const {
  check_alpha(alpha);
  const Estimate p = power_integral(space, alpha);
  if (std::isinf(p.value)) return {alpha < 1.0 ? kInf : -kInf, 0.0};
  return {std::log(p.value) / (1.0 - alpha), p.error / (p.value * std::abs(1.0 - alpha))};
}

Estimate OrbitalAnalysis::tsallis(Space space, double alpha) const {
  check_alpha(alpha);
  const Estimate p = power_integral(space, alpha);
  if (std::isinf(p.value)) return {alpha < 1.0 ? kInf : -kInf, 0.0};
  return {(1.0 - p.value) / (alpha - 1.0), p.error / std::abs(alpha - 1.0)};
}

Estimate OrbitalAnalysis::renyi_min(Space space) const {
  const double log_r2 = 2.0 * std::log(scales_.r_eff);
  if (space == Space::position) {
    return {kLog2Pi + log_r2 - std::log(profile_.position_density_max()), 0.0};
  }
  return {kLog2Pi - log_r2 - std::log(kernel().peak().second), 0.0};
}

// ---------------------------------------------------------------------------
// Entry points

double shannon_rho(const RingParams& params, const QuantumState& state, const quad::QuadConfig& cfg) {
  return OrbitalAnalysis(params, state, cfg).shannon_rho().value;
}

double shannon_gamma(const RingParams& params, const QuantumState& state, const quad::QuadConfig& cfg) {
  return OrbitalAnalysis(params, state, cfg).shannon_gamma().value;
}

double shannon_rho_closed_n0(const RingParams& params, int m) {
  const DerivedScales s = derive_scales(params, QuantumState{0, m});
  const double l = s.lambda;
  return 2.0 * std::log(s.r_eff) + 1.0 + kLog2Pi + sf::ln_gamma(l + 1.0) + l * (1.0 - sf::digamma(l + 1.0));
}

double shannon_rho_n0_asymptote(const RingParams& params, int m) {
  const DerivedScales s = derive_scales(params, QuantumState{0, m});
  if (!(s.lambda > 0.0)) throw DomainError("shannon_rho_n0_asymptote: lambda must be > 0");
  return 2.0 * std::log(s.r_eff) + 1.5 * kLog2Pi + 0.5 + 0.5 * std::log(s.lambda);
}

double shannon_gamma_qd(const RingParams& params, int m) {
  require_qd(params, "shannon_gamma_qd");
  const DerivedScales s = derive_scales(params, QuantumState{0, m});
  const double am = std::abs(m);
  return -2.0 * std::log(s.r_eff) + 1.0 + sf::ln_gamma(am + 1.0) + std::log(0.5 * kPi) +
         am * (1.0 - sf::digamma(am + 1.0));
}

double fisher_rho(const RingParams& params, const QuantumState& state) {
  const DerivedScales s = derive_scales(params, state);
  return (4.0 * state.n + 2.0) / (s.r_eff * s.r_eff);
}

double fisher_rho_integral(const RingParams& params, const QuantumState& state, const quad::QuadConfig& cfg) {
  return OrbitalAnalysis(params, state, cfg).fisher_rho_integral().value;
}

double fisher_gamma(const RingParams& params, const QuantumState& state, const quad::QuadConfig& cfg) {
  return OrbitalAnalysis(params, state, cfg).fisher_gamma().value;
}

double fisher_gamma_qd(const RingParams& params, int m) {
  require_qd(params, "fisher_gamma_qd");
  const DerivedScales s = derive_scales(params, QuantumState{0, m});
  return 8.0 * s.r_eff * s.r_eff;
}

double onicescu_rho(const RingParams& params, const QuantumState& state, const quad::QuadConfig& cfg) {
  return OrbitalAnalysis(params, state, cfg).onicescu_rho().value;
}

double onicescu_gamma(const RingParams& params, const QuantumState& state, const quad::QuadConfig& cfg) {
  return OrbitalAnalysis(params, state, cfg).onicescu_gamma().value;
}

double onicescu_rho_closed_n0(const RingParams& params, int m) {
  const DerivedScales s = derive_scales(params, QuantumState{0, m});
  return std::exp(sf::ln_gamma(s.lambda + 0.5) - sf::ln_gamma(s.lambda + 1.0)) /
         (4.0 * std::pow(kPi, 1.5) * s.r_eff * s.r_eff);
}

double onicescu_rho_n0_asymptote(const RingParams& params, int m) {
  const DerivedScales s = derive_scales(params, QuantumState{0, m});
  if (!(s.lambda > 0.0)) throw DomainError("onicescu_rho_n0_asymptote: lambda must be > 0");
  return 1.0 / (4.0 * std::pow(kPi, 1.5) * std::sqrt(s.lambda) * s.r_eff * s.r_eff);
}

double onicescu_gamma_qd(const RingParams& params, int m) {
  require_qd(params, "onicescu_gamma_qd");
  const DerivedScales s = derive_scales(params, QuantumState{0, m});
  const double am = std::abs(m);
  const double central = std::exp(sf::ln_gamma(2.0 * am + 1.0) - 2.0 * am * std::numbers::ln2 -
                                  2.0 * sf::ln_gamma(am + 1.0));
  return s.r_eff * s.r_eff / kPi * central;
}

double onicescu_gamma_qd_asymptote(const RingParams& params, int m) {
  require_qd(params, "onicescu_gamma_qd_asymptote");
  if (m == 0) throw DomainError("onicescu_gamma_qd_asymptote: requires m != 0");
  const DerivedScales s = derive_scales(params, QuantumState{0, m});
  return s.r_eff * s.r_eff / (std::pow(kPi, 1.5) * std::sqrt(std::abs(m)));
}

double cgl(Space space, const RingParams& params, const QuantumState& state, const quad::QuadConfig& cfg) {
  const OrbitalAnalysis an(params, state, cfg);
  if (space == Space::position) return std::exp(an.shannon_rho().value) * an.onicescu_rho().value;
  return std::exp(an.shannon_gamma().value) * an.onicescu_gamma().value;
}

double r2_moment(const RingParams& params, const QuantumState& state) {
  const DerivedScales s = derive_scales(params, state);
  return 2.0 * (2.0 * state.n + s.lambda + 1.0) * s.r_eff * s.r_eff;
}

Estimate k2_moment(const RingParams& params, const QuantumState& state, const quad::QuadConfig& cfg) {
  const OrbitalAnalysis an(params, state, cfg);
  try {
    return an.k2_moment();
  } catch (const quad::NonConvergence& e) {
    // Report the partial value with an error that covers the missing tail.
    const double scale = 1.0 / (an.scales().r_eff * an.scales().r_eff);
    const auto& p = e.partial();
    return {scale * p.value, scale * std::max(p.error_estimate, std::abs(p.value))};
  }
}

double k2_moment_closed(const RingParams& params, const QuantumState& state) {
  const DerivedScales s = derive_scales(params, state);
  const double m2 = static_cast<double>(state.m) * state.m;
  double angular = 0.0;
  if (m2 > 0.0) angular = s.lambda > 0.0 ? m2 / s.lambda : kInf;
  return (2.0 * state.n + 1.0 + angular) / (2.0 * s.r_eff * s.r_eff);
}

double renyi(Space space, const RingParams& params, const QuantumState& state, double alpha,
             const quad::QuadConfig& cfg) {
  return OrbitalAnalysis(params, state, cfg).renyi(space, alpha).value;
}

double tsallis(Space space, const RingParams& params, const QuantumState& state, double alpha,
               const quad::QuadConfig& cfg) {
  return OrbitalAnalysis(params, state, cfg).tsallis(space, alpha).value;
}

double renyi_qd(Space space, const RingParams& params, int m, double alpha) {
  require_qd(params, "renyi_qd");
  if (!(alpha > 0.0) || alpha == 1.0) throw RangeError("renyi_qd: alpha must be > 0 and != 1");
  const DerivedScales s = derive_scales(params, QuantumState{0, m});
  const double am = std::abs(m);
  const double shape = (sf::ln_gamma(am * alpha + 1.0) - alpha * sf::ln_gamma(am + 1.0) -
                        (am * alpha + 1.0) * std::log(alpha)) /
                       (1.0 - alpha);
  const double base = space == Space::position ? 2.0 * std::log(s.r_eff) + kLog2Pi
                                               : -2.0 * std::log(s.r_eff) + std::log(0.5 * kPi);
  return base + shape;
}

double renyi_conjugate_half_qd(int m) {
  const double am = std::abs(m);
  const double power = am > 0.0 ? am * std::log(am) : 0.0;
  return 2.0 * kLog2Pi + am * (1.0 + std::numbers::ln2) + 2.0 * sf::ln_gamma(0.5 * am + 1.0) - power;
}

namespace ab_taylor {

double shannon_rho_curvature(double a) {
  if (!(a > 0.0)) throw DomainError("shannon_rho_curvature: a must be > 0");
  const double ra = std::sqrt(a);
  return 1.0 / ra + 1.0 / a - sf::polygamma1(ra);
}

double shannon_rho_curvature_large_a(double a) {
  if (!(a > 0.0)) throw DomainError("shannon_rho_curvature_large_a: a must be > 0");
  return (1.0 - 1.0 / (3.0 * std::sqrt(a))) / (2.0 * a);
}

double onicescu_rho_curvature(const RingParams& params) {
  RingParams p = params;
  p.nu = 0.0;
  if (!(p.a > 0.0)) throw DomainError("onicescu_rho_curvature: a must be > 0");
  const double ra = std::sqrt(p.a);
  return -onicescu_rho_closed_n0(p, 0) * (sf::digamma(ra + 1.0) - sf::digamma(ra + 0.5)) / ra;
}

double onicescu_rho_curvature_large_a(const RingParams& params) {
  if (!(params.a > 0.0)) throw DomainError("onicescu_rho_curvature_large_a: a must be > 0");
  const DerivedScales s = derive_scales(params, QuantumState{0, 0});
  const double base = 1.0 / (4.0 * std::pow(kPi, 1.5) * std::pow(params.a, 0.25) * s.r_eff * s.r_eff);
  return -base * (1.0 - 1.0 / (4.0 * std::sqrt(params.a))) / (2.0 * params.a);
}

double cgl_rho_curvature_large_a(double a) {
  if (!(a > 0.0)) throw DomainError("cgl_rho_curvature_large_a: a must be > 0");
  return -std::sqrt(0.5 * std::numbers::e) / (24.0 * std::pow(a, 1.5));
}

double energy_curvature(const RingParams& params) {
  params.validate();
  if (!(params.a > 0.0)) throw DomainError("energy_curvature: a must be > 0");
  return params.omega0 / std::sqrt(params.a);
}

}  // namespace ab_taylor

// ---------------------------------------------------------------------------
// Bundle

const char* provenance_name(Provenance p) { return p == Provenance::closed ? "closed" : "numeric"; }

bool MeasureSet::all_ok() const {
  for (const MeasureValue* v : {&s_rho, &s_gamma, &i_rho, &i_gamma, &o_rho, &o_gamma, &cgl_rho, &cgl_gamma, &r2,
                                &k2, &energy, &current, &magnetization}) {
    if (!v->ok) return false;
  }
  return true;
}

namespace {

template <class F>
MeasureValue guarded(const char* name, Provenance source, F&& f) {
  MeasureValue out;
  out.source = source;
  try {
    const Estimate e = f();
    out.value = e.value;
    out.error = e.error;
    out.ok = std::isfinite(e.value);
    if (!out.ok) out.message = std::string(name) + ": non-finite value";
  } catch (const std::exception& ex) {
    out.ok = false;
    out.message = std::string(name) + ": " + ex.what();
  }
  return out;
}

MeasureValue complexity(const char* name, const MeasureValue& s, const MeasureValue& o) {
  MeasureValue out;
  out.source = (s.source == Provenance::closed && o.source == Provenance::closed) ? Provenance::closed
                                                                                  : Provenance::numeric;
  if (!s.ok || !o.ok) {
    out.message = std::string(name) + ": depends on a failed component";
    return out;
  }
  out.value = std::exp(s.value) * o.value;
  out.error = out.value * (s.error + o.error / std::abs(o.value));
  out.ok = std::isfinite(out.value);
  return out;
}

}  // namespace

MeasureSet measure_bundle(const RingParams& params, const QuantumState& state, const quad::QuadConfig& cfg) {
  const OrbitalAnalysis an(params, state, cfg);
  const bool n0 = state.n == 0;
  const bool qd = is_qd_ground(params, state);
  const auto exact = [](double v) { return Estimate{v, 0.0}; };
  const Provenance closed = Provenance::closed;
  const Provenance numeric = Provenance::numeric;

  MeasureSet ms;
  ms.energy = guarded("energy", closed, [&] { return exact(energy(params, state)); });
  ms.current = guarded("current", closed, [&] { return exact(persistent_current(params, state)); });
  ms.magnetization = guarded("magnetization", closed, [&] { return exact(magnetization(params, state)); });

  ms.s_rho = n0 ? guarded("s_rho", closed, [&] { return exact(shannon_rho_closed_n0(params, state.m)); })
                : guarded("s_rho", numeric, [&] { return an.shannon_rho(); });
  ms.s_gamma = qd ? guarded("s_gamma", closed, [&] { return exact(shannon_gamma_qd(params, state.m)); })
                  : guarded("s_gamma", numeric, [&] { return an.shannon_gamma(); });
  ms.i_rho = guarded("i_rho", closed, [&] { return exact(fisher_rho(params, state)); });
  ms.i_gamma = qd ? guarded("i_gamma", closed, [&] { return exact(fisher_gamma_qd(params, state.m)); })
                  : guarded("i_gamma", numeric, [&] { return an.fisher_gamma(); });
  ms.o_rho = n0 ? guarded("o_rho", closed, [&] { return exact(onicescu_rho_closed_n0(params, state.m)); })
                : guarded("o_rho", numeric, [&] { return an.onicescu_rho(); });
  ms.o_gamma = qd ? guarded("o_gamma", closed, [&] { return exact(onicescu_gamma_qd(params, state.m)); })
                  : guarded("o_gamma", numeric, [&] { return an.onicescu_gamma(); });
  ms.cgl_rho = complexity("cgl_rho", ms.s_rho, ms.o_rho);
  ms.cgl_gamma = complexity("cgl_gamma", ms.s_gamma, ms.o_gamma);
  ms.r2 = guarded("r2", closed, [&] { return exact(r2_moment(params, state)); });
  ms.k2 = guarded("k2", closed, [&] { return exact(k2_moment_closed(params, state)); });
  return ms;
}

}  // namespace qring
