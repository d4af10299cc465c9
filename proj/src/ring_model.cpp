#include "qring/ring_model.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "qring/errors.hpp"

namespace qring {

void RingParams::validate() const {
  if (!(a >= 0.0) || !std::isfinite(a)) throw PreconditionError("RingParams: a must be finite and >= 0");
  if (!(omega0 > 0.0) || !std::isfinite(omega0)) {
    throw PreconditionError("RingParams: omega0 must be finite and > 0");
  }
  if (!(omega_c >= 0.0) || !std::isfinite(omega_c)) {
    throw PreconditionError("RingParams: omega_c must be finite and >= 0");
  }
  if (!std::isfinite(nu)) throw PreconditionError("RingParams: nu must be finite");
}

double omega0_for(Units units) { return units == Units::r0_unity ? 0.5 : 1.0; }

const char* units_name(Units units) { return units == Units::r0_unity ? "r0" : "omega0"; }

DerivedScales derive_scales(const RingParams& params, const QuantumState& state) {
  params.validate();
  if (state.n < 0) throw PreconditionError("QuantumState: n must be >= 0");
  DerivedScales s{};
  s.omega_eff = std::sqrt(params.omega0 * params.omega0 + 0.25 * params.omega_c * params.omega_c);
  s.r_eff = std::sqrt(0.5 / s.omega_eff);
  s.m_phi = state.m + params.nu;
  s.lambda = std::sqrt(s.m_phi * s.m_phi + params.a);
  s.r0 = std::sqrt(0.5 / params.omega0);
  s.r_min = std::sqrt(2.0) * std::pow(params.a, 0.25) * s.r0;
  return s;
}

double potential(const RingParams& params, double r) {
  params.validate();
  if (params.a > 0.0 && !(r > 0.0)) throw DomainError("potential: r must be > 0 when a > 0");
  if (r < 0.0) throw DomainError("potential: r must be >= 0");
  const double w = params.omega0;
  const double core = params.a > 0.0 ? params.a / (2.0 * r * r) : 0.0;
  return 0.5 * w * w * r * r + core - w * std::sqrt(params.a);
}

double energy(const RingParams& params, const QuantumState& state) {
  const DerivedScales s = derive_scales(params, state);
  return s.omega_eff * (2.0 * state.n + s.lambda + 1.0) + 0.5 * s.m_phi * params.omega_c -
         params.omega0 * std::sqrt(params.a);
}

double persistent_current(const RingParams& params, const QuantumState& state) {
  const DerivedScales s = derive_scales(params, state);
  if (s.lambda == 0.0) {
    throw SingularConfiguration("persistent_current: undefined at lambda = 0 (a = 0, m + nu = 0)");
  }
  const double ratio = params.omega_c / params.omega0;
  return -(params.omega0 / (2.0 * std::numbers::pi)) *
         ((s.m_phi / s.lambda) * std::sqrt(1.0 + 0.25 * ratio * ratio) + 0.5 * ratio);
}

double magnetization(const RingParams& params, const QuantumState& state) {
  const DerivedScales s = derive_scales(params, state);
  return -0.5 * (0.5 * (params.omega_c / s.omega_eff) * (2.0 * state.n + s.lambda + 1.0) + s.m_phi);
}

}  // namespace qring
