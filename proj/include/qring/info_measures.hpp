#pragma once

// Information measures of one orbital: Shannon, Fisher, Onicescu, CGL, Renyi,
// Tsallis and the second moments, with the closed forms that exist for special
// states. All results are in the units of the supplied RingParams.

#include <limits>
#include <optional>
#include <string>

#include "qring/quadrature.hpp"
#include "qring/ring_model.hpp"
#include "qring/waveforms.hpp"

namespace qring {

struct Estimate {
  double value = 0.0;
  double error = 0.0;
};

/// Numerical evaluation of every measure of one (params, state) pair. Kernels
/// are built lazily and shared between measures; an instance is not thread-safe.
///
/// Integrals run in the scale-free variables of waveforms.hpp; the r_eff
/// dependence is applied analytically afterwards.
class OrbitalAnalysis {
 public:
  OrbitalAnalysis(const RingParams& params, const QuantumState& state, const quad::QuadConfig& cfg = {});

  const RingParams& params() const { return params_; }
  const QuantumState& state() const { return state_; }
  const DerivedScales& scales() const { return scales_; }
  const RadialProfile& profile() const { return profile_; }
  const quad::QuadConfig& config() const { return cfg_; }
  const MomentumKernel& kernel() const;
  const MomentumKernel& derivative_kernel() const;

  /// Total probability of each density; both should be one.
  Estimate position_norm() const;
  Estimate momentum_norm() const;

  Estimate shannon_rho() const;
  Estimate shannon_gamma() const;
  Estimate fisher_rho_integral() const;
  Estimate fisher_gamma() const;
  Estimate onicescu_rho() const;
  Estimate onicescu_gamma() const;
  Estimate r2_moment() const;
  Estimate k2_moment() const;

  /// Integral of density^alpha over the plane, alpha > 0. +inf when the
  /// algebraic momentum tail makes it diverge.
  Estimate power_integral(Space space, double alpha) const;
  /// alpha in [0.5, 4], alpha != 1; RangeError otherwise.
  Estimate renyi(Space space, double alpha) const;
  Estimate tsallis(Space space, double alpha) const;
  /// The alpha -> infinity limit, -ln(max density).
  Estimate renyi_min(Space space) const;

 private:
  Estimate position_integral(const quad::Integrand& f, double decay_rate) const;
  Estimate momentum_power(const MomentumKernel& kernel, double q, double p) const;
  Estimate momentum_entropy() const;

  RingParams params_;
  QuantumState state_;
  quad::QuadConfig cfg_;
  DerivedScales scales_;
  RadialProfile profile_;
  mutable std::optional<MomentumKernel> kernel_;
  mutable std::optional<MomentumKernel> derivative_kernel_;
};

// ---------------------------------------------------------------------------
// Per-measure entry points. Numeric ones build a fresh OrbitalAnalysis.

double shannon_rho(const RingParams& params, const QuantumState& state, const quad::QuadConfig& cfg = {});
double shannon_gamma(const RingParams& params, const QuantumState& state, const quad::QuadConfig& cfg = {});
/// Ground band (n = 0) position entropy in closed form.
double shannon_rho_closed_n0(const RingParams& params, int m);
/// Its large-lambda asymptote 2 ln r_eff + (3/2) ln 2pi + 1/2 + (1/2) ln lambda.
double shannon_rho_n0_asymptote(const RingParams& params, int m);
/// Momentum entropy of the field-free dot ground band (a = 0, nu = 0, n = 0).
double shannon_gamma_qd(const RingParams& params, int m);

/// (4n + 2) / r_eff^2.
double fisher_rho(const RingParams& params, const QuantumState& state);
double fisher_rho_integral(const RingParams& params, const QuantumState& state, const quad::QuadConfig& cfg = {});
double fisher_gamma(const RingParams& params, const QuantumState& state, const quad::QuadConfig& cfg = {});
/// 8 r_eff^2 for the dot ground band, independent of m.
double fisher_gamma_qd(const RingParams& params, int m);

double onicescu_rho(const RingParams& params, const QuantumState& state, const quad::QuadConfig& cfg = {});
double onicescu_gamma(const RingParams& params, const QuantumState& state, const quad::QuadConfig& cfg = {});
double onicescu_rho_closed_n0(const RingParams& params, int m);
double onicescu_rho_n0_asymptote(const RingParams& params, int m);
double onicescu_gamma_qd(const RingParams& params, int m);
double onicescu_gamma_qd_asymptote(const RingParams& params, int m);

/// e^S O for the requested space; unit-free.
double cgl(Space space, const RingParams& params, const QuantumState& state, const quad::QuadConfig& cfg = {});

/// 2 (2n + lambda + 1) r_eff^2.
double r2_moment(const RingParams& params, const QuantumState& state);
/// Momentum second moment by quadrature, with its error estimate.
Estimate k2_moment(const RingParams& params, const QuantumState& state, const quad::QuadConfig& cfg = {});
/// Exact value (2n + 1 + m^2/lambda) / (2 r_eff^2), from the gradient of the
/// position waveform. Infinite when lambda = 0 and m != 0.
double k2_moment_closed(const RingParams& params, const QuantumState& state);

double renyi(Space space, const RingParams& params, const QuantumState& state, double alpha,
             const quad::QuadConfig& cfg = {});
double tsallis(Space space, const RingParams& params, const QuantumState& state, double alpha,
               const quad::QuadConfig& cfg = {});
/// Renyi entropy of the dot ground band in closed form, any alpha > 0, alpha != 1.
double renyi_qd(Space space, const RingParams& params, int m, double alpha);
/// R_rho(alpha) + R_gamma(beta) of the dot ground band in the limit alpha -> 1/2,
/// beta -> infinity.
double renyi_conjugate_half_qd(int m);

/// Flux-dependence curvatures d^2/dnu^2 at nu = 0, B = 0 for the (0, 0) orbital.
namespace ab_taylor {
/// Exact second derivative of the ground-band entropy: 1/sqrt(a) + 1/a - psi1(sqrt a).
double shannon_rho_curvature(double a);
/// Large-a form (1/(2a)) (1 - 1/(3 sqrt a)).
double shannon_rho_curvature_large_a(double a);
double onicescu_rho_curvature(const RingParams& params);
double onicescu_rho_curvature_large_a(const RingParams& params);
double cgl_rho_curvature_large_a(double a);
/// omega0 / sqrt(a).
double energy_curvature(const RingParams& params);
}  // namespace ab_taylor

// ---------------------------------------------------------------------------
// Bundle

enum class Provenance { closed, numeric };

const char* provenance_name(Provenance p);

struct MeasureValue {
  double value = std::numeric_limits<double>::quiet_NaN();
  double error = 0.0;
  Provenance source = Provenance::closed;
  bool ok = false;
  std::string message;
};

struct MeasureSet {
  MeasureValue s_rho, s_gamma;
  MeasureValue i_rho, i_gamma;
  MeasureValue o_rho, o_gamma;
  MeasureValue cgl_rho, cgl_gamma;
  MeasureValue r2, k2;
  MeasureValue energy, current, magnetization;

  bool all_ok() const;
};

/// Every measure of one orbital. Closed forms are used where their
/// preconditions hold, quadrature otherwise; a failing field is flagged with its
/// message and does not stop the others.
MeasureSet measure_bundle(const RingParams& params, const QuantumState& state, const quad::QuadConfig& cfg = {});

}  // namespace qring
