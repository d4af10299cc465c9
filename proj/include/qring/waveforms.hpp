#pragma once

// Radial waveforms in position and momentum space.
//
// Everything is evaluated in scale-free variables and rescaled analytically:
//   position  z  = r^2 / (2 r_eff^2),  w(z) = r_eff^2 R(r)^2,  integral of w dz = 1
//   momentum  xi = r_eff k,            K(k) = r_eff kappa(xi),  integral of xi kappa^2 dxi = 1
// The angular factor exp(i m phi)/sqrt(2 pi) and the (-i)^m phase of the momentum
// function are dropped: only radial magnitudes enter any measure.

#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "qring/quadrature.hpp"
#include "qring/ring_model.hpp"

namespace qring {

enum class Space { position, momentum };

const char* space_name(Space space);

/// Scale-free radial data of one orbital: n, lambda and the Bessel order |m|.
class RadialProfile {
 public:
  RadialProfile(int n, double lambda, int m_abs);
  RadialProfile(const RingParams& params, const QuantumState& state);

  int n() const { return n_; }
  double lambda() const { return lambda_; }
  int m_abs() const { return m_abs_; }
  /// ln(n! / Gamma(n + lambda + 1)).
  double log_norm() const { return log_norm_; }
  /// Power-series coefficients of L_n^lambda(s) in s.
  const std::vector<double>& laguerre_coefficients() const { return coef_; }

  double laguerre(double z) const;
  /// w(z) = N e^{-z} z^lambda L^2; zero below 1e-300.
  double position_density(double z) const;
  /// ln w(z); -inf at nodes.
  double log_position_density(double z) const;
  /// Global maximum of w.
  double position_density_max() const;

 private:
  int n_;
  double lambda_;
  int m_abs_;
  double log_norm_;
  std::vector<double> coef_;
};

enum class KernelKind {
  amplitude,   // kappa(xi), built on J_|m|
  derivative,  // kappa_d(xi), built on J'_|m| with one extra power of u
};

/// The scale-free momentum kernel
///   amplitude:  kappa(xi)   = sqrt(N) int_0^inf 2u e^{-u^2/2} u^lambda     L(u^2) J_|m|(sqrt2 xi u) du
///   derivative: kappa_d(xi) = sqrt(N) int_0^inf 2u e^{-u^2/2} u^{lambda+1} L(u^2) J'_|m|(sqrt2 xi u) du
/// Below switch_point() it is computed by panelled quadrature over u; beyond it
/// by the large-argument series
///   kappa(xi) = xi^{-tail_exponent} e^{tail_log_scale} S(xi^{-2}),  |S(0)| = 1,
/// whose truncation error is below 1e-17 (absolute) there.
///
/// Values are memoised, so an instance is not safe to share between threads.
class MomentumKernel {
 public:
  MomentumKernel(const RadialProfile& profile, KernelKind kind, const quad::QuadConfig& cfg = {});

  double operator()(double xi) const;
  double by_quadrature(double xi) const;
  double by_series(double xi) const;

  double switch_point() const { return switch_point_; }
  /// False when every algebraic term vanishes and the kernel decays like a Gaussian.
  bool algebraic_tail() const { return !terms_.empty(); }
  double tail_exponent() const;
  double tail_log_scale() const;
  /// Normalised series S(y), y = xi^{-2}; S(0) = +-1.
  double tail_shape(double y) const;

  /// Location of the maximum of kappa^2 and the maximum itself.
  std::pair<double, double> peak() const;

  const RadialProfile& profile() const { return profile_; }
  KernelKind kind() const { return kind_; }

 private:
  struct Term {
    double exponent;  // mu_k
    double log_abs;   // ln|a_k|
    int sign;
  };

  double log_envelope(double u) const;
  double exponential_remainder(double xi) const;
  bool series_acceptable(double xi, std::vector<Term>& kept) const;

  RadialProfile profile_;
  KernelKind kind_;
  quad::QuadConfig inner_cfg_;
  int power_;  // 0 for amplitude, 1 for derivative
  double u_lo_ = 0.0;
  double u_hi_ = 0.0;
  std::vector<Term> all_terms_;
  std::vector<Term> terms_;
  double switch_point_ = 0.0;
  mutable std::unordered_map<double, double> memo_;
};

struct GridSpec {
  double start = 0.0;
  double stop = 1.0;
  int count = 1;
  bool log_spaced = false;

  std::vector<double> points() const;
};

struct GridDump {
  std::vector<double> axis;
  std::vector<double> values;
  RingParams params;
  QuantumState state;
  Space space = Space::position;
};

/// R_nm(r) in the active units.
double radial_position(const RingParams& params, const QuantumState& state, double r);

/// K_nm(k) in the active units. Builds a fresh kernel per call; use dump_grid or
/// MomentumKernel directly for many points.
double radial_momentum(const RingParams& params, const QuantumState& state, double k,
                       const quad::QuadConfig& cfg = {});

/// Closed-form K_0m(k) of the field-free dot (a = 0, nu = 0, n = 0).
double qd_ground_momentum(const RingParams& params, int m, double k);

GridDump dump_grid(const RingParams& params, const QuantumState& state, Space space,
                   const GridSpec& grid, const quad::QuadConfig& cfg = {});
/// Same on explicit axis points (non-negative, strictly increasing).
GridDump dump_grid(const RingParams& params, const QuantumState& state, Space space,
                   const std::vector<double>& axis, const quad::QuadConfig& cfg = {});

}  // namespace qring
