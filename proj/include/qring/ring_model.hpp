#pragma once

// Analytic layer of the ring model: parameters, derived oscillator scales and
// the closed-form spectrum. Units throughout are hbar = m* = e = 1.

namespace qring {

struct RingParams {
  double a = 0.0;        // antidot strength, >= 0
  double omega0 = 1.0;   // confinement frequency, > 0
  double omega_c = 0.0;  // cyclotron frequency, >= 0
  double nu = 0.0;       // Aharonov-Bohm flux in flux quanta

  /// Throws PreconditionError when any invariant is violated.
  void validate() const;
};

struct QuantumState {
  int n = 0;  // radial quantum number, >= 0
  int m = 0;  // azimuthal quantum number
};

struct DerivedScales {
  double omega_eff;
  double r_eff;
  double lambda;
  double m_phi;
  double r0;
  double r_min;
};

enum class Units { omega0_unity, r0_unity };

/// omega0 that realizes the chosen unit convention (1, or 1/2 so that r0 = 1).
double omega0_for(Units units);
const char* units_name(Units units);

DerivedScales derive_scales(const RingParams& params, const QuantumState& state);

/// U(r) = omega0^2 r^2 / 2 + a / (2 r^2) - omega0 sqrt(a); zero at r_min.
double potential(const RingParams& params, double r);

double energy(const RingParams& params, const QuantumState& state);

/// Throws SingularConfiguration when lambda = 0 (a = 0 and m + nu = 0).
double persistent_current(const RingParams& params, const QuantumState& state);

double magnetization(const RingParams& params, const QuantumState& state);

}  // namespace qring
