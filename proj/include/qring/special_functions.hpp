#pragma once

// Real-valued special functions used by the ring waveforms and measures.
// Everything here is pure and reentrant.

namespace qring::sf {

/// ln Γ(x) for x > 0. Throws DomainError otherwise.
double ln_gamma(double x);

/// Digamma ψ(x) = d ln Γ(x)/dx for x > 0.
double digamma(double x);

/// Trigamma ψ⁽¹⁾(x) for x > 0.
double polygamma1(double x);

/// Generalized Laguerre polynomial L_n^λ(z) by upward three-term recurrence.
/// Returns 0 for n < 0 so that L_{n-1} terms vanish naturally at n = 0.
double laguerre(int n, double lambda, double z);

/// Bessel function of the first kind J_m(x), integer m ≥ 0, x ≥ 0.
double bessel_j(int m, double x);

/// J'_m(x) = (J_{m-1}(x) - J_{m+1}(x)) / 2, using J_{-1} = -J_1.
double bessel_j_prime(int m, double x);

/// sin(πx), exactly zero at integers.
double sin_pi(double x);

/// 1/Γ(x) for any real x, zero at the poles x = 0, -1, -2, ...
/// Returned as (log|1/Γ(x)|, sign) to stay finite for large arguments; sign is
/// 0 at the poles.
struct LogValue {
  double log_abs;
  int sign;
};
LogValue log_reciprocal_gamma(double x);

}  // namespace qring::sf
