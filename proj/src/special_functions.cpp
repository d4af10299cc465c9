#include "qring/special_functions.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "qring/errors.hpp"

namespace qring::sf {

namespace {

constexpr double kPi = std::numbers::pi;

void require_positive(double x, const char* name) {
  if (!(x > 0.0) || !std::isfinite(x)) {
    throw DomainError(std::string(name) + ": argument must be positive and finite, got " +
                      std::to_string(x));
  }
}

// Stirling series for ln Γ(x), accurate to ~1e-17 for x >= 15.
double ln_gamma_stirling(double x) {
  static constexpr std::array<double, 7> kCoef = {
      1.0 / 12.0,   -1.0 / 360.0,          1.0 / 1260.0, -1.0 / 1680.0,
      1.0 / 1188.0, -691.0 / 360360.0,     1.0 / 156.0};
  const double inv = 1.0 / x;
  const double inv2 = inv * inv;
  double series = 0.0;
  double p = inv;
  for (double c : kCoef) {
    series += c * p;
    p *= inv2;
  }
  return (x - 0.5) * std::log(x) - x + 0.5 * std::log(2.0 * kPi) + series;
}

constexpr double kShift = 15.0;

// Hankel asymptotic expansion, valid when x >= max(25, m^2).
double bessel_j_asymptotic(int m, double x) {
  const double mu = 4.0 * m * m;
  double p = 1.0;
  double q = 0.0;
  double term = 1.0;
  double last = 1.0;
  for (int k = 1; k < 200; ++k) {
    const double odd = 2.0 * k - 1.0;
    term *= (mu - odd * odd) / (k * 8.0 * x);
    const double mag = std::abs(term);
    if (mag > last) break;  // asymptotic series started to diverge
    last = mag;
    switch (k % 4) {
      case 1: q += term; break;
      case 2: p -= term; break;
      case 3: q -= term; break;
      case 0: p += term; break;
    }
    if (mag < 1e-17) break;
  }
  // chi = x - (m/2 + 1/4) pi; expand cos/sin of the phase exactly.
  const int quarter = (2 * (m % 4) + 1) % 8;  // phase in units of pi/4
  const double c_phase = std::cos(quarter * kPi / 4.0);
  const double s_phase = std::sin(quarter * kPi / 4.0);
  const double cx = std::cos(x);
  const double sx = std::sin(x);
  const double cos_chi = cx * c_phase + sx * s_phase;
  const double sin_chi = sx * c_phase - cx * s_phase;
  return std::sqrt(2.0 / (kPi * x)) * (p * cos_chi - q * sin_chi);
}

double bessel_j_series(int m, double x) {
  const double half = 0.5 * x;
  double term = std::exp(m * std::log(half) - ln_gamma(m + 1.0));
  if (term == 0.0) return 0.0;
  const double q = -half * half;
  double sum = term;
  for (int k = 1; k < 500; ++k) {
    term *= q / (static_cast<double>(k) * (m + k));
    sum += term;
    if (std::abs(term) < 1e-17 * std::abs(sum)) break;
  }
  return sum;
}

// Miller's backward recurrence normalised by J0 + 2 sum J_{2k} = 1.
double bessel_j_miller(int m, double x) {
  const double top = std::max<double>(m, x);
  int start = static_cast<int>(top + 20.0 + std::sqrt(40.0 * top));
  start += start & 1;
  double next = 0.0;
  double cur = 1e-300;
  double norm = 0.0;
  double wanted = 0.0;
  for (int k = start; k >= 1; --k) {
    const double prev = (2.0 * k / x) * cur - next;
    next = cur;
    cur = prev;  // now J_{k-1}
    if (k - 1 == m) wanted = cur;
    if ((k - 1) % 2 == 0 && k - 1 > 0) norm += 2.0 * cur;
    if (std::abs(cur) > 1e250) {
      cur *= 1e-250;
      next *= 1e-250;
      norm *= 1e-250;
      wanted *= 1e-250;
    }
  }
  norm += cur;  // J_0 term
  return wanted / norm;
}

}  // namespace

double ln_gamma(double x) {
  require_positive(x, "ln_gamma");
  if (x >= kShift) return ln_gamma_stirling(x);
  double prod = 1.0;
  double y = x;
  while (y < kShift) {
    prod *= y;
    y += 1.0;
  }
  return ln_gamma_stirling(y) - std::log(prod);
}

double digamma(double x) {
  require_positive(x, "digamma");
  double acc = 0.0;
  while (x < 10.0) {
    acc -= 1.0 / x;
    x += 1.0;
  }
  const double inv2 = 1.0 / (x * x);
  // -sum B_{2k} / (2k x^{2k})
  const double series =
      inv2 * (-1.0 / 12.0 +
               inv2 * (1.0 / 120.0 +
                       inv2 * (-1.0 / 252.0 +
                               inv2 * (1.0 / 240.0 +
                                       inv2 * (-1.0 / 132.0 +
                                               inv2 * (691.0 / 32760.0 + inv2 * (-1.0 / 12.0)))))));
  return acc + std::log(x) - 0.5 / x + series;
}

double polygamma1(double x) {
  require_positive(x, "polygamma1");
  double acc = 0.0;
  while (x < 10.0) {
    acc += 1.0 / (x * x);
    x += 1.0;
  }
  const double inv = 1.0 / x;
  const double inv2 = inv * inv;
  // 1/x + 1/(2x^2) + sum B_{2k} / x^{2k+1}
  const double series =
      inv * inv2 *
      (1.0 / 6.0 +
       inv2 * (-1.0 / 30.0 +
               inv2 * (1.0 / 42.0 +
                       inv2 * (-1.0 / 30.0 +
                               inv2 * (5.0 / 66.0 + inv2 * (-691.0 / 2730.0 + inv2 * (7.0 / 6.0)))))));
  return acc + inv + 0.5 * inv2 + series;
}

double laguerre(int n, double lambda, double z) {
  if (n < 0) return 0.0;
  if (n == 0) return 1.0;
  double prev = 1.0;
  double cur = 1.0 + lambda - z;
  for (int k = 1; k < n; ++k) {
    const double next = ((2.0 * k + 1.0 + lambda - z) * cur - (k + lambda) * prev) / (k + 1.0);
    prev = cur;
    cur = next;
  }
  return cur;
}

double bessel_j(int m, double x) {
  if (m < 0) {
    // J_{-m} = (-1)^m J_m
    const double v = bessel_j(-m, x);
    return (m % 2 == 0) ? v : -v;
  }
  if (x < 0.0 || std::isnan(x)) throw DomainError("bessel_j: x must be non-negative");
  if (x == 0.0) return m == 0 ? 1.0 : 0.0;
  if (x < 8.0 || 0.25 * x * x < m + 1.0) return bessel_j_series(m, x);
  if (x >= std::max(25.0, static_cast<double>(m) * m)) return bessel_j_asymptotic(m, x);
  return bessel_j_miller(m, x);
}

double bessel_j_prime(int m, double x) {
  if (m == 0) return -bessel_j(1, x);
  return 0.5 * (bessel_j(m - 1, x) - bessel_j(m + 1, x));
}

double sin_pi(double x) {
  // Reduce to [-1, 1] so integers map to exact zeros.
  const double r = x - 2.0 * std::nearbyint(0.5 * x);
  if (r == 0.0 || r == 1.0 || r == -1.0) return 0.0;
  if (r == 0.5) return 1.0;
  if (r == -0.5) return -1.0;
  return std::sin(kPi * r);
}

LogValue log_reciprocal_gamma(double x) {
  if (x > 0.0) return {-ln_gamma(x), 1};
  const double s = sin_pi(x);
  if (s == 0.0) return {-std::numeric_limits<double>::infinity(), 0};
  // 1/Γ(x) = Γ(1-x) sin(πx) / π
  return {ln_gamma(1.0 - x) + std::log(std::abs(s)) - std::log(kPi), s > 0.0 ? 1 : -1};
}

}  // namespace qring::sf
