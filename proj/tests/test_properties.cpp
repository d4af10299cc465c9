// Randomised invariants over the model parameters. Each case owns its
// generator and seed so failures reproduce in isolation.

#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "qring/info_measures.hpp"
#include "qring/ring_model.hpp"

using namespace qring;
using oracle::rel_diff;

namespace {

constexpr double kPi = std::numbers::pi;

struct Sample {
  RingParams params;
  QuantumState state;
};

// a log-uniform over [1e-2, 1e3] with a quarter of the draws at a = 0.
Sample draw(std::mt19937& gen, double wc_max = 20.0) {
  Sample s;
  s.params.a = oracle::uniform(gen, 0.0, 1.0) < 0.25 ? 0.0 : std::exp(oracle::uniform(gen, std::log(1e-2), std::log(1e3)));
  s.params.nu = oracle::uniform(gen, -1.0, 1.0);
  s.params.omega0 = oracle::uniform(gen, 0.4, 2.0);
  s.params.omega_c = s.params.omega0 * oracle::uniform(gen, 0.0, wc_max);
  s.state = {oracle::uniform_int(gen, 0, 3), oracle::uniform_int(gen, -5, 5)};
  return s;
}

double renyi_bound(double alpha, double beta) {
  return -(std::log(alpha / kPi) / (1.0 - alpha) + std::log(beta / kPi) / (1.0 - beta));
}

// Both sides of the Sobolev-type Tsallis relation in the plane.
std::pair<double, double> tsallis_sides(const OrbitalAnalysis& an, double alpha, double beta) {
  const double lhs = std::pow(alpha / kPi, 1.0 / (2.0 * alpha)) *
                     std::pow(1.0 + (1.0 - alpha) * an.tsallis(Space::position, alpha).value, 1.0 / (2.0 * alpha));
  const double rhs = std::pow(beta / kPi, 1.0 / (2.0 * beta)) *
                     std::pow(1.0 + (1.0 - beta) * an.tsallis(Space::momentum, beta).value, 1.0 / (2.0 * beta));
  return {lhs, rhs};
}

}  // namespace

TEST_CASE("densities are normalised for random parameters") {
  std::mt19937 gen(31);
  for (int i = 0; i < 30; ++i) {
    const auto s = draw(gen);
    CAPTURE(s.params.a);
    CAPTURE(s.params.nu);
    CAPTURE(s.state.n);
    CAPTURE(s.state.m);
    const OrbitalAnalysis an(s.params, s.state);
    CHECK(std::abs(an.position_norm().value - 1.0) < 1e-8);
    CHECK(std::abs(an.momentum_norm().value - 1.0) < 1e-8);
  }
}

TEST_CASE("uncertainty relations hold for random parameters") {
  std::mt19937 gen(32);
  const double slack = 1e-9;
  for (int i = 0; i < 30; ++i) {
    const auto s = draw(gen);
    CAPTURE(s.params.a);
    CAPTURE(s.params.nu);
    CAPTURE(s.state.n);
    CAPTURE(s.state.m);
    const auto b = measure_bundle(s.params, s.state);
    CHECK(b.s_rho.value + b.s_gamma.value - 2.0 * (1.0 + std::log(kPi)) > -slack);
    CHECK(b.i_rho.value * b.i_gamma.value - 4.0 > -slack);
    CHECK(b.cgl_rho.value - 1.0 > -slack);
    CHECK(b.cgl_gamma.value - 1.0 > -slack);
    CHECK(std::sqrt(b.r2.value * b.k2.value) - (std::abs(s.state.m) + 1.0) > -slack);
  }
}

TEST_CASE("Renyi and Tsallis uncertainty relations for random conjugate orders") {
  std::mt19937 gen(33);
  for (int i = 0; i < 20; ++i) {
    const auto s = draw(gen, 5.0);
    // beta = alpha / (2 alpha - 1) stays within the supported orders for alpha >= 4/7.
    const double alpha = oracle::uniform(gen, 4.0 / 7.0 + 1e-3, 0.97);
    const double beta = alpha / (2.0 * alpha - 1.0);
    CAPTURE(s.params.a);
    CAPTURE(s.state.n);
    CAPTURE(s.state.m);
    CAPTURE(alpha);
    const OrbitalAnalysis an(s.params, s.state);
    const double sum = an.renyi(Space::position, alpha).value + an.renyi(Space::momentum, beta).value;
    CHECK(sum - renyi_bound(alpha, beta) > -1e-9);
    const auto [lhs, rhs] = tsallis_sides(an, alpha, beta);
    CHECK(lhs - rhs > -1e-9 * rhs);
  }
}

TEST_CASE("the dot ground orbital saturates the generalised relations") {
  for (double wc : {0.0, 4.0}) {
    RingParams p;
    p.a = 0.0;
    p.omega_c = wc;
    const OrbitalAnalysis an(p, {0, 0});
    for (double alpha : {0.6, 0.75, 0.9}) {
      const double beta = alpha / (2.0 * alpha - 1.0);
      const double sum = an.renyi(Space::position, alpha).value + an.renyi(Space::momentum, beta).value;
      CHECK(std::abs(sum - renyi_bound(alpha, beta)) < 1e-8);
      const auto [lhs, rhs] = tsallis_sides(an, alpha, beta);
      CHECK(rel_diff(lhs, rhs) < 1e-8);
    }
  }
}

TEST_CASE("conjugate combinations do not depend on the uniform field") {
  std::mt19937 gen(34);
  for (int i = 0; i < 12; ++i) {
    auto s = draw(gen);
    s.params.omega_c = 0.0;
    CAPTURE(s.params.a);
    CAPTURE(s.state.n);
    CAPTURE(s.state.m);
    const auto base = measure_bundle(s.params, s.state);
    auto q = s.params;
    q.omega_c = q.omega0 * oracle::uniform(gen, 0.5, 30.0);
    const auto b = measure_bundle(q, s.state);
    CHECK(std::abs(b.s_rho.value + b.s_gamma.value - base.s_rho.value - base.s_gamma.value) < 1e-8);
    CHECK(rel_diff(b.i_rho.value * b.i_gamma.value, base.i_rho.value * base.i_gamma.value) < 1e-7);
    CHECK(rel_diff(b.o_rho.value * b.o_gamma.value, base.o_rho.value * base.o_gamma.value) < 1e-7);
    CHECK(rel_diff(b.cgl_rho.value, base.cgl_rho.value) < 1e-7);
    CHECK(rel_diff(b.cgl_gamma.value, base.cgl_gamma.value) < 1e-7);
    CHECK(rel_diff(b.r2.value * b.k2.value, base.r2.value * base.k2.value) < 1e-7);
  }
}

TEST_CASE("position measures are gauge invariant") {
  std::mt19937 gen(35);
  for (int i = 0; i < 40; ++i) {
    const auto s = draw(gen);
    auto q = s.params;
    q.nu += 1.0;
    const QuantumState t{s.state.n, s.state.m - 1};
    const OrbitalAnalysis x(s.params, s.state);
    const OrbitalAnalysis y(q, t);
    CHECK(std::abs(x.shannon_rho().value - y.shannon_rho().value) < 1e-8);
    CHECK(rel_diff(x.onicescu_rho().value, y.onicescu_rho().value) < 1e-8);
    CHECK(fisher_rho(s.params, s.state) == fisher_rho(q, t));
    CHECK(rel_diff(r2_moment(s.params, s.state), r2_moment(q, t)) < 1e-12);
  }
}

TEST_CASE("m = 0 measures are even in the flux at B = 0") {
  std::mt19937 gen(36);
  for (int i = 0; i < 10; ++i) {
    auto s = draw(gen, 0.0);
    s.state.m = 0;
    s.params.nu = oracle::uniform(gen, 0.05, 1.0);
    if (s.params.a == 0.0) s.params.a = 0.5;
    auto q = s.params;
    q.nu = -s.params.nu;
    const auto x = measure_bundle(s.params, s.state);
    const auto y = measure_bundle(q, s.state);
    const MeasureValue* even_x[] = {&x.s_rho, &x.s_gamma, &x.i_rho, &x.i_gamma, &x.o_rho, &x.o_gamma,
                                    &x.cgl_rho, &x.cgl_gamma, &x.r2, &x.k2, &x.energy};
    const MeasureValue* even_y[] = {&y.s_rho, &y.s_gamma, &y.i_rho, &y.i_gamma, &y.o_rho, &y.o_gamma,
                                    &y.cgl_rho, &y.cgl_gamma, &y.r2, &y.k2, &y.energy};
    for (std::size_t k = 0; k < std::size(even_x); ++k) {
      CHECK(std::abs(even_x[k]->value - even_y[k]->value) <= 1e-8 * std::max(1.0, std::abs(even_x[k]->value)));
    }
    // At B = 0 the current and the magnetization (nu / 2) are odd.
    CHECK(std::abs(x.current.value + y.current.value) < 1e-12);
    CHECK(std::abs(x.magnetization.value + y.magnetization.value) < 1e-12);
  }
}
