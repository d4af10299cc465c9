#pragma once

#include <functional>
#include <span>
#include <stdexcept>
#include <string>

namespace qring::quad {

struct QuadConfig {
  double rel_tol = 1e-10;
  double abs_tol = 1e-14;
  int max_subdivisions = 10000;
  int tail_doubling_limit = 40;

  void validate() const;
};

struct QuadResult {
  double value = 0.0;
  double error_estimate = 0.0;
  long evaluations = 0;
};

/// Thrown when an engine cannot reach the requested tolerance. Carries the best
/// partial result so callers may still report a degraded estimate.
class NonConvergence : public std::runtime_error {
 public:
  NonConvergence(const std::string& what, QuadResult partial)
      : std::runtime_error(what), partial_(partial) {}
  const QuadResult& partial() const noexcept { return partial_; }

 private:
  QuadResult partial_;
};

using Integrand = std::function<double(double)>;

/// Globally adaptive 21-point Gauss–Kronrod integration over [lo, hi].
/// Endpoints are never evaluated, so integrable endpoint singularities are fine.
QuadResult integrate_finite(const Integrand& f, double lo, double hi, const QuadConfig& cfg = {});

/// Same engine, seeded with the partition given by `breakpoints` (strictly
/// increasing, at least two points). Refinement is global across all panels.
QuadResult integrate_partitioned(const Integrand& f, std::span<const double> breakpoints,
                                 const QuadConfig& cfg = {});

/// ∫_0^∞ f. Integrates [0, L0] and then the panels [L, 2L] for doubling L until a
/// panel's contribution falls below rel_tol of the running value. Algebraic
/// tails whose panel contributions settle into a geometric sequence are summed
/// in closed form once the extrapolated remainder is stable to rel_tol.
QuadResult integrate_semi_infinite(const Integrand& f, const QuadConfig& cfg = {},
                                   double initial_length = 1.0);

/// Integral of an integrand that oscillates with (approximate) half period
/// `half_period` on [lo, hi]: the interval is split into half-period panels
/// (never narrower than `min_panel`) and refined globally.
QuadResult integrate_oscillatory(const Integrand& f, double lo, double hi, double half_period,
                                 double min_panel, const QuadConfig& cfg = {});

/// First point beyond `start` (searching in direction `step` > 0 or < 0) at which
/// the monotone `log_envelope` drops to `threshold`. Coarse scan, then bisection.
/// Returns `limit` if the threshold is not crossed before reaching it.
double decay_point(const std::function<double(double)>& log_envelope, double start, double step,
                   double threshold, double limit);

}  // namespace qring::quad
