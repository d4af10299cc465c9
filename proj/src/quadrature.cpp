#include "qring/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <vector>

namespace qring::quad {

namespace {

// 21-point Kronrod extension of the 10-point Gauss rule (QUADPACK qk21).
constexpr std::array<double, 11> kXgk = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.000000000000000000000000000000000};
constexpr std::array<double, 11> kWgk = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077600525291940, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};
constexpr std::array<double, 5> kWg = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kTiny = std::numeric_limits<double>::min();

struct Segment {
  double a;
  double b;
  double result;
  double error;
  double resabs;
};

Segment gauss_kronrod21(const Integrand& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  std::array<double, 10> fv1{};
  std::array<double, 10> fv2{};

  const double fc = f(center);
  double resg = 0.0;
  double resk = kWgk[10] * fc;
  double resabs = std::abs(resk);
  for (int j = 0; j < 5; ++j) {
    const int jtw = 2 * j + 1;
    const double dx = half * kXgk[jtw];
    const double f1 = f(center - dx);
    const double f2 = f(center + dx);
    fv1[jtw] = f1;
    fv2[jtw] = f2;
    resg += kWg[j] * (f1 + f2);
    resk += kWgk[jtw] * (f1 + f2);
    resabs += kWgk[jtw] * (std::abs(f1) + std::abs(f2));
  }
  for (int j = 0; j < 5; ++j) {
    const int jtwm1 = 2 * j;
    const double dx = half * kXgk[jtwm1];
    const double f1 = f(center - dx);
    const double f2 = f(center + dx);
    fv1[jtwm1] = f1;
    fv2[jtwm1] = f2;
    resk += kWgk[jtwm1] * (f1 + f2);
    resabs += kWgk[jtwm1] * (std::abs(f1) + std::abs(f2));
  }
  const double reskh = 0.5 * resk;
  double resasc = kWgk[10] * std::abs(fc - reskh);
  for (int j = 0; j < 10; ++j) {
    resasc += kWgk[j] * (std::abs(fv1[j] - reskh) + std::abs(fv2[j] - reskh));
  }
  const double dhalf = std::abs(half);
  const double result = resk * half;
  resabs *= dhalf;
  resasc *= dhalf;
  double err = std::abs((resk - resg) * half);
  if (resasc != 0.0 && err != 0.0) {
    err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
  }
  if (resabs > kTiny / (50.0 * kEps)) err = std::max(50.0 * kEps * resabs, err);
  if (!std::isfinite(result)) err = std::numeric_limits<double>::infinity();
  return {a, b, result, err, resabs};
}

struct Detailed {
  QuadResult result;
  double resabs = 0.0;
};

bool roundoff_limited(const Segment& s) { return s.error <= 50.0 * kEps * s.resabs * (1.0 + 1e-9); }

Detailed adaptive(const Integrand& f, std::span<const double> breakpoints, const QuadConfig& cfg) {
  cfg.validate();
  if (breakpoints.size() < 2) throw std::invalid_argument("quadrature: need at least two breakpoints");
  for (std::size_t i = 1; i < breakpoints.size(); ++i) {
    if (!(breakpoints[i] > breakpoints[i - 1])) {
      throw std::invalid_argument("quadrature: breakpoints must be strictly increasing");
    }
  }

  std::vector<Segment> active;
  std::vector<Segment> frozen;
  active.reserve(breakpoints.size() + 64);
  long evaluations = 0;
  for (std::size_t i = 1; i < breakpoints.size(); ++i) {
    active.push_back(gauss_kronrod21(f, breakpoints[i - 1], breakpoints[i]));
    evaluations += 21;
  }
  const auto by_error = [](const Segment& x, const Segment& y) { return x.error < y.error; };
  std::make_heap(active.begin(), active.end(), by_error);

  long double total = 0.0L;
  long double total_err = 0.0L;
  for (const auto& s : active) {
    total += s.result;
    total_err += s.error;
  }

  const auto finish = [&](bool converged) -> Detailed {
    std::vector<Segment> all = active;
    all.insert(all.end(), frozen.begin(), frozen.end());
    std::sort(all.begin(), all.end(), [](const Segment& x, const Segment& y) { return x.a < y.a; });
    long double v = 0.0L;
    long double e = 0.0L;
    long double ra = 0.0L;
    for (const auto& s : all) {
      v += s.result;
      e += s.error;
      ra += s.resabs;
    }
    Detailed d{{static_cast<double>(v), static_cast<double>(e), evaluations}, static_cast<double>(ra)};
    if (!converged || !std::isfinite(d.result.value)) {
      throw NonConvergence("quadrature: tolerance not reached within subdivision limit", d.result);
    }
    return d;
  };

  int subdivisions = static_cast<int>(active.size());
  while (true) {
    const double tol = std::max(cfg.abs_tol, cfg.rel_tol * std::abs(static_cast<double>(total)));
    if (total_err <= tol) return finish(true);
    if (active.empty()) return finish(false);

    std::pop_heap(active.begin(), active.end(), by_error);
    Segment worst = active.back();
    active.pop_back();
    if (roundoff_limited(worst)) {
      active.push_back(worst);
      std::push_heap(active.begin(), active.end(), by_error);
      return finish(true);
    }
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b) || (worst.b - worst.a) < 1e3 * kTiny) {
      frozen.push_back(worst);
      continue;
    }
    if (subdivisions >= cfg.max_subdivisions) {
      active.push_back(worst);
      return finish(false);
    }
    const Segment left = gauss_kronrod21(f, worst.a, mid);
    const Segment right = gauss_kronrod21(f, mid, worst.b);
    evaluations += 42;
    ++subdivisions;
    total += (static_cast<long double>(left.result) + right.result) - worst.result;
    total_err += (static_cast<long double>(left.error) + right.error) - worst.error;
    active.push_back(left);
    std::push_heap(active.begin(), active.end(), by_error);
    active.push_back(right);
    std::push_heap(active.begin(), active.end(), by_error);
    if (!std::isfinite(static_cast<double>(total_err))) {
      // Recover from non-finite intermediate sums by recomputing from scratch.
      total = 0.0L;
      total_err = 0.0L;
      for (const auto& s : active) {
        total += s.result;
        total_err += s.error;
      }
      for (const auto& s : frozen) {
        total += s.result;
        total_err += s.error;
      }
      if (!std::isfinite(static_cast<double>(total_err))) return finish(false);
    }
  }
}

}  // namespace

void QuadConfig::validate() const {
  if (!(rel_tol > 0.0) || !(abs_tol > 0.0)) {
    throw std::invalid_argument("QuadConfig: tolerances must be positive");
  }
  if (max_subdivisions < 1 || tail_doubling_limit < 1) {
    throw std::invalid_argument("QuadConfig: limits must be positive");
  }
}

QuadResult integrate_finite(const Integrand& f, double lo, double hi, const QuadConfig& cfg) {
  if (!(lo < hi)) throw std::invalid_argument("integrate_finite: require lo < hi");
  const std::array<double, 2> bp = {lo, hi};
  return adaptive(f, bp, cfg).result;
}

QuadResult integrate_partitioned(const Integrand& f, std::span<const double> breakpoints,
                                 const QuadConfig& cfg) {
  return adaptive(f, breakpoints, cfg).result;
}

QuadResult integrate_semi_infinite(const Integrand& f, const QuadConfig& cfg, double initial_length) {
  cfg.validate();
  if (!(initial_length > 0.0)) throw std::invalid_argument("integrate_semi_infinite: bad initial length");
  const std::array<double, 2> head_bp = {0.0, initial_length};
  const Detailed head = adaptive(f, head_bp, cfg);
  double value = head.result.value;
  double error = head.result.error_estimate;
  long evaluations = head.result.evaluations;

  std::vector<double> panels;
  double length = initial_length;
  for (int i = 0; i < cfg.tail_doubling_limit; ++i) {
    QuadConfig panel_cfg = cfg;
    panel_cfg.abs_tol = std::max(cfg.abs_tol, 0.1 * cfg.rel_tol * std::abs(value));
    const std::array<double, 2> bp = {length, 2.0 * length};
    const Detailed panel = adaptive(f, bp, panel_cfg);
    value += panel.result.value;
    error += panel.result.error_estimate;
    evaluations += panel.result.evaluations;
    const double threshold = std::max(cfg.abs_tol, cfg.rel_tol * std::abs(value));
    if (panel.resabs <= threshold) return {value, error, evaluations};

    panels.push_back(panel.result.value);
    if (panels.size() >= 3) {
      const double p1 = panels[panels.size() - 3];
      const double p2 = panels[panels.size() - 2];
      const double p3 = panels[panels.size() - 1];
      const double q1 = p2 / p1;
      const double q2 = p3 / p2;
      const bool geometric = p1 != 0.0 && p2 != 0.0 && q1 > 0.0 && q2 > 0.0 && q1 < 0.95 &&
                             q2 < 0.95 && std::abs(q2 - q1) <= 0.1 * q2;
      if (geometric) {
        const double tail = p3 * q2 / (1.0 - q2);
        const double spread = std::abs(tail - p3 * q1 / (1.0 - q1));
        if (spread <= std::max(cfg.abs_tol, cfg.rel_tol * std::abs(value + tail))) {
          return {value + tail, error + spread, evaluations};
        }
      }
    }
    length *= 2.0;
  }
  throw NonConvergence("integrate_semi_infinite: tail did not converge within doubling limit",
                       {value, error + (panels.empty() ? 0.0 : std::abs(panels.back())), evaluations});
}

QuadResult integrate_oscillatory(const Integrand& f, double lo, double hi, double half_period,
                                 double min_panel, const QuadConfig& cfg) {
  if (!(lo < hi)) throw std::invalid_argument("integrate_oscillatory: require lo < hi");
  double width = std::max(half_period, min_panel);
  const double max_panels = 0.5 * cfg.max_subdivisions;
  if ((hi - lo) / width > max_panels) width = (hi - lo) / max_panels;
  const auto count = static_cast<std::size_t>(std::ceil((hi - lo) / width));
  std::vector<double> bp;
  bp.reserve(count + 1);
  for (std::size_t i = 0; i < count; ++i) bp.push_back(lo + static_cast<double>(i) * width);
  bp.push_back(hi);
  if (bp.size() >= 3 && !(bp[bp.size() - 1] > bp[bp.size() - 2])) bp.erase(bp.end() - 2);
  return adaptive(f, bp, cfg).result;
}

double decay_point(const std::function<double(double)>& log_envelope, double start, double step,
                   double threshold, double limit) {
  double prev = start;
  double x = start;
  const bool forward = step > 0.0;
  while (true) {
    x = prev + step;
    if (forward ? x >= limit : x <= limit) {
      x = limit;
      if (log_envelope(x) > threshold) return limit;
      break;
    }
    if (log_envelope(x) <= threshold) break;
    prev = x;
  }
  double inside = prev;  // envelope above threshold
  double outside = x;    // envelope at or below threshold
  for (int i = 0; i < 60; ++i) {
    const double mid = 0.5 * (inside + outside);
    if (log_envelope(mid) > threshold) {
      inside = mid;
    } else {
      outside = mid;
    }
  }
  return outside;
}

}  // namespace qring::quad
