#include "thresholdci/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

#include "thresholdci/errors.hpp"

namespace thresholdci {

namespace {

// Kronrod abscissae; odd indices are the 10-point Gauss nodes.
constexpr double kXgk[11] = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.0};
constexpr double kWgk[11] = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077958109831074, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};
constexpr double kWg[5] = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

constexpr double kEps = std::numeric_limits<double>::epsilon();

struct Panel {
  double a, b, value, error;
  bool operator<(const Panel& other) const { return error < other.error; }
};

// One 21-point Gauss-Kronrod panel with the QUADPACK error heuristic.
Panel gauss_kronrod(const std::function<double(double)>& f, double a, double b, int& evals) {
  const double centre = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(centre);
  double res_g = 0.0;
  double res_k = kWgk[10] * fc;
  double res_abs = std::abs(res_k);
  double fv1[10], fv2[10];
  for (int j = 0; j < 10; ++j) {
    const double dx = half * kXgk[j];
    const double f1 = f(centre - dx);
    const double f2 = f(centre + dx);
    fv1[j] = f1;
    fv2[j] = f2;
    res_k += kWgk[j] * (f1 + f2);
    res_abs += kWgk[j] * (std::abs(f1) + std::abs(f2));
    if (j % 2 == 1) res_g += kWg[j / 2] * (f1 + f2);
  }
  evals += 21;
  const double mean = 0.5 * res_k;
  double res_asc = kWgk[10] * std::abs(fc - mean);
  for (int j = 0; j < 10; ++j)
    res_asc += kWgk[j] * (std::abs(fv1[j] - mean) + std::abs(fv2[j] - mean));

  const double value = res_k * half;
  res_abs *= std::abs(half);
  res_asc *= std::abs(half);
  double err = std::abs((res_k - res_g) * half);
  if (res_asc != 0.0 && err != 0.0) err = res_asc * std::min(1.0, std::pow(200.0 * err / res_asc, 1.5));
  if (res_abs > std::numeric_limits<double>::min() / (50.0 * kEps))
    err = std::max(50.0 * kEps * res_abs, err);
  return {a, b, value, err};
}

// Maps an infinite range onto a finite one; identity otherwise.
struct RangeMap {
  enum class Kind { finite, upper_inf, lower_inf, both_inf } kind;
  double anchor;

  double to_x(double t) const {
    switch (kind) {
      case Kind::finite: return t;
      case Kind::upper_inf: return anchor + t / (1.0 - t);
      case Kind::lower_inf: return anchor - (1.0 - t) / t;
      case Kind::both_inf: return t / (1.0 - t * t);
    }
    return t;
  }
  double jacobian(double t) const {
    switch (kind) {
      case Kind::finite: return 1.0;
      case Kind::upper_inf: return 1.0 / ((1.0 - t) * (1.0 - t));
      case Kind::lower_inf: return 1.0 / (t * t);
      case Kind::both_inf: {
        const double d = 1.0 - t * t;
        return (1.0 + t * t) / (d * d);
      }
    }
    return 1.0;
  }
  double to_t(double x) const {
    switch (kind) {
      case Kind::finite: return x;
      case Kind::upper_inf: return (x - anchor) / (1.0 + x - anchor);
      case Kind::lower_inf: return 1.0 / (1.0 + anchor - x);
      case Kind::both_inf:
        if (x == 0.0) return 0.0;
        return (-1.0 + std::sqrt(1.0 + 4.0 * x * x)) / (2.0 * x);
    }
    return x;
  }
};

QuadratureResult adaptive(const std::function<double(double)>& f, std::vector<double> nodes,
                          const QuadratureConfig& cfg, double extra_error) {
  int evals = 0;
  std::priority_queue<Panel> heap;
  double total = 0.0;
  double total_err = 0.0;
  for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
    if (!(nodes[i + 1] > nodes[i])) continue;
    Panel p = gauss_kronrod(f, nodes[i], nodes[i + 1], evals);
    total += p.value;
    total_err += p.error;
    heap.push(p);
  }
  std::vector<Panel> frozen;  // panels too narrow to split further
  int subdivisions = 0;
  auto tolerance = [&] { return std::max(cfg.abs_tol, cfg.rel_tol * std::abs(total)); };
  while (total_err > tolerance() && !heap.empty()) {
    if (subdivisions >= cfg.max_subdivisions)
      throw NumericalFailure("quadrature: subdivision limit reached", total, total_err + extra_error);
    Panel worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b) ||
        (worst.b - worst.a) < 64.0 * kEps * std::max(std::abs(worst.a), std::abs(worst.b))) {
      frozen.push_back(worst);
      continue;
    }
    Panel left = gauss_kronrod(f, worst.a, mid, evals);
    Panel right = gauss_kronrod(f, mid, worst.b, evals);
    total += left.value + right.value - worst.value;
    total_err += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
    ++subdivisions;
  }
  // Re-sum in panel order so the result does not depend on update history.
  std::vector<Panel> all = std::move(frozen);
  while (!heap.empty()) {
    all.push_back(heap.top());
    heap.pop();
  }
  std::sort(all.begin(), all.end(), [](const Panel& x, const Panel& y) { return x.a < y.a; });
  double value = 0.0, error = 0.0;
  for (const Panel& p : all) {
    value += p.value;
    error += p.error;
  }
  if (error > std::max(cfg.abs_tol, cfg.rel_tol * std::abs(value)) && error > 1e3 * kEps * std::abs(value))
    throw NumericalFailure("quadrature: roundoff prevents reaching tolerance", value, error + extra_error);
  return {value, error + extra_error, evals};
}

}  // namespace

void QuadratureConfig::validate() const {
  if (!(abs_tol > 0.0) || !(rel_tol > 0.0) || !(tail_mass_tol > 0.0))
    throw DomainError("quadrature tolerances must be strictly positive");
  if (max_subdivisions < 1) throw DomainError("max_subdivisions must be positive");
}

QuadratureResult integrate(const Integrand& f, double a, double b,
                           std::span<const double> breakpoints, const QuadratureConfig& cfg) {
  cfg.validate();
  if (std::isnan(a) || std::isnan(b)) throw DomainError("integrate: NaN bound");
  if (a == b) return {};
  if (a > b) {
    QuadratureResult r = integrate(f, b, a, breakpoints, cfg);
    r.value = -r.value;
    return r;
  }
  const bool lo_inf = std::isinf(a);
  const bool hi_inf = std::isinf(b);
  RangeMap map{RangeMap::Kind::finite, 0.0};
  double t_lo = a, t_hi = b;
  if (lo_inf && hi_inf) {
    map = {RangeMap::Kind::both_inf, 0.0};
    t_lo = -1.0;
    t_hi = 1.0;
  } else if (hi_inf) {
    map = {RangeMap::Kind::upper_inf, a};
    t_lo = 0.0;
    t_hi = 1.0;
  } else if (lo_inf) {
    map = {RangeMap::Kind::lower_inf, b};
    t_lo = 0.0;
    t_hi = 1.0;
  }
  std::vector<double> nodes{t_lo};
  std::vector<double> inner;
  for (double x : breakpoints)
    if (x > a && x < b) inner.push_back(map.to_t(x));
  std::sort(inner.begin(), inner.end());
  for (double t : inner)
    if (t > nodes.back() && t < t_hi) nodes.push_back(t);
  nodes.push_back(t_hi);

  if (map.kind == RangeMap::Kind::finite) return adaptive(f, std::move(nodes), cfg, 0.0);
  auto g = [&](double t) {
    const double x = map.to_x(t);
    if (std::isinf(x)) return 0.0;
    const double v = f(x);
    return v == 0.0 ? 0.0 : v * map.jacobian(t);
  };
  return adaptive(g, std::move(nodes), cfg, 0.0);
}

RhoSupport rho_support(DegreesOfFreedom m, double tail_mass) {
  if (!(tail_mass > 0.0 && tail_mass < 1.0)) throw DomainError("rho_support: tail mass outside (0, 1)");
  const double md = m.as_double();
  RhoSupport s;
  s.lo = std::sqrt(chi_sq_quantile(0.5 * tail_mass, m) / md);
  s.hi = std::sqrt(chi_sq_upper_quantile(0.5 * tail_mass, m) / md);
  // Bulk of rho_m sits near 1 with spread about 1/sqrt(2m).
  const double centre = std::sqrt(std::max(md - 1.0, 0.5) / md);
  const double spread = 1.0 / std::sqrt(2.0 * md);
  for (double k : {-8.0, -4.0, -2.0, -1.0, 0.0, 1.0, 2.0, 4.0, 8.0}) {
    const double p = centre + k * spread;
    if (p > s.lo && p < s.hi) s.panel_points.push_back(p);
  }
  return s;
}

QuadratureResult integrate_halfline(const Integrand& f, DegreesOfFreedom m,
                                    std::span<const double> breakpoints, const QuadratureConfig& cfg) {
  cfg.validate();
  const RhoSupport support = rho_support(m, cfg.tail_mass_tol);
  std::vector<double> nodes{support.lo};
  std::vector<double> inner(support.panel_points);
  for (double x : breakpoints)
    if (std::isfinite(x) && x > support.lo && x < support.hi) inner.push_back(x);
  std::sort(inner.begin(), inner.end());
  for (double x : inner)
    if (x > nodes.back()) nodes.push_back(x);
  nodes.push_back(support.hi);
  return adaptive(f, std::move(nodes), cfg, cfg.tail_mass_tol);
}

}  // namespace thresholdci
