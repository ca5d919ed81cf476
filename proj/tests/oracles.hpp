#pragma once

// Reference implementations used only by the tests. They share no code with
// the library: special functions come from series and continued fractions,
// probabilities of thresholding events from scanning the real line for the
// event's boundary and bisecting.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>
#include <vector>

namespace oracle {

inline double erf_series(double x) {
  // Maclaurin series, fine for |x| < 3.
  double term = x;
  double sum = x;
  for (int n = 1; n < 200; ++n) {
    term *= -x * x / n;
    const double add = term / (2 * n + 1);
    sum += add;
    if (std::abs(add) < 1e-17 * std::abs(sum)) break;
  }
  return 2.0 / std::sqrt(std::numbers::pi) * sum;
}

inline double erfc_cf(double x) {
  // Continued fraction for x >= 3 (Lentz).
  const double tiny = 1e-300;
  double f = x;
  double c = x;
  double d = 0.0;
  for (int n = 1; n < 500; ++n) {
    const double an = n * 0.5;
    d = x + an * d;
    d = std::abs(d) < tiny ? tiny : d;
    c = x + an / c;
    c = std::abs(c) < tiny ? tiny : c;
    d = 1.0 / d;
    const double delta = c * d;
    f *= delta;
    if (std::abs(delta - 1.0) < 1e-16) break;
  }
  return std::exp(-x * x) / std::sqrt(std::numbers::pi) / f;
}

inline double phi(double x) {
  if (std::isinf(x)) return x > 0 ? 1.0 : 0.0;
  const double z = x / std::numbers::sqrt2;
  if (z >= 3.0) return 1.0 - 0.5 * erfc_cf(z);
  if (z <= -3.0) return 0.5 * erfc_cf(-z);
  return 0.5 * (1.0 + erf_series(z));
}

inline double phi_density(double x) { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi); }

// Regularised lower incomplete gamma P(a, x).
inline double gamma_p(double a, double x) {
  if (x <= 0.0) return 0.0;
  if (std::isinf(x)) return 1.0;
  const double log_pref = -x + a * std::log(x) - std::lgamma(a);
  if (x < a + 1.0) {
    double ap = a;
    double del = 1.0 / a;
    double sum = del;
    for (int n = 0; n < 10000; ++n) {
      ap += 1.0;
      del *= x / ap;
      sum += del;
      if (std::abs(del) < std::abs(sum) * 1e-17) break;
    }
    return sum * std::exp(log_pref);
  }
  const double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < 10000; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    d = std::abs(d) < tiny ? tiny : d;
    c = b + an / c;
    c = std::abs(c) < tiny ? tiny : c;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < 1e-16) break;
  }
  return 1.0 - std::exp(log_pref) * h;
}

inline double chi2_cdf(double x, double m) { return gamma_p(0.5 * m, 0.5 * x); }

inline double beta_cf(double a, double b, double x) {
  const double tiny = 1e-300;
  double c = 1.0;
  double d = 1.0 - (a + b) * x / (a + 1.0);
  d = std::abs(d) < tiny ? tiny : d;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m < 10000; ++m) {
    const int m2 = 2 * m;
    double aa = m * (b - m) * x / ((a + m2 - 1.0) * (a + m2));
    d = 1.0 + aa * d;
    d = std::abs(d) < tiny ? tiny : d;
    c = 1.0 + aa / c;
    c = std::abs(c) < tiny ? tiny : c;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (a + b + m) * x / ((a + m2) * (a + m2 + 1.0));
    d = 1.0 + aa * d;
    d = std::abs(d) < tiny ? tiny : d;
    c = 1.0 + aa / c;
    c = std::abs(c) < tiny ? tiny : c;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < 1e-16) break;
  }
  return h;
}

// Regularised incomplete beta I_x(a, b).
inline double beta_inc(double a, double b, double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double log_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) + b * std::log1p(-x);
  if (x < (a + 1.0) / (a + b + 2.0)) return std::exp(log_front) * beta_cf(a, b, x) / a;
  return 1.0 - std::exp(log_front) * beta_cf(b, a, 1.0 - x) / b;
}

inline double t_cdf(double x, double m) {
  if (std::isinf(x)) return x > 0 ? 1.0 : 0.0;
  const double tail = 0.5 * beta_inc(0.5 * m, 0.5, m / (m + x * x));
  return x >= 0.0 ? 1.0 - tail : tail;
}

// Density of sqrt(chi2_m / m).
inline double rho(double s, double m) {
  if (s <= 0.0) return 0.0;
  const double log_c = std::log(2.0) + 0.5 * m * std::log(0.5 * m) - std::lgamma(0.5 * m);
  return std::exp(log_c + (m - 1.0) * std::log(s) - 0.5 * m * s * s);
}

enum class Kind { hard, soft, asoft };

inline double kernel(Kind kind, double z, double t) {
  if (std::abs(z) <= t) return 0.0;
  switch (kind) {
    case Kind::hard: return z;
    case Kind::soft: return z > 0 ? z - t : z + t;
    case Kind::asoft: return z - t * t / z;
  }
  return 0.0;
}

// P(event) for Z ~ N(mu, sd^2): scan for indicator changes, bisect each.
inline double normal_measure(const std::function<bool(double)>& event, double mu, double sd, int steps = 20000) {
  const double lo = mu - 12.0 * sd;
  const double hi = mu + 12.0 * sd;
  const double h = (hi - lo) / steps;
  std::vector<double> cuts{-INFINITY};
  bool inside = event(lo);
  const bool start_inside = inside;
  for (int j = 1; j <= steps; ++j) {
    const double x = lo + j * h;
    const bool now = event(x);
    if (now != inside) {
      double a = x - h;
      double b = x;
      for (int it = 0; it < 200 && b - a > 1e-15 * (1.0 + std::abs(a)); ++it) {
        const double c = 0.5 * (a + b);
        (event(c) == inside ? a : b) = c;
      }
      cuts.push_back(0.5 * (a + b));
      inside = now;
    }
  }
  cuts.push_back(INFINITY);
  double total = 0.0;
  bool in = start_inside;
  for (std::size_t j = 0; j + 1 < cuts.size(); ++j) {
    if (in) total += phi((cuts[j + 1] - mu) / sd) - phi((cuts[j] - mu) / sd);
    in = !in;
  }
  return total;
}

// Coverage of [k(Z) - a, k(Z) + b] with sigma = 1, Z ~ N(theta, xi^2/n),
// threshold xi * eta.
inline double known_coverage(Kind kind, double theta, double a, double b, double eta, double n, double xi) {
  const double t = xi * eta;
  return normal_measure(
      [&](double z) {
        const double est = kernel(kind, z, t);
        return est - a <= theta && theta <= est + b;
      },
      theta, xi / std::sqrt(n));
}

// Composite Simpson over s in (0, s_max] of g(s) rho_m(s).
inline double rho_average(const std::function<double(double)>& g, double m, int intervals = 2000,
                          std::vector<double> breaks = {}) {
  const double s_max = 1.0 + 12.0 / std::sqrt(m);
  std::vector<double> edges{0.0};
  std::sort(breaks.begin(), breaks.end());
  for (double b : breaks)
    if (b > edges.back() && b < s_max) edges.push_back(b);
  edges.push_back(s_max);
  double total = 0.0;
  for (std::size_t p = 0; p + 1 < edges.size(); ++p) {
    const double lo = edges[p];
    const double hi = edges[p + 1];
    const int pieces = 2 * std::max(1, static_cast<int>(intervals * (hi - lo) / s_max / 2.0));
    const double h = (hi - lo) / pieces;
    double sum = 0.0;
    for (int j = 0; j <= pieces; ++j) {
      // Evaluate just inside each piece so a jump at an edge is not sampled.
      const double s = j == 0 ? lo + 1e-12 * h : (j == pieces ? hi - 1e-12 * h : lo + j * h);
      const double w = (j == 0 || j == pieces) ? 1.0 : (j % 2 ? 4.0 : 2.0);
      if (s > 0.0) sum += w * g(s) * rho(s, m);
    }
    total += sum * h / 3.0;
  }
  return total;
}

// Estimated-variance coverage of [k - sigma_hat a, k + sigma_hat a].
inline double unknown_coverage(Kind kind, double theta, double a, double eta, double n, double k, double xi,
                               int intervals = 2000) {
  return rho_average([&](double s) { return known_coverage(kind, theta, a * s, a * s, eta * s, n, xi); }, n - k,
                     intervals);
}

// P(sigma_hat^{-1} alpha (k - theta) <= x), sigma = 1.
inline double tilde_cdf(Kind kind, double x, double theta, double eta, double n, double k, double xi, double alpha,
                        int intervals = 2000) {
  return rho_average(
      [&](double s) {
        return normal_measure([&](double z) { return alpha * (kernel(kind, z, s * xi * eta) - theta) <= x * s; },
                              theta, xi / std::sqrt(n), 4000);
      },
      n - k, intervals, x != 0.0 ? std::vector<double>{-alpha * theta / x} : std::vector<double>{});
}

inline double bisect(const std::function<double(double)>& f, double lo, double hi) {
  double flo = f(lo);
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if ((fm <= 0.0) == (flo <= 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

// int Phi(f t / sqrt(2) + r) phi(t) dt = Phi(r / sqrt(1 + f^2 / 2)).
inline double hard_boundary_weight(double f, double r) { return phi(r / std::sqrt(1.0 + 0.5 * f * f)); }

// Published Philox4x32-10 known-answer vectors.
struct PhiloxVector {
  std::array<std::uint32_t, 4> counter;
  std::array<std::uint32_t, 2> key;
  std::array<std::uint32_t, 4> expected;
};
inline const std::array<PhiloxVector, 3> kPhiloxVectors{{
    {{0, 0, 0, 0}, {0, 0}, {0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u}},
    {{0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu},
     {0xffffffffu, 0xffffffffu},
     {0x408f276du, 0x41c83b0eu, 0xa20bc7c6u, 0x6d5451fdu}},
    {{0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u},
     {0xa4093822u, 0x299f31d0u},
     {0xd16cfe09u, 0x94fdccebu, 0x5001e420u, 0x24126ea1u}},
}};

}  // namespace oracle
