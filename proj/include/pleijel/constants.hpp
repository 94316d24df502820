#pragma once

// Closed-form and variational Pleijel constants:
//   gamma(N)  = 2^{N-2} N^2 Gamma(N/2)^2 / j_{N/2-1,1}^N   (general upper bound)
//   rho(N)    = 2^N Gamma(N/2+1) / (pi^{N/2} N^{N/2})      (irrational N-orthotopes)
//   Pl(disk)  = 8 sup_x x cos^2 theta(x),  tan theta - theta = pi x.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "pleijel/detail/roots.hpp"
#include "pleijel/error.hpp"
#include "pleijel/special.hpp"

namespace pleijel {

/// Upper bound 4 / j_{0,1}^2 on the planar Pleijel constant.
inline constexpr double kPlanarBoundApprox = 0.6916602;

namespace detail {

inline void check_dimension(int n) {
  if (n < 2) throw DomainError("dimension N must be >= 2, got " + std::to_string(n));
}

}  // namespace detail

/// log gamma(N) for the Pleijel / Berard-Meyer bound.
[[nodiscard]] inline double log_gamma_bound(int n) {
  detail::check_dimension(n);
  const double nn = n;
  const double j = special::bessel_zero(special::Order(nn / 2.0 - 1.0), special::ZeroIndex(1));
  return (nn - 2.0) * std::numbers::ln2 + 2.0 * std::log(nn) + 2.0 * std::lgamma(nn / 2.0) -
         nn * std::log(j);
}

/// gamma(N) = 2^{N-2} N^2 Gamma(N/2)^2 / j_{N/2-1,1}^N. Underflows to 0
/// for large N; use log_gamma_bound / gamma_ratio there.
[[nodiscard]] inline double gamma_bound(int n) { return std::exp(log_gamma_bound(n)); }

/// log rho(N); rho itself underflows double range near N = 1000.
[[nodiscard]] inline double log_rho(int n) {
  detail::check_dimension(n);
  const double nn = n;
  return nn * std::numbers::ln2 + std::lgamma(nn / 2.0 + 1.0) -
         nn / 2.0 * std::log(std::numbers::pi) - nn / 2.0 * std::log(nn);
}

/// Pleijel constant of an N-orthotope with pairwise irrational a_i^2 / a_j^2.
[[nodiscard]] inline double rho(int n) { return std::exp(log_rho(n)); }

/// gamma(N+1) / gamma(N), tends to 2/e.
[[nodiscard]] inline double gamma_ratio(int n) {
  return std::exp(log_gamma_bound(n + 1) - log_gamma_bound(n));
}

/// rho(N+1) / rho(N), tends to sqrt(2 / (pi e)).
[[nodiscard]] inline double rho_ratio(int n) { return std::exp(log_rho(n + 1) - log_rho(n)); }

// ---------------------------------------------------------------------------
// tan theta - theta = pi x

struct ThetaSolution {
  double x = 0.0;
  double theta = 0.0;
};

/// tan(t) - t without cancellation for small t.
[[nodiscard]] inline double tan_minus_identity(double t) {
  if (std::abs(t) < 0.1) {
    // Taylor coefficients of tan t beyond the linear term.
    constexpr double c[] = {1.0 / 3.0,
                            2.0 / 15.0,
                            17.0 / 315.0,
                            62.0 / 2835.0,
                            1382.0 / 155925.0,
                            21844.0 / 6081075.0,
                            929569.0 / 638512875.0};
    const double t2 = t * t;
    double sum = 0.0;
    for (int i = 6; i >= 0; --i) sum = sum * t2 + c[i];
    return sum * t2 * t;
  }
  return std::tan(t) - t;
}

/// Unique theta in (0, pi/2) with tan theta - theta = pi x.
[[nodiscard]] inline ThetaSolution solve_theta(double x) {
  if (!(x > 0.0) || !std::isfinite(x)) {
    throw DomainError("solve_theta: x must be positive and finite");
  }
  const double px = std::numbers::pi * x;
  // pi x < tan theta < pi x + pi/2 on the root.
  const double lo = std::atan(px);
  const double hi = std::atan(px + std::numbers::pi / 2.0);
  // Leading small-x behavior theta ~ (3 pi x)^{1/3}.
  const double guess = std::clamp(std::cbrt(3.0 * px), lo, hi);
  auto fdf = [px](double t) -> std::pair<double, double> {
    const double tn = std::tan(t);
    return {tan_minus_identity(t) - px, tn * tn};
  };
  const double theta = detail::solve_bracketed(fdf, lo, hi, guess, 1e-15, "solve_theta");
  return {x, theta};
}

/// f(x) = 8 x cos^2 theta(x); its supremum is the disk's Pleijel constant.
[[nodiscard]] inline double disk_objective(double x) {
  const double c = std::cos(solve_theta(x).theta);
  return 8.0 * x * c * c;
}

/// Limit of j_{nu, nu x} / nu as nu -> infinity: 1 / cos theta(x).
[[nodiscard]] inline double elbert_laforgia(double x) {
  return 1.0 / std::cos(solve_theta(x).theta);
}

// ---------------------------------------------------------------------------
// Estimates

enum class Method { closed_form, transcendental_max, empirical_trace, annulus_surrogate };

[[nodiscard]] inline std::string_view to_string(Method m) {
  switch (m) {
    case Method::closed_form:
      return "closed_form";
    case Method::transcendental_max:
      return "transcendental_max";
    case Method::empirical_trace:
      return "empirical_trace";
    case Method::annulus_surrogate:
      return "annulus_surrogate";
  }
  return "unknown";
}

struct PleijelEstimate {
  double value = 0.0;
  std::optional<double> argmax_x;
  std::optional<double> theta_at_argmax;
  Method method = Method::closed_form;
  double tolerance = 0.0;
  /// Set when an assumption behind the value cannot hold for this input.
  bool hypothesis_violated = false;
  std::vector<std::string> notes;
  /// Other grid-local maxima within 1e-9 of the best one.
  std::vector<double> near_ties;
};

inline constexpr int kDiskGridPoints = 512;
inline constexpr double kDiskGridLo = 1e-3;
inline constexpr double kDiskGridHi = 4.0;

/// Maximize 8 x cos^2 theta(x): log grid on [1e-3, 4], then golden section
/// around the best grid point until the bracket is narrower than `tolerance`.
[[nodiscard]] inline PleijelEstimate pleijel_disk(double tolerance = 1e-8) {
  if (!(tolerance >= 1e-14 && tolerance <= 1e-4)) {
    throw DomainError("pleijel_disk: tolerance must lie in [1e-14, 1e-4]");
  }
  std::vector<double> xs(kDiskGridPoints);
  std::vector<double> fs(kDiskGridPoints);
  const double step = std::log(kDiskGridHi / kDiskGridLo) / (kDiskGridPoints - 1);
  for (int i = 0; i < kDiskGridPoints; ++i) {
    xs[i] = kDiskGridLo * std::exp(step * i);
    fs[i] = disk_objective(xs[i]);
  }
  const auto best = static_cast<int>(std::max_element(fs.begin(), fs.end()) - fs.begin());
  if (best == 0 || best == kDiskGridPoints - 1 || !(fs[best - 1] < fs[best]) ||
      !(fs[best + 1] < fs[best])) {
    throw ConvergenceError("pleijel_disk: grid maximum is not an interior local maximum");
  }

  PleijelEstimate est;
  est.method = Method::transcendental_max;
  for (int i = 1; i + 1 < kDiskGridPoints; ++i) {
    if (i == best) continue;
    if (fs[i] >= fs[i - 1] && fs[i] >= fs[i + 1] && fs[best] - fs[i] <= 1e-9) {
      est.near_ties.push_back(xs[i]);
    }
  }

  // Golden section on [x_{best-1}, x_{best+1}].
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = xs[best - 1];
  double b = xs[best + 1];
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = disk_objective(c);
  double fd = disk_objective(d);
  for (int it = 0; it < 400 && (b - a) > tolerance; ++it) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = disk_objective(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = disk_objective(d);
    }
  }
  const double x = 0.5 * (a + b);
  const double theta = solve_theta(x).theta;
  const double cs = std::cos(theta);
  est.value = 8.0 * x * cs * cs;
  est.argmax_x = x;
  est.theta_at_argmax = theta;
  est.tolerance = b - a;
  if (est.tolerance > tolerance) est.notes.push_back("golden section stopped before tolerance");
  if (tolerance < 1e-8) {
    // f is flat at the top: f-values cannot separate points closer than ~sqrt(eps).
    est.notes.push_back("argmax accuracy is limited to about 1e-8 by the flat maximum");
  }
  return est;
}

/// Limit ratio k / nu along the maximizing sequence for the sector of angle
/// alpha: pi x0 / alpha.
[[nodiscard]] inline double sector_angular_density(double alpha, const PleijelEstimate& disk) {
  if (!(alpha > 0.0)) throw DomainError("sector angle must be > 0");
  if (!disk.argmax_x) throw DomainError("estimate has no maximizer");
  return std::numbers::pi * *disk.argmax_x / alpha;
}

// ---------------------------------------------------------------------------
// Orthotopes

/// Heuristic rationality test: q equals p / s with s <= max_den up to a
/// relative 1e-12. Irrationality itself is undecidable in floating point.
[[nodiscard]] inline std::optional<std::pair<std::int64_t, std::int64_t>> near_rational(
    double q, std::int64_t max_den = 10000) {
  // Continued-fraction convergents.
  std::int64_t p0 = 0, p1 = 1, q0 = 1, q1 = 0;
  double rest = q;
  for (int i = 0; i < 64; ++i) {
    const double a = std::floor(rest);
    if (a > 1e12) break;
    const auto ai = static_cast<std::int64_t>(a);
    const std::int64_t p2 = ai * p1 + p0;
    const std::int64_t q2 = ai * q1 + q0;
    if (q2 > max_den) break;
    if (std::abs(static_cast<double>(p2) / static_cast<double>(q2) - q) <= 1e-12 * std::abs(q)) {
      return std::make_pair(p2, q2);
    }
    p0 = p1;
    p1 = p2;
    q0 = q1;
    q1 = q2;
    const double frac = rest - a;
    if (frac <= 0.0) break;
    rest = 1.0 / frac;
  }
  return std::nullopt;
}

/// rho(N) for the box with the given side lengths. The value does not depend
/// on the sides, but it only equals Pl of the box when every a_i^2 / a_j^2 is
/// irrational; numerically rational ratios are flagged.
[[nodiscard]] inline PleijelEstimate rect_pleijel(const std::vector<double>& lengths) {
  if (lengths.size() < 2) throw DomainError("rect_pleijel: need at least 2 side lengths");
  for (double a : lengths) {
    if (!(a > 0.0) || !std::isfinite(a)) throw DomainError("rect_pleijel: sides must be > 0");
  }
  PleijelEstimate est;
  est.method = Method::closed_form;
  est.value = rho(static_cast<int>(lengths.size()));
  est.notes.push_back(
      "assumes all a_i^2/a_j^2 irrational; this cannot be verified in floating point");
  for (std::size_t i = 0; i < lengths.size(); ++i) {
    for (std::size_t j = i + 1; j < lengths.size(); ++j) {
      const double q = (lengths[i] * lengths[i]) / (lengths[j] * lengths[j]);
      if (auto pq = near_rational(q)) {
        est.hypothesis_violated = true;
        std::ostringstream os;
        os << "a" << i + 1 << "^2/a" << j + 1 << "^2 = " << pq->first << "/" << pq->second
           << " is rational; eigenvalues are not all simple";
        est.notes.push_back(os.str());
      }
    }
  }
  return est;
}

}  // namespace pleijel
