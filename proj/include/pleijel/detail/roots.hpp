#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <string_view>
#include <utility>

#include "pleijel/error.hpp"

namespace pleijel::detail {

/// Newton iteration safeguarded by bisection (rtsafe style).
///
/// `fdf(x)` returns {f(x), f'(x)}; a non-finite derivative degrades the
/// step to bisection. The bracket [lo, hi] must straddle a sign change.
/// Stops when the step falls below rel_tol * |x|.
template <class FDF>
double solve_bracketed(FDF&& fdf, double lo, double hi, double guess, double rel_tol,
                       std::string_view what, int max_iter = 300) {
  auto [flo, dlo] = fdf(lo);
  if (flo == 0.0) return lo;
  auto [fhi, dhi] = fdf(hi);
  if (fhi == 0.0) return hi;
  (void)dlo;
  (void)dhi;
  if ((flo < 0.0) == (fhi < 0.0) || !std::isfinite(flo) || !std::isfinite(fhi)) {
    std::ostringstream os;
    os.precision(17);
    os << what << ": bracket [" << lo << ", " << hi << "] does not straddle a root (f = " << flo
       << ", " << fhi << ")";
    throw ConvergenceError(os.str());
  }
  // Orient so that f(lo) < 0.
  if (flo > 0.0) std::swap(lo, hi);

  double x = (guess > std::min(lo, hi) && guess < std::max(lo, hi)) ? guess : 0.5 * (lo + hi);
  double dx_old = std::abs(hi - lo);
  double dx = dx_old;
  for (int it = 0; it < max_iter; ++it) {
    auto [f, df] = fdf(x);
    if (f == 0.0) return x;
    if (f < 0.0) {
      lo = x;
    } else {
      hi = x;
    }
    double next = x - f / df;
    const double a = std::min(lo, hi);
    const double b = std::max(lo, hi);
    // Converged Newton step; it may land a rounding error outside [a, b]
    // when x itself is the root.
    if (std::isfinite(next) && std::abs(next - x) <= rel_tol * std::abs(x)) {
      return std::clamp(next, a, b);
    }
    const bool newton_ok = std::isfinite(next) && next > a && next < b &&
                           std::abs(2.0 * f) <= std::abs(dx_old * df);
    dx_old = dx;
    if (newton_ok) {
      dx = next - x;
    } else {
      next = 0.5 * (a + b);
      dx = next - x;
    }
    if (std::abs(dx) <= rel_tol * std::abs(next) || (b - a) <= rel_tol * std::abs(next)) {
      return next;
    }
    x = next;
  }
  std::ostringstream os;
  os.precision(17);
  os << what << ": no convergence after " << max_iter << " iterations, bracket [" << std::min(lo, hi)
     << ", " << std::max(lo, hi) << "]";
  throw ConvergenceError(os.str());
}

/// Derivative-free variant: Illinois regula falsi with bisection fallback.
template <class F>
double solve_bracketed_df(F&& f, double lo, double hi, double abs_tol, std::string_view what,
                          int max_iter = 200) {
  double flo = f(lo);
  double fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo < 0.0) == (fhi < 0.0)) {
    std::ostringstream os;
    os.precision(17);
    os << what << ": no sign change on [" << lo << ", " << hi << "] (f = " << flo << ", " << fhi
       << ")";
    throw ConvergenceError(os.str());
  }
  int side = 0;
  for (int it = 0; it < max_iter; ++it) {
    double x = (lo * fhi - hi * flo) / (fhi - flo);
    if (!(x > std::min(lo, hi) && x < std::max(lo, hi))) x = 0.5 * (lo + hi);
    // Every few steps force a bisection so slow one-sided convergence cannot stall.
    if (it % 4 == 3) x = 0.5 * (lo + hi);
    const double fx = f(x);
    if (fx == 0.0 || std::abs(hi - lo) <= abs_tol) return x;
    if ((fx < 0.0) == (flo < 0.0)) {
      lo = x;
      flo = fx;
      if (side == -1) fhi *= 0.5;
      side = -1;
    } else {
      hi = x;
      fhi = fx;
      if (side == 1) flo *= 0.5;
      side = 1;
    }
    if (std::abs(hi - lo) <= abs_tol) return 0.5 * (lo + hi);
  }
  std::ostringstream os;
  os.precision(17);
  os << what << ": no convergence after " << max_iter << " iterations, bracket [" << lo << ", "
     << hi << "]";
  throw ConvergenceError(os.str());
}

}  // namespace pleijel::detail
