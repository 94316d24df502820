#pragma once

// Bessel cross-products J_nu(r z) Y_nu(z) - J_nu(z) Y_nu(r z) on the
// annulus r < |x| < 1 and their zeros a_{nu,k}(r).
//
// With the modulus/phase form of special.hpp the cross-product equals
// -M(rz) M(z) sin(theta(z) - theta(rz)); the phase difference
// Phi(z) = theta(z) - theta(rz) starts at 0 and is strictly increasing in z
// (J^2 + Y^2 decreases), so a_{nu,k} is the unique root of Phi(z) = k pi.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "pleijel/detail/roots.hpp"
#include "pleijel/error.hpp"
#include "pleijel/special.hpp"

namespace pleijel::crossprod {

using special::Order;
using special::ZeroIndex;

inline constexpr double kRadiusMax = 0.999;
/// Two annulus eigenvalues are considered equal below this relative gap.
inline constexpr double kDegeneracyRelTol = 1e-8;

/// Inner radius of the annulus r < |x| < 1.
class AnnulusRadius {
 public:
  explicit AnnulusRadius(double r) : r_(r) {
    if (!(r > 0.0) || !(r < 1.0)) {
      throw DomainError("annulus radius must lie in (0, 1), got " + std::to_string(r));
    }
    if (r > kRadiusMax) {
      throw DomainError("annulus radius " + std::to_string(r) + " exceeds margin " +
                        std::to_string(kRadiusMax));
    }
  }
  [[nodiscard]] double value() const noexcept { return r_; }
  friend auto operator<=>(const AnnulusRadius&, const AnnulusRadius&) = default;

 private:
  double r_;
};

struct CrossZero {
  double nu = 0.0;
  long k = 0;
  double r = 0.0;
  double a = 0.0;
};

/// J_nu(r z) Y_nu(z) - J_nu(z) Y_nu(r z).
[[nodiscard]] inline double cross_product(Order order, AnnulusRadius r, double z) {
  if (!(z > 0.0)) throw DomainError("cross_product: z must be > 0");
  const auto outer = special::eval_bessel(order, z);
  const auto inner = special::eval_bessel(order, r.value() * z);
  return inner.j * outer.y - outer.j * inner.y;
}

/// Phase difference theta(z) - theta(rz) and its z-derivative.
[[nodiscard]] inline special::Phase cross_phase(Order order, AnnulusRadius r, double z) {
  const auto outer = special::bessel_phase(order, z);
  const auto inner = special::bessel_phase(order, r.value() * z);
  // d/dz theta(rz) = r theta'(rz)
  return {outer.theta - inner.theta, outer.dtheta - r.value() * inner.dtheta};
}

/// McMahon's leading term pi k / (1 - r).
[[nodiscard]] inline double mcmahon_cross_guess(ZeroIndex k, AnnulusRadius r) {
  return std::numbers::pi * static_cast<double>(k.value()) / (1.0 - r.value());
}

namespace detail {

inline double find_cross_zero(Order order, long k, AnnulusRadius r, double seed) {
  const double target = std::numbers::pi * static_cast<double>(k);
  auto g = [&](double z) { return cross_phase(order, r, z).theta - target; };

  double step = std::numbers::pi / (1.0 - r.value()) / 8.0;
  double lo = seed;
  double hi = seed;
  if (g(seed) < 0.0) {
    // scan upward
    for (int i = 1;; ++i) {
      lo = hi;
      hi = lo + step;
      if (g(hi) >= 0.0) break;
      if (i % 8 == 0) step *= 2.0;
      if (i > 400) throw ConvergenceError("cross_zero: upward scan found no sign change");
    }
  } else {
    for (int i = 1;; ++i) {
      hi = lo;
      lo = std::max(hi - step, 0.5 * hi);
      if (g(lo) < 0.0) break;
      if (i % 8 == 0) step *= 2.0;
      if (i > 400) throw ConvergenceError("cross_zero: downward scan found no sign change");
    }
  }
  auto fdf = [&](double z) -> std::pair<double, double> {
    const auto p = cross_phase(order, r, z);
    return {p.theta - target, p.dtheta};
  };
  return pleijel::detail::solve_bracketed(fdf, lo, hi, 0.5 * (lo + hi), special::kZeroRelTol,
                                          "cross_zero");
}

}  // namespace detail

/// k-th positive zero a_{nu,k}(r) of the cross-product.
///
/// `seed` overrides the McMahon starting point (useful when enumerating k
/// in order); the scan from there is the same.
[[nodiscard]] inline CrossZero cross_zero(Order order, ZeroIndex k, AnnulusRadius r,
                                          std::optional<double> seed = std::nullopt) {
  double s = seed.value_or(mcmahon_cross_guess(k, r));
  // a_{nu,k} >= nu, so never start below the order.
  s = std::max(s, order.value());
  if (s <= 0.0) s = mcmahon_cross_guess(k, r);
  const double a = detail::find_cross_zero(order, k.value(), r, s);
  return {order.value(), k.value(), r.value(), a};
}

// ---------------------------------------------------------------------------
// Degeneracy scan

struct ModePair {
  double nu = 0.0;
  long k = 1;
  friend bool operator==(const ModePair&, const ModePair&) = default;
};

struct Degeneracy {
  double r0 = 0.0;
  double lambda = 0.0;
  double gap = 0.0;  ///< |a_A(r0) - a_B(r0)|
};

/// Find r0 in [r_lo, r_hi] where a_A(r0) = a_B(r0). Returns nullopt when
/// a_A - a_B has the same sign at both ends.
[[nodiscard]] inline std::optional<Degeneracy> degeneracy_scan(ModePair pair_a, ModePair pair_b,
                                                               AnnulusRadius r_lo,
                                                               AnnulusRadius r_hi) {
  if (pair_a == pair_b) {
    throw DomainError("degeneracy_scan: identical mode pairs never cross transversally");
  }
  if (!(r_lo.value() < r_hi.value())) throw DomainError("degeneracy_scan: need r_lo < r_hi");
  const Order oa(pair_a.nu);
  const Order ob(pair_b.nu);
  const ZeroIndex ka(pair_a.k);
  const ZeroIndex kb(pair_b.k);
  auto diff = [&](double r) {
    const AnnulusRadius rr(r);
    return cross_zero(oa, ka, rr).a - cross_zero(ob, kb, rr).a;
  };
  const double d_lo = diff(r_lo.value());
  const double d_hi = diff(r_hi.value());
  if ((d_lo < 0.0) == (d_hi < 0.0) && d_lo != 0.0 && d_hi != 0.0) return std::nullopt;

  double r0 = 0.0;
  try {
    r0 = pleijel::detail::solve_bracketed_df(diff, r_lo.value(), r_hi.value(), 1e-13,
                                             "degeneracy_scan");
  } catch (const ConvergenceError& e) {
    std::ostringstream os;
    os.precision(17);
    os << e.what() << "; endpoint differences " << d_lo << ", " << d_hi;
    throw ConvergenceError(os.str());
  }
  const AnnulusRadius rr(r0);
  const double a1 = cross_zero(oa, ka, rr).a;
  const double a2 = cross_zero(ob, kb, rr).a;
  const double a = 0.5 * (a1 + a2);
  return Degeneracy{r0, a * a, std::abs(a1 - a2)};
}

// ---------------------------------------------------------------------------
// Finite-k surrogate of the annulus Pleijel constant

struct SurrogateRow {
  double x = 0.0;
  long k = 0;
  double order = 0.0;  ///< k * x
  double a = 0.0;
  double k2_over_a2 = 0.0;
};

struct SurrogateTrend {
  double x = 0.0;
  double at_half = 0.0;  ///< k^2 / a^2 at k_max / 2
  double at_full = 0.0;  ///< k^2 / a^2 at k_max
  bool increasing = false;
};

/// Finite-k stand-in for (8 / (1 - r^2)) sup_x x limsup_k k^2 / a_{kx,k}^2.
/// Nothing is extrapolated; `trend` shows the last-octave behavior.
struct AnnulusSurrogate {
  double estimate = 0.0;
  double argmax_x = 0.0;
  long k_max = 0;
  std::vector<SurrogateRow> table;
  std::vector<SurrogateTrend> trend;
};

[[nodiscard]] inline AnnulusSurrogate annulus_pleijel_surrogate(AnnulusRadius r,
                                                                const std::vector<double>& x_grid,
                                                                long k_max) {
  if (x_grid.empty()) throw DomainError("annulus_pleijel_surrogate: empty x grid");
  if (k_max < 8) throw DomainError("annulus_pleijel_surrogate: k_max must be >= 8");
  for (double x : x_grid) {
    if (!(x > 0.0) || !std::isfinite(x)) {
      throw DomainError("annulus_pleijel_surrogate: grid points must be positive");
    }
  }
  AnnulusSurrogate out;
  out.k_max = k_max;
  const double scale = 8.0 / (1.0 - r.value() * r.value());
  const long k_half = k_max / 2;
  double best = -1.0;
  for (double x : x_grid) {
    SurrogateTrend t;
    t.x = x;
    for (long k : {k_half, k_max}) {
      const double nu = static_cast<double>(k) * x;
      const auto z = cross_zero(Order(nu), ZeroIndex(k), r);
      const double kk = static_cast<double>(k);
      const double ratio = kk * kk / (z.a * z.a);
      out.table.push_back({x, k, nu, z.a, ratio});
      (k == k_max ? t.at_full : t.at_half) = ratio;
    }
    t.increasing = t.at_full > t.at_half;
    out.trend.push_back(t);
    const double v = scale * x * t.at_full;
    if (v > best) {
      best = v;
      out.argmax_x = x;
    }
  }
  out.estimate = best;
  return out;
}

// ---------------------------------------------------------------------------
// Lower-bound audit a_{kx,k} > 3.4 k / sqrt(1 - r^2) (holds up to o(k))

struct AuditRow {
  long k = 0;
  double a = 0.0;
  double bound = 0.0;
  bool pass = false;
};

[[nodiscard]] inline std::vector<AuditRow> corollary_bound_audit(AnnulusRadius r, double x,
                                                                 const std::vector<long>& k_list) {
  if (!(x > 0.0)) throw DomainError("corollary_bound_audit: x must be > 0");
  std::vector<AuditRow> rows;
  rows.reserve(k_list.size());
  const double denom = std::sqrt(1.0 - r.value() * r.value());
  for (long k : k_list) {
    const double a = cross_zero(Order(static_cast<double>(k) * x), ZeroIndex(k), r).a;
    const double bound = 3.4 * static_cast<double>(k) / denom;
    rows.push_back({k, a, bound, a > bound});
  }
  return rows;
}

/// Empirical constant C in a_{nu,k}^2 >= C k^2 + nu^2: the minimum of
/// (a^2 - nu^2) / k^2 over the sampled modes.
[[nodiscard]] inline double fitted_growth_constant(AnnulusRadius r, const std::vector<double>& orders,
                                                   const std::vector<long>& ks) {
  double c = std::numeric_limits<double>::infinity();
  for (double nu : orders) {
    for (long k : ks) {
      const double a = cross_zero(Order(nu), ZeroIndex(k), r).a;
      const double kk = static_cast<double>(k);
      c = std::min(c, (a * a - nu * nu) / (kk * kk));
    }
  }
  return c;
}

}  // namespace pleijel::crossprod
