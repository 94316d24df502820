#pragma once

// Real-order Bessel functions of the first and second kind, their
// modulus/phase representation, and zeros of J_nu and J'_nu.
//
// Raw values come from Boost.Math. Everything that needs to know *which*
// zero it has found goes through the phase function
//
//   J_nu(x) = M(x) cos theta(x),   Y_nu(x) = M(x) sin theta(x),
//
// where theta is continuous, strictly increasing (theta' = 2 / (pi x M^2))
// and tends to -pi/2 as x -> 0+. The k-th zero of J_nu is the unique x with
// theta(x) = (k - 1/2) pi.

#include <atomic>
#include <cmath>
#include <compare>
#include <cstdint>
#include <mutex>
#include <numbers>
#include <optional>
#include <shared_mutex>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>

#include <boost/math/special_functions/bessel.hpp>
#include <boost/math/special_functions/bessel_prime.hpp>

#include "pleijel/detail/roots.hpp"
#include "pleijel/error.hpp"

namespace pleijel::special {

inline constexpr double kNuMax = 2000.0;
inline constexpr double kXMax = 1e6;
/// Relative step size at which zero iterations stop.
inline constexpr double kZeroRelTol = 1e-12;

/// Nonnegative real order of a Bessel function.
class Order {
 public:
  explicit Order(double nu) : nu_(nu) {
    if (!std::isfinite(nu) || nu < 0.0) {
      throw DomainError("Bessel order must be finite and >= 0, got " + std::to_string(nu));
    }
    if (nu > kNuMax) {
      throw CapExceeded("Bessel order " + std::to_string(nu) + " exceeds cap " +
                        std::to_string(kNuMax));
    }
  }
  [[nodiscard]] double value() const noexcept { return nu_; }
  friend auto operator<=>(const Order&, const Order&) = default;

 private:
  double nu_;
};

/// 1-based index of a positive zero.
class ZeroIndex {
 public:
  explicit ZeroIndex(long k) : k_(k) {
    if (k < 1) throw DomainError("zero index must be >= 1, got " + std::to_string(k));
  }
  [[nodiscard]] long value() const noexcept { return k_; }
  friend auto operator<=>(const ZeroIndex&, const ZeroIndex&) = default;

 private:
  long k_;
};

/// J, Y and their derivatives at one (nu, x).
struct BesselPair {
  double nu = 0.0;
  double x = 0.0;
  double j = 0.0;
  double y = 0.0;
  double jp = 0.0;
  double yp = 0.0;

  /// |(pi x / 2)(J Y' - J' Y) - 1|; zero for exact values.
  [[nodiscard]] double wronskian_residual() const {
    return std::abs(std::numbers::pi * x / 2.0 * (j * yp - jp * y) - 1.0);
  }
  /// sqrt(J^2 + Y^2), the local amplitude envelope.
  [[nodiscard]] double modulus() const { return std::hypot(j, y); }
};

namespace detail {

inline void check_argument(double x) {
  if (!(x > 0.0)) throw DomainError("Bessel argument must be > 0, got " + std::to_string(x));
  if (!(x <= kXMax)) {
    throw CapExceeded("Bessel argument " + std::to_string(x) + " exceeds cap " +
                      std::to_string(kXMax));
  }
}

[[noreturn]] inline void overflow(std::string_view what, double nu, double x) {
  std::ostringstream os;
  os.precision(17);
  os << what << "(" << nu << ", " << x << ") is not representable in double precision";
  throw OverflowError(os.str());
}

template <class F>
double guarded(std::string_view what, double nu, double x, F&& f) {
  double v = 0.0;
  try {
    v = f();
  } catch (const std::overflow_error&) {
    overflow(what, nu, x);
  }
  if (!std::isfinite(v)) overflow(what, nu, x);
  return v;
}

inline double raw_j(double nu, double x) {
  return guarded("J", nu, x, [&] { return boost::math::cyl_bessel_j(nu, x); });
}
inline double raw_jp(double nu, double x) {
  return guarded("J'", nu, x, [&] { return boost::math::cyl_bessel_j_prime(nu, x); });
}
inline double raw_y(double nu, double x) {
  return guarded("Y", nu, x, [&] { return boost::math::cyl_neumann(nu, x); });
}
inline double raw_yp(double nu, double x) {
  return guarded("Y'", nu, x, [&] { return boost::math::cyl_neumann_prime(nu, x); });
}

/// Leading-order Debye estimate of log|Y_nu(x)| for x < nu, used to skip
/// evaluations that would overflow anyway.
inline double log_abs_y_estimate(double nu, double x) {
  if (x >= nu) return 0.0;
  const double alpha = std::acosh(nu / x);
  const double s = std::sqrt((nu - x) * (nu + x));
  return nu * alpha - s - 0.5 * std::log(0.5 * std::numbers::pi * s);
}

inline constexpr double kLogOverflowGuard = 700.0;

}  // namespace detail

/// J_nu(x) alone; no Y evaluation, so no overflow at small x.
[[nodiscard]] inline double bessel_j(Order order, double x) {
  detail::check_argument(x);
  return detail::raw_j(order.value(), x);
}

[[nodiscard]] inline double bessel_j_prime(Order order, double x) {
  detail::check_argument(x);
  return detail::raw_jp(order.value(), x);
}

/// Evaluate J_nu, Y_nu, J'_nu, Y'_nu. Throws OverflowError when Y_nu (or
/// its derivative) leaves double range, which happens for x well below nu.
[[nodiscard]] inline BesselPair eval_bessel(Order order, double x) {
  detail::check_argument(x);
  const double nu = order.value();
  if (detail::log_abs_y_estimate(nu, x) > detail::kLogOverflowGuard) {
    detail::overflow("Y", nu, x);
  }
  BesselPair p;
  p.nu = nu;
  p.x = x;
  p.j = detail::raw_j(nu, x);
  p.y = detail::raw_y(nu, x);
  p.jp = detail::raw_jp(nu, x);
  p.yp = detail::raw_yp(nu, x);
  return p;
}

/// Leading Debye approximation of the phase: for x > nu
///   sqrt(x^2 - nu^2) - nu * acos(nu / x) - pi / 4,
/// and a constant in (-pi/2, -pi/4) below the turning point. Only used to
/// pick the branch of atan2; stays within a quarter turn of the true phase.
[[nodiscard]] inline double debye_phase(double nu, double x) {
  if (x <= nu) return -std::numbers::pi / 3.0;
  const double s = std::sqrt((x - nu) * (x + nu));
  return s - nu * std::acos(nu / x) - std::numbers::pi / 4.0;
}

/// Unwrapped phase theta_nu(x) and its derivative 2 / (pi x M^2).
struct Phase {
  double theta = 0.0;
  double dtheta = 0.0;
};

[[nodiscard]] inline Phase bessel_phase(Order order, double x) {
  detail::check_argument(x);
  const double nu = order.value();
  // Deep below the turning point J/Y underflows to 0: theta = -pi/2, M = inf.
  if (detail::log_abs_y_estimate(nu, x) > detail::kLogOverflowGuard) {
    return {-std::numbers::pi / 2.0, 0.0};
  }
  double j = 0.0;
  double y = 0.0;
  try {
    j = detail::raw_j(nu, x);
    y = detail::raw_y(nu, x);
  } catch (const OverflowError&) {
    return {-std::numbers::pi / 2.0, 0.0};
  }
  const double raw = std::atan2(y, j);
  const double ref = debye_phase(nu, x);
  const double turns = std::round((ref - raw) / (2.0 * std::numbers::pi));
  const double m2 = j * j + y * y;
  return {raw + 2.0 * std::numbers::pi * turns, 2.0 / (std::numbers::pi * x * m2)};
}

/// McCann's lower bound sqrt(nu^2 + pi^2 (k - 1/4)^2) < j_{nu,k}.
[[nodiscard]] inline double mccann_bound(Order order, ZeroIndex k) {
  const double nu = order.value();
  const double t = std::numbers::pi * (static_cast<double>(k.value()) - 0.25);
  return std::sqrt(nu * nu + t * t);
}

// ---------------------------------------------------------------------------
// Zero cache

namespace detail {

enum class ZeroKind : int { j = 0, jp = 1 };

struct ZeroKey {
  std::int64_t nu_q;
  long k;
  ZeroKind kind;
  bool operator==(const ZeroKey&) const = default;
};

struct ZeroKeyHash {
  std::size_t operator()(const ZeroKey& key) const noexcept {
    std::size_t h = std::hash<std::int64_t>{}(key.nu_q);
    h ^= std::hash<long>{}(key.k) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    return h ^ static_cast<std::size_t>(key.kind);
  }
};

class ZeroCache {
 public:
  std::optional<double> find(const ZeroKey& key) const {
    if (!enabled_.load(std::memory_order_relaxed)) return std::nullopt;
    std::shared_lock lock(mutex_);
    auto it = map_.find(key);
    if (it == map_.end()) return std::nullopt;
    return it->second;
  }
  void store(const ZeroKey& key, double value) {
    if (!enabled_.load(std::memory_order_relaxed)) return;
    std::unique_lock lock(mutex_);
    map_.try_emplace(key, value);
  }
  void clear() {
    std::unique_lock lock(mutex_);
    map_.clear();
  }
  void set_enabled(bool on) { enabled_.store(on); }
  bool enabled() const { return enabled_.load(); }
  std::size_t size() const {
    std::shared_lock lock(mutex_);
    return map_.size();
  }

 private:
  mutable std::shared_mutex mutex_;
  std::unordered_map<ZeroKey, double, ZeroKeyHash> map_;
  std::atomic<bool> enabled_{true};
};

inline ZeroCache& zero_cache() {
  static ZeroCache cache;
  return cache;
}

inline ZeroKey make_key(double nu, long k, ZeroKind kind) {
  return {static_cast<std::int64_t>(std::llround(nu * 1e12)), k, kind};
}

}  // namespace detail

inline void set_zero_cache_enabled(bool on) { detail::zero_cache().set_enabled(on); }
inline bool zero_cache_enabled() { return detail::zero_cache().enabled(); }
inline void clear_zero_cache() { detail::zero_cache().clear(); }

// ---------------------------------------------------------------------------
// Zeros

namespace detail {

/// Solve debye_phase(nu, t) = target for t > nu.
inline double invert_debye_phase(double nu, double target) {
  const double hi = target + nu * std::numbers::pi / 2.0 + std::numbers::pi / 4.0 + 1.0;
  const double lo = nu;
  auto fdf = [&](double t) -> std::pair<double, double> {
    if (t <= nu) return {-std::numbers::pi / 4.0 - target, 0.0};
    const double s = std::sqrt((t - nu) * (t + nu));
    return {debye_phase(nu, t) - target, s / t};
  };
  return pleijel::detail::solve_bracketed(fdf, lo, hi, 0.5 * (lo + hi), 1e-10, "debye phase inversion");
}

inline double find_j_zero(double nu, long k) {
  const Order order(nu);
  const double target = (static_cast<double>(k) - 0.5) * std::numbers::pi;
  const double wall = mccann_bound(order, ZeroIndex(k));
  const double guess = std::max(invert_debye_phase(nu, target), wall * (1.0 + 1e-12));

  auto g = [&](double t) { return bessel_phase(order, t).theta - target; };

  double a = std::max(wall, guess - 1.0);
  if (g(a) >= 0.0) a = wall;
  double step = 1.0;
  double b = guess + step;
  for (int i = 0; g(b) <= 0.0; ++i) {
    step *= 2.0;
    b += step;
    if (i > 60) throw ConvergenceError("bessel_zero: could not bracket zero from above");
  }
  auto fdf = [&](double t) -> std::pair<double, double> {
    const Phase p = bessel_phase(order, t);
    return {p.theta - target, p.dtheta};
  };
  return pleijel::detail::solve_bracketed(fdf, a, b, guess, kZeroRelTol, "bessel_zero");
}

}  // namespace detail

/// k-th positive zero j_{nu,k} of J_nu.
[[nodiscard]] inline double bessel_zero(Order order, ZeroIndex k) {
  const auto key = detail::make_key(order.value(), k.value(), detail::ZeroKind::j);
  if (auto hit = detail::zero_cache().find(key)) return *hit;
  const double z = detail::find_j_zero(order.value(), k.value());
  detail::zero_cache().store(key, z);
  return z;
}

/// k-th positive zero j'_{nu,k} of J'_nu (x = 0 excluded for nu = 0).
///
/// Brackets come from interlacing with the zeros of J_nu:
/// j_{0,k} < j'_{0,k} < j_{0,k+1}, and for nu > 0
/// j_{nu,k-1} < j'_{nu,k} < j_{nu,k} (with 0 in place of j_{nu,0}).
[[nodiscard]] inline double bessel_zero_prime(Order order, ZeroIndex k) {
  const double nu = order.value();
  const long kk = k.value();
  const auto key = detail::make_key(nu, kk, detail::ZeroKind::jp);
  if (auto hit = detail::zero_cache().find(key)) return *hit;

  double lo = 0.0;
  double hi = 0.0;
  if (nu == 0.0) {
    lo = bessel_zero(order, ZeroIndex(kk));
    hi = bessel_zero(order, ZeroIndex(kk + 1));
  } else if (kk >= 2) {
    lo = bessel_zero(order, ZeroIndex(kk - 1));
    hi = bessel_zero(order, ZeroIndex(kk));
  } else {
    hi = bessel_zero(order, ZeroIndex(1));
    lo = nu >= 1.0 ? nu : 0.5 * std::sqrt(nu * (nu + 2.0));
    // J' > 0 on (0, j'_{nu,1}); shrink until we are on that side.
    for (int i = 0; detail::raw_jp(nu, lo) <= 0.0; ++i) {
      lo *= 0.5;
      if (i > 200) throw ConvergenceError("bessel_zero_prime: no positive J' below first zero");
    }
  }
  auto fdf = [&](double t) -> std::pair<double, double> {
    const double jp = detail::raw_jp(nu, t);
    const double j = detail::raw_j(nu, t);
    const double jpp = -jp / t - (1.0 - nu * nu / (t * t)) * j;
    return {jp, jpp};
  };
  const double z = pleijel::detail::solve_bracketed(fdf, lo, hi, 0.5 * (lo + hi), kZeroRelTol,
                                           "bessel_zero_prime");
  detail::zero_cache().store(key, z);
  return z;
}

// ---------------------------------------------------------------------------
// Diagnostics

enum class Regime { ascending_series, hankel_asymptotic, transition };

[[nodiscard]] inline std::string_view to_string(Regime r) {
  switch (r) {
    case Regime::ascending_series:
      return "ascending_series";
    case Regime::hankel_asymptotic:
      return "hankel_asymptotic";
    case Regime::transition:
      return "transition";
  }
  return "unknown";
}

/// Which evaluation regime (x, nu) falls in.
[[nodiscard]] inline Regime classify_regime(double nu, double x) {
  if (x <= std::max(10.0, nu / 2.0)) return Regime::ascending_series;
  if (x >= std::max(25.0, 2.0 * nu)) return Regime::hankel_asymptotic;
  return Regime::transition;
}

struct RegimeSample {
  double x = 0.0;
  double nu = 0.0;
  Regime regime = Regime::ascending_series;
  double value = 0.0;      // J_nu(x)
  double est_error = 0.0;  // Wronskian residual; NaN when Y overflows
};

[[nodiscard]] inline RegimeSample regime_diagnostic(Order order, double x) {
  RegimeSample s;
  s.x = x;
  s.nu = order.value();
  s.regime = classify_regime(s.nu, x);
  s.value = bessel_j(order, x);
  try {
    s.est_error = eval_bessel(order, x).wronskian_residual();
  } catch (const OverflowError&) {
    s.est_error = std::numeric_limits<double>::quiet_NaN();
  }
  return s;
}

}  // namespace pleijel::special
