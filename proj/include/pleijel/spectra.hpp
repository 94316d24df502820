#pragma once

// Dirichlet spectra (and the Neumann disk) of the separable domains:
// N-orthotopes, the unit disk, sectors, annuli and annular sectors.
// Every eigenvalue comes from a closed form or a Bessel (cross-product)
// zero, tagged with its mode indices and nodal-domain count.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <numbers>
#include <sstream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "pleijel/crossprod.hpp"
#include "pleijel/detail/parallel.hpp"
#include "pleijel/error.hpp"
#include "pleijel/special.hpp"

namespace pleijel::spectra {

/// Relative gap below which two eigenvalues are merged into one record.
inline constexpr double kMergeRelTol = 1e-8;
/// Refuse orthotope enumerations with more lattice points than this.
inline constexpr double kMaxOrthotopeModes = 5e7;

struct Orthotope {
  std::vector<double> lengths;
};
struct Disk {};
struct Sector {
  double alpha = 0.0;
};
struct Annulus {
  double r = 0.0;
};
struct AnnularSector {
  double r = 0.0;
  double alpha = 0.0;
};

class DomainSpec {
 public:
  using Kind = std::variant<Orthotope, Disk, Sector, Annulus, AnnularSector>;

  static DomainSpec orthotope(std::vector<double> lengths) {
    if (lengths.size() < 2) throw DomainError("orthotope needs at least 2 side lengths");
    for (double a : lengths) {
      if (!(a > 0.0) || !std::isfinite(a)) throw DomainError("orthotope sides must be > 0");
    }
    return DomainSpec(Orthotope{std::move(lengths)});
  }
  static DomainSpec disk() { return DomainSpec(Disk{}); }
  static DomainSpec sector(double alpha) {
    check_alpha(alpha);
    return DomainSpec(Sector{alpha});
  }
  static DomainSpec annulus(double r) {
    (void)crossprod::AnnulusRadius(r);
    return DomainSpec(Annulus{r});
  }
  static DomainSpec annular_sector(double r, double alpha) {
    (void)crossprod::AnnulusRadius(r);
    check_alpha(alpha);
    return DomainSpec(AnnularSector{r, alpha});
  }

  [[nodiscard]] const Kind& kind() const noexcept { return kind_; }

  [[nodiscard]] int dimension() const {
    if (const auto* o = std::get_if<Orthotope>(&kind_)) return static_cast<int>(o->lengths.size());
    return 2;
  }

  /// Lebesgue measure of the domain.
  [[nodiscard]] double volume() const {
    return std::visit(
        [](const auto& d) -> double {
          using T = std::decay_t<decltype(d)>;
          if constexpr (std::is_same_v<T, Orthotope>) {
            double v = 1.0;
            for (double a : d.lengths) v *= a;
            return v;
          } else if constexpr (std::is_same_v<T, Disk>) {
            return std::numbers::pi;
          } else if constexpr (std::is_same_v<T, Sector>) {
            return d.alpha / 2.0;
          } else if constexpr (std::is_same_v<T, Annulus>) {
            return std::numbers::pi * (1.0 - d.r * d.r);
          } else {
            return d.alpha / 2.0 * (1.0 - d.r * d.r);
          }
        },
        kind_);
  }

  [[nodiscard]] std::string name() const {
    return std::visit(
        [](const auto& d) -> std::string {
          using T = std::decay_t<decltype(d)>;
          if constexpr (std::is_same_v<T, Orthotope>) return "orthotope";
          if constexpr (std::is_same_v<T, Disk>) return "disk";
          if constexpr (std::is_same_v<T, Sector>) return "sector";
          if constexpr (std::is_same_v<T, Annulus>) return "annulus";
          if constexpr (std::is_same_v<T, AnnularSector>) return "annular_sector";
        },
        kind_);
  }

  [[nodiscard]] bool is_orthotope() const { return std::holds_alternative<Orthotope>(kind_); }
  [[nodiscard]] bool is_disk() const { return std::holds_alternative<Disk>(kind_); }

 private:
  explicit DomainSpec(Kind k) : kind_(std::move(k)) {}

  static void check_alpha(double alpha) {
    if (!(alpha > 0.0) || alpha > 2.0 * std::numbers::pi + 1e-15) {
      throw DomainError("sector angle must lie in (0, 2 pi], got " + std::to_string(alpha));
    }
  }

  Kind kind_;
};

enum class BoundaryCondition { dirichlet, neumann };

[[nodiscard]] inline std::string_view to_string(BoundaryCondition bc) {
  return bc == BoundaryCondition::dirichlet ? "dirichlet" : "neumann";
}

/// Orthotope: (m_1, ..., m_N). Radial families: (angular index, k).
using ModeIndices = std::vector<long>;

struct ModeEntry {
  ModeIndices indices;
  double lambda = 0.0;  ///< eigenvalue of this mode before merging
  double order = std::numeric_limits<double>::quiet_NaN();  ///< Bessel order, radial families
  int multiplicity = 1;
  long mu = 1;
};

struct EigenRecord {
  double lambda = 0.0;
  std::vector<ModeEntry> modes;  ///< lexicographic by indices
  int multiplicity = 0;
  long mu = 0;  ///< largest nodal count among the merged modes
};

// ---------------------------------------------------------------------------
// Nodal counts

namespace detail {

inline void check_radial_mode(const ModeIndices& mode, long min_angular) {
  if (mode.size() != 2) throw DomainError("radial mode must be (angular index, k)");
  if (mode[0] < min_angular) throw DomainError("angular index out of range");
  if (mode[1] < 1) throw DomainError("radial index k must be >= 1");
}

}  // namespace detail

/// Number of nodal domains of the basis eigenfunction with the given mode.
[[nodiscard]] inline long nodal_count(const DomainSpec& domain, const ModeIndices& mode,
                                      BoundaryCondition bc = BoundaryCondition::dirichlet) {
  if (bc == BoundaryCondition::neumann && !domain.is_disk()) {
    throw DomainError("Neumann spectra are supported for the disk only");
  }
  return std::visit(
      [&](const auto& d) -> long {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, Orthotope>) {
          if (mode.size() != d.lengths.size()) throw DomainError("mode arity != dimension");
          long mu = 1;
          for (long m : mode) {
            if (m < 1) throw DomainError("orthotope mode indices must be >= 1");
            mu *= m;
          }
          return mu;
        } else if constexpr (std::is_same_v<T, Disk> || std::is_same_v<T, Annulus>) {
          detail::check_radial_mode(mode, 0);
          const long nu = mode[0];
          const long k = mode[1];
          if (nu == 0) return bc == BoundaryCondition::neumann ? k + 1 : k;
          return 2 * nu * k;
        } else {
          detail::check_radial_mode(mode, 1);
          return mode[0] * mode[1];
        }
      },
      domain.kind());
}

// ---------------------------------------------------------------------------
// Weyl law

/// Leading Weyl term (2 pi)^{-N} omega_N |Omega| lambda^{N/2}.
[[nodiscard]] inline double weyl_count(const DomainSpec& domain, double lambda) {
  if (!(lambda > 0.0)) throw DomainError("weyl_count: lambda must be > 0");
  const double n = domain.dimension();
  const double log_omega = 0.5 * n * std::log(std::numbers::pi) - std::lgamma(0.5 * n + 1.0);
  const double log_count =
      -n * std::log(2.0 * std::numbers::pi) + log_omega + std::log(domain.volume()) +
      0.5 * n * std::log(lambda);
  return std::exp(log_count);
}

// ---------------------------------------------------------------------------
// Enumeration

namespace detail {

using special::Order;
using special::ZeroIndex;

inline std::vector<ModeEntry> orthotope_modes(const Orthotope& o, double lambda_max) {
  const std::size_t n = o.lengths.size();
  const double pi2 = std::numbers::pi * std::numbers::pi;
  // Rough lattice count guard: volume of the positive octant of the ellipsoid.
  {
    const DomainSpec tmp = DomainSpec::orthotope(o.lengths);
    if (weyl_count(tmp, lambda_max) > kMaxOrthotopeModes) {
      throw CapExceeded("orthotope enumeration would exceed " +
                        std::to_string(static_cast<long long>(kMaxOrthotopeModes)) + " modes");
    }
  }
  std::vector<ModeEntry> out;
  ModeIndices m(n, 1);
  std::function<void(std::size_t, double)> rec = [&](std::size_t dim, double partial) {
    // Remaining dimensions contribute at least pi^2 / a_i^2 each.
    double floor_rest = 0.0;
    for (std::size_t i = dim + 1; i < n; ++i) floor_rest += pi2 / (o.lengths[i] * o.lengths[i]);
    for (long mi = 1;; ++mi) {
      const double term = pi2 * static_cast<double>(mi * mi) / (o.lengths[dim] * o.lengths[dim]);
      const double lam = partial + term;
      if (lam + floor_rest > lambda_max) break;
      m[dim] = mi;
      if (dim + 1 == n) {
        ModeEntry e;
        e.indices = m;
        e.lambda = lam;
        e.multiplicity = 1;
        e.mu = 1;
        for (long v : m) e.mu *= v;
        out.push_back(std::move(e));
      } else {
        rec(dim + 1, lam);
      }
    }
    m[dim] = 1;
  };
  rec(0, 0.0);
  return out;
}

/// Radial family description: Bessel order for angular index `idx`, the
/// zero finder, cutoffs and the mode bookkeeping.
struct RadialFamily {
  long first_index = 0;
  long last_index = 0;
  std::function<double(long)> order_of;
  std::function<std::vector<ModeEntry>(long)> modes_for;
};

inline RadialFamily radial_family(const DomainSpec& domain, BoundaryCondition bc,
                                  double lambda_max) {
  const double sqrt_lam = std::sqrt(lambda_max);
  const double mc1 = std::sqrt(std::max(0.0, lambda_max - 9.0 * std::numbers::pi *
                                                              std::numbers::pi / 16.0));
  RadialFamily fam;
  const auto* disk = std::get_if<Disk>(&domain.kind());
  const auto* sector = std::get_if<Sector>(&domain.kind());
  const auto* annulus = std::get_if<Annulus>(&domain.kind());
  const auto* asector = std::get_if<AnnularSector>(&domain.kind());

  if (disk || annulus) {
    fam.first_index = 0;
    fam.order_of = [](long idx) { return static_cast<double>(idx); };
  } else {
    const double alpha = sector ? sector->alpha : asector->alpha;
    fam.first_index = 1;
    fam.order_of = [alpha](long idx) {
      return static_cast<double>(idx) * std::numbers::pi / alpha;
    };
  }
  // Cutoffs: McCann for disk/sector Dirichlet (j_{nu,1} > sqrt(nu^2 + 9 pi^2/16)),
  // a_{nu,k} >= nu for annular domains, j'_{nu,1} >= nu for Neumann.
  double order_cap = sqrt_lam;
  if ((disk && bc == BoundaryCondition::dirichlet) || sector) order_cap = mc1;
  long last = fam.first_index - 1;
  while (fam.order_of(last + 1) <= order_cap) ++last;
  fam.last_index = last;
  if (last >= fam.first_index && fam.order_of(last) > special::kNuMax) {
    throw CapExceeded("enumeration needs Bessel order " + std::to_string(fam.order_of(last)) +
                      " above cap " + std::to_string(special::kNuMax));
  }

  const bool angular_pair = (disk != nullptr) || (annulus != nullptr);
  auto make_entry = [&domain, bc, angular_pair](long idx, long k, double order, double z) {
    ModeEntry e;
    e.indices = {idx, k};
    e.lambda = z * z;
    e.order = order;
    e.multiplicity = (angular_pair && idx > 0) ? 2 : 1;
    e.mu = nodal_count(domain, e.indices, bc);
    return e;
  };

  if (disk || sector) {
    const bool neumann = bc == BoundaryCondition::neumann;
    fam.modes_for = [=, of = fam.order_of](long idx) {
      std::vector<ModeEntry> out;
      const double nu = of(idx);
      const Order order(nu);
      for (long k = 1;; ++k) {
        if (!neumann) {
          const double wall = special::mccann_bound(order, ZeroIndex(k));
          if (wall * wall > lambda_max) break;
        }
        const double z = neumann ? special::bessel_zero_prime(order, ZeroIndex(k))
                                 : special::bessel_zero(order, ZeroIndex(k));
        if (z * z > lambda_max) break;
        out.push_back(make_entry(idx, k, nu, z));
      }
      return out;
    };
  } else {
    const double r = annulus ? annulus->r : asector->r;
    fam.modes_for = [=, of = fam.order_of](long idx) {
      std::vector<ModeEntry> out;
      const double nu = of(idx);
      const Order order(nu);
      const crossprod::AnnulusRadius rr(r);
      const double spacing = std::numbers::pi / (1.0 - r);
      double prev = 0.0;
      for (long k = 1;; ++k) {
        const double seed = k == 1 ? std::max(nu, spacing) : prev + spacing;
        const double z = crossprod::cross_zero(order, ZeroIndex(k), rr, seed).a;
        if (z * z > lambda_max) break;
        out.push_back(make_entry(idx, k, nu, z));
        prev = z;
      }
      return out;
    };
  }
  return fam;
}

inline bool lex_less(const ModeIndices& a, const ModeIndices& b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

}  // namespace detail

/// Every mode with eigenvalue <= lambda_max, unmerged, sorted by
/// (lambda, indices).
[[nodiscard]] inline std::vector<ModeEntry> raw_modes(
    const DomainSpec& domain, double lambda_max,
    BoundaryCondition bc = BoundaryCondition::dirichlet, unsigned workers = 0) {
  if (!(lambda_max > 0.0) || !std::isfinite(lambda_max)) {
    throw DomainError("lambda_max must be positive and finite");
  }
  if (bc == BoundaryCondition::neumann && !domain.is_disk()) {
    throw DomainError("Neumann spectra are supported for the disk only");
  }
  std::vector<ModeEntry> modes;
  if (const auto* o = std::get_if<Orthotope>(&domain.kind())) {
    modes = detail::orthotope_modes(*o, lambda_max);
  } else {
    const auto fam = detail::radial_family(domain, bc, lambda_max);
    const long count = fam.last_index - fam.first_index + 1;
    std::vector<std::vector<ModeEntry>> per_index(static_cast<std::size_t>(std::max(0L, count)));
    pleijel::detail::parallel_for(per_index.size(), workers, [&](std::size_t i) {
      const long idx = fam.first_index + static_cast<long>(i);
      try {
        per_index[i] = fam.modes_for(idx);
      } catch (const ConvergenceError& e) {
        std::ostringstream os;
        os << e.what() << " (while enumerating angular index " << idx << ")";
        throw ConvergenceError(os.str());
      }
    });
    for (auto& v : per_index) {
      for (auto& e : v) modes.push_back(std::move(e));
    }
  }
  std::sort(modes.begin(), modes.end(), [](const ModeEntry& a, const ModeEntry& b) {
    if (a.lambda != b.lambda) return a.lambda < b.lambda;
    return detail::lex_less(a.indices, b.indices);
  });
  return modes;
}

/// Merge modes whose eigenvalues agree to kMergeRelTol. Input sorted by lambda.
[[nodiscard]] inline std::vector<EigenRecord> merge_modes(std::vector<ModeEntry> modes) {
  std::vector<EigenRecord> out;
  for (auto& m : modes) {
    if (!out.empty()) {
      const double last = out.back().modes.back().lambda;
      if (std::abs(m.lambda - last) <= kMergeRelTol * std::max(m.lambda, last)) {
        out.back().modes.push_back(std::move(m));
        continue;
      }
    }
    EigenRecord rec;
    rec.lambda = m.lambda;
    rec.modes.push_back(std::move(m));
    out.push_back(std::move(rec));
  }
  for (auto& rec : out) {
    std::sort(rec.modes.begin(), rec.modes.end(), [](const ModeEntry& a, const ModeEntry& b) {
      return detail::lex_less(a.indices, b.indices);
    });
    rec.multiplicity = 0;
    rec.mu = 0;
    for (const auto& m : rec.modes) {
      rec.multiplicity += m.multiplicity;
      rec.mu = std::max(rec.mu, m.mu);
    }
  }
  return out;
}

/// Inverse of merge_modes: the flat mode list sorted by (lambda, indices).
[[nodiscard]] inline std::vector<ModeEntry> split_records(const std::vector<EigenRecord>& records) {
  std::vector<ModeEntry> out;
  for (const auto& rec : records) {
    for (const auto& m : rec.modes) out.push_back(m);
  }
  std::sort(out.begin(), out.end(), [](const ModeEntry& a, const ModeEntry& b) {
    if (a.lambda != b.lambda) return a.lambda < b.lambda;
    return detail::lex_less(a.indices, b.indices);
  });
  return out;
}

/// All eigenvalues <= lambda_max, merged and sorted ascending.
[[nodiscard]] inline std::vector<EigenRecord> enumerate(
    const DomainSpec& domain, double lambda_max,
    BoundaryCondition bc = BoundaryCondition::dirichlet, unsigned workers = 0) {
  auto records = merge_modes(raw_modes(domain, lambda_max, bc, workers));
  if (records.empty()) {
    throw DomainError("lambda_max = " + std::to_string(lambda_max) +
                      " is below the first eigenvalue");
  }
  return records;
}

/// Number of eigenvalues <= lambda counted with multiplicity.
[[nodiscard]] inline long count_with_multiplicity(const std::vector<EigenRecord>& records,
                                                  double lambda) {
  long n = 0;
  for (const auto& r : records) {
    if (r.lambda > lambda) break;
    n += r.multiplicity;
  }
  return n;
}

// ---------------------------------------------------------------------------
// Ratio traces mu(phi_n) / n

struct TraceRow {
  long n = 0;
  double lambda = 0.0;
  long mu = 0;
  double ratio = 0.0;
  double running_sup = 0.0;
  ModeIndices mode;
};

struct RatioTrace {
  DomainSpec domain = DomainSpec::disk();
  BoundaryCondition bc = BoundaryCondition::dirichlet;
  double lambda_max = 0.0;
  double lambda_from = 0.0;
  /// True when some eigenvalue had several distinct mode tuples merged.
  bool merged = false;
  std::vector<TraceRow> rows;

  [[nodiscard]] double final_sup() const { return rows.empty() ? 0.0 : rows.back().running_sup; }
};

/// mu(phi_n) / n for every eigenfunction index n with lambda_n <= lambda_max.
///
/// n advances by the multiplicity of each record (all copies share mu).
/// Rows with lambda < lambda_from are skipped but still counted in n; the
/// running sup accumulates over the emitted rows only, so lambda_from > 0
/// gives a tail estimate of the limsup. For the Neumann disk the constant
/// eigenfunction (lambda = 0, mu = 1) is row n = 1.
[[nodiscard]] inline RatioTrace ratio_trace(const DomainSpec& domain, double lambda_max,
                                            BoundaryCondition bc = BoundaryCondition::dirichlet,
                                            double lambda_from = 0.0, unsigned workers = 0) {
  if (lambda_from < 0.0 || lambda_from > lambda_max) {
    throw DomainError("lambda_from must lie in [0, lambda_max]");
  }
  RatioTrace trace;
  trace.domain = domain;
  trace.bc = bc;
  trace.lambda_max = lambda_max;
  trace.lambda_from = lambda_from;
  const auto records = enumerate(domain, lambda_max, bc, workers);

  long n = 0;
  double sup = 0.0;
  auto emit = [&](double lambda, long mu, const ModeIndices& mode) {
    ++n;
    if (lambda < lambda_from) return;
    const double ratio = static_cast<double>(mu) / static_cast<double>(n);
    sup = std::max(sup, ratio);
    trace.rows.push_back({n, lambda, mu, ratio, sup, mode});
  };
  if (bc == BoundaryCondition::neumann) emit(0.0, 1, {});
  for (const auto& rec : records) {
    if (rec.modes.size() > 1) trace.merged = true;
    for (const auto& m : rec.modes) {
      for (int c = 0; c < m.multiplicity; ++c) emit(rec.lambda, m.mu, m.indices);
    }
  }
  return trace;
}

// ---------------------------------------------------------------------------
// Near degeneracies

struct NearPair {
  ModeIndices mode_a;
  ModeIndices mode_b;
  double lambda_a = 0.0;
  double lambda_b = 0.0;
  double gap = 0.0;  ///< |lambda_a - lambda_b| / max(lambda_a, lambda_b)
};

struct NearDegeneracyReport {
  double gap_tol = 0.0;
  std::vector<NearPair> pairs;
};

/// All pairs of distinct modes whose eigenvalues differ by at most gap_tol
/// (relative).
[[nodiscard]] inline NearDegeneracyReport near_degeneracies(const DomainSpec& domain,
                                                            double lambda_max, double gap_tol,
                                                            unsigned workers = 0) {
  if (!(gap_tol >= 0.0)) throw DomainError("gap_tol must be >= 0");
  const auto modes = raw_modes(domain, lambda_max, BoundaryCondition::dirichlet, workers);
  NearDegeneracyReport report;
  report.gap_tol = gap_tol;
  for (std::size_t i = 0; i < modes.size(); ++i) {
    for (std::size_t j = i + 1; j < modes.size(); ++j) {
      const double gap = (modes[j].lambda - modes[i].lambda) / modes[j].lambda;
      if (gap > gap_tol) break;
      if (modes[i].indices == modes[j].indices) continue;
      report.pairs.push_back(
          {modes[i].indices, modes[j].indices, modes[i].lambda, modes[j].lambda, gap});
    }
  }
  return report;
}

}  // namespace pleijel::spectra
