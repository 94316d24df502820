#pragma once

// Table builders behind each CLI subcommand. They take already-parsed
// arguments and return an io::Table, so tests can call them directly.

#include <charconv>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pleijel/constants.hpp"
#include "pleijel/crossprod.hpp"
#include "pleijel/error.hpp"
#include "pleijel/io.hpp"
#include "pleijel/special.hpp"
#include "pleijel/spectra.hpp"

namespace pleijel::commands {

using io::Table;
using spectra::BoundaryCondition;
using spectra::DomainSpec;

// ---------------------------------------------------------------------------
// Argument parsing helpers

[[nodiscard]] inline double parse_double(std::string_view s, std::string_view what) {
  double v = 0.0;
  const auto* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc{} || ptr != end) {
    throw DomainError(std::string(what) + ": cannot parse '" + std::string(s) + "' as a number");
  }
  return v;
}

[[nodiscard]] inline long parse_long(std::string_view s, std::string_view what) {
  long v = 0;
  const auto* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc{} || ptr != end) {
    throw DomainError(std::string(what) + ": cannot parse '" + std::string(s) + "' as an integer");
  }
  return v;
}

[[nodiscard]] inline std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    parts.push_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos
                                                                   : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

/// "lo:hi" as two doubles.
[[nodiscard]] inline std::pair<double, double> parse_interval(std::string_view s,
                                                              std::string_view what) {
  const auto p = split(s, ':');
  if (p.size() != 2) throw DomainError(std::string(what) + ": expected lo:hi");
  return {parse_double(p[0], what), parse_double(p[1], what)};
}

/// "k" or "lo:hi" (inclusive) as a list of integers.
[[nodiscard]] inline std::vector<long> parse_index_range(std::string_view s,
                                                         std::string_view what) {
  const auto p = split(s, ':');
  if (p.size() == 1) return {parse_long(p[0], what)};
  if (p.size() != 2) throw DomainError(std::string(what) + ": expected k or lo:hi");
  const long lo = parse_long(p[0], what);
  const long hi = parse_long(p[1], what);
  if (lo < 1 || hi < lo) throw DomainError(std::string(what) + ": need 1 <= lo <= hi");
  if (hi - lo > 10'000'000) throw DomainError(std::string(what) + ": range too long");
  std::vector<long> out;
  for (long k = lo; k <= hi; ++k) out.push_back(k);
  return out;
}

/// "lo:hi:step" (inclusive up to rounding) or a comma list.
[[nodiscard]] inline std::vector<double> parse_grid(std::string_view s, std::string_view what) {
  const auto p = split(s, ':');
  if (p.size() == 3) {
    const double lo = parse_double(p[0], what);
    const double hi = parse_double(p[1], what);
    const double step = parse_double(p[2], what);
    if (!(step > 0.0) || hi < lo) throw DomainError(std::string(what) + ": bad grid lo:hi:step");
    const auto n = static_cast<long>(std::floor((hi - lo) / step + 1e-9));
    if (n > 1'000'000) throw DomainError(std::string(what) + ": grid too large");
    std::vector<double> out;
    for (long i = 0; i <= n; ++i) out.push_back(lo + static_cast<double>(i) * step);
    return out;
  }
  if (p.size() != 1) throw DomainError(std::string(what) + ": expected lo:hi:step or a list");
  std::vector<double> out;
  for (auto part : split(s, ',')) out.push_back(parse_double(part, what));
  return out;
}

/// "nu,k".
[[nodiscard]] inline crossprod::ModePair parse_mode_pair(std::string_view s) {
  const auto p = split(s, ',');
  if (p.size() != 2) throw DomainError("pair: expected nu,k");
  return {parse_double(p[0], "pair"), parse_long(p[1], "pair")};
}

[[nodiscard]] inline BoundaryCondition parse_bc(std::string_view s) {
  if (s == "dirichlet") return BoundaryCondition::dirichlet;
  if (s == "neumann") return BoundaryCondition::neumann;
  throw DomainError("boundary condition must be dirichlet or neumann, got '" + std::string(s) +
                    "'");
}

struct DomainArgs {
  std::string kind = "disk";
  std::optional<double> alpha;
  std::optional<double> r;
  std::string lengths;  ///< comma list for orthotopes
};

[[nodiscard]] inline DomainSpec make_domain(const DomainArgs& a) {
  auto need = [&](const std::optional<double>& v, const char* flag) {
    if (!v) throw DomainError("domain " + a.kind + " requires " + flag);
    return *v;
  };
  if (a.kind == "disk") return DomainSpec::disk();
  if (a.kind == "sector") return DomainSpec::sector(need(a.alpha, "--alpha"));
  if (a.kind == "annulus") return DomainSpec::annulus(need(a.r, "--r"));
  if (a.kind == "annular-sector" || a.kind == "annular_sector") {
    return DomainSpec::annular_sector(need(a.r, "--r"), need(a.alpha, "--alpha"));
  }
  if (a.kind == "orthotope" || a.kind == "rectangle") {
    if (a.lengths.empty()) throw DomainError("domain orthotope requires --lengths");
    std::vector<double> sides;
    for (auto part : split(a.lengths, ',')) sides.push_back(parse_double(part, "--lengths"));
    return DomainSpec::orthotope(std::move(sides));
  }
  throw DomainError("unknown domain '" + a.kind + "'");
}

[[nodiscard]] inline io::json describe(const DomainSpec& d) {
  io::json j = io::json::object();
  j["kind"] = d.name();
  std::visit(
      [&](const auto& k) {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, spectra::Orthotope>) j["lengths"] = k.lengths;
        if constexpr (std::is_same_v<T, spectra::Sector>) j["alpha"] = k.alpha;
        if constexpr (std::is_same_v<T, spectra::Annulus>) j["r"] = k.r;
        if constexpr (std::is_same_v<T, spectra::AnnularSector>) {
          j["r"] = k.r;
          j["alpha"] = k.alpha;
        }
      },
      d.kind());
  j["dimension"] = d.dimension();
  j["volume"] = d.volume();
  return j;
}

namespace detail {

inline std::string mode_text(const spectra::ModeIndices& m) {
  std::string s;
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (i) s += ' ';
    s += std::to_string(m[i]);
  }
  return s;
}

inline io::json zero_tolerances() {
  return {{"zero_rel_tol", special::kZeroRelTol}};
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Commands

[[nodiscard]] inline Table constants_table(int n_max) {
  if (n_max < 2) throw DomainError("N_max must be >= 2, got " + std::to_string(n_max));
  Table t;
  t.columns = {"N", "gamma", "rho", "gamma_ratio", "rho_ratio"};
  t.meta["command"] = "constants";
  t.meta["n_max"] = n_max;
  t.meta["tolerances"] = detail::zero_tolerances();
  for (int n = 2; n <= n_max; ++n) {
    t.add_row({std::int64_t{n}, gamma_bound(n), rho(n), gamma_ratio(n), rho_ratio(n)});
  }
  return t;
}

[[nodiscard]] inline Table disk_table(double tolerance, std::optional<double> alpha) {
  const auto est = pleijel_disk(tolerance);
  Table t;
  t.columns = {"quantity", "value"};
  t.meta["command"] = "disk";
  t.meta["method"] = std::string(to_string(est.method));
  t.meta["tolerances"] = {{"requested", tolerance}, {"achieved_bracket", est.tolerance}};
  t.meta["notes"] = est.notes;
  t.meta["near_ties"] = est.near_ties;
  t.add_row({std::string("pl_disk"), est.value});
  t.add_row({std::string("x0"), *est.argmax_x});
  t.add_row({std::string("theta0"), *est.theta_at_argmax});
  t.add_row({std::string("bracket_width"), est.tolerance});
  t.add_row({std::string("near_ties"), static_cast<std::int64_t>(est.near_ties.size())});
  if (alpha) {
    t.meta["alpha"] = *alpha;
    t.add_row({std::string("sector_density"), sector_angular_density(*alpha, est)});
  }
  return t;
}

[[nodiscard]] inline Table zeros_table(double nu, const std::vector<long>& ks, bool prime) {
  const special::Order order(nu);
  Table t;
  t.columns = {"nu", "k", prime ? "jprime" : "j", "mccann_bound"};
  t.meta["command"] = "zeros";
  t.meta["nu"] = nu;
  t.meta["prime"] = prime;
  t.meta["tolerances"] = detail::zero_tolerances();
  for (long k : ks) {
    const special::ZeroIndex idx(k);
    const double z = prime ? special::bessel_zero_prime(order, idx) : special::bessel_zero(order, idx);
    t.add_row({nu, std::int64_t{k}, z, special::mccann_bound(order, idx)});
  }
  return t;
}

[[nodiscard]] inline Table cross_table(double nu, double r, const std::vector<long>& ks) {
  const special::Order order(nu);
  const crossprod::AnnulusRadius radius(r);
  Table t;
  t.columns = {"nu", "r", "k", "a", "lambda", "mcmahon"};
  t.meta["command"] = "cross";
  t.meta["tolerances"] = detail::zero_tolerances();
  std::optional<double> seed;
  for (long k : ks) {
    const special::ZeroIndex idx(k);
    const auto z = crossprod::cross_zero(order, idx, radius, seed);
    t.add_row({nu, r, std::int64_t{k}, z.a, z.a * z.a, crossprod::mcmahon_cross_guess(idx, radius)});
    seed = z.a;  // next zero lies above; scan upward from here
  }
  return t;
}

[[nodiscard]] inline Table trace_table(const DomainSpec& domain, double lambda_max,
                                       BoundaryCondition bc, double lambda_from,
                                       unsigned workers = 0) {
  const auto trace = spectra::ratio_trace(domain, lambda_max, bc, lambda_from, workers);
  Table t;
  t.columns = {"n", "lambda", "mu", "ratio", "running_sup", "mode"};
  t.meta["command"] = "trace";
  t.meta["domain"] = describe(domain);
  t.meta["bc"] = std::string(spectra::to_string(bc));
  t.meta["lambda_max"] = lambda_max;
  t.meta["lambda_from"] = lambda_from;
  t.meta["merged_degeneracies"] = trace.merged;
  t.meta["tolerances"] = {{"zero_rel_tol", special::kZeroRelTol},
                          {"merge_rel_tol", spectra::kMergeRelTol}};
  for (const auto& row : trace.rows) {
    t.add_row({std::int64_t{row.n}, row.lambda, std::int64_t{row.mu}, row.ratio, row.running_sup,
               detail::mode_text(row.mode)});
  }
  return t;
}

[[nodiscard]] inline Table spectrum_table(const DomainSpec& domain, double lambda_max,
                                          BoundaryCondition bc, unsigned workers = 0) {
  const auto records = spectra::enumerate(domain, lambda_max, bc, workers);
  Table t;
  t.columns = {"index", "lambda", "multiplicity", "mu", "modes"};
  t.meta["command"] = "spectrum";
  t.meta["domain"] = describe(domain);
  t.meta["bc"] = std::string(spectra::to_string(bc));
  t.meta["lambda_max"] = lambda_max;
  t.meta["tolerances"] = {{"zero_rel_tol", special::kZeroRelTol},
                          {"merge_rel_tol", spectra::kMergeRelTol}};
  std::int64_t i = 0;
  for (const auto& rec : records) {
    std::string modes;
    for (const auto& m : rec.modes) {
      if (!modes.empty()) modes += ';';
      modes += detail::mode_text(m.indices);
    }
    t.add_row({++i, rec.lambda, std::int64_t{rec.multiplicity}, std::int64_t{rec.mu}, modes});
  }
  return t;
}

[[nodiscard]] inline Table scan_table(crossprod::ModePair a, crossprod::ModePair b, double r_lo,
                                      double r_hi) {
  const auto found = crossprod::degeneracy_scan(a, b, crossprod::AnnulusRadius(r_lo),
                                                crossprod::AnnulusRadius(r_hi));
  Table t;
  t.columns = {"nu_a", "k_a", "nu_b", "k_b", "found", "r0", "lambda", "gap"};
  t.meta["command"] = "scan";
  t.meta["r_bracket"] = {r_lo, r_hi};
  t.meta["tolerances"] = {{"zero_rel_tol", special::kZeroRelTol}, {"r_abs_tol", 1e-13}};
  const double nan = std::numeric_limits<double>::quiet_NaN();
  t.add_row({a.nu, std::int64_t{a.k}, b.nu, std::int64_t{b.k}, found.has_value(),
             found ? found->r0 : nan, found ? found->lambda : nan, found ? found->gap : nan});
  return t;
}

[[nodiscard]] inline Table surrogate_table(double r, const std::vector<double>& x_grid, long k_max) {
  const auto s = crossprod::annulus_pleijel_surrogate(crossprod::AnnulusRadius(r), x_grid, k_max);
  Table t;
  t.columns = {"x", "k", "order", "a", "k2_over_a2"};
  t.meta["command"] = "annulus-surrogate";
  t.meta["r"] = r;
  t.meta["k_max"] = k_max;
  t.meta["estimate"] = s.estimate;
  t.meta["argmax_x"] = s.argmax_x;
  t.meta["argmax_on_grid_edge"] = s.argmax_x == x_grid.front() || s.argmax_x == x_grid.back();
  t.meta["tolerances"] = detail::zero_tolerances();
  for (const auto& row : s.table) {
    t.add_row({row.x, std::int64_t{row.k}, row.order, row.a, row.k2_over_a2});
  }
  return t;
}

[[nodiscard]] inline Table audit_table(double r, double x, const std::vector<long>& ks) {
  const auto rows = crossprod::corollary_bound_audit(crossprod::AnnulusRadius(r), x, ks);
  Table t;
  t.columns = {"k", "a", "bound", "pass"};
  t.meta["command"] = "audit";
  t.meta["r"] = r;
  t.meta["x"] = x;
  t.meta["tolerances"] = detail::zero_tolerances();
  for (const auto& row : rows) t.add_row({std::int64_t{row.k}, row.a, row.bound, row.pass});
  return t;
}

[[nodiscard]] inline Table degeneracies_table(const DomainSpec& domain, double lambda_max,
                                              double gap_tol, unsigned workers = 0) {
  const auto rep = spectra::near_degeneracies(domain, lambda_max, gap_tol, workers);
  Table t;
  t.columns = {"mode_a", "mode_b", "lambda_a", "lambda_b", "gap"};
  t.meta["command"] = "degeneracies";
  t.meta["domain"] = describe(domain);
  t.meta["lambda_max"] = lambda_max;
  t.meta["tolerances"] = {{"zero_rel_tol", special::kZeroRelTol}, {"gap_tol", gap_tol}};
  for (const auto& p : rep.pairs) {
    t.add_row({detail::mode_text(p.mode_a), detail::mode_text(p.mode_b), p.lambda_a, p.lambda_b,
               p.gap});
  }
  return t;
}

[[nodiscard]] inline Table weyl_table(const DomainSpec& domain, const std::vector<double>& lambdas,
                                      BoundaryCondition bc, unsigned workers = 0) {
  if (lambdas.empty()) throw DomainError("weyl: empty lambda list");
  double top = 0.0;
  for (double l : lambdas) top = std::max(top, l);
  const auto records = spectra::enumerate(domain, top, bc, workers);
  Table t;
  t.columns = {"lambda", "count", "weyl", "relative_error"};
  t.meta["command"] = "weyl";
  t.meta["domain"] = describe(domain);
  t.meta["bc"] = std::string(spectra::to_string(bc));
  t.meta["tolerances"] = detail::zero_tolerances();
  for (double l : lambdas) {
    long count = spectra::count_with_multiplicity(records, l);
    if (bc == BoundaryCondition::neumann) ++count;  // constant eigenfunction
    const double w = spectra::weyl_count(domain, l);
    t.add_row({l, std::int64_t{count}, w, static_cast<double>(count) / w - 1.0});
  }
  return t;
}

[[nodiscard]] inline Table rect_table(const std::vector<double>& lengths) {
  const auto est = rect_pleijel(lengths);
  Table t;
  t.columns = {"N", "rho", "hypothesis_violated"};
  t.meta["command"] = "rect";
  t.meta["lengths"] = lengths;
  t.meta["notes"] = est.notes;
  t.add_row({static_cast<std::int64_t>(lengths.size()), est.value, est.hypothesis_violated});
  return t;
}

[[nodiscard]] inline Table bessel_diag_table(const std::vector<double>& nus,
                                             const std::vector<double>& xs) {
  Table t;
  t.columns = {"x", "nu", "regime", "value", "est_error"};
  t.meta["command"] = "bessel-diag";
  for (double nu : nus) {
    const special::Order order(nu);
    for (double x : xs) {
      const auto s = special::regime_diagnostic(order, x);
      t.add_row({s.x, s.nu, std::string(special::to_string(s.regime)), s.value, s.est_error});
    }
  }
  return t;
}

}  // namespace pleijel::commands
