// pleijel: command-line front end. Every subcommand prints one table as CSV
// (default) or JSON.

#include <cstdlib>
#include <functional>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#ifdef PLEIJEL_CLI11_SINGLE_HEADER
#include <CLI11.hpp>
#else
#include <CLI/CLI.hpp>
#endif

#include "pleijel/commands.hpp"
#include "pleijel/detail/parallel.hpp"

namespace {

namespace cmd = pleijel::commands;

// PLEIJEL_WORKERS caps the thread count; unset means hardware concurrency.
unsigned worker_cap() {
  const unsigned hw = pleijel::detail::default_workers();
  const char* env = std::getenv("PLEIJEL_WORKERS");
  if (env == nullptr || *env == '\0') return hw;
  const long v = cmd::parse_long(env, "PLEIJEL_WORKERS");
  if (v < 1) throw pleijel::DomainError("PLEIJEL_WORKERS must be >= 1");
  return std::min<unsigned>(hw, static_cast<unsigned>(v));
}

void add_domain_options(CLI::App* sub, cmd::DomainArgs& d) {
  sub->add_option("--domain", d.kind, "disk, sector, annulus, annular-sector or orthotope")
      ->capture_default_str();
  sub->add_option("--alpha", d.alpha, "sector opening angle");
  sub->add_option("--r", d.r, "inner radius of the annulus");
  sub->add_option("--lengths", d.lengths, "orthotope side lengths, comma separated");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Pleijel constants, Bessel zeros and nodal-count traces"};
  app.require_subcommand(1);
  app.fallthrough();

  pleijel::io::OutputSpec out;
  std::string format = "csv";
  app.add_option("--format", format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  app.add_option("--output,-o", out.path, "output file (default: standard output)");
  app.add_option("--precision", out.precision, "significant digits")
      ->check(CLI::Range(4, 17))
      ->capture_default_str();

  std::function<pleijel::io::Table()> run;

  // constants
  int n_max = 2;
  auto* constants = app.add_subcommand("constants", "gamma(N), rho(N) and their ratios");
  constants->alias("cmd_constants");
  constants->add_option("--n-max", n_max, "largest dimension N")
      ->check(CLI::Range(2, 1'000'000))
      ->capture_default_str();
  constants->callback([&] { run = [&] { return cmd::constants_table(n_max); }; });

  // disk
  double tolerance = 1e-8;
  std::optional<double> alpha;
  auto* disk = app.add_subcommand("disk", "maximize 8 x cos^2 theta(x) for the disk");
  disk->alias("cmd_disk");
  disk->add_option("--tolerance", tolerance, "bracket width for the maximizer")
      ->capture_default_str();
  disk->add_option("--alpha", alpha, "sector angle for the angular density k/nu");
  disk->callback([&] { run = [&] { return cmd::disk_table(tolerance, alpha); }; });

  // zeros
  double nu = 0.0;
  std::string k_range = "1:10";
  bool prime = false;
  auto* zeros = app.add_subcommand("zeros", "zeros of J_nu or J'_nu");
  zeros->alias("cmd_zeros");
  zeros->add_option("--nu", nu, "order")->required();
  zeros->add_option("--k", k_range, "index k or range lo:hi")->capture_default_str();
  zeros->add_flag("--prime", prime, "zeros of the derivative");
  zeros->callback(
      [&] { run = [&] { return cmd::zeros_table(nu, cmd::parse_index_range(k_range, "--k"), prime); }; });

  // cross
  double radius = 0.5;
  auto* cross = app.add_subcommand("cross", "zeros of the Bessel cross-product on an annulus");
  cross->alias("cmd_cross");
  cross->add_option("--nu", nu, "order")->required();
  cross->add_option("--r", radius, "inner radius")->required();
  cross->add_option("--k", k_range, "index k or range lo:hi")->capture_default_str();
  cross->callback([&] {
    run = [&] { return cmd::cross_table(nu, radius, cmd::parse_index_range(k_range, "--k")); };
  });

  // trace / spectrum / weyl / degeneracies share domain options
  cmd::DomainArgs dom;
  double lambda_max = 100.0;
  double lambda_from = 0.0;
  std::string bc = "dirichlet";
  unsigned workers = 0;

  auto* trace = app.add_subcommand("trace", "running mu(phi_n)/n over the spectrum");
  trace->alias("cmd_trace");
  add_domain_options(trace, dom);
  trace->add_option("--lambda-max", lambda_max, "largest eigenvalue")->capture_default_str();
  trace->add_option("--lambda-from", lambda_from, "first eigenvalue to emit")
      ->capture_default_str();
  trace->add_option("--bc", bc, "dirichlet or neumann")->capture_default_str();
  trace->callback([&] {
    run = [&] {
      return cmd::trace_table(cmd::make_domain(dom), lambda_max, cmd::parse_bc(bc), lambda_from,
                              workers);
    };
  });

  auto* spectrum = app.add_subcommand("spectrum", "merged eigenvalues with multiplicities");
  add_domain_options(spectrum, dom);
  spectrum->add_option("--lambda-max", lambda_max, "largest eigenvalue")->capture_default_str();
  spectrum->add_option("--bc", bc, "dirichlet or neumann")->capture_default_str();
  spectrum->callback([&] {
    run = [&] {
      return cmd::spectrum_table(cmd::make_domain(dom), lambda_max, cmd::parse_bc(bc), workers);
    };
  });

  std::string lambdas = "100,1000,10000";
  auto* weyl = app.add_subcommand("weyl", "eigenvalue counts against the Weyl term");
  add_domain_options(weyl, dom);
  weyl->add_option("--lambda", lambdas, "comma list or lo:hi:step")->capture_default_str();
  weyl->add_option("--bc", bc, "dirichlet or neumann")->capture_default_str();
  weyl->callback([&] {
    run = [&] {
      return cmd::weyl_table(cmd::make_domain(dom), cmd::parse_grid(lambdas, "--lambda"),
                             cmd::parse_bc(bc), workers);
    };
  });

  double gap_tol = 1e-6;
  auto* degen = app.add_subcommand("degeneracies", "pairs of modes with nearly equal eigenvalues");
  add_domain_options(degen, dom);
  degen->add_option("--lambda-max", lambda_max, "largest eigenvalue")->capture_default_str();
  degen->add_option("--gap", gap_tol, "relative gap threshold")->capture_default_str();
  degen->callback([&] {
    run = [&] {
      return cmd::degeneracies_table(cmd::make_domain(dom), lambda_max, gap_tol, workers);
    };
  });

  // scan
  std::vector<std::string> pairs;
  std::string r_bracket = "0.01:0.1";
  auto* scan = app.add_subcommand("scan", "radius where two annulus eigenvalues coincide");
  scan->alias("cmd_scan");
  scan->add_option("--pair", pairs, "mode nu,k (give twice)")->required()->expected(2);
  scan->add_option("--r", r_bracket, "radius bracket lo:hi")->capture_default_str();
  scan->callback([&] {
    run = [&] {
      const auto [lo, hi] = cmd::parse_interval(r_bracket, "--r");
      return cmd::scan_table(cmd::parse_mode_pair(pairs.at(0)), cmd::parse_mode_pair(pairs.at(1)),
                             lo, hi);
    };
  });

  // annulus-surrogate
  std::string x_grid = "0.1:2:0.1";
  long k_max = 64;
  auto* surrogate =
      app.add_subcommand("annulus-surrogate", "finite-k table of k^2 / a_{kx,k}^2");
  surrogate->alias("cmd_annulus_surrogate");
  surrogate->add_option("--r", radius, "inner radius")->required();
  surrogate->add_option("--x", x_grid, "grid lo:hi:step or comma list")->capture_default_str();
  surrogate->add_option("--k-max", k_max, "largest k")->capture_default_str();
  surrogate->callback([&] {
    run = [&] { return cmd::surrogate_table(radius, cmd::parse_grid(x_grid, "--x"), k_max); };
  });

  // audit
  double x_audit = 0.5;
  std::string k_list = "1,10,100";
  auto* audit = app.add_subcommand("audit", "check a_{kx,k} > 3.4 k / sqrt(1 - r^2)");
  audit->add_option("--r", radius, "inner radius")->required();
  audit->add_option("--x", x_audit, "ratio nu / k")->capture_default_str();
  audit->add_option("--k", k_list, "comma list of k")->capture_default_str();
  audit->callback([&] {
    run = [&] {
      std::vector<long> ks;
      for (auto part : cmd::split(k_list, ',')) ks.push_back(cmd::parse_long(part, "--k"));
      return cmd::audit_table(radius, x_audit, ks);
    };
  });

  // rect
  std::string sides;
  auto* rect = app.add_subcommand("rect", "rho(N) for an orthotope, with rationality flags");
  rect->add_option("--lengths", sides, "side lengths, comma separated")->required();
  rect->callback([&] {
    run = [&] {
      std::vector<double> v;
      for (auto part : cmd::split(sides, ',')) v.push_back(cmd::parse_double(part, "--lengths"));
      return cmd::rect_table(v);
    };
  });

  // bessel-diag (unlisted)
  std::string nus = "0,1,10";
  std::string xs = "0.5,5,50";
  auto* diag = app.add_subcommand("bessel-diag", "");
  diag->group("");
  diag->add_option("--nu", nus, "orders");
  diag->add_option("--x", xs, "arguments");
  diag->callback([&] {
    run = [&] {
      return cmd::bessel_diag_table(cmd::parse_grid(nus, "--nu"), cmd::parse_grid(xs, "--x"));
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "pleijel: usage error: " << e.what() << '\n';
    return 2;
  }

  try {
    out.format = format == "json" ? pleijel::io::Format::json : pleijel::io::Format::csv;
    workers = worker_cap();
    const auto table = run();
    pleijel::io::write(table, out, std::cout);
  } catch (const pleijel::DomainError& e) {
    std::cerr << "pleijel: invalid argument: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "pleijel: error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
