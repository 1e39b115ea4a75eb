// warpcurv: curvature and geodesics of doubly warped products.
//
//   warpcurv curvature <manifest> --point x0,x1,...  [--oracle] [--check TOL]
//   warpcurv verify    <manifest> [--samples N] [--seed S] [--box lo..hi ...] [--tol T] [--out PATH]
//   warpcurv geodesic  <manifest> --init "pos;vel" [--s-end S] [--step H] [--rhs full|split|both] [--out PATH]
//
// Expressions use x0, x1, ... for the coordinates of their own factor.
// Note that -x0^2 parses as -(x0^2).

#include <cstdlib>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "warpcurv/commands.hpp"

namespace {

std::uint64_t default_seed() {
  if (const char* env = std::getenv("WARPCURV_SEED")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      std::cerr << "warning: ignoring unparsable WARPCURV_SEED='" << env << "'\n";
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  using namespace warpcurv;

  CLI::App app{"Curvature and geodesics of doubly warped product manifolds.\n"
               "Note: in expressions -x0^2 parses as -(x0^2)."};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  std::optional<std::string> convention;
  app.add_option("--convention", convention, "Riemann sign convention (default: manifest, else paper)")
      ->check(CLI::IsMember({"paper", "common"}));

  CurvatureArgs ca;
  auto* curv = app.add_subcommand("curvature", "Closed-form curvature at one point, as JSON");
  curv->add_option("manifest", ca.manifest, "Manifest JSON")->required();
  curv->add_option("--point", ca.point, "Product coordinates, comma separated")->required();
  curv->add_flag("--oracle", ca.oracle, "Also compute the finite-difference oracle and compare");
  curv->add_option("--check", ca.check_tolerance, "Fail (exit 1) if the relative deviation exceeds TOL");

  VerifyArgs va;
  va.seed = default_seed();
  auto* ver = app.add_subcommand("verify", "Compare closed form and oracle at random points, as CSV");
  ver->add_option("manifest", va.manifest, "Manifest JSON")->required();
  ver->add_option("--samples", va.samples, "Number of sample points")->capture_default_str();
  ver->add_option("--seed", va.seed, "RNG seed (default: $WARPCURV_SEED or 0)");
  ver->add_option("--box", va.box, "lo..hi per coordinate (repeat or comma separate)");
  ver->add_option("--tol", va.tolerance, "Relative tolerance")->capture_default_str();
  ver->add_option("--out", va.out, "Write CSV here instead of stdout");

  GeodesicArgs ga;
  auto* geo = app.add_subcommand("geodesic", "Integrate a geodesic, as CSV");
  geo->add_option("manifest", ga.manifest, "Manifest JSON")->required();
  geo->add_option("--init", ga.init, "Initial data \"pos;vel\"")->required();
  geo->add_option("--s-end", ga.s_end, "Final affine parameter")->capture_default_str();
  geo->add_option("--step", ga.step, "RK4 step")->capture_default_str();
  geo->add_option("--rhs", ga.rhs, "Right-hand side")
      ->check(CLI::IsMember({"full", "split", "both"}))
      ->capture_default_str();
  geo->add_option("--out", ga.out, "Write CSV here instead of stdout");
  geo->add_option("--abort-drift", ga.abort_drift, "Relative norm drift that aborts the run")->capture_default_str();
  geo->add_option("--drift-tol", ga.drift_tolerance, "Allowed final norm drift")->capture_default_str();
  geo->add_option("--path-tol", ga.path_tolerance, "Allowed full/split deviation")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitInput;
  }

  if (*curv) {
    ca.convention = convention;
    return cmd_curvature(ca, std::cout, std::cerr);
  }
  if (*ver) {
    va.convention = convention;
    return cmd_verify(va, std::cout, std::cerr);
  }
  return cmd_geodesic(ga, std::cout, std::cerr);
}
