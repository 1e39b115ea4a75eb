#pragma once

// Subcommands behind the `warpcurv` executable. Each returns the process exit
// code and writes its report to `out`, diagnostics to `err`.
//
// Exit codes:
//   0  success
//   1  a tolerance / threshold check failed
//   2  bad manifest, expression or command-line input
//   3  evaluation left the valid domain (DomainError, NonpositiveWarp, ...)
//   4  verify skipped more than 10% of its samples
//   5  geodesic norm drift exceeded the abort threshold (StepTooLarge)

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace warpcurv {

inline constexpr const char* kVersion = "1.0.0";

enum ExitCode : int {
  kExitOk = 0,
  kExitTolerance = 1,
  kExitInput = 2,
  kExitDomain = 3,
  kExitTooManySkips = 4,
  kExitStepTooLarge = 5,
};

struct CurvatureArgs {
  std::filesystem::path manifest;
  std::string point;  // comma-separated product coordinates
  bool oracle = false;
  std::optional<double> check_tolerance;
  std::optional<std::string> convention;
};

struct VerifyArgs {
  std::filesystem::path manifest;
  int samples = 100;
  std::uint64_t seed = 0;
  std::vector<std::string> box;  // "lo..hi" per coordinate; empty → manifest sample_box
  double tolerance = 1e-5;
  std::optional<std::string> convention;
  std::optional<std::filesystem::path> out;
};

struct GeodesicArgs {
  std::filesystem::path manifest;
  std::string init;  // "pos;vel"
  double s_end = 1.0;
  double step = 1e-3;
  std::string rhs = "full";  // full | split | both
  std::optional<std::filesystem::path> out;
  double abort_drift = 1e-3;
  double drift_tolerance = 1e-8;  // relative to 1 + |norm(0)|
  double path_tolerance = 1e-8;
};

int cmd_curvature(const CurvatureArgs& args, std::ostream& out, std::ostream& err);
int cmd_verify(const VerifyArgs& args, std::ostream& out, std::ostream& err);
int cmd_geodesic(const GeodesicArgs& args, std::ostream& out, std::ostream& err);

/// Parses "a,b,c" into doubles; throws UsageError on malformed input.
std::vector<double> parse_real_list(const std::string& text);

/// 17 significant digits, round-trip exact.
std::string format_real(double v);

}  // namespace warpcurv
