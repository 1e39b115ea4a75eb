#pragma once

// JSON manifests describing a doubly warped product:
//
//   {
//     "name": "unit-sphere",
//     "base":  {"name": "interval", "dim": 1, "metric": [["1"]]},
//     "fiber": {"name": "circle",   "dim": 1, "metric": [["1"]]},
//     "warp_f": "sin(x0)",            // on base coordinates
//     "warp_h": "1",                  // on fiber coordinates
//     "convention": "paper",          // optional, "paper" | "common"
//     "diff_policy": {"base_step": 1e-4, "richardson_levels": 2, "relative_scaling": true},
//     "sample_box": [[0.3, 2.8], [0, 6.28]]   // optional default for `verify`
//   }
//
// A metric grid is either the full symmetric dim×dim array, or, with
// "upper_triangular": true, rows of length dim, dim-1, ..., 1.

#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "warpcurv/curvature_oracle.hpp"
#include "warpcurv/warped.hpp"

namespace warpcurv {

struct Manifest {
  std::string name;
  WarpedProductSpec spec;
  Convention convention = Convention::Paper;
  DiffPolicy policy{};
  std::vector<std::pair<double, double>> sample_box{};
};

/// Throws ManifestError with the JSON path of the offending field; expression
/// errors keep the column reported by the parser.
Manifest parse_manifest(const std::string& json_text);
Manifest load_manifest(const std::filesystem::path& path);

Convention parse_convention(const std::string& text);
std::string to_string(Convention c);

}  // namespace warpcurv
