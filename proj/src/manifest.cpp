#include "warpcurv/manifest.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace warpcurv {

namespace {

using json = nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& message) {
  throw ManifestError(path + ": " + message);
}

const json& require(const json& obj, const std::string& key, const std::string& path) {
  if (!obj.is_object()) fail(path, "expected an object");
  const auto it = obj.find(key);
  if (it == obj.end()) fail(path, "missing required field '" + key + "'");
  return *it;
}

std::string require_string(const json& v, const std::string& path) {
  if (!v.is_string()) fail(path, "expected a string");
  return v.get<std::string>();
}

Expression parse_field(const json& v, std::size_t arity, const std::string& path) {
  // Numbers are accepted as constant expressions.
  std::string text;
  if (v.is_number())
    text = v.dump();
  else
    text = require_string(v, path);
  try {
    return parse_expression(text, arity);
  } catch (const SyntaxError& e) {
    throw SyntaxError(e.position(), e.detail() + " in " + path + " \"" + text + "\"");
  } catch (const UnknownIdentifier& e) {
    fail(path, e.what());
  } catch (const ArityViolation& e) {
    fail(path, e.what());
  }
}

std::string trimmed(const json& v) {
  if (v.is_number()) return v.dump();
  if (!v.is_string()) return {};
  std::string s;
  for (char c : v.get<std::string>())
    if (c != ' ' && c != '\t') s += c;
  return s;
}

MetricSpec parse_metric(const json& node, const std::string& path) {
  const json& dim_node = require(node, "dim", path);
  if (!dim_node.is_number_integer() || dim_node.get<long long>() < 1) fail(path + ".dim", "expected an integer >= 1");
  const auto dim = static_cast<std::size_t>(dim_node.get<long long>());
  std::string name = path;
  if (node.contains("name")) name = require_string(node["name"], path + ".name");

  const json& grid = require(node, "metric", path);
  const std::string gpath = path + ".metric";
  if (!grid.is_array() || grid.size() != dim) fail(gpath, "expected " + std::to_string(dim) + " rows");
  const bool upper = node.value("upper_triangular", false);

  for (std::size_t i = 0; i < dim; ++i) {
    const std::size_t expected = upper ? dim - i : dim;
    if (!grid[i].is_array() || grid[i].size() != expected)
      fail(gpath + "[" + std::to_string(i) + "]", "expected " + std::to_string(expected) + " entries");
  }

  std::vector<Expression> components;
  for (std::size_t i = 0; i < dim; ++i) {
    const json& row = grid[i];
    const std::string rpath = gpath + "[" + std::to_string(i) + "]";
    for (std::size_t j = i; j < dim; ++j) {
      const std::size_t col = upper ? j - i : j;
      const std::string epath = rpath + "[" + std::to_string(col) + "]";
      components.push_back(parse_field(row[col], dim, epath));
      if (!upper && j > i && trimmed(grid[j][i]) != trimmed(row[col]))
        fail(epath, "metric grid is not symmetric (set \"upper_triangular\": true to give only i <= j)");
    }
  }
  return MetricSpec(std::move(name), dim, std::move(components));
}

DiffPolicy parse_policy(const json& node, const std::string& path) {
  DiffPolicy p;
  if (!node.is_object()) fail(path, "expected an object");
  if (node.contains("base_step")) {
    if (!node["base_step"].is_number()) fail(path + ".base_step", "expected a number");
    p.base_step = node["base_step"].get<double>();
  }
  if (node.contains("richardson_levels")) {
    if (!node["richardson_levels"].is_number_integer()) fail(path + ".richardson_levels", "expected an integer");
    p.richardson_levels = node["richardson_levels"].get<int>();
  }
  if (node.contains("relative_scaling")) {
    if (!node["relative_scaling"].is_boolean()) fail(path + ".relative_scaling", "expected a boolean");
    p.relative_scaling = node["relative_scaling"].get<bool>();
  }
  try {
    p.validate();
  } catch (const Error& e) {
    fail(path, e.what());
  }
  return p;
}

}  // namespace

Convention parse_convention(const std::string& text) {
  if (text == "paper") return Convention::Paper;
  if (text == "common") return Convention::Common;
  throw ManifestError("convention must be \"paper\" or \"common\", got \"" + text + "\"");
}

std::string to_string(Convention c) { return c == Convention::Paper ? "paper" : "common"; }

Manifest parse_manifest(const std::string& json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ManifestError(std::string("invalid JSON: ") + e.what());
  }
  if (!root.is_object()) fail("$", "manifest must be a JSON object");

  MetricSpec base = parse_metric(require(root, "base", "$"), "base");
  MetricSpec fiber = parse_metric(require(root, "fiber", "$"), "fiber");
  Expression f = parse_field(require(root, "warp_f", "$"), base.dim(), "warp_f");
  Expression h = parse_field(require(root, "warp_h", "$"), fiber.dim(), "warp_h");

  std::string name = root.contains("name") ? require_string(root["name"], "name") : std::string();
  const std::size_t dim = base.dim() + fiber.dim();
  Manifest m{std::move(name), WarpedProductSpec(std::move(base), std::move(fiber), std::move(f), std::move(h))};

  if (root.contains("convention")) {
    try {
      m.convention = parse_convention(require_string(root["convention"], "convention"));
    } catch (const ManifestError& e) {
      fail("convention", e.what());
    }
  }
  if (root.contains("diff_policy")) m.policy = parse_policy(root["diff_policy"], "diff_policy");
  if (root.contains("sample_box")) {
    const json& box = root["sample_box"];
    if (!box.is_array() || box.size() != dim) fail("sample_box", "expected " + std::to_string(dim) + " [lo, hi] pairs");
    for (std::size_t i = 0; i < dim; ++i) {
      const json& r = box[i];
      const std::string rpath = "sample_box[" + std::to_string(i) + "]";
      if (!r.is_array() || r.size() != 2 || !r[0].is_number() || !r[1].is_number())
        fail(rpath, "expected [lo, hi]");
      const double lo = r[0].get<double>();
      const double hi = r[1].get<double>();
      if (!(lo <= hi)) fail(rpath, "lo must not exceed hi");
      m.sample_box.emplace_back(lo, hi);
    }
  }
  return m;
}

Manifest load_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ManifestError("cannot open manifest '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_manifest(buf.str());
}

}  // namespace warpcurv
