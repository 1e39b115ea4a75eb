#include "warpcurv/commands.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <ostream>
#include <random>
#include <sstream>

#include <json.hpp>

#include "warpcurv/curvature_closed.hpp"
#include "warpcurv/curvature_oracle.hpp"
#include "warpcurv/geodesics.hpp"
#include "warpcurv/manifest.hpp"

namespace warpcurv {

using json = nlohmann::json;

std::string format_real(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

std::string strip(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

double parse_real(const std::string& raw) {
  const std::string s = strip(raw);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v))
    throw UsageError("not a real number: '" + raw + "'");
  return v;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) parts.push_back(cur);
  if (!s.empty() && s.back() == sep) parts.emplace_back();
  return parts;
}

/// Maps library exceptions onto exit codes; anything else propagates.
int guarded(std::ostream& err, const std::function<int()>& body) {
  try {
    return body();
  } catch (const StepTooLarge& e) {
    err << "error: StepTooLarge: " << e.what() << '\n';
    return kExitStepTooLarge;
  } catch (const DomainExit& e) {
    err << "error: DomainExit: " << e.what() << " (last valid s = " << format_real(e.s()) << ")\n";
    return kExitDomain;
  } catch (const NonpositiveWarp& e) {
    err << "error: NonpositiveWarp: " << e.what() << '\n';
    return kExitDomain;
  } catch (const DomainError& e) {
    err << "error: DomainError: " << e.what() << '\n';
    return kExitDomain;
  } catch (const DegenerateMetric& e) {
    err << "error: DegenerateMetric: " << e.what() << '\n';
    return kExitDomain;
  } catch (const StencilDomainError& e) {
    err << "error: StencilDomainError: " << e.what() << '\n';
    return kExitDomain;
  } catch (const NumericalInstability& e) {
    err << "error: NumericalInstability: " << e.what() << '\n';
    return kExitDomain;
  } catch (const DegeneratePlane& e) {
    err << "error: DegeneratePlane: " << e.what() << '\n';
    return kExitDomain;
  } catch (const SyntaxError& e) {
    err << "error: SyntaxError: " << e.what() << '\n';
    return kExitInput;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitInput;
  }
}

Convention effective_convention(const Manifest& m, const std::optional<std::string>& flag) {
  if (!flag) return m.convention;
  if (*flag == "paper") return Convention::Paper;
  if (*flag == "common") return Convention::Common;
  throw UsageError("--convention must be 'paper' or 'common'");
}

ProductPoint product_point(const Manifest& m, const std::vector<double>& coords) {
  if (coords.size() != m.spec.dim())
    throw UsageError("expected " + std::to_string(m.spec.dim()) + " coordinates, got " +
                     std::to_string(coords.size()));
  const Eigen::Map<const Eigen::VectorXd> z(coords.data(), static_cast<Eigen::Index>(coords.size()));
  return ProductPoint::split(z, m.spec.base_dim());
}

json to_json(const CurvatureBundle& b) {
  const auto n = b.ricci.rows();
  json gamma = json::array();
  for (Eigen::Index k = 0; k < n; ++k) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < n; ++i) {
      json row = json::array();
      for (Eigen::Index j = 0; j < n; ++j) row.push_back(b.christoffel(k, i, j));
      rows.push_back(std::move(row));
    }
    gamma.push_back(std::move(rows));
  }
  json riemann = json::array();
  for (Eigen::Index i = 0; i < n; ++i) {
    json a = json::array();
    for (Eigen::Index j = 0; j < n; ++j) {
      json c = json::array();
      for (Eigen::Index k = 0; k < n; ++k) {
        json row = json::array();
        for (Eigen::Index l = 0; l < n; ++l) row.push_back(b.riemann(i, j, k, l));
        c.push_back(std::move(row));
      }
      a.push_back(std::move(c));
    }
    riemann.push_back(std::move(a));
  }
  json ricci = json::array();
  for (Eigen::Index i = 0; i < n; ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < n; ++j) row.push_back(b.ricci(i, j));
    ricci.push_back(std::move(row));
  }
  return {{"christoffel", gamma}, {"riemann", riemann}, {"ricci", ricci}, {"scalar", b.scalar}};
}

json to_json(const BundleReport& r) {
  json tensors = json::object();
  for (const auto& t : r.tensors)
    tensors[t.tensor] = {{"max_abs_dev", t.max_abs}, {"max_rel_dev", t.max_rel}, {"worst_index", t.worst_index}};
  return {{"tensors", tensors},
          {"max_abs_dev", r.max_abs()},
          {"max_rel_dev", r.max_rel()},
          {"worst_tensor", r.worst().tensor}};
}

std::vector<std::pair<double, double>> parse_box(const std::vector<std::string>& flags) {
  std::vector<std::pair<double, double>> box;
  for (const auto& flag : flags)
    for (const auto& item : split(flag, ',')) {
      const auto dots = item.find("..");
      if (dots == std::string::npos) throw UsageError("--box entries must look like lo..hi, got '" + item + "'");
      const double lo = parse_real(item.substr(0, dots));
      const double hi = parse_real(item.substr(dots + 2));
      if (!(lo <= hi)) throw UsageError("--box entry '" + item + "' has lo > hi");
      box.emplace_back(lo, hi);
    }
  return box;
}

/// Uniform double in [0, 1) from the top 53 bits; identical on every platform.
double unit_uniform(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

bool is_domain_failure(const std::exception_ptr& ep) {
  try {
    std::rethrow_exception(ep);
  } catch (const DomainError&) {
    return true;
  } catch (const NonpositiveWarp&) {
    return true;
  } catch (const DegenerateMetric&) {
    return true;
  } catch (const StencilDomainError&) {
    return true;
  } catch (const NumericalInstability&) {
    return true;
  } catch (...) {
    return false;
  }
}

}  // namespace

std::vector<double> parse_real_list(const std::string& text) {
  std::vector<double> values;
  for (const auto& part : split(text, ',')) values.push_back(parse_real(part));
  if (values.empty()) throw UsageError("empty coordinate list");
  return values;
}

// ---------------------------------------------------------------------------

int cmd_curvature(const CurvatureArgs& args, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const Manifest m = load_manifest(args.manifest);
    const Convention convention = effective_convention(m, args.convention);
    const std::vector<double> coords = parse_real_list(args.point);
    const ProductPoint pt = product_point(m, coords);

    double scalar_formula = 0.0;
    const CurvatureBundle closed = curvature_closed(m.spec, pt, {m.policy, convention}, &scalar_formula);
    json report = {{"manifest", m.name},
                   {"convention", to_string(convention)},
                   {"point", coords},
                   {"closed", to_json(closed)}};
    report["closed"]["scalar_formula"] = scalar_formula;

    int code = kExitOk;
    if (args.oracle || args.check_tolerance) {
      const CurvatureBundle oracle = curvature_fd(as_plain_metric(m.spec), pt.concat(), m.policy, convention);
      const BundleReport cmp = compare_bundles(closed, oracle);
      report["oracle"] = to_json(oracle);
      report["comparison"] = to_json(cmp);
      if (args.check_tolerance) {
        const bool ok = cmp.max_rel() <= *args.check_tolerance;
        report["check"] = {{"tolerance", *args.check_tolerance}, {"passed", ok}};
        if (!ok) {
          err << "check failed: " << cmp.worst().tensor << " deviates by " << format_real(cmp.max_rel())
              << " (tolerance " << format_real(*args.check_tolerance) << ")\n";
          code = kExitTolerance;
        }
      }
    }
    out << report.dump(2) << '\n';
    return code;
  });
}

int cmd_verify(const VerifyArgs& args, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const Manifest m = load_manifest(args.manifest);
    const Convention convention = effective_convention(m, args.convention);
    if (args.samples < 1) throw UsageError("--samples must be >= 1");
    auto box = parse_box(args.box);
    if (box.empty()) box = m.sample_box;
    if (box.empty()) throw UsageError("no --box given and the manifest has no sample_box");
    if (box.size() != m.spec.dim())
      throw UsageError("--box needs " + std::to_string(m.spec.dim()) + " ranges, got " + std::to_string(box.size()));

    std::ofstream file;
    if (args.out) {
      file.open(*args.out);
      if (!file) throw UsageError("cannot open output '" + args.out->string() + "'");
    }
    std::ostream& csv = args.out ? static_cast<std::ostream&>(file) : out;

    const MetricSpec plain = as_plain_metric(m.spec);
    std::mt19937_64 rng(args.seed);

    csv << "# warpcurv " << kVersion << " verify\n";
    csv << "index";
    for (std::size_t i = 0; i < m.spec.dim(); ++i) csv << ",x" << i;
    csv << ",tensor,max_abs_dev,max_rel_dev\n";

    int skipped = 0;
    bool within = true;
    double worst = 0.0;
    std::vector<double> coords(m.spec.dim());
    for (int s = 0; s < args.samples; ++s) {
      for (std::size_t i = 0; i < coords.size(); ++i)
        coords[i] = box[i].first + unit_uniform(rng) * (box[i].second - box[i].first);
      const ProductPoint pt = product_point(m, coords);
      BundleReport cmp;
      try {
        const CurvatureBundle closed = curvature_closed(m.spec, pt, {m.policy, convention});
        const CurvatureBundle oracle = curvature_fd(plain, pt.concat(), m.policy, convention);
        cmp = compare_bundles(closed, oracle);
      } catch (const Error& e) {
        if (!is_domain_failure(std::current_exception())) throw;
        ++skipped;
        err << "skipped sample " << s << ": " << e.what() << '\n';
        continue;
      }
      for (const auto& t : cmp.tensors) {
        csv << s;
        for (double c : coords) csv << ',' << format_real(c);
        csv << ',' << t.tensor << ',' << format_real(t.max_abs) << ',' << format_real(t.max_rel) << '\n';
        if (!(t.max_rel <= args.tolerance)) within = false;
        worst = std::max(worst, t.max_rel);
      }
    }
    err << "verify: " << (args.samples - skipped) << " samples evaluated, " << skipped
        << " skipped, worst relative deviation " << format_real(worst) << '\n';
    if (10 * skipped > args.samples) return static_cast<int>(kExitTooManySkips);
    return within ? static_cast<int>(kExitOk) : static_cast<int>(kExitTolerance);
  });
}

int cmd_geodesic(const GeodesicArgs& args, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const Manifest m = load_manifest(args.manifest);
    const auto halves = split(args.init, ';');
    if (halves.size() != 2) throw UsageError("--init must look like \"pos;vel\"");
    const std::vector<double> pos = parse_real_list(halves[0]);
    const std::vector<double> vel = parse_real_list(halves[1]);
    if (vel.size() != m.spec.dim())
      throw UsageError("velocity needs " + std::to_string(m.spec.dim()) + " components");
    if (!(args.step > 0.0)) throw UsageError("--step must be positive");

    std::vector<RhsChoice> choices;
    if (args.rhs == "full")
      choices = {RhsChoice::Full};
    else if (args.rhs == "split")
      choices = {RhsChoice::Split};
    else if (args.rhs == "both")
      choices = {RhsChoice::Full, RhsChoice::Split};
    else
      throw UsageError("--rhs must be full, split or both");

    const GeodesicState initial{0.0, product_point(m, pos),
                                Eigen::Map<const Eigen::VectorXd>(vel.data(), static_cast<Eigen::Index>(vel.size()))};
    if (!(args.s_end > initial.s)) throw UsageError("--s-end must be positive");

    std::vector<Trajectory> runs;
    for (RhsChoice c : choices) runs.push_back(integrate(m.spec, initial, args.s_end, args.step, c, {args.abort_drift}));

    std::ofstream file;
    if (args.out) {
      file.open(*args.out);
      if (!file) throw UsageError("cannot open output '" + args.out->string() + "'");
    }
    std::ostream& csv = args.out ? static_cast<std::ostream&>(file) : out;

    csv << "# warpcurv " << kVersion << " geodesic\n";
    const std::size_t dim = m.spec.dim();
    bool ok = true;
    for (std::size_t r = 0; r < runs.size(); ++r) {
      csv << "# rhs=" << (choices[r] == RhsChoice::Full ? "full" : "split") << '\n';
      csv << 's';
      for (std::size_t i = 0; i < dim; ++i) csv << ",x" << i;
      for (std::size_t i = 0; i < dim; ++i) csv << ",v" << i;
      csv << ",norm\n";
      const Trajectory& t = runs[r];
      for (std::size_t k = 0; k < t.samples.size(); ++k) {
        const GeodesicState& st = t.samples[k];
        csv << format_real(st.s);
        const Point z = st.position.concat();
        for (Eigen::Index i = 0; i < z.size(); ++i) csv << ',' << format_real(z(i));
        for (Eigen::Index i = 0; i < st.velocity.size(); ++i) csv << ',' << format_real(st.velocity(i));
        csv << ',' << format_real(t.norm_history[k]) << '\n';
      }
      const double drift = max_norm_drift(t);
      csv << "# norm_drift," << format_real(drift) << '\n';
      if (!(drift <= args.drift_tolerance * (1.0 + std::abs(t.norm_history.front())))) {
        err << "norm drift " << format_real(drift) << " exceeds tolerance\n";
        ok = false;
      }
    }
    if (runs.size() == 2) {
      double dev = 0.0;
      for (std::size_t k = 0; k < runs[0].samples.size(); ++k)
        dev = std::max(dev, (runs[0].samples[k].position.concat() - runs[1].samples[k].position.concat())
                                .cwiseAbs()
                                .maxCoeff());
      csv << "# max_deviation," << format_real(dev) << '\n';
      if (!(dev <= args.path_tolerance)) {
        err << "full/split trajectories deviate by " << format_real(dev) << '\n';
        ok = false;
      }
    }
    return ok ? static_cast<int>(kExitOk) : static_cast<int>(kExitTolerance);
  });
}

}  // namespace warpcurv
