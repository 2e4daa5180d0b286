#include "dilatlab/cli.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "dilatlab/axioms.hpp"
#include "dilatlab/errors.hpp"
#include "dilatlab/gromov_hausdorff.hpp"
#include "dilatlab/heisenberg.hpp"
#include "dilatlab/manifest.hpp"
#include "dilatlab/registry.hpp"
#include "dilatlab/report_io.hpp"

namespace dilatlab {

namespace {

[[noreturn]] void config_error(const std::string& field, const std::string& why) {
  throw Error(ErrorKind::Config, field + ": " + why);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) {
    if (!cur.empty()) out.push_back(cur);
  }
  return out;
}

// Pulls --tol.<name> <value> and --tol.<name>=<value> out of argv, since
// their names are open-ended.
std::vector<std::string> extract_tolerances(int argc, const char* const* argv, std::map<std::string, double>& tols) {
  std::vector<std::string> rest;
  for (int i = 0; i < argc; ++i) {
    const std::string a = argv[i];
    if (a.rfind("--tol.", 0) != 0) {
      rest.push_back(a);
      continue;
    }
    std::string name = a.substr(6);
    std::string value;
    if (const auto eq = name.find('='); eq != std::string::npos) {
      value = name.substr(eq + 1);
      name = name.substr(0, eq);
    } else {
      if (i + 1 >= argc) config_error("--tol." + name, "missing value");
      value = argv[++i];
    }
    const auto& known = tolerance_names();
    if (std::find(known.begin(), known.end(), name) == known.end()) config_error("--tol." + name, "unknown tolerance");
    try {
      std::size_t used = 0;
      const double v = std::stod(value, &used);
      if (used != value.size() || !(v > 0.0)) throw std::invalid_argument(value);
      tols[name] = v;
    } catch (const std::exception&) {
      config_error("--tol." + name, "expected a positive number, got '" + value + "'");
    }
  }
  return rest;
}

Point parse_point(const std::string& s, std::size_t dim) {
  const auto parts = split(s, ',');
  if (parts.size() != dim) config_error("--point", "expected " + std::to_string(dim) + " comma-separated coordinates");
  Point p(static_cast<Eigen::Index>(dim));
  for (std::size_t i = 0; i < dim; ++i) {
    try {
      std::size_t used = 0;
      p[static_cast<Eigen::Index>(i)] = std::stod(parts[i], &used);
      if (used != parts[i].size()) throw std::invalid_argument(parts[i]);
    } catch (const std::exception&) {
      config_error("--point", "bad coordinate '" + parts[i] + "'");
    }
  }
  return p;
}

struct Resolved {
  DilatationStructure ds;
  Registry registry;
};

Resolved resolve(const RunConfig& cfg) {
  Resolved r{{}, Registry::builtin()};
  std::optional<DilatationStructure> from_manifest;
  if (!cfg.manifest.empty()) {
    const FrameManifest m = load_manifest(cfg.manifest);
    from_manifest = manifest_structure(m);
    r.registry.add(m.name, [ds = *from_manifest] { return ds; });
  }
  if (cfg.command == "list") return r;
  if (!cfg.structure.empty()) {
    if (!r.registry.contains(cfg.structure)) config_error("--structure", "unknown structure '" + cfg.structure + "'");
    r.ds = r.registry.make(cfg.structure);
  } else if (from_manifest) {
    r.ds = *from_manifest;
  } else {
    config_error("--structure", "required (or give --manifest)");
  }
  return r;
}

AxiomOptions axiom_options(const RunConfig& cfg, bool schedule_given) {
  AxiomOptions ax;
  if (schedule_given) ax.eps_schedule = geometric_schedule(cfg.eps_start, cfg.eps_count);
  for (const auto& [k, v] : cfg.tolerances) {
    if (k == "identity") ax.identity_tol = v;
    if (k == "continuity") ax.continuity_tol = v;
    if (k == "limit") ax.limit_tol = v;
    if (k == "convergence") ax.convergence.tol = v;
    if (k == "noise") ax.convergence.noise_floor = v;
  }
  return ax;
}

Verdict worst(Verdict a, Verdict b) {
  if (a == Verdict::Fail || b == Verdict::Fail) return Verdict::Fail;
  if (a == Verdict::Inconclusive || b == Verdict::Inconclusive) return Verdict::Inconclusive;
  return Verdict::Pass;
}

int exit_for(Verdict v) {
  switch (v) {
    case Verdict::Pass:
      return kExitPass;
    case Verdict::Fail:
      return kExitFail;
    case Verdict::Inconclusive:
      return kExitInconclusive;
  }
  return kExitFail;
}

// Closed-form Sigma^x for structures that have one.
std::optional<std::function<Point(const Point&, const Point&, const Point&)>> sigma_oracle(const std::string& name) {
  if (name == "heisenberg") {
    return [](const Point& x, const Point& u, const Point& v) {
      return heisenberg_group::mul(heisenberg_group::mul(u, heisenberg_group::inv(x)), v);
    };
  }
  const bool additive = name.rfind("euclidean", 0) == 0 || name.rfind("complex-", 0) == 0 ||
                        (name.rfind("snowflake-", 0) == 0 && name.find("-", 10) == std::string::npos) ||
                        name == "riemannian-identity" || name == "riemannian-shear" || name == "riemannian-tanh" ||
                        name == "riemannian-identity-v2";
  if (additive) return [](const Point& x, const Point& u, const Point& v) { return Point(u + v - x); };
  return std::nullopt;
}

void emit(const RunConfig& cfg, const std::vector<Report>& reports, const nlohmann::json& extra, std::ostream& out) {
  if (cfg.format == "json") {
    const std::string text = reports_to_json(reports, extra);
    if (cfg.out.empty()) {
      out << text;
    } else {
      std::ofstream f(cfg.out);
      if (!f) config_error("--out", "cannot write '" + cfg.out + "'");
      f << text;
    }
    return;
  }
  for (const auto& r : reports) {
    const std::string text = report_to_csv(r);
    if (cfg.out.empty()) {
      out << "# " << r.check << "\n" << text;
      continue;
    }
    std::string path = cfg.out;
    if (reports.size() > 1) {
      const auto dot = path.rfind('.');
      const std::string stem = dot == std::string::npos ? path : path.substr(0, dot);
      path = stem + "-" + r.check + ".csv";
    }
    std::ofstream f(path);
    if (!f) config_error("--out", "cannot write '" + path + "'");
    f << text;
  }
}

nlohmann::json header(const RunConfig& cfg, const std::string& structure, Verdict v) {
  return {{"command", cfg.command}, {"structure", structure}, {"seed", cfg.seed}, {"verdict", to_string(v)}};
}

}  // namespace

const std::vector<std::string>& tolerance_names() {
  static const std::vector<std::string> names = {"identity", "continuity", "limit", "convergence", "noise"};
  return names;
}

RunConfig parse_args(int argc, const char* const* argv, std::ostream& out) {
  RunConfig cfg;
  std::vector<std::string> args = extract_tolerances(argc, argv, cfg.tolerances);

  CLI::App app{"Numerical checks for dilatation structures"};
  app.require_subcommand(1);
  std::string checks;
  auto common = [&](CLI::App* sub) {
    sub->add_option("--structure", cfg.structure, "Registry name");
    sub->add_option("--manifest", cfg.manifest, "Frame manifest (JSON)");
    sub->add_option("--eps-start", cfg.eps_start, "First eps of the schedule");
    sub->add_option("--eps-count", cfg.eps_count, "Schedule length");
    sub->add_option("--samples", cfg.samples, "Sample count");
    sub->add_option("--seed", cfg.seed, "Sampling seed");
    sub->add_option("--out", cfg.out, "Output path (default stdout)");
    sub->add_option("--format", cfg.format, "json or csv");
    sub->add_option("--point", cfg.point, "Base point, comma separated");
  };
  CLI::App* verify = app.add_subcommand("verify", "Run axiom checks");
  common(verify);
  verify->add_option("--checks", checks, "Comma-separated checks");
  CLI::App* tangent = app.add_subcommand("tangent", "Tangent operations at a point");
  common(tangent);
  CLI::App* profile = app.add_subcommand("profile", "Metric profile against the tangent cone");
  common(profile);
  CLI::App* list = app.add_subcommand("list", "List structures");
  list->add_option("--manifest", cfg.manifest, "Frame manifest (JSON)");

  std::vector<std::string> rev(args.rbegin(), args.rend() - 1);
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return RunConfig{};
  } catch (const CLI::ParseError& e) {
    throw Error(ErrorKind::Config, std::string("arguments: ") + e.what());
  }

  CLI::App* chosen = app.get_subcommands().front();
  cfg.command = chosen->get_name();
  if (cfg.format != "json" && cfg.format != "csv") config_error("--format", "expected json or csv");
  if (cfg.samples < 1) config_error("--samples", "must be at least 1");
  if (cfg.eps_count < 2) config_error("--eps-count", "must be at least 2");
  if (!(cfg.eps_start > 0.0 && cfg.eps_start <= 1.0)) config_error("--eps-start", "must lie in (0,1]");
  if (cfg.command == "verify") {
    cfg.checks = checks.empty() ? std::vector<std::string>{"a0a1", "a2", "a3", "a4", "sigma", "conical"}
                                : split(checks, ',');
    for (const auto& c : cfg.checks) {
      const auto& known = suite_check_names();
      if (std::find(known.begin(), known.end(), c) == known.end()) config_error("--checks", "unknown check '" + c + "'");
    }
  }
  if (cfg.command != "list") {
    cfg.schedule_given = chosen->count("--eps-start") + chosen->count("--eps-count") > 0;
    cfg.samples_given = chosen->count("--samples") > 0;
  }
  return cfg;
}

int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  Resolved r = resolve(cfg);
  if (cfg.command == "list") {
    for (const auto& n : r.registry.names()) out << n << "\n";
    out << "manifest schema: " << kManifestSchema << "\n";
    return kExitPass;
  }
  const DilatationStructure& ds = r.ds;
  const bool schedule_given = cfg.schedule_given;
  const bool samples_given = cfg.samples_given;
  const AxiomOptions ax = axiom_options(cfg, schedule_given);
  const Point origin = ds.origin.size() == 0 ? Point(Point::Zero(static_cast<Eigen::Index>(ds.space.dim))) : ds.origin;
  const Point point = cfg.point.empty() ? origin : parse_point(cfg.point, ds.space.dim);

  if (cfg.command == "verify") {
    SuiteOptions so;
    so.checks = cfg.checks;
    so.samples = cfg.samples;
    so.seed = cfg.seed;
    so.axioms = ax;
    const SuiteResult res = run_suite(ds, so);
    emit(cfg, res.reports, header(cfg, ds.name, res.verdict), out);
    for (const auto& rep : res.reports) {
      err << rep.check << ": " << to_string(rep.verdict) << " (max residual " << rep.max_residual << ")\n";
    }
    return exit_for(res.verdict);
  }

  if (cfg.command == "tangent") {
    SamplingConfig sc;
    sc.seed = cfg.seed;
    const std::size_t count = samples_given ? cfg.samples : 8;
    const std::vector<Point> pts = sample_ball(ds.space, point, ds.technical_radius(), 2 * count, sc);
    const TangentData td = derive_sigma_inv(ds, point, ax);
    const auto oracle = sigma_oracle(ds.name);
    std::vector<std::pair<Point, Point>> pairs;
    for (std::size_t i = 0; i < count; ++i) pairs.emplace_back(pts[2 * i], pts[2 * i + 1]);

    nlohmann::json rows = nlohmann::json::array();
    std::vector<double> oracle_res;
    for (const auto& [u, v] : pairs) {
      const Point sigma = td.sigma_op(u, v);
      nlohmann::json row = {{"u", to_json(u)},
                            {"v", to_json(v)},
                            {"sigma", to_json(sigma)},
                            {"delta", to_json(td.delta_op(u, v))},
                            {"inv_u", to_json(td.inv_op(u))},
                            {"dx", td.dx(u, v)}};
      if (oracle) {
        const Point o = (*oracle)(point, u, v);
        row["sigma_oracle"] = to_json(o);
        row["oracle_residual"] = (sigma - o).norm();
        oracle_res.push_back((sigma - o).norm());
      }
      rows.push_back(row);
    }
    Report laws = check_inverse_laws(td, pairs, ax);
    laws.structure = ds.name;
    Report orc;
    orc.check = "sigma-oracle";
    orc.structure = ds.name;
    orc.tolerance = ax.limit_tol + 3.0 * td.tracker->max_error();
    for (std::size_t i = 0; i < oracle_res.size(); ++i) {
      orc.expect_below("Sigma differs from the closed form on pair " + std::to_string(i), oracle_res[i], orc.tolerance);
    }
    orc.metrics["oracle_available"] = oracle ? 1.0 : 0.0;
    const Verdict v = worst(laws.verdict, orc.verdict);
    nlohmann::json extra = header(cfg, ds.name, v);
    extra["point"] = to_json(point);
    extra["tangent"] = rows;
    emit(cfg, {laws, orc}, extra, out);
    return exit_for(v);
  }

  // profile
  ProfileOptions po;
  po.count = samples_given ? cfg.samples : 6;
  po.sampling.seed = cfg.seed;
  po.axioms = ax;
  po.axioms.eps_schedule.clear();
  if (po.count + 1 > GhOptions{}.size_limit) config_error("--samples", "profile supports at most 6 samples");
  const std::vector<double> mus = schedule_given ? geometric_schedule(cfg.eps_start, cfg.eps_count)
                                                 : geometric_schedule(0.5, 8);
  const Report rep = check_profile_theorem(ds, point, mus, po);
  emit(cfg, {rep}, header(cfg, ds.name, rep.verdict), out);
  return exit_for(rep.verdict);
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  try {
    const RunConfig cfg = parse_args(argc, argv, out);
    if (cfg.command.empty()) return kExitPass;
    return run(cfg, out, err);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return e.kind() == ErrorKind::Config ? kExitConfig : kExitFail;
  }
}

}  // namespace dilatlab
