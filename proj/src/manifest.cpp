#include "dilatlab/manifest.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "dilatlab/errors.hpp"
#include "dilatlab/sr_dilatation.hpp"

namespace dilatlab {

namespace {

using nlohmann::json;

[[noreturn]] void bad(const std::string& field, const std::string& why) {
  throw Error(ErrorKind::Config, "manifest field '" + field + "': " + why);
}

Point to_point(const json& j, std::size_t n, const std::string& field) {
  if (!j.is_array() || j.size() != n) bad(field, "expected an array of " + std::to_string(n) + " numbers");
  Point p(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    if (!j[i].is_number()) bad(field, "expected numbers");
    p[static_cast<Eigen::Index>(i)] = j[i].get<double>();
  }
  return p;
}

VectorField to_field(const json& j, std::size_t n, const std::string& field) {
  if (!j.is_array() || j.size() != n) bad(field, "expected " + std::to_string(n) + " components");
  PolyField comps;
  for (std::size_t c = 0; c < n; ++c) {
    const std::string where = field + "[" + std::to_string(c) + "]";
    if (!j[c].is_array()) bad(where, "expected a list of monomials");
    Polynomial p(n);
    for (const auto& mono : j[c]) {
      if (!mono.is_object() || !mono.contains("coef") || !mono.contains("exps")) {
        bad(where, "monomials need 'coef' and 'exps'");
      }
      if (!mono["coef"].is_number()) bad(where + ".coef", "expected a number");
      const auto& e = mono["exps"];
      if (!e.is_array() || e.size() != n) bad(where + ".exps", "expected " + std::to_string(n) + " exponents");
      std::vector<int> exps;
      for (const auto& k : e) {
        if (!k.is_number_integer() || k.get<int>() < 0) bad(where + ".exps", "exponents must be nonnegative integers");
        exps.push_back(k.get<int>());
      }
      p.add_term(mono["coef"].get<double>(), std::move(exps));
    }
    comps.push_back(std::move(p));
  }
  return VectorField::from_polynomials(std::move(comps));
}

double number_or(const json& j, const char* key, double fallback) {
  if (!j.contains(key)) return fallback;
  if (!j[key].is_number()) bad(key, "expected a number");
  return j[key].get<double>();
}

}  // namespace

FrameManifest parse_manifest(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::Config, std::string("manifest is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) bad("<root>", "expected an object");
  if (!j.contains("schema") || !j["schema"].is_number_integer() || j["schema"].get<int>() != kManifestSchema) {
    bad("schema", "expected " + std::to_string(kManifestSchema));
  }
  if (!j.contains("name") || !j["name"].is_string() || j["name"].get<std::string>().empty()) {
    bad("name", "expected a nonempty string");
  }
  if (!j.contains("dim") || !j["dim"].is_number_integer() || j["dim"].get<int>() < 1) {
    bad("dim", "expected a positive integer");
  }
  FrameManifest m;
  m.name = j["name"].get<std::string>();
  const auto n = static_cast<std::size_t>(j["dim"].get<int>());

  if (!j.contains("generators") || !j["generators"].is_array() || j["generators"].empty()) {
    bad("generators", "expected a nonempty list of fields");
  }
  std::vector<VectorField> gens;
  for (std::size_t i = 0; i < j["generators"].size(); ++i) {
    gens.push_back(to_field(j["generators"][i], n, "generators[" + std::to_string(i) + "]"));
  }
  m.origin = j.contains("origin") ? to_point(j["origin"], n, "origin") : Point(Point::Zero(static_cast<Eigen::Index>(n)));
  std::vector<Point> probes;
  if (j.contains("probes")) {
    if (!j["probes"].is_array() || j["probes"].empty()) bad("probes", "expected a nonempty list of points");
    for (std::size_t i = 0; i < j["probes"].size(); ++i) {
      probes.push_back(to_point(j["probes"][i], n, "probes[" + std::to_string(i) + "]"));
    }
  } else {
    probes.push_back(m.origin);
  }
  const double half = number_or(j, "chart_half_width", 10.0);
  const double inj = number_or(j, "injectivity_radius", 0.5);
  m.working_radius = number_or(j, "working_radius", 0.5);
  if (!(half > 0.0)) bad("chart_half_width", "must be positive");
  if (!(inj > 0.0)) bad("injectivity_radius", "must be positive");
  if (!(m.working_radius > 0.0)) bad("working_radius", "must be positive");

  if (j.contains("cc")) {
    const json& c = j["cc"];
    if (!c.is_object()) bad("cc", "expected an object");
    auto count = [&](const char* key, std::size_t fallback) {
      if (!c.contains(key)) return fallback;
      if (!c[key].is_number_integer() || c[key].get<int>() < 1) bad(std::string("cc.") + key, "expected a positive integer");
      return static_cast<std::size_t>(c[key].get<int>());
    };
    m.cc.segments = count("segments", m.cc.segments);
    m.cc.starts = count("starts", m.cc.starts);
    m.cc.stages = count("stages", m.cc.stages);
  }

  try {
    if (!j.contains("fields")) {
      if (j.contains("degrees")) bad("degrees", "only allowed together with 'fields'");
      AdaptedFrameOptions afo;
      afo.chart_box = Box::cube(n, half);
      afo.injectivity_radius = inj;
      m.frame = build_adapted_frame(gens, probes, afo);
    } else {
      if (!j["fields"].is_array()) bad("fields", "expected a list of fields");
      std::vector<VectorField> all = gens;
      for (std::size_t i = 0; i < j["fields"].size(); ++i) {
        all.push_back(to_field(j["fields"][i], n, "fields[" + std::to_string(i) + "]"));
      }
      std::vector<int> degrees;
      if (j.contains("degrees")) {
        if (!j["degrees"].is_array() || j["degrees"].size() != all.size()) {
          bad("degrees", "expected one degree per field");
        }
        for (const auto& d : j["degrees"]) {
          if (!d.is_number_integer()) bad("degrees", "expected integers");
          degrees.push_back(d.get<int>());
        }
      } else {
        AdaptedFrameOptions afo;
        degrees = derive_degrees(gens, all, probes, afo);
      }
      m.frame = Frame(std::move(all), std::move(degrees), Box::cube(n, half), inj);
    }
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::Config) throw;
    bad(j.contains("fields") ? "fields" : "generators", e.what());
  }
  return m;
}

FrameManifest load_manifest(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Config, "manifest: cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_manifest(ss.str());
}

DilatationStructure manifest_structure(const FrameManifest& m) {
  MetricSpace space;
  space.dim = m.frame.dim();
  space.chart_box = m.frame.chart_box();
  space.distance = [frame = m.frame, cc = m.cc](const Point& p, const Point& q) {
    return cc_distance(frame, p, q, cc);
  };
  // A unit-speed horizontal path moves at most sup |[X_1 .. X_m]|_2 per unit
  // length. The supremum over the box it can reach is estimated on Halton
  // points and the box grown until the estimate settles.
  space.ball_box = [frame = m.frame](const Point& c, double r) {
    const auto rank = static_cast<Eigen::Index>(frame.distribution_rank());
    double speed = frame.matrix_at(c).leftCols(rank).norm();
    for (int round = 0; round < 4; ++round) {
      const Box reach = Box::around(c, Point::Constant(c.size(), 1.5 * r * speed));
      double s = speed;
      for (std::uint64_t k = 1; k <= 64; ++k) {
        const Point p = reach.lo + halton(k, c.size()).cwiseProduct(reach.hi - reach.lo);
        s = std::max(s, frame.matrix_at(p).leftCols(rank).norm());
      }
      if (s <= speed) break;
      speed = s;
    }
    return Box::around(c, Point::Constant(c.size(), 1.5 * r * speed));
  };
  DilatationStructure ds = sr_dilatation(m.frame, std::move(space), m.name);
  ds.origin = m.origin;
  ds.working_radius = m.working_radius;
  return ds;
}

}  // namespace dilatlab
