#include "dilatlab/registry.hpp"

#include <optional>

#include "dilatlab/errors.hpp"
#include "dilatlab/example_structures.hpp"
#include "dilatlab/sr_dilatation.hpp"

namespace dilatlab {

namespace {

std::optional<double> parse_suffix(const std::string& name, const std::string& prefix) {
  if (name.rfind(prefix, 0) != 0) return std::nullopt;
  const std::string rest = name.substr(prefix.size());
  if (rest.empty()) return std::nullopt;
  std::size_t used = 0;
  try {
    const double v = std::stod(rest, &used);
    if (used != rest.size()) return std::nullopt;
    return v;
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

}  // namespace

Registry Registry::builtin() {
  Registry r;
  for (std::size_t n = 1; n <= 3; ++n) {
    r.add("euclidean" + std::to_string(n), [n] { return euclidean(n); });
  }
  for (int variant : {1, 2}) {
    const std::string suffix = variant == 2 ? "-v2" : "";
    r.add("riemannian-identity" + suffix, [variant] { return riemannian_diffeo(identity_diffeo(2), variant); });
    r.add("riemannian-shear" + suffix, [variant] { return riemannian_diffeo(shear_quadratic(), variant); });
    r.add("riemannian-tanh" + suffix, [variant] { return riemannian_diffeo(tanh_perturbation(), variant); });
  }
  for (const char* a : {"0.3", "0.5", "0.9"}) {
    r.add(std::string("snowflake-") + a, [v = std::stod(a)] { return snowflake_structure(euclidean(2), v); });
  }
  for (const char* t : {"0.0", "0.5", "1.0"}) {
    r.add(std::string("complex-") + t, [v = std::stod(t)] { return complex_dilatation(v); });
  }
  r.add("heisenberg", [] { return heisenberg_structure(); });
  r.add("heisenberg-warped", [] {
    const WarpedHeisenberg w = warped_heisenberg();
    DilatationStructure ds = sr_dilatation(w.frame, w.space, "heisenberg-warped");
    ds.origin = Point::Zero(3);
    return ds;
  });
  return r;
}

void Registry::add(const std::string& name, Factory make) { entries_[name] = std::move(make); }

bool Registry::contains(const std::string& name) const {
  if (entries_.count(name)) return true;
  if (auto a = parse_suffix(name, "snowflake-")) return *a > 0.0 && *a <= 1.0;
  return parse_suffix(name, "complex-").has_value();
}

DilatationStructure Registry::make(const std::string& name) const {
  if (auto it = entries_.find(name); it != entries_.end()) return it->second();
  if (auto a = parse_suffix(name, "snowflake-"); a && *a > 0.0 && *a <= 1.0) {
    return snowflake_structure(euclidean(2), *a);
  }
  if (auto t = parse_suffix(name, "complex-")) return complex_dilatation(*t);
  throw Error(ErrorKind::Config, "structure: unknown name '" + name + "'");
}

std::vector<std::string> Registry::names() const {
  std::vector<std::string> out;
  for (const auto& [k, v] : entries_) out.push_back(k);
  return out;
}

}  // namespace dilatlab
