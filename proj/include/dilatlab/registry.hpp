#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "dilatlab/dilatation.hpp"

namespace dilatlab {

/// Name -> structure factory. Besides the listed names, "snowflake-<a>" and
/// "complex-<theta>" resolve for any parameter in range.
class Registry {
 public:
  using Factory = std::function<DilatationStructure()>;

  /// euclidean1..3, riemannian-{identity,shear,tanh}[-v2], snowflake-{0.3,0.5,0.9},
  /// complex-{0.0,0.5,1.0}, heisenberg, heisenberg-warped.
  static Registry builtin();

  void add(const std::string& name, Factory make);
  bool contains(const std::string& name) const;
  /// Throws Config for unknown names.
  DilatationStructure make(const std::string& name) const;
  std::vector<std::string> names() const;

 private:
  std::map<std::string, Factory> entries_;
};

}  // namespace dilatlab
