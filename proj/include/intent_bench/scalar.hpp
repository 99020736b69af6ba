#pragma once

#include <cmath>
#include <map>
#include <optional>
#include <string>
#include <variant>

#include <nlohmann/json.hpp>
#include <yaml-cpp/yaml.h>

#include "intent_bench/util.hpp"

namespace intent_bench {

// Leaf value of a configuration or intent. Integers are carried as doubles.
using Scalar = std::variant<bool, double, std::string>;

// Canonical leaf path ("core.upf.cpu_cores") to value, sorted by path.
using LeafMap = std::map<std::string, Scalar>;

inline bool is_number(const Scalar& s) { return std::holds_alternative<double>(s); }
inline bool is_string(const Scalar& s) { return std::holds_alternative<std::string>(s); }
inline bool is_bool(const Scalar& s) { return std::holds_alternative<bool>(s); }

inline bool is_integral(double v) { return std::isfinite(v) && v == std::floor(v); }

inline std::string to_string(const Scalar& s) {
  if (const auto* b = std::get_if<bool>(&s)) return *b ? "true" : "false";
  if (const auto* d = std::get_if<double>(&s)) return format_number(*d);
  return std::get<std::string>(s);
}

// Leaf equality used by accuracy scoring: numbers within a relative
// tolerance, strings exact after trimming, booleans exact. Mixed kinds never
// match.
inline bool scalar_matches(const Scalar& candidate, const Scalar& reference,
                           double rel_tol = 1e-6) {
  if (candidate.index() != reference.index()) return false;
  if (const auto* r = std::get_if<double>(&reference)) {
    const double c = std::get<double>(candidate);
    if (c == *r) return true;
    return std::fabs(c - *r) <= rel_tol * std::max(std::fabs(c), std::fabs(*r));
  }
  if (const auto* r = std::get_if<std::string>(&reference)) {
    return trim(std::get<std::string>(candidate)) == trim(*r);
  }
  return std::get<bool>(candidate) == std::get<bool>(reference);
}

// Interprets a YAML scalar node. Quoted scalars stay strings; plain scalars
// are read as bool, then number, then string. Null yields nullopt.
inline std::optional<Scalar> scalar_from_yaml(const YAML::Node& node) {
  if (!node.IsScalar()) return std::nullopt;
  const std::string& text = node.Scalar();
  if (node.Tag() == "!") return Scalar{text};
  const std::string lowered = to_lower(text);
  if (lowered == "true") return Scalar{true};
  if (lowered == "false") return Scalar{false};
  if (lowered == "~" || lowered == "null" || text.empty()) return std::nullopt;
  double v = 0;
  if (parse_number(text, v)) return Scalar{v};
  return Scalar{text};
}

inline std::optional<Scalar> scalar_from_json(const nlohmann::json& j) {
  if (j.is_boolean()) return Scalar{j.get<bool>()};
  if (j.is_number()) return Scalar{j.get<double>()};
  if (j.is_string()) return Scalar{j.get<std::string>()};
  return std::nullopt;
}

inline nlohmann::json scalar_to_json(const Scalar& s) {
  if (const auto* b = std::get_if<bool>(&s)) return *b;
  if (const auto* d = std::get_if<double>(&s)) {
    if (is_integral(*d) && std::fabs(*d) < 9e15) return static_cast<long long>(*d);
    return *d;
  }
  return std::get<std::string>(s);
}

// YAML text for a leaf. Strings are always double-quoted so they never
// re-read as numbers or booleans.
inline std::string scalar_to_yaml(const Scalar& s) {
  if (is_string(s)) return nlohmann::json(std::get<std::string>(s)).dump();
  return to_string(s);
}

}  // namespace intent_bench
