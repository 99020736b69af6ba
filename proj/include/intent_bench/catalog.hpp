#pragma once

// CFS/RFS data model, on-disk catalog loading, reference validation and
// which/where product matching.

#include <algorithm>
#include <array>
#include <cmath>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>
#include <yaml-cpp/yaml.h>

#include "intent_bench/error.hpp"
#include "intent_bench/scalar.hpp"
#include "intent_bench/util.hpp"

namespace intent_bench {

enum class Category { kEmbb, kUrllc };
enum class UserExpertise { kExpert, kNonExpert };

inline std::string_view to_string(Category c) { return c == Category::kEmbb ? "eMBB" : "URLLC"; }

inline std::optional<Category> parse_category(std::string_view s) {
  const auto l = to_lower(trim(s));
  if (l == "embb") return Category::kEmbb;
  if (l == "urllc") return Category::kUrllc;
  return std::nullopt;
}

inline std::string_view to_string(UserExpertise e) {
  return e == UserExpertise::kExpert ? "expert" : "non-expert";
}

struct ProductSpec {
  std::string id;
  std::string name;
  Category category = Category::kEmbb;
  std::string region;
  double latency_ms = 0;
  double throughput_mbps = 0;
  long long max_users = 0;
  double reliability_pct = 0;
  std::string created_at;
  UserExpertise user_expertise = UserExpertise::kExpert;
};

struct ServiceOrder {
  std::string order_id;
  std::string product_id;
  std::map<std::string, Scalar> intents;
  std::map<std::string, std::string> metadata;
};

inline constexpr std::array<std::string_view, 3> kRanFunctions = {"RU", "DU", "CU"};
inline constexpr std::array<std::string_view, 6> kCoreFunctions = {"UPF", "AMF", "PCF",
                                                                  "SMF", "AUSF", "NSSF"};

struct NFConfig {
  double cpu_cores = 0;
  long long ram_mb = 0;
  long long storage_gb = 0;
  long long replicas = 0;
  // NF-specific radio or session parameters; keys never collide with the
  // resource fields above.
  std::map<std::string, Scalar> extra;

  bool operator==(const NFConfig&) const = default;
};

struct SliceConfig {
  double sst = 0;
  std::map<std::string, double> latency_budget_ms;  // segment -> ms
  double guaranteed_throughput_mbps = 0;
  std::map<std::string, Scalar> extra;

  double total_latency_budget_ms() const {
    double sum = 0;
    for (const auto& [_, v] : latency_budget_ms) sum += v;
    return sum;
  }

  bool operator==(const SliceConfig&) const = default;
};

struct ResourceConfig {
  std::string order_ref;
  std::map<std::string, NFConfig> ran;   // keyed by upper-case NF name
  std::map<std::string, NFConfig> core;
  SliceConfig slice;

  bool operator==(const ResourceConfig&) const = default;
};

struct Catalog {
  std::string name;
  std::vector<std::string> intent_vocabulary;
  std::vector<ProductSpec> products;  // sorted by id
  std::vector<ServiceOrder> orders;   // sorted by order_id

  std::size_t size() const { return orders.size(); }

  const ProductSpec* find_product(std::string_view id) const {
    for (const auto& p : products)
      if (p.id == id) return &p;
    return nullptr;
  }

  const ServiceOrder* find_order(std::string_view id) const {
    for (const auto& o : orders)
      if (o.order_id == id) return &o;
    return nullptr;
  }
};

struct ReferenceSet {
  std::map<std::string, ResourceConfig> pairs;

  const ResourceConfig& at(const std::string& order_id) const {
    auto it = pairs.find(order_id);
    if (it == pairs.end()) throw LoadError("no reference for order " + order_id);
    return it->second;
  }
  bool contains(const std::string& order_id) const { return pairs.count(order_id) != 0; }
};

struct LoadedCatalog {
  Catalog catalog;
  ReferenceSet references;
  std::string checksum;  // FNV-1a over every file in the directory
};

namespace detail {

inline constexpr std::array<std::string_view, 4> kResourceFields = {"cpu_cores", "ram_mb",
                                                                   "storage_gb", "replicas"};

inline bool is_resource_field(std::string_view key) {
  return std::find(kResourceFields.begin(), kResourceFields.end(), key) != kResourceFields.end();
}

inline double positive_number(const Scalar& v, const std::string& record,
                              const std::string& field) {
  if (!is_number(v)) throw ValidationError(record, field, "expected a number");
  const double d = std::get<double>(v);
  if (!(d > 0)) throw ValidationError(record, field, "must be strictly positive");
  return d;
}

inline long long positive_integer(const Scalar& v, const std::string& record,
                                  const std::string& field) {
  const double d = positive_number(v, record, field);
  if (!is_integral(d)) throw ValidationError(record, field, "expected an integer");
  return static_cast<long long>(d);
}

// Sets one leaf of an NF from a (lower-cased or original) key.
inline void set_nf_field(NFConfig& nf, const std::string& key, const Scalar& value,
                         const std::string& record, const std::string& path) {
  const auto lk = to_lower(key);
  if (lk == "cpu_cores") {
    nf.cpu_cores = positive_number(value, record, path);
  } else if (lk == "ram_mb") {
    nf.ram_mb = positive_integer(value, record, path);
  } else if (lk == "storage_gb") {
    nf.storage_gb = positive_integer(value, record, path);
  } else if (lk == "replicas") {
    nf.replicas = positive_integer(value, record, path);
  } else {
    nf.extra[key] = value;
  }
}

inline Scalar require_scalar(const YAML::Node& node, const std::string& record,
                             const std::string& path) {
  auto s = scalar_from_yaml(node);
  if (!s) throw ValidationError(record, path, "leaf must be a number, string or boolean");
  return *s;
}

inline std::map<std::string, NFConfig> parse_section(const YAML::Node& section,
                                                     std::span<const std::string_view> names,
                                                     const std::string& record,
                                                     const std::string& section_name) {
  if (!section || !section.IsMap())
    throw ValidationError(record, section_name, "missing or not a mapping");
  std::map<std::string, NFConfig> out;
  for (const auto& kv : section) {
    const auto raw_name = kv.first.as<std::string>();
    const auto nf_name = to_upper(trim(raw_name));
    const std::string path = section_name + "." + raw_name;
    if (std::find(names.begin(), names.end(), nf_name) == names.end())
      throw ValidationError(record, path, "unknown network function");
    if (out.count(nf_name)) throw ValidationError(record, path, "duplicate network function");
    if (!kv.second.IsMap()) throw ValidationError(record, path, "expected a mapping");
    NFConfig nf;
    std::set<std::string> seen;
    for (const auto& field : kv.second) {
      const auto key = field.first.as<std::string>();
      const std::string fpath = path + "." + key;
      if (!seen.insert(to_lower(key)).second)
        throw ValidationError(record, fpath, "duplicate key");
      set_nf_field(nf, key, require_scalar(field.second, record, fpath), record, fpath);
    }
    for (auto f : kResourceFields)
      if (!seen.count(std::string(f)))
        throw ValidationError(record, path + "." + std::string(f), "missing resource field");
    out.emplace(nf_name, std::move(nf));
  }
  for (auto n : names)
    if (!out.count(std::string(n)))
      throw ValidationError(record, section_name + "." + std::string(n),
                            "missing network function");
  return out;
}

inline SliceConfig parse_slice(const YAML::Node& node, const std::string& record) {
  if (!node || !node.IsMap()) throw ValidationError(record, "slice", "missing or not a mapping");
  SliceConfig slice;
  bool have_sst = false, have_budget = false, have_tp = false;
  std::set<std::string> seen;
  for (const auto& kv : node) {
    const auto key = kv.first.as<std::string>();
    const auto lk = to_lower(key);
    const std::string path = "slice." + key;
    if (!seen.insert(lk).second) throw ValidationError(record, path, "duplicate key");
    if (lk == "latency_budget_ms") {
      if (!kv.second.IsMap() || kv.second.size() == 0)
        throw ValidationError(record, path, "expected a non-empty mapping of segments");
      for (const auto& seg : kv.second) {
        const auto name = seg.first.as<std::string>();
        const std::string spath = path + "." + name;
        const Scalar v = require_scalar(seg.second, record, spath);
        if (!is_number(v) || std::get<double>(v) < 0)
          throw ValidationError(record, spath, "expected a non-negative number");
        if (!slice.latency_budget_ms.emplace(name, std::get<double>(v)).second)
          throw ValidationError(record, spath, "duplicate segment");
      }
      have_budget = true;
    } else if (lk == "sst") {
      const Scalar v = require_scalar(kv.second, record, path);
      slice.sst = static_cast<double>(positive_integer(v, record, path));
      have_sst = true;
    } else if (lk == "guaranteed_throughput_mbps") {
      slice.guaranteed_throughput_mbps =
          positive_number(require_scalar(kv.second, record, path), record, path);
      have_tp = true;
    } else {
      slice.extra[key] = require_scalar(kv.second, record, path);
    }
  }
  if (!have_sst) throw ValidationError(record, "slice.sst", "missing");
  if (!have_budget) throw ValidationError(record, "slice.latency_budget_ms", "missing");
  if (!have_tp) throw ValidationError(record, "slice.guaranteed_throughput_mbps", "missing");
  return slice;
}

inline std::string nf_yaml(const NFConfig& nf, int indent) {
  const std::string pad(static_cast<std::size_t>(indent), ' ');
  std::string out;
  out += pad + "cpu_cores: " + format_number(nf.cpu_cores) + "\n";
  out += pad + "ram_mb: " + std::to_string(nf.ram_mb) + "\n";
  out += pad + "storage_gb: " + std::to_string(nf.storage_gb) + "\n";
  out += pad + "replicas: " + std::to_string(nf.replicas) + "\n";
  for (const auto& [k, v] : nf.extra) out += pad + k + ": " + scalar_to_yaml(v) + "\n";
  return out;
}

}  // namespace detail

// Structural schema check plus parse. Throws ValidationError naming the
// record and the offending path.
inline ResourceConfig parse_resource_config(const YAML::Node& root, const std::string& record) {
  if (!root || !root.IsMap()) throw ValidationError(record, "<root>", "expected a mapping");
  ResourceConfig cfg;
  YAML::Node ran, core, slice;
  for (const auto& kv : root) {
    const auto key = to_lower(kv.first.as<std::string>());
    if (key == "order_ref") {
      auto s = scalar_from_yaml(kv.second);
      if (!s) throw ValidationError(record, "order_ref", "expected a scalar");
      cfg.order_ref = to_string(*s);
    } else if (key == "ran") {
      ran = kv.second;
    } else if (key == "core") {
      core = kv.second;
    } else if (key == "slice") {
      slice = kv.second;
    } else {
      throw ValidationError(record, kv.first.as<std::string>(), "unknown top-level section");
    }
  }
  cfg.ran = detail::parse_section(ran, kRanFunctions, record, "ran");
  cfg.core = detail::parse_section(core, kCoreFunctions, record, "core");
  cfg.slice = detail::parse_slice(slice, record);
  return cfg;
}

inline ResourceConfig parse_resource_config(std::string_view yaml_text, const std::string& record) {
  YAML::Node root;
  try {
    root = YAML::Load(std::string(yaml_text));
  } catch (const YAML::Exception& e) {
    throw ValidationError(record, "<document>", std::string("parse error: ") + e.what());
  }
  return parse_resource_config(root, record);
}

// Checks a config against the order it answers: the per-segment latency
// budgets must fit inside the ordered end-to-end latency.
inline void validate_against_order(const ResourceConfig& cfg, const ServiceOrder& order,
                                   const std::string& record) {
  auto it = order.intents.find("latency_ms");
  if (it == order.intents.end() || !is_number(it->second)) return;
  const double limit = std::get<double>(it->second);
  if (cfg.slice.total_latency_budget_ms() > limit * (1 + 1e-12))
    throw ValidationError(record, "slice.latency_budget_ms",
                          "segments sum to " + format_number(cfg.slice.total_latency_budget_ms()) +
                              " ms, above the ordered " + format_number(limit) + " ms");
}

// Canonical YAML rendering: NFs in RU, DU, CU / UPF, AMF, PCF, SMF, AUSF, NSSF
// order, resource fields first, extras sorted.
inline std::string to_yaml(const ResourceConfig& cfg) {
  std::string out;
  if (!cfg.order_ref.empty()) out += "order_ref: " + cfg.order_ref + "\n";
  auto section = [&](std::string_view name, const std::map<std::string, NFConfig>& nfs,
                     auto names) {
    out += std::string(name) + ":\n";
    for (auto n : names) {
      auto it = nfs.find(std::string(n));
      if (it == nfs.end()) continue;
      out += "  " + std::string(n) + ":\n" + detail::nf_yaml(it->second, 4);
    }
  };
  section("ran", cfg.ran, kRanFunctions);
  section("core", cfg.core, kCoreFunctions);
  out += "slice:\n";
  out += "  sst: " + format_number(cfg.slice.sst) + "\n";
  out += "  latency_budget_ms:\n";
  for (const auto& [seg, v] : cfg.slice.latency_budget_ms)
    out += "    " + seg + ": " + format_number(v) + "\n";
  out += "  guaranteed_throughput_mbps: " + format_number(cfg.slice.guaranteed_throughput_mbps) +
         "\n";
  for (const auto& [k, v] : cfg.slice.extra) out += "  " + k + ": " + scalar_to_yaml(v) + "\n";
  return out;
}

// Leaf paths "section.nf.field", keys lower-cased, values untouched. The
// order_ref tag is metadata, not a configuration leaf.
inline LeafMap flatten_config(const ResourceConfig& cfg) {
  LeafMap out;
  auto add_nfs = [&](std::string_view section, const std::map<std::string, NFConfig>& nfs) {
    for (const auto& [name, nf] : nfs) {
      const std::string prefix = std::string(section) + "." + to_lower(name) + ".";
      out[prefix + "cpu_cores"] = nf.cpu_cores;
      out[prefix + "ram_mb"] = static_cast<double>(nf.ram_mb);
      out[prefix + "storage_gb"] = static_cast<double>(nf.storage_gb);
      out[prefix + "replicas"] = static_cast<double>(nf.replicas);
      for (const auto& [k, v] : nf.extra) out[prefix + to_lower(k)] = v;
    }
  };
  add_nfs("ran", cfg.ran);
  add_nfs("core", cfg.core);
  out["slice.sst"] = cfg.slice.sst;
  for (const auto& [seg, v] : cfg.slice.latency_budget_ms)
    out["slice.latency_budget_ms." + to_lower(seg)] = v;
  out["slice.guaranteed_throughput_mbps"] = cfg.slice.guaranteed_throughput_mbps;
  for (const auto& [k, v] : cfg.slice.extra) out["slice." + to_lower(k)] = v;
  return out;
}

// Inverse of flatten_config for well-formed leaf maps.
inline ResourceConfig rebuild_config(const LeafMap& leaves, const std::string& record = "leaves") {
  ResourceConfig cfg;
  for (const auto& [path, value] : leaves) {
    const auto parts = split(path, '.');
    if (parts.size() == 3 && (parts[0] == "ran" || parts[0] == "core")) {
      auto& section = parts[0] == "ran" ? cfg.ran : cfg.core;
      detail::set_nf_field(section[to_upper(parts[1])], parts[2], value, record, path);
    } else if (parts.size() == 3 && parts[0] == "slice" && parts[1] == "latency_budget_ms") {
      if (!is_number(value)) throw ValidationError(record, path, "expected a number");
      cfg.slice.latency_budget_ms[parts[2]] = std::get<double>(value);
    } else if (parts.size() == 2 && parts[0] == "slice") {
      if (parts[1] == "sst") {
        cfg.slice.sst = detail::positive_number(value, record, path);
      } else if (parts[1] == "guaranteed_throughput_mbps") {
        cfg.slice.guaranteed_throughput_mbps = detail::positive_number(value, record, path);
      } else {
        cfg.slice.extra[parts[1]] = value;
      }
    } else {
      throw ValidationError(record, path, "not a configuration leaf path");
    }
  }
  return cfg;
}

// Canonical JSON rendering of an order, as embedded in prompts.
inline nlohmann::json to_json(const ServiceOrder& order) {
  nlohmann::json intents = nlohmann::json::object();
  for (const auto& [k, v] : order.intents) intents[k] = scalar_to_json(v);
  nlohmann::json meta = nlohmann::json::object();
  for (const auto& [k, v] : order.metadata) meta[k] = v;
  return {{"order_id", order.order_id},
          {"product_id", order.product_id},
          {"intents", intents},
          {"metadata", meta}};
}

inline std::string serialize_order(const ServiceOrder& order) { return to_json(order).dump(2); }

inline ServiceOrder parse_order(const nlohmann::json& j, const std::string& record) {
  if (!j.is_object()) throw ValidationError(record, "<root>", "expected an object");
  ServiceOrder o;
  auto str_field = [&](const char* name) {
    if (!j.contains(name) || !j[name].is_string() || j[name].get<std::string>().empty())
      throw ValidationError(record, name, "missing or not a non-empty string");
    return j[name].get<std::string>();
  };
  o.order_id = str_field("order_id");
  o.product_id = str_field("product_id");
  if (!j.contains("intents") || !j["intents"].is_object())
    throw ValidationError(o.order_id, "intents", "missing or not an object");
  for (const auto& [k, v] : j["intents"].items()) {
    auto s = scalar_from_json(v);
    if (!s) throw ValidationError(o.order_id, "intents." + k, "expected a scalar");
    o.intents.emplace(k, *s);
  }
  if (j.contains("metadata")) {
    if (!j["metadata"].is_object())
      throw ValidationError(o.order_id, "metadata", "expected an object");
    for (const auto& [k, v] : j["metadata"].items()) {
      auto s = scalar_from_json(v);
      if (!s) throw ValidationError(o.order_id, "metadata." + k, "expected a scalar");
      o.metadata.emplace(k, to_string(*s));
    }
  }
  return o;
}

inline ProductSpec parse_product(const nlohmann::json& j, std::size_t index) {
  const std::string record = "products[" + std::to_string(index) + "]";
  if (!j.is_object()) throw ValidationError(record, "<root>", "expected an object");
  ProductSpec p;
  auto str_field = [&](const char* name, const std::string& rec) {
    if (!j.contains(name) || !j[name].is_string() || j[name].get<std::string>().empty())
      throw ValidationError(rec, name, "missing or not a non-empty string");
    return j[name].get<std::string>();
  };
  auto num_field = [&](const char* name, const std::string& rec) {
    if (!j.contains(name) || !j[name].is_number())
      throw ValidationError(rec, name, "missing or not a number");
    return j[name].get<double>();
  };
  p.id = str_field("id", record);
  p.name = str_field("name", p.id);
  auto cat = parse_category(str_field("category", p.id));
  if (!cat) throw ValidationError(p.id, "category", "must be eMBB or URLLC");
  p.category = *cat;
  p.region = str_field("region", p.id);
  p.latency_ms = num_field("latency_ms", p.id);
  if (!(p.latency_ms > 0)) throw ValidationError(p.id, "latency_ms", "must be > 0");
  p.throughput_mbps = num_field("throughput_mbps", p.id);
  if (!(p.throughput_mbps > 0)) throw ValidationError(p.id, "throughput_mbps", "must be > 0");
  const double users = num_field("max_users", p.id);
  if (!(users > 0) || !is_integral(users))
    throw ValidationError(p.id, "max_users", "must be a positive integer");
  p.max_users = static_cast<long long>(users);
  p.reliability_pct = num_field("reliability_pct", p.id);
  if (!(p.reliability_pct > 0 && p.reliability_pct <= 100))
    throw ValidationError(p.id, "reliability_pct", "must lie in (0, 100]");
  p.created_at = str_field("created_at", p.id);
  const auto expertise = to_lower(str_field("user_expertise", p.id));
  if (expertise == "expert") {
    p.user_expertise = UserExpertise::kExpert;
  } else if (expertise == "non-expert") {
    p.user_expertise = UserExpertise::kNonExpert;
  } else {
    throw ValidationError(p.id, "user_expertise", "must be expert or non-expert");
  }
  return p;
}

// Vocabulary check plus the cross-check of an order against its product.
inline void validate_order(const ServiceOrder& o, const Catalog& catalog) {
  const ProductSpec* product = catalog.find_product(o.product_id);
  if (!product) throw ValidationError(o.order_id, "product_id", "unknown product " + o.product_id);
  if (o.intents.empty()) throw ValidationError(o.order_id, "intents", "must not be empty");
  for (const auto& [name, value] : o.intents) {
    const std::string field = "intents." + name;
    if (std::find(catalog.intent_vocabulary.begin(), catalog.intent_vocabulary.end(), name) ==
        catalog.intent_vocabulary.end())
      throw ValidationError(o.order_id, field, "not in the catalog intent vocabulary");
    if (name == "latency_ms" || name == "throughput_mbps") {
      detail::positive_number(value, o.order_id, field);
    } else if (name == "max_users") {
      detail::positive_integer(value, o.order_id, field);
    } else if (name == "reliability_pct") {
      const double r = detail::positive_number(value, o.order_id, field);
      if (r > 100) throw ValidationError(o.order_id, field, "must lie in (0, 100]");
    } else if (name == "slice_type") {
      auto cat = parse_category(to_string(value));
      if (!cat) throw ValidationError(o.order_id, field, "must be eMBB or URLLC");
      if (*cat != product->category)
        throw ValidationError(o.order_id, field, "does not match product " + product->id);
    } else if (name == "region") {
      if (to_lower(trim(to_string(value))) != to_lower(product->region))
        throw ValidationError(o.order_id, field, "does not match product " + product->id);
    }
  }
  if (auto it = o.metadata.find("category"); it != o.metadata.end()) {
    auto cat = parse_category(it->second);
    if (!cat || *cat != product->category)
      throw ValidationError(o.order_id, "metadata.category", "does not match product");
  }
  if (auto it = o.metadata.find("region"); it != o.metadata.end()) {
    if (to_lower(trim(it->second)) != to_lower(product->region))
      throw ValidationError(o.order_id, "metadata.region", "does not match product");
  }
}

// FNV-1a over relative paths and contents of every regular file, in path
// order.
inline std::string directory_checksum(const std::filesystem::path& dir) {
  namespace fs = std::filesystem;
  std::vector<fs::path> files;
  for (const auto& e : fs::recursive_directory_iterator(dir))
    if (e.is_regular_file()) files.push_back(e.path());
  std::sort(files.begin(), files.end());
  std::uint64_t h = fnv1a64("");
  for (const auto& f : files) {
    h = fnv1a64(fs::relative(f, dir).generic_string(), h);
    h = fnv1a64(std::string_view("\0", 1), h);
    h = fnv1a64(read_file(f), h);
  }
  return hex64(h);
}

inline nlohmann::json read_json_file(const std::filesystem::path& path) {
  try {
    return nlohmann::json::parse(read_file(path));
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError(path.filename().string(), "<document>",
                          std::string("JSON parse error: ") + e.what());
  }
}

// Loads and validates a catalog directory:
//   catalog.json             {"name", "intent_vocabulary": [...]}
//   products.json            array of ProductSpec
//   orders/<order_id>.json   ServiceOrder
//   references/<order_id>.yaml  ResourceConfig
inline LoadedCatalog load_catalog(const std::filesystem::path& dir) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(dir)) throw LoadError("catalog directory not found: " + dir.string());

  std::vector<fs::path> order_files;
  if (fs::is_directory(dir / "orders"))
    for (const auto& e : fs::directory_iterator(dir / "orders"))
      if (e.is_regular_file() && e.path().extension() == ".json") order_files.push_back(e.path());
  if (order_files.empty()) throw LoadError("no orders found in " + dir.string());
  std::sort(order_files.begin(), order_files.end());

  LoadedCatalog out;
  Catalog& cat = out.catalog;

  const auto header_path = dir / "catalog.json";
  if (!fs::exists(header_path)) throw LoadError("missing " + header_path.string());
  const auto header = read_json_file(header_path);
  cat.name = header.value("name", dir.filename().string());
  if (!header.contains("intent_vocabulary") || !header["intent_vocabulary"].is_array() ||
      header["intent_vocabulary"].empty())
    throw ValidationError("catalog.json", "intent_vocabulary", "missing or empty");
  for (const auto& v : header["intent_vocabulary"]) {
    if (!v.is_string()) throw ValidationError("catalog.json", "intent_vocabulary", "non-string");
    cat.intent_vocabulary.push_back(v.get<std::string>());
  }

  const auto products_path = dir / "products.json";
  if (!fs::exists(products_path)) throw LoadError("missing " + products_path.string());
  const auto products = read_json_file(products_path);
  if (!products.is_array()) throw ValidationError("products.json", "<root>", "expected an array");
  std::set<std::string> product_ids;
  for (std::size_t i = 0; i < products.size(); ++i) {
    auto p = parse_product(products[i], i);
    if (!product_ids.insert(p.id).second) throw ConflictError("duplicate product id " + p.id);
    cat.products.push_back(std::move(p));
  }
  std::sort(cat.products.begin(), cat.products.end(),
            [](const auto& a, const auto& b) { return a.id < b.id; });

  std::set<std::string> order_ids;
  std::map<std::string, fs::path> order_files_by_id;
  for (const auto& f : order_files) {
    auto order = parse_order(read_json_file(f), f.filename().string());
    if (!order_ids.insert(order.order_id).second)
      throw ConflictError("duplicate order id " + order.order_id);
    cat.orders.push_back(std::move(order));
    order_files_by_id[cat.orders.back().order_id] = f;
  }
  for (const auto& order : cat.orders) {
    const auto& f = order_files_by_id.at(order.order_id);
    if (f.stem().string() != order.order_id)
      throw ValidationError(order.order_id, "order_id",
                            "does not match file name " + f.filename().string());
    validate_order(order, cat);
  }
  std::sort(cat.orders.begin(), cat.orders.end(),
            [](const auto& a, const auto& b) { return a.order_id < b.order_id; });

  for (const auto& order : cat.orders) {
    fs::path ref_path = dir / "references" / (order.order_id + ".yaml");
    if (!fs::exists(ref_path)) ref_path.replace_extension(".yml");
    if (!fs::exists(ref_path)) throw LoadError("missing reference for order " + order.order_id);
    auto cfg = parse_resource_config(read_file(ref_path), order.order_id);
    if (!cfg.order_ref.empty() && cfg.order_ref != order.order_id)
      throw ValidationError(order.order_id, "order_ref", "names " + cfg.order_ref);
    cfg.order_ref = order.order_id;
    validate_against_order(cfg, order, order.order_id);
    out.references.pairs.emplace(order.order_id, std::move(cfg));
  }

  out.checksum = directory_checksum(dir);
  return out;
}

// Maps free-text demand to a catalog product.
class ProductMatcher {
 public:
  virtual ~ProductMatcher() = default;
  virtual const ProductSpec& match(std::string_view demand, const Catalog& catalog) const = 0;
};

namespace detail {

// Whole-word-prefix containment: "paris" occurs in "parisian region".
inline bool mentions(std::string_view text, std::string_view keyword) {
  if (keyword.empty()) return false;
  for (auto pos = text.find(keyword); pos != std::string_view::npos;
       pos = text.find(keyword, pos + 1)) {
    if (pos == 0 || !std::isalnum(static_cast<unsigned char>(text[pos - 1]))) return true;
  }
  return false;
}

}  // namespace detail

// Deterministic which/where matcher. A product is a candidate when its
// category is mentioned (or no category is) and its region is mentioned (or
// no region is); at least one of the two must be mentioned.
class KeywordMatcher final : public ProductMatcher {
 public:
  const ProductSpec& match(std::string_view demand, const Catalog& catalog) const override {
    if (catalog.products.empty()) throw NoMatchError("catalog has no products");
    const std::string text = normalize_text(demand);
    std::set<std::string> categories, regions;
    bool any_category = false, any_region = false;
    for (const auto& p : catalog.products) {
      const auto c = to_lower(to_string(p.category));
      const auto r = normalize_text(p.region);
      categories.insert(std::string(to_string(p.category)));
      regions.insert(p.region);
      any_category |= detail::mentions(text, c);
      any_region |= detail::mentions(text, r);
    }
    std::vector<const ProductSpec*> hits;
    if (any_category || any_region) {
      for (const auto& p : catalog.products) {
        const bool cat_ok =
            !any_category || detail::mentions(text, to_lower(to_string(p.category)));
        const bool reg_ok = !any_region || detail::mentions(text, normalize_text(p.region));
        if (cat_ok && reg_ok) hits.push_back(&p);
      }
    }
    if (hits.empty()) {
      std::string msg = "no product matches the demand; categories:";
      for (const auto& c : categories) msg += " " + c;
      msg += "; regions:";
      for (const auto& r : regions) msg += " " + r;
      throw NoMatchError(msg);
    }
    if (hits.size() > 1) {
      std::vector<std::string> ids;
      std::string msg = "ambiguous demand matches " + std::to_string(hits.size()) + " products:";
      for (const auto* p : hits) {
        ids.push_back(p->id);
        msg += " " + p->id;
      }
      throw AmbiguityError(msg, std::move(ids));
    }
    return *hits.front();
  }
};

inline const ProductSpec& match_product(std::string_view demand, const Catalog& catalog) {
  return KeywordMatcher{}.match(demand, catalog);
}

}  // namespace intent_bench
