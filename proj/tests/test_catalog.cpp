#include <gtest/gtest.h>

#include <fstream>

#include "support.hpp"

using namespace intent_bench;
using test_support::TempDir;
namespace fs = std::filesystem;

namespace {

// Counts scalar leaves of a YAML document, skipping order_ref at the root.
std::size_t walk_leaves(const YAML::Node& n, bool root = true) {
  if (n.IsScalar()) return 1;
  std::size_t count = 0;
  if (n.IsMap()) {
    for (const auto& kv : n) {
      if (root && kv.first.as<std::string>() == "order_ref") continue;
      count += walk_leaves(kv.second, false);
    }
  } else if (n.IsSequence()) {
    for (const auto& item : n) count += walk_leaves(item, false);
  }
  return count;
}

void rewrite(const fs::path& p, const std::string& from, const std::string& to) {
  std::string text = read_file(p);
  const auto pos = text.find(from);
  ASSERT_NE(pos, std::string::npos) << from;
  text.replace(pos, from.size(), to);
  std::ofstream(p, std::ios::binary) << text;
}

}  // namespace

TEST(LoadCatalog, GoldenCatalogHasTenOrders) {
  const auto loaded = load_catalog(test_support::golden_dir());
  EXPECT_EQ(loaded.catalog.size(), 10u);
  EXPECT_EQ(loaded.references.pairs.size(), 10u);
  EXPECT_EQ(loaded.catalog.products.size(), 10u);
  for (const auto& o : loaded.catalog.orders) EXPECT_TRUE(loaded.references.contains(o.order_id));
}

TEST(LoadCatalog, Deterministic) {
  const auto a = load_catalog(test_support::golden_dir());
  const auto b = load_catalog(test_support::golden_dir());
  EXPECT_EQ(a.checksum, b.checksum);
  for (const auto& o : a.catalog.orders) {
    EXPECT_EQ(serialize_order(o), serialize_order(*b.catalog.find_order(o.order_id)));
    EXPECT_EQ(a.references.at(o.order_id), b.references.at(o.order_id));
  }
}

TEST(LoadCatalog, EmptyDirectory) {
  TempDir tmp;
  try {
    load_catalog(tmp.path());
    FAIL() << "expected LoadError";
  } catch (const LoadError& e) {
    EXPECT_NE(std::string(e.what()).find("no orders found"), std::string::npos);
  }
}

TEST(LoadCatalog, ReliabilityOutOfRange) {
  TempDir tmp;
  const auto dir = test_support::copy_golden(tmp);
  rewrite(dir / "orders" / "SO-003.json", "\"reliability_pct\": 99.5", "\"reliability_pct\": 150");
  try {
    load_catalog(dir);
    FAIL() << "expected ValidationError";
  } catch (const ValidationError& e) {
    EXPECT_NE(e.field().find("reliability_pct"), std::string::npos) << e.field();
    EXPECT_EQ(e.record(), "SO-003");
  }
}

TEST(LoadCatalog, DuplicateOrderIdConflicts) {
  TempDir tmp;
  const auto dir = test_support::copy_golden(tmp);
  fs::copy_file(dir / "orders" / "SO-002.json", dir / "orders" / "SO-002-copy.json");
  EXPECT_THROW(load_catalog(dir), ConflictError);
}

TEST(LoadCatalog, MissingReference) {
  TempDir tmp;
  const auto dir = test_support::copy_golden(tmp);
  fs::remove(dir / "references" / "SO-007.yaml");
  try {
    load_catalog(dir);
    FAIL() << "expected LoadError";
  } catch (const LoadError& e) {
    EXPECT_NE(std::string(e.what()).find("SO-007"), std::string::npos);
  }
}

TEST(LoadCatalog, IntentOutsideVocabulary) {
  TempDir tmp;
  const auto dir = test_support::copy_golden(tmp);
  rewrite(dir / "orders" / "SO-001.json", "\"max_users\"", "\"jitter_ms\": 3, \"max_users\"");
  EXPECT_THROW(load_catalog(dir), ValidationError);
}

TEST(LoadCatalog, LatencyBudgetExceedsOrder) {
  TempDir tmp;
  const auto dir = test_support::copy_golden(tmp);
  // SO-006 orders 10 ms; the reference splits 4 + 4.
  rewrite(dir / "references" / "SO-006.yaml", "ran: 4", "ran: 9");
  EXPECT_THROW(load_catalog(dir), ValidationError);
}

TEST(ResourceConfig, RejectsMissingFunction) {
  const auto loaded = load_catalog(test_support::golden_dir());
  auto yaml = to_yaml(loaded.references.at("SO-001"));
  const auto pos = yaml.find("  AUSF:");
  ASSERT_NE(pos, std::string::npos);
  const auto end = yaml.find("  NSSF:");
  yaml.erase(pos, end - pos);
  EXPECT_THROW(parse_resource_config(yaml, "x"), ValidationError);
}

TEST(ResourceConfig, RejectsNonPositiveResources) {
  const auto loaded = load_catalog(test_support::golden_dir());
  auto yaml = to_yaml(loaded.references.at("SO-001"));
  const auto pos = yaml.find("ram_mb: ");
  yaml.replace(pos, yaml.find('\n', pos) - pos, "ram_mb: 0");
  EXPECT_THROW(parse_resource_config(yaml, "x"), ValidationError);
}

TEST(ResourceConfig, YamlRoundTrip) {
  const auto loaded = load_catalog(test_support::golden_dir());
  for (const auto& [id, cfg] : loaded.references.pairs) {
    const auto again = parse_resource_config(to_yaml(cfg), id);
    EXPECT_EQ(again, cfg) << id;
  }
}

TEST(FlattenConfig, SingleLeafProjection) {
  const auto loaded = load_catalog(test_support::golden_dir());
  auto cfg = loaded.references.at("SO-002");
  cfg.core.at("UPF").cpu_cores = 4;
  const auto leaves = flatten_config(cfg);
  ASSERT_TRUE(leaves.count("core.upf.cpu_cores"));
  EXPECT_TRUE(scalar_matches(leaves.at("core.upf.cpu_cores"), Scalar(4.0)));
}

TEST(FlattenConfig, LeafCountMatchesRecursiveWalk) {
  const auto loaded = load_catalog(test_support::golden_dir());
  for (const auto& [id, cfg] : loaded.references.pairs) {
    const auto doc = YAML::LoadFile((test_support::golden_dir() / "references" / (id + ".yaml")).string());
    EXPECT_EQ(flatten_config(cfg).size(), walk_leaves(doc)) << id;
  }
}

TEST(FlattenConfig, CasingIsCanonical) {
  const std::string lower = read_file(test_support::golden_dir() / "references" / "SO-004.yaml");
  std::string mixed = lower;
  for (const std::string nf : {"RU", "DU", "CU", "UPF", "AMF", "SMF"}) {
    const auto pos = mixed.find("  " + nf + ":");
    ASSERT_NE(pos, std::string::npos);
    for (std::size_t i = 0; i < nf.size(); ++i)
      mixed[pos + 2 + i] = static_cast<char>(std::tolower(static_cast<unsigned char>(mixed[pos + 2 + i])));
  }
  ASSERT_NE(mixed, lower);
  EXPECT_EQ(flatten_config(parse_resource_config(mixed, "mixed")),
            flatten_config(parse_resource_config(lower, "lower")));
}

TEST(FlattenConfig, RebuildIsInverse) {
  const auto loaded = load_catalog(test_support::golden_dir());
  for (const auto& [id, cfg] : loaded.references.pairs) {
    auto rebuilt = rebuild_config(flatten_config(cfg));
    rebuilt.order_ref = cfg.order_ref;
    EXPECT_EQ(rebuilt, cfg) << id;
  }
}

TEST(MatchProduct, CategoryAndRegion) {
  const auto loaded = load_catalog(test_support::golden_dir());
  const auto& p =
      match_product("I need to establish URLLC slices for the Paris region", loaded.catalog);
  EXPECT_EQ(p.id, "P-URLLC-PARIS");
}

TEST(MatchProduct, CaseAndWhitespaceInvariant) {
  const auto loaded = load_catalog(test_support::golden_dir());
  for (const char* demand : {"i need to establish   urllc slices for the PARIS region",
                             "\tI NEED TO ESTABLISH URLLC\nSLICES FOR THE paris REGION  "}) {
    EXPECT_EQ(match_product(demand, loaded.catalog).id, "P-URLLC-PARIS") << demand;
  }
}

TEST(MatchProduct, AmbiguousWithoutRegion) {
  const auto loaded = load_catalog(test_support::golden_dir());
  Catalog two = loaded.catalog;
  two.products.clear();
  for (const auto& p : loaded.catalog.products)
    if (p.id == "P-URLLC-PARIS" || p.id == "P-URLLC-LYON") two.products.push_back(p);
  ASSERT_EQ(two.products.size(), 2u);
  try {
    match_product("URLLC slices", two);
    FAIL() << "expected AmbiguityError";
  } catch (const AmbiguityError& e) {
    EXPECT_EQ(e.candidates().size(), 2u);
  }
}

TEST(MatchProduct, NoKeywordHit) {
  const auto loaded = load_catalog(test_support::golden_dir());
  EXPECT_THROW(match_product("quantum teleportation please", loaded.catalog), NoMatchError);
}
