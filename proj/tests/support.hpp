#pragma once

// Fixtures shared by the unit and acceptance suites.

#include <atomic>
#include <chrono>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "intent_bench.hpp"

namespace test_support {

namespace fs = std::filesystem;

inline fs::path source_dir() { return fs::path(INTENT_BENCH_SOURCE_DIR); }
inline fs::path golden_dir() { return source_dir() / "data" / "golden"; }

// Scratch directory removed on destruction.
class TempDir {
 public:
  TempDir() {
    static std::atomic<int> counter{0};
    const auto stamp = std::chrono::steady_clock::now().time_since_epoch().count();
    path_ = fs::temp_directory_path() /
            ("intent-bench-test-" + std::to_string(stamp) + "-" + std::to_string(counter++));
    fs::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const fs::path& path() const { return path_; }
  fs::path operator/(const std::string& rel) const { return path_ / rel; }

 private:
  fs::path path_;
};

// Copy of the golden catalog that a test may edit.
inline fs::path copy_golden(const TempDir& tmp) {
  const auto dst = tmp / "catalog";
  fs::copy(golden_dir(), dst, fs::copy_options::recursive);
  return dst;
}

inline intent_bench::BackendDescriptor mock_descriptor(const std::string& name,
                                                       intent_bench::MockPolicy policy = {},
                                                       double price_in = 0, double price_out = 0) {
  intent_bench::BackendDescriptor d;
  d.name = name;
  d.kind = intent_bench::BackendKind::kMock;
  d.model_id = name;
  d.price_in_usd_per_1m = price_in;
  d.price_out_usd_per_1m = price_out;
  d.open_source = price_in == 0 && price_out == 0;
  d.mock_policy = policy;
  return d;
}

// Ten scalar leaves of mixed type, flat paths.
inline intent_bench::LeafMap ten_leaves() {
  using intent_bench::Scalar;
  return {{"core.upf.cpu_cores", Scalar(4.0)},
          {"core.upf.ram_mb", Scalar(4096.0)},
          {"core.upf.qos_5qi", Scalar(82.0)},
          {"core.amf.replicas", Scalar(1.0)},
          {"ran.cu.pdcp_duplication", Scalar(true)},
          {"ran.ru.bandwidth_mhz", Scalar(40.0)},
          {"ran.du.numerology", Scalar(2.0)},
          {"slice.latency_budget_ms.ran", Scalar(2.5)},
          {"slice.sst", Scalar(2.0)},
          {"slice.region", Scalar(std::string("Paris"))}};
}

// Run context over the given backends with every mode and the golden
// exemplars.
inline intent_bench::RunContext make_context(
    const intent_bench::LoadedCatalog& catalog,
    const std::vector<std::shared_ptr<intent_bench::Backend>>& backends, int reps) {
  intent_bench::RunContext ctx;
  ctx.catalog = &catalog;
  ctx.exemplars = intent_bench::load_exemplars(golden_dir() / "exemplars");
  ctx.catalog_dir = golden_dir().string();
  ctx.modes.assign(intent_bench::kAllModes.begin(), intent_bench::kAllModes.end());
  ctx.reps = reps;
  ctx.backends_checksum = "test";
  for (const auto& b : backends) ctx.backends[b->name()] = b;
  return ctx;
}

inline std::vector<std::string> names_of(
    const std::vector<std::shared_ptr<intent_bench::Backend>>& backends) {
  std::vector<std::string> out;
  for (const auto& b : backends) out.push_back(b->name());
  return out;
}

}  // namespace test_support
