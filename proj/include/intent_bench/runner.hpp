#pragma once

// Benchmark matrix planning and resumable execution over a run store:
//   <run>/manifest.json
//   <run>/trials/<trial_id>.json

#include <atomic>
#include <chrono>
#include <ctime>
#include <deque>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

#include "intent_bench/backends.hpp"
#include "intent_bench/catalog.hpp"
#include "intent_bench/error.hpp"
#include "intent_bench/promptkit.hpp"
#include "intent_bench/scoring.hpp"
#include "intent_bench/util.hpp"

namespace intent_bench {

struct TrialSpec {
  std::string order_id;
  std::string backend;
  PromptMode mode = PromptMode::kZero;
  int rep = 0;
  std::uint64_t seed = 0;

  // Deterministic function of (order, backend, mode, rep), safe as a file
  // name.
  std::string trial_id() const {
    std::string id = order_id + "__" + backend + "__" + std::string(to_string(mode)) + "__r" +
                     std::to_string(rep);
    for (char& c : id)
      if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' || c == '.'))
        c = '_';
    return id;
  }

  bool operator==(const TrialSpec&) const = default;
};

struct TrialPlan {
  std::vector<TrialSpec> trials;
  std::uint64_t master_seed = 0;
};

// splitmix64(master_seed ^ fnv1a64("order|backend|MODE|rep")).
inline std::uint64_t derive_trial_seed(std::uint64_t master_seed, const std::string& order_id,
                                       const std::string& backend, PromptMode mode, int rep) {
  const std::string key =
      order_id + "|" + backend + "|" + std::string(to_string(mode)) + "|" + std::to_string(rep);
  return splitmix64(master_seed ^ fnv1a64(key));
}

// Full cross product in order-major order: orders x backends x modes x reps.
inline TrialPlan plan_trials(const Catalog& catalog, const std::vector<std::string>& backends,
                             const std::vector<PromptMode>& modes, int reps,
                             std::uint64_t master_seed) {
  if (catalog.orders.empty()) throw PlanError("plan needs at least one order");
  if (backends.empty()) throw PlanError("plan needs at least one backend");
  if (modes.empty()) throw PlanError("plan needs at least one prompt mode");
  if (reps < 1) throw PlanError("reps must be >= 1, got " + std::to_string(reps));
  if (std::set<std::string>(backends.begin(), backends.end()).size() != backends.size())
    throw PlanError("duplicate backend in plan");
  if (std::set<PromptMode>(modes.begin(), modes.end()).size() != modes.size())
    throw PlanError("duplicate prompt mode in plan");

  TrialPlan plan;
  plan.master_seed = master_seed;
  plan.trials.reserve(catalog.orders.size() * backends.size() * modes.size() *
                      static_cast<std::size_t>(reps));
  std::set<std::string> ids;
  for (const auto& order : catalog.orders)
    for (const auto& b : backends)
      for (auto m : modes)
        for (int r = 0; r < reps; ++r) {
          TrialSpec t{order.order_id, b, m, r,
                      derive_trial_seed(master_seed, order.order_id, b, m, r)};
          if (!ids.insert(t.trial_id()).second)
            throw PlanError("trial id collision: " + t.trial_id());
          plan.trials.push_back(std::move(t));
        }
  return plan;
}

inline std::string iso8601_now() {
  const auto now = std::chrono::system_clock::now();
  const auto t = std::chrono::system_clock::to_time_t(now);
  const auto ms =
      std::chrono::duration_cast<std::chrono::milliseconds>(now.time_since_epoch()).count() % 1000;
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%S", &tm);
  char out[40];
  std::snprintf(out, sizeof out, "%s.%03lldZ", buf, static_cast<long long>(ms));
  return out;
}

struct TrialRecord {
  std::string trial_id;
  TrialSpec spec;
  PromptMessages prompt;
  std::string response_text;
  Usage usage;
  double latency_s = 0;
  int attempt_count = 0;
  std::string started_at;
  std::string finished_at;
  std::optional<std::string> error;
};

inline nlohmann::json to_json(const TrialRecord& r) {
  nlohmann::json j = {
      {"trial_id", r.trial_id},
      {"order_id", r.spec.order_id},
      {"backend", r.spec.backend},
      {"mode", to_string(r.spec.mode)},
      {"rep", r.spec.rep},
      {"seed", r.spec.seed},
      {"prompt", {{"system", r.prompt.system}, {"user", r.prompt.user}}},
      {"response_text", r.response_text},
      {"usage",
       {{"prompt_tokens", r.usage.prompt_tokens},
        {"completion_tokens", r.usage.completion_tokens},
        {"estimated", r.usage.estimated}}},
      {"latency_s", r.latency_s},
      {"attempt_count", r.attempt_count},
      {"started_at", r.started_at},
      {"finished_at", r.finished_at},
      {"error", r.error ? nlohmann::json(*r.error) : nlohmann::json(nullptr)},
  };
  return j;
}

inline TrialRecord trial_from_json(const nlohmann::json& j) {
  TrialRecord r;
  try {
    r.trial_id = j.at("trial_id").get<std::string>();
    r.spec.order_id = j.at("order_id").get<std::string>();
    r.spec.backend = j.at("backend").get<std::string>();
    auto mode = parse_mode(j.at("mode").get<std::string>());
    if (!mode) throw LoadError("trial " + r.trial_id + ": unknown mode");
    r.spec.mode = *mode;
    r.spec.rep = j.at("rep").get<int>();
    r.spec.seed = j.at("seed").get<std::uint64_t>();
    r.prompt.system = j.at("prompt").at("system").get<std::string>();
    r.prompt.user = j.at("prompt").at("user").get<std::string>();
    r.response_text = j.at("response_text").get<std::string>();
    r.usage.prompt_tokens = j.at("usage").at("prompt_tokens").get<long long>();
    r.usage.completion_tokens = j.at("usage").at("completion_tokens").get<long long>();
    r.usage.estimated = j.at("usage").value("estimated", false);
    r.latency_s = j.at("latency_s").get<double>();
    r.attempt_count = j.value("attempt_count", 0);
    r.started_at = j.value("started_at", "");
    r.finished_at = j.value("finished_at", "");
    if (j.contains("error") && j["error"].is_string()) r.error = j["error"].get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw LoadError(std::string("malformed trial record: ") + e.what());
  }
  return r;
}

inline TrialRecord load_trial(const std::filesystem::path& path) {
  try {
    return trial_from_json(nlohmann::json::parse(read_file(path)));
  } catch (const nlohmann::json::parse_error& e) {
    throw LoadError("malformed trial record " + path.string() + ": " + e.what());
  }
}

// Pricing snapshot of a backend, kept in the manifest so scoring does not
// need the registry.
struct BackendSnapshot {
  std::string name;
  std::string kind;
  std::string model_id;
  double price_in_usd_per_1m = 0;
  double price_out_usd_per_1m = 0;
  bool open_source = false;

  BackendDescriptor pricing() const {
    BackendDescriptor d;
    d.name = name;
    d.price_in_usd_per_1m = price_in_usd_per_1m;
    d.price_out_usd_per_1m = price_out_usd_per_1m;
    d.open_source = open_source;
    return d;
  }
};

struct RunManifest {
  std::string run_id;
  std::string status;  // "running" while checkpointing, "complete" at the end
  std::string catalog_dir;
  std::string catalog_checksum;
  std::string backends_checksum;
  std::vector<BackendSnapshot> backends;
  std::vector<PromptMode> modes;
  std::vector<std::string> orders;
  int reps = 0;
  std::uint64_t master_seed = 0;
  Thresholds thresholds;
  Weights weights;
  std::size_t total = 0;
  std::size_t completed = 0;
  std::size_t failed = 0;
  std::size_t executed = 0;  // trials attempted by this execution (not resumed ones)
  std::string started_at;
  std::string finished_at;

  const BackendSnapshot* find_backend(const std::string& name) const {
    for (const auto& b : backends)
      if (b.name == name) return &b;
    return nullptr;
  }
};

inline nlohmann::json to_json(const RunManifest& m) {
  nlohmann::json backends = nlohmann::json::array();
  for (const auto& b : m.backends)
    backends.push_back({{"name", b.name},
                        {"kind", b.kind},
                        {"model_id", b.model_id},
                        {"price_in_usd_per_1m", b.price_in_usd_per_1m},
                        {"price_out_usd_per_1m", b.price_out_usd_per_1m},
                        {"open_source", b.open_source}});
  nlohmann::json modes = nlohmann::json::array();
  for (auto mode : m.modes) modes.push_back(to_string(mode));
  return {{"run_id", m.run_id},
          {"status", m.status},
          {"catalog_dir", m.catalog_dir},
          {"catalog_checksum", m.catalog_checksum},
          {"backends_checksum", m.backends_checksum},
          {"backends", backends},
          {"modes", modes},
          {"orders", m.orders},
          {"reps", m.reps},
          {"master_seed", m.master_seed},
          {"thresholds", {{"c0_usd", m.thresholds.c0_usd}, {"i0_s", m.thresholds.i0_s}}},
          {"weights",
           {m.weights.format, m.weights.explanation, m.weights.accuracy, m.weights.cost,
            m.weights.inference}},
          {"total", m.total},
          {"completed", m.completed},
          {"failed", m.failed},
          {"executed", m.executed},
          {"started_at", m.started_at},
          {"finished_at", m.finished_at}};
}

inline RunManifest manifest_from_json(const nlohmann::json& j) {
  RunManifest m;
  try {
    m.run_id = j.at("run_id").get<std::string>();
    m.status = j.value("status", "");
    m.catalog_dir = j.value("catalog_dir", "");
    m.catalog_checksum = j.value("catalog_checksum", "");
    m.backends_checksum = j.value("backends_checksum", "");
    for (const auto& b : j.at("backends")) {
      m.backends.push_back({b.at("name").get<std::string>(), b.value("kind", ""),
                            b.value("model_id", ""), b.value("price_in_usd_per_1m", 0.0),
                            b.value("price_out_usd_per_1m", 0.0), b.value("open_source", false)});
    }
    for (const auto& s : j.at("modes")) {
      auto mode = parse_mode(s.get<std::string>());
      if (!mode) throw LoadError("manifest: unknown mode " + s.get<std::string>());
      m.modes.push_back(*mode);
    }
    m.orders = j.value("orders", std::vector<std::string>{});
    m.reps = j.value("reps", 0);
    m.master_seed = j.value("master_seed", std::uint64_t{0});
    if (j.contains("thresholds")) {
      m.thresholds.c0_usd = j["thresholds"].value("c0_usd", 0.1);
      m.thresholds.i0_s = j["thresholds"].value("i0_s", 60.0);
    }
    if (j.contains("weights") && j["weights"].is_array() && j["weights"].size() == 5) {
      const auto& w = j["weights"];
      m.weights = {w[0].get<double>(), w[1].get<double>(), w[2].get<double>(),
                   w[3].get<double>(), w[4].get<double>()};
    }
    m.total = j.value("total", std::size_t{0});
    m.completed = j.value("completed", std::size_t{0});
    m.failed = j.value("failed", std::size_t{0});
    m.executed = j.value("executed", std::size_t{0});
    m.started_at = j.value("started_at", "");
    m.finished_at = j.value("finished_at", "");
  } catch (const nlohmann::json::exception& e) {
    throw LoadError(std::string("malformed manifest: ") + e.what());
  }
  return m;
}

inline RunManifest load_manifest(const std::filesystem::path& run_dir) {
  const auto path = run_dir / "manifest.json";
  if (!std::filesystem::exists(path)) throw LoadError("no manifest in " + run_dir.string());
  try {
    return manifest_from_json(nlohmann::json::parse(read_file(path)));
  } catch (const nlohmann::json::parse_error& e) {
    throw LoadError("malformed manifest " + path.string() + ": " + e.what());
  }
}

// Stable run id for one benchmark configuration, so re-issuing the same run
// resumes it.
inline std::string derive_run_id(const std::string& catalog_checksum,
                                 const std::string& backends_checksum,
                                 const std::vector<PromptMode>& modes, int reps,
                                 std::uint64_t master_seed) {
  std::string key = catalog_checksum + "|" + backends_checksum + "|";
  for (auto m : modes) key += std::string(to_string(m)) + ",";
  key += "|" + std::to_string(reps) + "|" + std::to_string(master_seed);
  return "run-" + hex64(fnv1a64(key)).substr(0, 12);
}

// Everything execute() needs besides the plan.
struct RunContext {
  const LoadedCatalog* catalog = nullptr;
  std::vector<Exemplar> exemplars;
  std::size_t few_k = 0;  // 0: every exemplar
  std::map<std::string, std::shared_ptr<Backend>> backends;
  std::string backends_checksum;
  std::string catalog_dir;
  std::vector<PromptMode> modes;
  int reps = 0;
  Thresholds thresholds;
  Weights weights;
  std::size_t heartbeat_every = 10;
};

namespace detail {

inline TrialRecord run_one(const TrialSpec& spec, const RunContext& ctx, Backend& backend) {
  TrialRecord rec;
  rec.trial_id = spec.trial_id();
  rec.spec = spec;
  rec.started_at = iso8601_now();
  const auto t0 = std::chrono::steady_clock::now();
  try {
    const ServiceOrder* order = ctx.catalog->catalog.find_order(spec.order_id);
    if (!order) throw PlanError("order " + spec.order_id + " not in catalog");
    const ResourceConfig& ref = ctx.catalog->references.at(spec.order_id);
    std::vector<Exemplar> shots = ctx.exemplars;
    if (spec.mode == PromptMode::kFew && ctx.few_k > 0 && ctx.few_k < shots.size())
      shots.resize(ctx.few_k);
    const std::string ref_text = to_yaml(ref);
    rec.prompt = build_prompt(spec.mode, *order, shots, ref_text);
    CompletionContext cc{order, &ref, spec.mode, spec.seed};
    const auto call_start = std::chrono::steady_clock::now();
    CompletionResult res = backend.complete(rec.prompt, cc);
    const double measured =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - call_start).count();
    rec.response_text = std::move(res.text);
    rec.usage = res.usage;
    rec.latency_s = res.simulated ? res.latency_s : measured;
    rec.attempt_count = res.attempt_count;
  } catch (const std::exception& e) {
    rec.error = e.what();
    if (rec.latency_s == 0)
      rec.latency_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  }
  rec.finished_at = iso8601_now();
  return rec;
}

}  // namespace detail

// Attempts every trial of the plan once. Trials whose record already exists
// are skipped, so re-running resumes. Per-trial failures are recorded, never
// fatal. Up to max_in_flight trials run concurrently per backend; within a
// backend trials are dispatched in plan order.
inline RunManifest execute(const TrialPlan& plan, const std::filesystem::path& run_dir,
                           const RunContext& ctx, const std::string& run_id) {
  namespace fs = std::filesystem;
  if (!ctx.catalog) throw PlanError("run context has no catalog");
  std::error_code ec;
  fs::create_directories(run_dir / "trials", ec);
  if (ec) throw LoadError("run store not writable: " + run_dir.string() + ": " + ec.message());
  {
    const auto probe = run_dir / ".write-probe";
    std::ofstream out(probe);
    if (!out) throw LoadError("run store not writable: " + run_dir.string());
    out.close();
    fs::remove(probe, ec);
  }

  RunManifest m;
  m.run_id = run_id;
  m.status = "running";
  m.catalog_dir = ctx.catalog_dir;
  m.catalog_checksum = ctx.catalog->checksum;
  m.backends_checksum = ctx.backends_checksum;
  m.modes = ctx.modes;
  m.reps = ctx.reps;
  m.master_seed = plan.master_seed;
  m.thresholds = ctx.thresholds;
  m.weights = ctx.weights;
  m.total = plan.trials.size();
  m.started_at = iso8601_now();
  for (const auto& o : ctx.catalog->catalog.orders) m.orders.push_back(o.order_id);
  std::vector<std::string> backend_order;
  for (const auto& t : plan.trials)
    if (std::find(backend_order.begin(), backend_order.end(), t.backend) == backend_order.end())
      backend_order.push_back(t.backend);
  for (const auto& name : backend_order) {
    auto it = ctx.backends.find(name);
    if (it == ctx.backends.end()) throw ConfigError("backend " + name + " is not configured");
    const auto& d = it->second->descriptor();
    m.backends.push_back({d.name, d.kind == BackendKind::kMock ? "mock" : "remote", d.model_id,
                          d.price_in_usd_per_1m, d.price_out_usd_per_1m, d.open_source});
  }

  std::mutex mu;
  std::size_t since_heartbeat = 0;
  auto checkpoint = [&] { write_file_atomic(run_dir / "manifest.json", to_json(m).dump(2)); };

  // Resumed trials count from their stored records.
  std::map<std::string, std::deque<const TrialSpec*>> queues;
  for (const auto& t : plan.trials) {
    const auto path = run_dir / "trials" / (t.trial_id() + ".json");
    if (fs::exists(path)) {
      const auto rec = load_trial(path);
      (rec.error ? m.failed : m.completed) += 1;
      continue;
    }
    queues[t.backend].push_back(&t);
  }
  checkpoint();

  auto record = [&](const TrialRecord& rec) {
    const auto path = run_dir / "trials" / (rec.trial_id + ".json");
    // Exclusive per trial id; never overwrite an existing record.
    if (!fs::exists(path)) write_file_atomic(path, to_json(rec).dump(2));
    std::lock_guard lock(mu);
    (rec.error ? m.failed : m.completed) += 1;
    ++m.executed;
    if (++since_heartbeat >= ctx.heartbeat_every) {
      since_heartbeat = 0;
      checkpoint();
    }
  };

  {
    std::vector<std::jthread> workers;
    std::map<std::string, std::mutex> queue_mu;
    for (auto& [name, q] : queues) queue_mu[name];
    for (auto& [name, q] : queues) {
      Backend& backend = *ctx.backends.at(name);
      const int width = std::max(1, backend.descriptor().max_in_flight);
      for (int w = 0; w < width; ++w) {
        workers.emplace_back([&, name = name] {
          auto& queue = queues.at(name);
          auto& qm = queue_mu.at(name);
          while (true) {
            const TrialSpec* spec = nullptr;
            {
              std::lock_guard lock(qm);
              if (queue.empty()) return;
              spec = queue.front();
              queue.pop_front();
            }
            record(detail::run_one(*spec, ctx, backend));
          }
        });
      }
    }
  }

  m.status = "complete";
  m.finished_at = iso8601_now();
  checkpoint();
  return m;
}

// Trial records in the store, sorted by trial id.
inline std::vector<TrialRecord> load_trials(const std::filesystem::path& run_dir) {
  namespace fs = std::filesystem;
  std::vector<fs::path> files;
  if (fs::is_directory(run_dir / "trials"))
    for (const auto& e : fs::directory_iterator(run_dir / "trials"))
      if (e.is_regular_file() && e.path().extension() == ".json") files.push_back(e.path());
  std::sort(files.begin(), files.end());
  std::vector<TrialRecord> out;
  out.reserve(files.size());
  for (const auto& f : files) out.push_back(load_trial(f));
  return out;
}

}  // namespace intent_bench
