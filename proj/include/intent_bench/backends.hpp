#pragma once

// Uniform completion client over OpenAI-compatible chat endpoints, a Gemini
// generateContent adapter and a seeded mock, with usage capture and
// per-token pricing.

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <numeric>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <httplib.h>
#include <nlohmann/json.hpp>
#include <yaml-cpp/yaml.h>

#include "intent_bench/catalog.hpp"
#include "intent_bench/error.hpp"
#include "intent_bench/promptkit.hpp"
#include "intent_bench/util.hpp"

namespace intent_bench {

enum class BackendKind { kRemote, kMock };
enum class WireProtocol { kOpenAiChat, kGemini };

struct SamplingParams {
  double temperature = 0.2;
  double top_p = 0.9;
};

struct MockPolicy {
  double p_format_break = 0;
  double leaf_perturb_rate = 0;
  double p_omit_explanation = 0;
  double synthetic_latency_s = 0;
  std::uint64_t seed = 0;
  double p_error = 0;  // probability that a call fails with a backend error
};

struct RetryPolicy {
  int max_attempts = 3;
  double initial_backoff_s = 1.0;  // doubles after each failed attempt
};

struct BackendDescriptor {
  std::string name;
  BackendKind kind = BackendKind::kMock;
  WireProtocol protocol = WireProtocol::kOpenAiChat;
  std::string endpoint_url;
  std::string model_id;
  std::string api_key_env;
  double price_in_usd_per_1m = 0;
  double price_out_usd_per_1m = 0;
  bool open_source = false;
  SamplingParams sampling;
  std::optional<MockPolicy> mock_policy;
  int max_in_flight = 2;
  double timeout_s = 120;
  RetryPolicy retry;
  // Descriptive model facts (heads, layers, context size); unused.
  std::map<std::string, std::string> metadata;
};

struct Usage {
  long long prompt_tokens = 0;
  long long completion_tokens = 0;
  bool estimated = false;

  bool operator==(const Usage&) const = default;
};

struct CompletionResult {
  std::string text;
  Usage usage;
  double latency_s = 0;
  std::string backend;
  int attempt_count = 1;
  // True when latency_s is simulated rather than wall-clock.
  bool simulated = false;
};

// What a backend may know about the trial beyond the prompt. Only the mock
// reads the reference.
struct CompletionContext {
  const ServiceOrder* order = nullptr;
  const ResourceConfig* reference = nullptr;
  PromptMode mode = PromptMode::kZero;
  std::uint64_t seed = 0;
};

// Fallback when a provider omits token counts: whitespace tokens x 1.3,
// rounded to nearest.
inline long long estimate_tokens(std::string_view text) {
  long long words = 0;
  bool in_word = false;
  for (unsigned char c : text) {
    const bool ws = std::isspace(c) != 0;
    if (!ws && !in_word) ++words;
    in_word = !ws;
  }
  return std::llround(static_cast<double>(words) * 1.3);
}

inline double trial_cost(const Usage& usage, const BackendDescriptor& backend) {
  if (backend.open_source) return 0.0;
  return static_cast<double>(usage.prompt_tokens) * backend.price_in_usd_per_1m / 1e6 +
         static_cast<double>(usage.completion_tokens) * backend.price_out_usd_per_1m / 1e6;
}

inline void validate_descriptor(const BackendDescriptor& d) {
  const std::string rec = d.name.empty() ? "<unnamed backend>" : d.name;
  auto fail = [&](const std::string& field, const std::string& what) {
    throw ConfigError("backend " + rec + ": " + field + ": " + what);
  };
  if (d.name.empty()) fail("name", "must not be empty");
  if (d.kind == BackendKind::kRemote && d.endpoint_url.empty())
    fail("endpoint_url", "required for remote backends");
  if (!(d.price_in_usd_per_1m >= 0)) fail("price_in_usd_per_1m", "must be >= 0");
  if (!(d.price_out_usd_per_1m >= 0)) fail("price_out_usd_per_1m", "must be >= 0");
  if (d.open_source && (d.price_in_usd_per_1m != 0 || d.price_out_usd_per_1m != 0))
    fail("open_source", "open-source backends carry no token price");
  if (!(d.sampling.temperature >= 0)) fail("sampling.temperature", "must be >= 0");
  if (!(d.sampling.top_p > 0 && d.sampling.top_p <= 1)) fail("sampling.top_p", "must lie in (0, 1]");
  if (d.max_in_flight < 1) fail("max_in_flight", "must be >= 1");
  if (!(d.timeout_s > 0)) fail("timeout_s", "must be > 0");
  if (d.retry.max_attempts < 1) fail("retry.max_attempts", "must be >= 1");
  if (!(d.retry.initial_backoff_s >= 0)) fail("retry.initial_backoff_s", "must be >= 0");
  if (d.kind == BackendKind::kMock) {
    const MockPolicy p = d.mock_policy.value_or(MockPolicy{});
    auto prob = [&](const char* f, double v) {
      if (!(v >= 0 && v <= 1)) fail(std::string("mock_policy.") + f, "must lie in [0, 1]");
    };
    prob("p_format_break", p.p_format_break);
    prob("leaf_perturb_rate", p.leaf_perturb_rate);
    prob("p_omit_explanation", p.p_omit_explanation);
    prob("p_error", p.p_error);
    if (!(p.synthetic_latency_s >= 0)) fail("mock_policy.synthetic_latency_s", "must be >= 0");
  }
}

class Backend {
 public:
  explicit Backend(BackendDescriptor d) : descriptor_(std::move(d)) {
    validate_descriptor(descriptor_);
  }
  virtual ~Backend() = default;

  Backend(const Backend&) = delete;
  Backend& operator=(const Backend&) = delete;

  const BackendDescriptor& descriptor() const noexcept { return descriptor_; }
  const std::string& name() const noexcept { return descriptor_.name; }

  CompletionResult complete(const PromptMessages& messages, const CompletionContext& ctx) {
    if (messages.system.empty() && messages.user.empty())
      throw ConfigError("backend " + name() + ": empty prompt");
    calls_.fetch_add(1, std::memory_order_relaxed);
    return do_complete(messages, ctx);
  }

  // Number of complete() invocations so far.
  std::size_t calls() const noexcept { return calls_.load(std::memory_order_relaxed); }

 protected:
  virtual CompletionResult do_complete(const PromptMessages& messages,
                                       const CompletionContext& ctx) = 0;

 private:
  BackendDescriptor descriptor_;
  std::atomic<std::size_t> calls_{0};
};

// SplitMix64 stream; portable across standard libraries, unlike the
// <random> distributions.
class SeededStream {
 public:
  explicit SeededStream(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    state_ += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1).
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // Uniform in [0, n).
  std::size_t below(std::size_t n) { return static_cast<std::size_t>(next() % n); }

 private:
  std::uint64_t state_;
};

// Number of leaves a mock perturbs for a reference with `leaves` leaves.
inline std::size_t perturbed_leaf_count(double rate, std::size_t leaves) {
  return static_cast<std::size_t>(std::llround(rate * static_cast<double>(leaves)));
}

// k distinct indices in [0, n), by partial Fisher-Yates.
inline std::vector<std::size_t> sample_indices(SeededStream& rng, std::size_t n, std::size_t k) {
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  k = std::min(k, n);
  for (std::size_t i = 0; i < k; ++i) std::swap(idx[i], idx[i + rng.below(n - i)]);
  idx.resize(k);
  std::sort(idx.begin(), idx.end());
  return idx;
}

// A value guaranteed to differ from v that keeps a valid config valid:
// positive integers step down (or up from 1), fractions halve, booleans
// flip, strings gain a suffix.
inline Scalar perturb_leaf(const Scalar& v) {
  if (const auto* b = std::get_if<bool>(&v)) return Scalar{!*b};
  if (const auto* d = std::get_if<double>(&v)) {
    if (is_integral(*d)) return Scalar{*d >= 2 ? *d - 1 : *d + 1};
    return Scalar{*d / 2};
  }
  return Scalar{std::get<std::string>(v) + "-alt"};
}

struct MockDraw {
  bool format_break = false;
  bool omit_explanation = false;
  bool error = false;
  std::vector<std::string> perturbed_paths;
};

// The random decisions a mock makes for one trial, in fixed draw order.
inline MockDraw draw_mock(const MockPolicy& policy, std::uint64_t trial_seed,
                          const LeafMap& reference_leaves) {
  SeededStream rng(splitmix64(policy.seed) ^ trial_seed);
  MockDraw d;
  d.error = rng.uniform() < policy.p_error;
  d.format_break = rng.uniform() < policy.p_format_break;
  d.omit_explanation = rng.uniform() < policy.p_omit_explanation;
  const auto k = perturbed_leaf_count(policy.leaf_perturb_rate, reference_leaves.size());
  std::vector<std::string> paths;
  for (const auto& [p, _] : reference_leaves) paths.push_back(p);
  for (auto i : sample_indices(rng, paths.size(), k)) d.perturbed_paths.push_back(paths[i]);
  return d;
}

namespace detail {

inline std::string mock_explanation(const ServiceOrder* order, const ResourceConfig& cfg) {
  std::string out = "Here is the RFS configuration derived from the service order.\n";
  if (order) {
    out += "The order " + order->order_id + " requests";
    for (const auto& [k, v] : order->intents) out += " " + k + " = " + to_string(v) + ";";
    out += "\n";
  }
  const auto& budget = cfg.slice.latency_budget_ms;
  if (!budget.empty()) {
    std::string lhs;
    for (const auto& [seg, v] : budget) {
      if (!lhs.empty()) lhs += " + ";
      lhs += format_number(v);
    }
    out += "Latency budget per segment: " + lhs + " = " +
           format_number(cfg.slice.total_latency_budget_ms()) + " ms";
    if (order) {
      if (auto it = order->intents.find("latency_ms"); it != order->intents.end())
        out += ", within the ordered " + to_string(it->second) + " ms";
    }
    out += ".\n";
  }
  if (auto it = cfg.core.find("UPF"); it != cfg.core.end())
    out += "UPF sizing: 2 * " + format_number(it->second.cpu_cores / 2) + " = " +
           format_number(it->second.cpu_cores) + " cores.\n";
  return out;
}

// Truncated YAML ending in an unterminated flow sequence: never parses.
inline std::string broken_yaml(const std::string& yaml) {
  const auto lines = split(yaml, '\n');
  std::string out;
  for (std::size_t i = 0; i < lines.size() / 2; ++i) out += lines[i] + "\n";
  out += "  RU: {cpu_cores: [2, ram_mb: \n";
  return out;
}

}  // namespace detail

// Deterministic test double: answers with the target's reference, broken or
// perturbed according to its policy and the per-trial seed.
class MockBackend final : public Backend {
 public:
  explicit MockBackend(BackendDescriptor d) : Backend(std::move(d)) {}

  const MockPolicy& policy() const {
    static const MockPolicy kDefault{};
    return descriptor().mock_policy ? *descriptor().mock_policy : kDefault;
  }

 protected:
  CompletionResult do_complete(const PromptMessages& messages,
                               const CompletionContext& ctx) override {
    if (!ctx.reference)
      throw ConfigError("mock backend " + name() + " needs the target reference");
    const auto leaves = flatten_config(*ctx.reference);
    const MockDraw draw = draw_mock(policy(), ctx.seed, leaves);
    if (draw.error) throw BackendError("mock backend " + name() + ": injected failure", 503);

    ResourceConfig answer = *ctx.reference;
    if (!draw.perturbed_paths.empty()) {
      LeafMap mutated = leaves;
      for (const auto& p : draw.perturbed_paths) mutated[p] = perturb_leaf(mutated[p]);
      answer = rebuild_config(mutated, "mock");
      answer.order_ref = ctx.reference->order_ref;
    }
    const std::string yaml = to_yaml(answer);

    CompletionResult r;
    if (!draw.omit_explanation) r.text = detail::mock_explanation(ctx.order, *ctx.reference) + "\n";
    r.text += detail::block("yaml", draw.format_break ? detail::broken_yaml(yaml) : yaml);
    r.usage.prompt_tokens = estimate_tokens(messages.system) + estimate_tokens(messages.user);
    r.usage.completion_tokens = estimate_tokens(r.text);
    r.usage.estimated = true;
    r.latency_s = policy().synthetic_latency_s;
    r.simulated = true;
    r.backend = name();
    return r;
  }
};

struct HttpResponse {
  int status = 0;  // 0: transport failure
  std::string body;
  std::string error;
};

// Performs one POST; injectable so retry logic is testable without sockets.
using HttpTransport = std::function<HttpResponse(const std::string& url, const std::string& body,
                                                 const httplib::Headers& headers,
                                                 double timeout_s)>;

inline HttpResponse httplib_post(const std::string& url, const std::string& body,
                                 const httplib::Headers& headers, double timeout_s) {
  // Split "scheme://host[:port]" from the path.
  const auto scheme_end = url.find("://");
  const auto path_start = url.find('/', scheme_end == std::string::npos ? 0 : scheme_end + 3);
  const std::string origin = path_start == std::string::npos ? url : url.substr(0, path_start);
  const std::string path = path_start == std::string::npos ? "/" : url.substr(path_start);

  httplib::Client cli(origin);
  if (!cli.is_valid()) return {0, {}, "unsupported endpoint " + origin};
  const auto secs = static_cast<time_t>(timeout_s);
  const auto usecs = static_cast<time_t>((timeout_s - static_cast<double>(secs)) * 1e6);
  cli.set_connection_timeout(secs, usecs);
  cli.set_read_timeout(secs, usecs);
  cli.set_write_timeout(secs, usecs);
  auto res = cli.Post(path, headers, body, "application/json");
  if (!res) return {0, {}, httplib::to_string(res.error())};
  return {res->status, res->body, {}};
}

// Value of the descriptor's credential variable; empty when the backend
// needs none.
inline std::string resolve_credential(const BackendDescriptor& d) {
  if (d.kind == BackendKind::kMock || d.api_key_env.empty()) return {};
  const char* key = std::getenv(d.api_key_env.c_str());
  if (!key || !*key)
    throw ConfigError("backend " + d.name + ": credential variable " + d.api_key_env +
                      " is not set");
  return key;
}

// Chat completion over HTTP with bounded exponential-backoff retries on
// transport errors, 429 and 5xx.
class RemoteBackend final : public Backend {
 public:
  using Sleeper = std::function<void(std::chrono::duration<double>)>;

  explicit RemoteBackend(BackendDescriptor d, HttpTransport transport = httplib_post,
                         Sleeper sleeper = default_sleeper)
      : Backend(std::move(d)), transport_(std::move(transport)), sleeper_(std::move(sleeper)) {}

  // Body of the request for these messages.
  nlohmann::json request_body(const PromptMessages& m) const {
    const auto& d = descriptor();
    if (d.protocol == WireProtocol::kGemini) {
      return {{"systemInstruction", {{"parts", {{{"text", m.system}}}}}},
              {"contents", {{{"role", "user"}, {"parts", {{{"text", m.user}}}}}}},
              {"generationConfig",
               {{"temperature", d.sampling.temperature}, {"topP", d.sampling.top_p}}}};
    }
    return {{"model", d.model_id},
            {"messages",
             {{{"role", "system"}, {"content", m.system}}, {{"role", "user"}, {"content", m.user}}}},
            {"temperature", d.sampling.temperature},
            {"top_p", d.sampling.top_p}};
  }

 protected:
  CompletionResult do_complete(const PromptMessages& messages, const CompletionContext&) override {
    const auto& d = descriptor();
    httplib::Headers headers;
    if (const std::string key = resolve_credential(d); !key.empty()) {
      if (d.protocol == WireProtocol::kGemini) {
        headers.emplace("x-goog-api-key", key);
      } else {
        headers.emplace("Authorization", std::string("Bearer ") + key);
      }
    }
    const std::string body = request_body(messages).dump();

    const auto start = std::chrono::steady_clock::now();
    HttpResponse res;
    int attempt = 0;
    double backoff = d.retry.initial_backoff_s;
    while (true) {
      ++attempt;
      res = transport_(d.endpoint_url, body, headers, d.timeout_s);
      const bool retryable = res.status == 0 || res.status == 429 || res.status >= 500;
      if (res.status >= 200 && res.status < 300) break;
      if (!retryable || attempt >= d.retry.max_attempts) {
        std::string msg = "backend " + d.name + ": ";
        msg += res.status == 0 ? "transport failure (" + res.error + ")"
                               : "HTTP " + std::to_string(res.status);
        msg += " after " + std::to_string(attempt) + " attempt(s)";
        throw BackendError(msg, res.status);
      }
      sleeper_(std::chrono::duration<double>(backoff));
      backoff *= 2;
    }
    const auto finish = std::chrono::steady_clock::now();

    CompletionResult r = parse_response(res.body);
    r.latency_s = std::chrono::duration<double>(finish - start).count();
    r.attempt_count = attempt;
    r.backend = d.name;
    if (r.usage.estimated) {
      r.usage.prompt_tokens = estimate_tokens(messages.system) + estimate_tokens(messages.user);
      r.usage.completion_tokens = estimate_tokens(r.text);
    }
    return r;
  }

 private:
  static void default_sleeper(std::chrono::duration<double> d) { std::this_thread::sleep_for(d); }

  CompletionResult parse_response(const std::string& body) const {
    const auto& d = descriptor();
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(body);
    } catch (const nlohmann::json::parse_error& e) {
      throw BackendError("backend " + d.name + ": malformed response body: " + e.what(), 200);
    }
    CompletionResult r;
    bool have_usage = false;
    if (d.protocol == WireProtocol::kGemini) {
      const auto parts = j.value(nlohmann::json::json_pointer("/candidates/0/content/parts"), nlohmann::json::array());
      for (const auto& p : parts)
        if (p.contains("text") && p["text"].is_string()) r.text += p["text"].get<std::string>();
      if (j.contains("usageMetadata") && j["usageMetadata"].is_object()) {
        const auto& u = j["usageMetadata"];
        r.usage.prompt_tokens = u.value("promptTokenCount", 0LL);
        r.usage.completion_tokens = u.value("candidatesTokenCount", 0LL);
        have_usage = u.contains("promptTokenCount") || u.contains("candidatesTokenCount");
      }
    } else {
      const auto content = j.value(nlohmann::json::json_pointer("/choices/0/message/content"), nlohmann::json());
      if (content.is_string()) r.text = content.get<std::string>();
      if (j.contains("usage") && j["usage"].is_object()) {
        const auto& u = j["usage"];
        r.usage.prompt_tokens = u.value("prompt_tokens", 0LL);
        r.usage.completion_tokens = u.value("completion_tokens", 0LL);
        have_usage = u.contains("prompt_tokens") || u.contains("completion_tokens");
      }
    }
    if (trim(r.text).empty())
      throw EmptyResponseError("backend " + d.name + ": provider returned no text", 200);
    r.usage.estimated = !have_usage;
    return r;
  }

  HttpTransport transport_;
  Sleeper sleeper_;
};

inline std::unique_ptr<Backend> make_backend(const BackendDescriptor& d) {
  if (d.kind == BackendKind::kMock) return std::make_unique<MockBackend>(d);
  return std::make_unique<RemoteBackend>(d);
}

// One-shot convenience over make_backend.
inline CompletionResult complete(const BackendDescriptor& d, const PromptMessages& messages,
                                 const CompletionContext& ctx = {}) {
  return make_backend(d)->complete(messages, ctx);
}

namespace detail {

template <typename T>
T yaml_get(const YAML::Node& node, const char* key, T fallback, const std::string& rec) {
  if (!node[key]) return fallback;
  try {
    return node[key].as<T>();
  } catch (const YAML::Exception&) {
    throw ConfigError("backend " + rec + ": " + key + ": wrong type");
  }
}

}  // namespace detail

inline BackendDescriptor parse_descriptor(const YAML::Node& n, std::size_t index) {
  if (!n.IsMap()) throw ConfigError("backends[" + std::to_string(index) + "]: expected a mapping");
  BackendDescriptor d;
  const std::string idx = "backends[" + std::to_string(index) + "]";
  d.name = detail::yaml_get<std::string>(n, "name", "", idx);
  const std::string rec = d.name.empty() ? idx : d.name;
  const auto kind = to_lower(detail::yaml_get<std::string>(n, "kind", "remote", rec));
  if (kind == "remote") {
    d.kind = BackendKind::kRemote;
  } else if (kind == "mock") {
    d.kind = BackendKind::kMock;
  } else {
    throw ConfigError("backend " + rec + ": kind: must be remote or mock");
  }
  const auto proto = to_lower(detail::yaml_get<std::string>(n, "protocol", "openai", rec));
  if (proto == "openai") {
    d.protocol = WireProtocol::kOpenAiChat;
  } else if (proto == "gemini") {
    d.protocol = WireProtocol::kGemini;
  } else {
    throw ConfigError("backend " + rec + ": protocol: must be openai or gemini");
  }
  d.endpoint_url = detail::yaml_get<std::string>(n, "endpoint_url", "", rec);
  d.model_id = detail::yaml_get<std::string>(n, "model_id", d.name, rec);
  d.api_key_env = detail::yaml_get<std::string>(n, "api_key_env", "", rec);
  d.price_in_usd_per_1m = detail::yaml_get<double>(n, "price_in_usd_per_1m", 0, rec);
  d.price_out_usd_per_1m = detail::yaml_get<double>(n, "price_out_usd_per_1m", 0, rec);
  d.open_source = detail::yaml_get<bool>(n, "open_source", false, rec);
  if (const auto s = n["sampling"]) {
    d.sampling.temperature = detail::yaml_get<double>(s, "temperature", 0.2, rec);
    d.sampling.top_p = detail::yaml_get<double>(s, "top_p", 0.9, rec);
  }
  if (const auto m = n["mock_policy"]) {
    MockPolicy p;
    p.p_format_break = detail::yaml_get<double>(m, "p_format_break", 0, rec);
    p.leaf_perturb_rate = detail::yaml_get<double>(m, "leaf_perturb_rate", 0, rec);
    p.p_omit_explanation = detail::yaml_get<double>(m, "p_omit_explanation", 0, rec);
    p.synthetic_latency_s = detail::yaml_get<double>(m, "synthetic_latency_s", 0, rec);
    p.seed = detail::yaml_get<std::uint64_t>(m, "seed", 0, rec);
    p.p_error = detail::yaml_get<double>(m, "p_error", 0, rec);
    d.mock_policy = p;
  }
  d.max_in_flight = detail::yaml_get<int>(n, "max_in_flight", 2, rec);
  d.timeout_s = detail::yaml_get<double>(n, "timeout_s", 120, rec);
  if (const auto r = n["retry"]) {
    d.retry.max_attempts = detail::yaml_get<int>(r, "max_attempts", 3, rec);
    d.retry.initial_backoff_s = detail::yaml_get<double>(r, "initial_backoff_s", 1.0, rec);
  }
  if (const auto meta = n["metadata"]; meta && meta.IsMap())
    for (const auto& kv : meta) d.metadata[kv.first.as<std::string>()] = kv.second.as<std::string>();
  validate_descriptor(d);
  return d;
}

// Parses a backend registry: either a top-level list or {backends: [...]}.
inline std::vector<BackendDescriptor> parse_backends(std::string_view yaml_text) {
  YAML::Node root;
  try {
    root = YAML::Load(std::string(yaml_text));
  } catch (const YAML::Exception& e) {
    throw ConfigError(std::string("backend registry: parse error: ") + e.what());
  }
  const YAML::Node list = root.IsMap() ? root["backends"] : root;
  if (!list || !list.IsSequence() || list.size() == 0)
    throw ConfigError("backend registry: expected a non-empty list of backends");
  std::vector<BackendDescriptor> out;
  std::set<std::string> names;
  for (std::size_t i = 0; i < list.size(); ++i) {
    auto d = parse_descriptor(list[i], i);
    if (!names.insert(d.name).second) throw ConfigError("duplicate backend name " + d.name);
    out.push_back(std::move(d));
  }
  return out;
}

inline std::vector<BackendDescriptor> load_backends(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) throw LoadError("backend registry not found: " + path.string());
  return parse_backends(read_file(path));
}

}  // namespace intent_bench
