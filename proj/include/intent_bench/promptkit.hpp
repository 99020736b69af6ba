#pragma once

// ZERO / ONE / FEW prompt construction from a service order and an exemplar
// store.

#include <algorithm>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>
#include <yaml-cpp/yaml.h>

#include "intent_bench/catalog.hpp"
#include "intent_bench/error.hpp"

namespace intent_bench {

enum class PromptMode { kZero, kOne, kFew };

inline constexpr std::array<PromptMode, 3> kAllModes = {PromptMode::kZero, PromptMode::kOne,
                                                        PromptMode::kFew};

inline std::string_view to_string(PromptMode m) {
  switch (m) {
    case PromptMode::kZero: return "ZERO";
    case PromptMode::kOne: return "ONE";
    case PromptMode::kFew: return "FEW";
  }
  return "?";
}

inline std::optional<PromptMode> parse_mode(std::string_view s) {
  const auto l = to_lower(trim(s));
  if (l == "zero") return PromptMode::kZero;
  if (l == "one") return PromptMode::kOne;
  if (l == "few") return PromptMode::kFew;
  return std::nullopt;
}

// One <question, chain of thought, answer> tuple.
struct Exemplar {
  std::string question;  // serialized ServiceOrder (JSON)
  std::optional<std::string> chain_of_thought;
  std::string answer;    // serialized ResourceConfig (YAML)
  std::string order_id;  // taken from the question
};

struct PromptMessages {
  std::string system;
  std::string user;

  bool operator==(const PromptMessages&) const = default;
};

// Marker that opens each rendered exemplar section.
inline constexpr std::string_view kExampleMarker = "### Example ";
inline constexpr std::string_view kTargetMarker = "### Target service order";

// Validates the answer against the config schema and pulls the order id out
// of the question.
inline Exemplar make_exemplar(std::string question, std::optional<std::string> cot,
                              std::string answer, const std::string& record = "exemplar") {
  Exemplar ex;
  try {
    const auto q = nlohmann::json::parse(question);
    if (!q.is_object() || !q.contains("order_id") || !q["order_id"].is_string())
      throw ValidationError(record, "question", "must be a service order with order_id");
    ex.order_id = q["order_id"].get<std::string>();
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError(record, "question", std::string("JSON parse error: ") + e.what());
  }
  parse_resource_config(answer, record);
  if (cot && trim(*cot).empty()) cot.reset();
  ex.question = std::move(question);
  ex.chain_of_thought = std::move(cot);
  ex.answer = std::move(answer);
  return ex;
}

// Reads exemplars/*.yaml (fields question, cot optional, answer), sorted by
// file name.
inline std::vector<Exemplar> load_exemplars(const std::filesystem::path& dir) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(dir)) throw LoadError("exemplar directory not found: " + dir.string());
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(dir)) {
    const auto ext = e.path().extension();
    if (e.is_regular_file() && (ext == ".yaml" || ext == ".yml")) files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  std::vector<Exemplar> out;
  for (const auto& f : files) {
    const std::string record = f.filename().string();
    YAML::Node doc;
    try {
      doc = YAML::Load(read_file(f));
    } catch (const YAML::Exception& e) {
      throw ValidationError(record, "<document>", std::string("parse error: ") + e.what());
    }
    if (!doc.IsMap() || !doc["question"] || !doc["answer"])
      throw ValidationError(record, "<root>", "needs question and answer fields");
    std::optional<std::string> cot;
    if (doc["cot"] && doc["cot"].IsScalar()) cot = doc["cot"].as<std::string>();
    out.push_back(make_exemplar(doc["question"].as<std::string>(), std::move(cot),
                                doc["answer"].as<std::string>(), record));
  }
  return out;
}

namespace detail {

inline std::string block(std::string_view lang, std::string_view body) {
  std::string out = "```";
  out += lang;
  out += "\n";
  out += trim(body);
  out += "\n```\n";
  return out;
}

inline constexpr std::string_view kSystemPrompt =
    "You are a network resource planner for an intent-based 5G management system. "
    "You translate customer-facing service orders (CFS), given as JSON, into "
    "resource-facing service configurations (RFS) for the network resource "
    "orchestrator.\n"
    "The RFS must configure the RAN functions RU, DU and CU under `ran`, the core "
    "functions UPF, AMF, PCF, SMF, AUSF and NSSF under `core`, and the slice under "
    "`slice` (sst, latency_budget_ms per segment, guaranteed_throughput_mbps). Every "
    "network function carries cpu_cores, ram_mb, storage_gb and replicas, plus any "
    "function-specific parameters as scalar values.\n"
    "Output format: explain briefly how you derived the values, then give the "
    "configuration as a single YAML document inside one fenced ```yaml code block. "
    "Do not emit any other code block.\n";

}  // namespace detail

// Renders the prompt for one target order. ZERO embeds no exemplar, ONE the
// first exemplar without its chain of thought, FEW every exemplar with its
// chain of thought. When target_reference is given, an exemplar answer equal
// to it is rejected as leakage.
inline PromptMessages build_prompt(PromptMode mode, const ServiceOrder& order,
                                   const std::vector<Exemplar>& exemplars,
                                   std::optional<std::string_view> target_reference = {}) {
  std::size_t used = 0;
  switch (mode) {
    case PromptMode::kZero: used = 0; break;
    case PromptMode::kOne:
      if (exemplars.empty()) throw ArityError("ONE requires one exemplar");
      used = 1;
      break;
    case PromptMode::kFew:
      if (exemplars.size() < 2)
        throw ArityError("FEW requires at least two exemplars, got " +
                         std::to_string(exemplars.size()));
      used = exemplars.size();
      break;
  }
  for (std::size_t i = 0; i < used; ++i) {
    const auto& ex = exemplars[i];
    if (ex.order_id == order.order_id)
      throw LeakageError("exemplar " + std::to_string(i + 1) + " uses the target order " +
                         order.order_id);
    if (target_reference && trim(ex.answer) == trim(*target_reference))
      throw LeakageError("exemplar " + std::to_string(i + 1) +
                         " answer equals the target reference");
    if (mode == PromptMode::kFew && !ex.chain_of_thought)
      throw ArityError("FEW requires CoT: exemplar " + std::to_string(i + 1) + " (" +
                       ex.order_id + ") has no chain of thought");
  }

  PromptMessages msg;
  msg.system = std::string(detail::kSystemPrompt);

  std::string& u = msg.user;
  switch (mode) {
    case PromptMode::kZero:
      u += "Translate the service order below into the RFS configuration.\n\n";
      break;
    case PromptMode::kOne:
      u += "Below is one example of a service order and the expected RFS "
           "configuration. Follow the same format for the target service order.\n\n";
      break;
    case PromptMode::kFew:
      u += "Below are examples of service orders, the reasoning that derives each "
           "field of the expected RFS configuration from the technical intents, and "
           "the expected configuration. Apply the same reasoning to the target "
           "service order and show your calculations.\n\n";
      break;
  }
  for (std::size_t i = 0; i < used; ++i) {
    const auto& ex = exemplars[i];
    u += std::string(kExampleMarker) + std::to_string(i + 1) + "\n";
    u += "Service order:\n" + detail::block("json", ex.question);
    if (mode == PromptMode::kFew) u += "Reasoning:\n" + std::string(trim(*ex.chain_of_thought)) + "\n";
    u += "Expected response:\n" + detail::block("yaml", ex.answer) + "\n";
  }
  u += std::string(kTargetMarker) + "\n";
  u += detail::block("json", serialize_order(order));
  return msg;
}

}  // namespace intent_bench
