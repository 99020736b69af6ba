#pragma once

// Aggregation of a run store into per-(backend, mode) FEACI cells and
// rendering as table, csv or json.

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "intent_bench/catalog.hpp"
#include "intent_bench/runner.hpp"
#include "intent_bench/scoring.hpp"

namespace intent_bench {

struct ReportBundle {
  std::string run_id;
  std::vector<std::string> backends;  // column order
  std::vector<PromptMode> modes;      // row order
  std::vector<AggregateScore> cells;  // backend-major, then mode
  Weights weights;
  Thresholds thresholds;
  bool gate_text_metrics_on_format = true;

  const AggregateScore* cell(const std::string& backend, PromptMode mode) const {
    for (const auto& c : cells)
      if (c.backend == backend && c.mode == mode) return &c;
    return nullptr;
  }
};

struct AggregateOptions {
  Weights weights;
  ScoringOptions scoring;
};

namespace detail {

struct CellAccumulator {
  std::size_t n = 0, failed = 0;
  double F = 0, E = 0, A = 0, C = 0, I = 0;
  double tin = 0, tout = 0;
  double bleu = 0, r1 = 0, r2 = 0, rl = 0;
};

}  // namespace detail

// Scores every completed trial of the manifest's grid. Backend errors are
// excluded from the means and counted in n_failed.
inline ReportBundle aggregate(const RunManifest& manifest, const std::vector<TrialRecord>& trials,
                              const LoadedCatalog& refs, const AnnotationStore& annotations,
                              const AggregateOptions& opts) {
  opts.weights.validate();
  opts.scoring.thresholds.validate();
  if (trials.empty()) throw AggregationError("run " + manifest.run_id + " has no trial records");

  ReportBundle bundle;
  bundle.run_id = manifest.run_id;
  bundle.modes = manifest.modes;
  for (const auto& b : manifest.backends) bundle.backends.push_back(b.name);
  bundle.weights = opts.weights;
  bundle.thresholds = opts.scoring.thresholds;
  bundle.gate_text_metrics_on_format = opts.scoring.gate_text_metrics_on_format;

  std::map<std::pair<std::string, PromptMode>, detail::CellAccumulator> acc;
  std::size_t completed = 0;
  for (const auto& t : trials) {
    const auto key = std::make_pair(t.spec.backend, t.spec.mode);
    const BackendSnapshot* backend = manifest.find_backend(t.spec.backend);
    if (!backend || std::find(manifest.modes.begin(), manifest.modes.end(), t.spec.mode) ==
                        manifest.modes.end())
      throw AggregationError("trial " + t.trial_id + " is outside the run grid");
    auto& cell = acc[key];
    if (t.error) {
      ++cell.failed;
      continue;
    }
    const ServiceOrder* order = refs.catalog.find_order(t.spec.order_id);
    if (!order || !refs.references.contains(t.spec.order_id))
      throw AggregationError("no reference for order " + t.spec.order_id);
    TrialInputs in{t.trial_id,  t.response_text,
                   order,       &refs.references.at(t.spec.order_id),
                   t.spec.mode, t.usage,
                   t.latency_s};
    const TrialScore s = score_trial(in, backend->pricing(), annotations, opts.scoring);
    ++completed;
    ++cell.n;
    cell.F += s.format_ok ? 1 : 0;
    cell.E += s.explanation_ok ? 1 : 0;
    cell.A += s.accuracy;
    cell.C += s.cost_norm;
    cell.I += s.latency_norm;
    cell.tin += static_cast<double>(t.usage.prompt_tokens);
    cell.tout += static_cast<double>(t.usage.completion_tokens);
    cell.bleu += s.bleu;
    cell.r1 += s.rouge1;
    cell.r2 += s.rouge2;
    cell.rl += s.rougeL;
  }
  if (completed == 0) throw AggregationError("run " + manifest.run_id + " has no completed trials");

  for (const auto& b : bundle.backends) {
    for (auto mode : bundle.modes) {
      auto it = acc.find({b, mode});
      if (it == acc.end() || it->second.n == 0)
        throw AggregationError("cell " + b + "/" + std::string(to_string(mode)) +
                               " has no completed trials");
      const auto& c = it->second;
      const double n = static_cast<double>(c.n);
      AggregateScore s;
      s.backend = b;
      s.mode = mode;
      s.F = c.F / n;
      s.E = c.E / n;
      s.A = c.A / n;
      s.C = c.C / n;
      s.I = c.I / n;
      s.n_trials = c.n;
      s.n_failed = c.failed;
      s.mean_tokens_in = c.tin / n;
      s.mean_tokens_out = c.tout / n;
      s.bleu = c.bleu / n;
      s.rouge1 = c.r1 / n;
      s.rouge2 = c.r2 / n;
      s.rougeL = c.rl / n;
      s.e_serv = eval_score(s, opts.weights);
      bundle.cells.push_back(s);
    }
  }
  return bundle;
}

// Reads the run store and its annotations.csv, then aggregates.
inline ReportBundle aggregate(const std::filesystem::path& run_dir, const LoadedCatalog& refs,
                              const AggregateOptions& opts) {
  const auto manifest = load_manifest(run_dir);
  const auto annotations = load_annotations(run_dir / "annotations.csv");
  return aggregate(manifest, load_trials(run_dir), refs, annotations, opts);
}

enum class ReportFormat { kTable, kCsv, kJson };

inline ReportFormat parse_report_format(std::string_view s) {
  const auto l = to_lower(trim(s));
  if (l == "table") return ReportFormat::kTable;
  if (l == "csv") return ReportFormat::kCsv;
  if (l == "json") return ReportFormat::kJson;
  throw UsageError("unknown report format '" + std::string(s) + "' (table, csv, json)");
}

namespace detail {

// Shortest round-trip decimal.
inline std::string full_precision(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

inline std::string fixed2(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  // Avoid "-0.00".
  if (std::string_view(buf) == "-0.00") return "0.00";
  return buf;
}

inline std::string pad_right(std::string s, std::size_t w) {
  if (s.size() < w) s.append(w - s.size(), ' ');
  return s;
}

inline std::string pad_left(std::string s, std::size_t w) {
  if (s.size() < w) s.insert(0, w - s.size(), ' ');
  return s;
}

// Grid with metric rows grouped per mode, backends as columns.
inline std::string grid(const ReportBundle& b, const std::string& title,
                        const std::vector<std::pair<std::string, double AggregateScore::*>>& rows,
                        int decimals) {
  std::size_t w0 = 0, w1 = 6, wc = 8;
  for (const auto& [label, _] : rows) w0 = std::max(w0, label.size());
  for (const auto& name : b.backends) wc = std::max(wc, name.size() + 1);
  std::string out = title + "\n";
  std::string header = pad_right("Metric", w0) + "  " + pad_right("Prompt", w1);
  for (const auto& name : b.backends) header += pad_left(name, wc + 1);
  out += header + "\n" + std::string(header.size(), '-') + "\n";
  for (const auto& [label, field] : rows) {
    bool first = true;
    for (auto mode : b.modes) {
      std::string line = pad_right(first ? label : "", w0) + "  " +
                         pad_right(std::string(to_string(mode)), w1);
      for (const auto& name : b.backends) {
        const auto* c = b.cell(name, mode);
        std::string v = "-";
        if (c) {
          if (decimals == 2) {
            v = fixed2(c->*field);
          } else {
            char buf[32];
            std::snprintf(buf, sizeof buf, "%.*f", decimals, c->*field);
            v = buf;
          }
        }
        line += pad_left(v, wc + 1);
      }
      out += line + "\n";
      first = false;
    }
  }
  return out;
}

}  // namespace detail

inline constexpr std::string_view kCsvHeader = "backend,mode,F,E,A,C,I,e_serv,n_trials";

inline nlohmann::json to_json(const ReportBundle& b) {
  nlohmann::json cells = nlohmann::json::array();
  for (const auto& c : b.cells) {
    cells.push_back({{"backend", c.backend},
                     {"mode", to_string(c.mode)},
                     {"F", c.F},
                     {"E", c.E},
                     {"A", c.A},
                     {"C", c.C},
                     {"I", c.I},
                     {"e_serv", c.e_serv},
                     {"n_trials", c.n_trials},
                     {"n_failed", c.n_failed},
                     {"mean_tokens_in", c.mean_tokens_in},
                     {"mean_tokens_out", c.mean_tokens_out},
                     {"bleu", c.bleu},
                     {"rouge1", c.rouge1},
                     {"rouge2", c.rouge2},
                     {"rougeL", c.rougeL}});
  }
  nlohmann::json modes = nlohmann::json::array();
  for (auto m : b.modes) modes.push_back(to_string(m));
  return {{"run_id", b.run_id},
          {"backends", b.backends},
          {"modes", modes},
          {"weights",
           {b.weights.format, b.weights.explanation, b.weights.accuracy, b.weights.cost,
            b.weights.inference}},
          {"thresholds", {{"c0_usd", b.thresholds.c0_usd}, {"i0_s", b.thresholds.i0_s}}},
          {"gate_text_metrics_on_format", b.gate_text_metrics_on_format},
          {"cells", cells}};
}

inline ReportBundle bundle_from_json(const nlohmann::json& j) {
  ReportBundle b;
  try {
    b.run_id = j.at("run_id").get<std::string>();
    b.backends = j.at("backends").get<std::vector<std::string>>();
    for (const auto& m : j.at("modes")) {
      auto mode = parse_mode(m.get<std::string>());
      if (!mode) throw LoadError("report: unknown mode");
      b.modes.push_back(*mode);
    }
    const auto& w = j.at("weights");
    b.weights = {w.at(0).get<double>(), w.at(1).get<double>(), w.at(2).get<double>(),
                 w.at(3).get<double>(), w.at(4).get<double>()};
    b.thresholds = {j.at("thresholds").at("c0_usd").get<double>(),
                    j.at("thresholds").at("i0_s").get<double>()};
    b.gate_text_metrics_on_format = j.value("gate_text_metrics_on_format", true);
    for (const auto& c : j.at("cells")) {
      AggregateScore s;
      s.backend = c.at("backend").get<std::string>();
      auto mode = parse_mode(c.at("mode").get<std::string>());
      if (!mode) throw LoadError("report: unknown mode");
      s.mode = *mode;
      s.F = c.at("F").get<double>();
      s.E = c.at("E").get<double>();
      s.A = c.at("A").get<double>();
      s.C = c.at("C").get<double>();
      s.I = c.at("I").get<double>();
      s.e_serv = c.at("e_serv").get<double>();
      s.n_trials = c.at("n_trials").get<std::size_t>();
      s.n_failed = c.value("n_failed", std::size_t{0});
      s.mean_tokens_in = c.value("mean_tokens_in", 0.0);
      s.mean_tokens_out = c.value("mean_tokens_out", 0.0);
      s.bleu = c.value("bleu", 0.0);
      s.rouge1 = c.value("rouge1", 0.0);
      s.rouge2 = c.value("rouge2", 0.0);
      s.rougeL = c.value("rougeL", 0.0);
      b.cells.push_back(s);
    }
  } catch (const nlohmann::json::exception& e) {
    throw LoadError(std::string("malformed report bundle: ") + e.what());
  }
  return b;
}

inline std::string render(const ReportBundle& b, ReportFormat format) {
  switch (format) {
    case ReportFormat::kJson:
      return to_json(b).dump(2) + "\n";
    case ReportFormat::kCsv: {
      std::string out = std::string(kCsvHeader) + "\n";
      for (const auto& c : b.cells) {
        out += c.backend + "," + std::string(to_string(c.mode));
        for (double v : {c.F, c.E, c.A, c.C, c.I, c.e_serv}) out += "," + detail::full_precision(v);
        out += "," + std::to_string(c.n_trials) + "\n";
      }
      return out;
    }
    case ReportFormat::kTable: {
      using S = AggregateScore;
      std::string out = "Run " + b.run_id + "\n\n";
      out += detail::grid(b, "FEACI scores",
                          {{"Format", &S::F},
                           {"Explain", &S::E},
                           {"Accuracy", &S::A},
                           {"Normalized Cost", &S::C},
                           {"Normalized Inference", &S::I},
                           {"E_serv", &S::e_serv}},
                          2);
      out += "\n";
      out += detail::grid(b, "Text metrics",
                          {{"BLEU", &S::bleu},
                           {"ROUGE-1", &S::rouge1},
                           {"ROUGE-2", &S::rouge2},
                           {"ROUGE-L", &S::rougeL}},
                          3);
      out += "\n";
      out += detail::grid(b, "Mean tokens",
                          {{"Input", &S::mean_tokens_in}, {"Output", &S::mean_tokens_out}}, 0);
      out += "\nTrials per cell:";
      for (const auto& c : b.cells)
        out += " " + c.backend + "/" + std::string(to_string(c.mode)) + "=" +
               std::to_string(c.n_trials) + (c.n_failed ? "(+" + std::to_string(c.n_failed) + " failed)" : "");
      out += "\n";
      char buf[160];
      std::snprintf(buf, sizeof buf,
                    "Weights %g,%g,%g,%g,%g  C0=%g USD  I0=%g s  text metrics gated on format: %s\n",
                    b.weights.format, b.weights.explanation, b.weights.accuracy, b.weights.cost,
                    b.weights.inference, b.thresholds.c0_usd, b.thresholds.i0_s,
                    b.gate_text_metrics_on_format ? "yes" : "no");
      out += buf;
      return out;
    }
  }
  return {};
}

}  // namespace intent_bench
