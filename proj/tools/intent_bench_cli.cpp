// intent-bench: run, score and report FEACI benchmarks over a service-order
// catalog.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "intent_bench.hpp"

namespace fs = std::filesystem;
using namespace intent_bench;

namespace {

std::vector<PromptMode> parse_modes(const std::string& csv) {
  std::vector<PromptMode> modes;
  for (const auto& part : split(csv, ',')) {
    if (trim(part).empty()) continue;
    auto m = parse_mode(part);
    if (!m) throw UsageError("unknown prompt mode '" + part + "' (zero, one, few)");
    if (std::find(modes.begin(), modes.end(), *m) != modes.end())
      throw UsageError("prompt mode listed twice: " + part);
    modes.push_back(*m);
  }
  if (modes.empty()) throw UsageError("--modes is empty");
  return modes;
}

int cmd_validate(const std::string& dir) {
  const auto loaded = load_catalog(dir);
  std::size_t leaves = 0;
  for (const auto& o : loaded.catalog.orders)
    leaves += flatten_config(loaded.references.at(o.order_id)).size();
  std::printf("catalog %s: %zu products, %zu orders, %zu reference leaves, checksum %s\n",
              loaded.catalog.name.c_str(), loaded.catalog.products.size(),
              loaded.catalog.orders.size(), leaves, loaded.checksum.c_str());
  if (fs::is_directory(fs::path(dir) / "exemplars")) {
    const auto ex = load_exemplars(fs::path(dir) / "exemplars");
    std::printf("exemplars: %zu\n", ex.size());
  }
  return 0;
}

struct RunArgs {
  std::string catalog, backends, modes = "zero,one,few", out = "runs", run_id, exemplars;
  int reps = 10;
  std::uint64_t seed = 0;
  std::size_t few_k = 0;
};

int cmd_run(const RunArgs& a) {
  const auto loaded = load_catalog(a.catalog);
  const auto descriptors = load_backends(a.backends);
  const auto modes = parse_modes(a.modes);

  RunContext ctx;
  ctx.catalog = &loaded;
  ctx.catalog_dir = fs::absolute(a.catalog).lexically_normal().string();
  ctx.modes = modes;
  ctx.reps = a.reps;
  ctx.few_k = a.few_k;
  ctx.backends_checksum = hex64(fnv1a64(read_file(a.backends)));
  const fs::path exemplar_dir =
      a.exemplars.empty() ? fs::path(a.catalog) / "exemplars" : fs::path(a.exemplars);
  if (fs::is_directory(exemplar_dir)) ctx.exemplars = load_exemplars(exemplar_dir);

  std::vector<std::string> names;
  for (const auto& d : descriptors) {
    resolve_credential(d);
    names.push_back(d.name);
    ctx.backends[d.name] = make_backend(d);
  }
  const auto plan = plan_trials(loaded.catalog, names, modes, a.reps, a.seed);
  const std::string run_id =
      a.run_id.empty()
          ? derive_run_id(loaded.checksum, ctx.backends_checksum, modes, a.reps, a.seed)
          : a.run_id;
  const fs::path run_dir = fs::path(a.out) / run_id;
  const auto m = execute(plan, run_dir, ctx, run_id);
  std::printf("%s: %zu trials, %zu completed, %zu failed, %zu executed now\n", run_dir.c_str(),
              m.total, m.completed, m.failed, m.executed);
  if (m.failed > 0) {
    std::fprintf(stderr, "warning: %zu trials recorded a backend failure\n", m.failed);
    return static_cast<int>(ExitCode::kBackend);
  }
  return 0;
}

struct ScoreArgs {
  std::string run, refs, weights = "0.2,0.2,0.2,0.2,0.2", format = "table";
  double c0 = 0.1, i0 = 60;
  bool gate = true;
};

ReportBundle score_run(const fs::path& run_dir, const std::string& refs_dir, const Weights& w,
                       const Thresholds& t, bool gate) {
  const auto manifest = load_manifest(run_dir);
  const auto refs = load_catalog(refs_dir.empty() ? manifest.catalog_dir : refs_dir);
  AggregateOptions opts;
  opts.weights = w;
  opts.scoring.thresholds = t;
  opts.scoring.gate_text_metrics_on_format = gate;
  return aggregate(manifest, load_trials(run_dir), refs, load_annotations(run_dir / "annotations.csv"),
                   opts);
}

int cmd_score(const ScoreArgs& a) {
  const Thresholds t{a.c0, a.i0};
  t.validate();
  const auto bundle = score_run(a.run, a.refs, Weights::parse(a.weights), t, a.gate);
  write_file_atomic(fs::path(a.run) / "scores.json", render(bundle, ReportFormat::kJson));
  std::cout << render(bundle, parse_report_format(a.format));
  return 0;
}

int cmd_report(const std::string& run, const std::string& format) {
  const auto fmt = parse_report_format(format);
  const fs::path scores = fs::path(run) / "scores.json";
  ReportBundle bundle;
  if (fs::exists(scores)) {
    try {
      bundle = bundle_from_json(nlohmann::json::parse(read_file(scores)));
    } catch (const nlohmann::json::parse_error& e) {
      throw LoadError("malformed " + scores.string() + ": " + e.what());
    }
  } else {
    const auto m = load_manifest(run);
    bundle = score_run(run, "", m.weights, m.thresholds, true);
  }
  std::cout << render(bundle, fmt);
  return 0;
}

struct AnnotateArgs {
  std::string run, trial, annotator, note;
  int explanation = -1;
};

int cmd_annotate(const AnnotateArgs& a) {
  if (a.explanation != 0 && a.explanation != 1) throw UsageError("--explanation must be 0 or 1");
  const fs::path run_dir(a.run);
  load_manifest(run_dir);
  if (!fs::exists(run_dir / "trials" / (a.trial + ".json")))
    throw ValidationError(a.trial, "trial", "no such trial in " + run_dir.string());
  append_annotation(run_dir / "annotations.csv", {a.trial, a.explanation == 1, a.annotator, a.note});
  const fs::path scores = run_dir / "scores.json";
  if (fs::exists(scores)) {
    fs::remove(scores);
    std::fprintf(stderr, "note: removed stale %s; re-run score\n", scores.c_str());
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Benchmark LLM backends on intent-to-configuration translation"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "intent-bench 0.1.0");

  auto* catalog = app.add_subcommand("catalog", "Catalog utilities");
  catalog->require_subcommand(1);
  auto* validate = catalog->add_subcommand("validate", "Load and validate a catalog directory");
  std::string validate_dir;
  validate->add_option("dir", validate_dir, "Catalog directory")->required();

  RunArgs run_args;
  auto* run = app.add_subcommand("run", "Execute a trial plan against the configured backends");
  run->add_option("--catalog", run_args.catalog, "Catalog directory")->required();
  run->add_option("--backends", run_args.backends, "Backend registry (YAML)")->required();
  run->add_option("--modes", run_args.modes, "Comma-separated prompt modes")->capture_default_str();
  run->add_option("--reps", run_args.reps, "Repetitions per cell")->capture_default_str();
  run->add_option("--seed", run_args.seed, "Master seed")->capture_default_str();
  run->add_option("--out", run_args.out, "Run store root")->capture_default_str();
  run->add_option("--run-id", run_args.run_id, "Override the derived run id");
  run->add_option("--exemplars", run_args.exemplars, "Exemplar directory (default <catalog>/exemplars)");
  run->add_option("--few-k", run_args.few_k, "Exemplars used by FEW (0: all)")->capture_default_str();

  ScoreArgs score_args;
  auto* score = app.add_subcommand("score", "Score a run and write scores.json");
  score->add_option("--run", score_args.run, "Run directory")->required();
  score->add_option("--refs", score_args.refs, "Reference catalog (default: the run's catalog)");
  score->add_option("--weights", score_args.weights, "w1..w5")->capture_default_str();
  score->add_option("--c0", score_args.c0, "Cost threshold in USD")->capture_default_str();
  score->add_option("--i0", score_args.i0, "Latency threshold in seconds")->capture_default_str();
  score->add_flag("--gate-text-metrics-on-format,!--no-gate-text-metrics-on-format", score_args.gate,
                  "Zero BLEU/ROUGE for trials that fail the format check");
  score->add_option("--format", score_args.format, "table, csv or json")->capture_default_str();

  std::string report_run, report_format = "table";
  auto* report = app.add_subcommand("report", "Render a scored run");
  report->add_option("--run", report_run, "Run directory")->required();
  report->add_option("--format", report_format, "table, csv or json")->capture_default_str();

  AnnotateArgs ann;
  auto* annotate = app.add_subcommand("annotate", "Record a human explanation verdict");
  annotate->add_option("--run", ann.run, "Run directory")->required();
  annotate->add_option("--trial", ann.trial, "Trial id")->required();
  annotate->add_option("--explanation", ann.explanation, "1 if the explanation is acceptable, else 0")
      ->required();
  annotate->add_option("--annotator", ann.annotator, "Annotator name");
  annotate->add_option("--note", ann.note, "Free-form note");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : static_cast<int>(ExitCode::kUsage);
  }

  try {
    if (*validate) return cmd_validate(validate_dir);
    if (*run) return cmd_run(run_args);
    if (*score) return cmd_score(score_args);
    if (*report) return cmd_report(report_run, report_format);
    if (*annotate) return cmd_annotate(ann);
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return static_cast<int>(e.exit_code());
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return static_cast<int>(ExitCode::kValidation);
  }
  return static_cast<int>(ExitCode::kUsage);
}
