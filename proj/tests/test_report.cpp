#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "support.hpp"

using namespace intent_bench;
using test_support::TempDir;
namespace fs = std::filesystem;

namespace {

const LoadedCatalog& golden() {
  static const LoadedCatalog c = load_catalog(test_support::golden_dir());
  return c;
}

const std::vector<PromptMode> kModes(kAllModes.begin(), kAllModes.end());

// Executes a mock plan and returns the run directory.
fs::path run_mocks(const TempDir& tmp, const std::vector<BackendDescriptor>& descs, int reps,
                   std::vector<PromptMode> modes = kModes) {
  std::vector<std::shared_ptr<Backend>> backends;
  for (const auto& d : descs) backends.push_back(std::make_shared<MockBackend>(d));
  auto ctx = test_support::make_context(golden(), backends, reps);
  ctx.modes = modes;
  const auto plan = plan_trials(golden().catalog, test_support::names_of(backends), modes, reps, 3);
  const auto dir = tmp / "run";
  execute(plan, dir, ctx, "run-report");
  return dir;
}

}  // namespace

TEST(Aggregate, PerfectMockClosure) {
  TempDir tmp;
  MockPolicy p;
  p.synthetic_latency_s = 12;
  const auto dir = run_mocks(tmp, {test_support::mock_descriptor("perfect", p)}, 2);
  const auto bundle = aggregate(dir, golden(), {});
  ASSERT_EQ(bundle.cells.size(), 3u);
  for (const auto& c : bundle.cells) {
    EXPECT_DOUBLE_EQ(c.F, 1.0);
    EXPECT_DOUBLE_EQ(c.A, 1.0);
    EXPECT_DOUBLE_EQ(c.C, 0.0);
    EXPECT_DOUBLE_EQ(c.I, 0.2);
    EXPECT_DOUBLE_EQ(c.E, 1.0);
    EXPECT_NEAR(c.e_serv, 0.2 * (1 + c.E + 1) - 0.2 * c.I, 1e-12);
    EXPECT_EQ(c.n_trials, 20u);
    EXPECT_GT(c.bleu, 0.5);
  }
}

TEST(Aggregate, GridShape) {
  TempDir tmp;
  const auto dir = run_mocks(tmp, {test_support::mock_descriptor("a"), test_support::mock_descriptor("b")}, 1);
  const auto bundle = aggregate(dir, golden(), {});
  EXPECT_EQ(bundle.cells.size(), 6u);
  EXPECT_EQ(bundle.backends, (std::vector<std::string>{"a", "b"}));
}

TEST(Aggregate, PerturbationExpectation) {
  TempDir tmp;
  MockPolicy p;
  p.leaf_perturb_rate = 0.3;
  const auto dir = run_mocks(tmp, {test_support::mock_descriptor("m", p)}, 10, {PromptMode::kOne});
  const auto bundle = aggregate(dir, golden(), {});
  ASSERT_EQ(bundle.cells.size(), 1u);
  EXPECT_EQ(bundle.cells[0].n_trials, 100u);
  EXPECT_NEAR(bundle.cells[0].A, 0.7, 0.05);
}

TEST(Aggregate, PermutationInvariant) {
  TempDir tmp;
  MockPolicy p;
  p.leaf_perturb_rate = 0.1;
  p.p_format_break = 0.2;
  p.p_omit_explanation = 0.3;
  p.synthetic_latency_s = 20;
  const auto dir = run_mocks(tmp, {test_support::mock_descriptor("m", p, 1.25, 5)}, 3);
  const auto manifest = load_manifest(dir);
  auto trials = load_trials(dir);
  const auto base = aggregate(manifest, trials, golden(), {}, {});
  std::mt19937 rng(1);
  for (int i = 0; i < 3; ++i) {
    std::shuffle(trials.begin(), trials.end(), rng);
    const auto b = aggregate(manifest, trials, golden(), {}, {});
    for (const auto& c : b.cells) {
      const auto& a = *base.cell(c.backend, c.mode);
      EXPECT_NEAR(c.F, a.F, 1e-12);
      EXPECT_NEAR(c.A, a.A, 1e-12);
      EXPECT_NEAR(c.e_serv, a.e_serv, 1e-12);
    }
  }
}

TEST(Aggregate, FailedTrialsExcludedFromMeans) {
  TempDir tmp;
  MockPolicy p;
  p.p_error = 0.5;
  const auto dir = run_mocks(tmp, {test_support::mock_descriptor("flaky", p)}, 4, {PromptMode::kZero});
  const auto bundle = aggregate(dir, golden(), {});
  const auto& c = bundle.cells.at(0);
  EXPECT_EQ(c.n_trials + c.n_failed, 40u);
  EXPECT_GT(c.n_failed, 0u);
  EXPECT_DOUBLE_EQ(c.F, 1.0);
}

TEST(Aggregate, Errors) {
  TempDir tmp;
  const auto dir = run_mocks(tmp, {test_support::mock_descriptor("m")}, 1, {PromptMode::kZero});
  LoadedCatalog partial = golden();
  partial.references.pairs.erase("SO-004");
  try {
    aggregate(dir, partial, {});
    FAIL() << "expected AggregationError";
  } catch (const AggregationError& e) {
    EXPECT_NE(std::string(e.what()).find("SO-004"), std::string::npos);
  }
  for (const auto& e : fs::directory_iterator(dir / "trials")) fs::remove(e.path());
  EXPECT_THROW(aggregate(dir, golden(), {}), AggregationError);
}

TEST(Render, CsvHeaderAndRecompute) {
  TempDir tmp;
  MockPolicy p;
  p.leaf_perturb_rate = 0.2;
  p.p_omit_explanation = 0.4;
  p.synthetic_latency_s = 33;
  const auto dir = run_mocks(tmp, {test_support::mock_descriptor("gpt", p, 10, 30)}, 2);
  const auto bundle = aggregate(dir, golden(), {});
  const auto csv = render(bundle, ReportFormat::kCsv);
  const auto lines = split(csv, '\n');
  EXPECT_EQ(lines.at(0), "backend,mode,F,E,A,C,I,e_serv,n_trials");
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    const auto f = split(lines[i], ',');
    ASSERT_EQ(f.size(), 9u);
    double v[6];
    for (int k = 0; k < 6; ++k) ASSERT_TRUE(parse_number(f[2 + k], v[k]));
    const auto& w = bundle.weights;
    const double hand = w.format * v[0] + w.explanation * v[1] + w.accuracy * v[2] - w.cost * v[3] -
                        w.inference * v[4];
    EXPECT_NEAR(hand, v[5], 1e-9) << lines[i];
  }
}

TEST(Render, DeterministicAndRoundTrips) {
  TempDir tmp;
  MockPolicy p;
  p.leaf_perturb_rate = 0.15;
  p.p_format_break = 0.1;
  p.synthetic_latency_s = 17.3;
  const auto dir = run_mocks(tmp, {test_support::mock_descriptor("gem", p, 1.25, 5),
                                   test_support::mock_descriptor("llama", p)}, 2);
  const auto bundle = aggregate(dir, golden(), {});
  for (auto f : {ReportFormat::kTable, ReportFormat::kCsv, ReportFormat::kJson})
    EXPECT_EQ(render(bundle, f), render(bundle, f));
  const auto back = bundle_from_json(nlohmann::json::parse(render(bundle, ReportFormat::kJson)));
  ASSERT_EQ(back.cells.size(), bundle.cells.size());
  for (std::size_t i = 0; i < back.cells.size(); ++i) {
    const auto& a = bundle.cells[i];
    const auto& b = back.cells[i];
    EXPECT_EQ(a.backend, b.backend);
    EXPECT_EQ(a.mode, b.mode);
    for (auto m : {&AggregateScore::F, &AggregateScore::E, &AggregateScore::A, &AggregateScore::C,
                   &AggregateScore::I, &AggregateScore::e_serv, &AggregateScore::bleu,
                   &AggregateScore::rouge1, &AggregateScore::rouge2, &AggregateScore::rougeL,
                   &AggregateScore::mean_tokens_in, &AggregateScore::mean_tokens_out})
      EXPECT_EQ(a.*m, b.*m);
    EXPECT_EQ(a.n_trials, b.n_trials);
  }
  EXPECT_EQ(render(back, ReportFormat::kJson), render(bundle, ReportFormat::kJson));
}

TEST(Render, TableRowOrder) {
  TempDir tmp;
  const auto dir = run_mocks(tmp, {test_support::mock_descriptor("m")}, 1);
  const auto table = render(aggregate(dir, golden(), {}), ReportFormat::kTable);
  std::size_t last = 0;
  for (const char* row : {"Format", "Explain", "Accuracy", "Normalized Cost", "Normalized Inference", "E_serv"}) {
    const auto pos = table.find(row);
    ASSERT_NE(pos, std::string::npos) << row;
    EXPECT_GT(pos, last) << row;
    last = pos;
  }
}

TEST(Render, UnknownFormat) { EXPECT_THROW(parse_report_format("xml"), UsageError); }
