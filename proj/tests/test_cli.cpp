#include <gtest/gtest.h>

#include <cstdlib>
#include <sys/wait.h>

#include "support.hpp"

using namespace intent_bench;
using test_support::TempDir;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code = -1;
  std::string out;
};

Result cli(const std::string& args, const TempDir& tmp) {
  const auto out = tmp / "stdout.txt";
  const std::string cmd = std::string(INTENT_BENCH_CLI) + " " + args + " > " + out.string() + " 2>&1";
  const int status = std::system(cmd.c_str());
  Result r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = fs::exists(out) ? read_file(out) : "";
  return r;
}

std::string golden() { return test_support::golden_dir().string(); }

void write(const fs::path& p, const std::string& text) { std::ofstream(p) << text; }

}  // namespace

TEST(Cli, ValidateCatalog) {
  TempDir tmp;
  const auto ok = cli("catalog validate " + golden(), tmp);
  EXPECT_EQ(ok.code, 0) << ok.out;
  EXPECT_NE(ok.out.find("10 orders"), std::string::npos);
  EXPECT_EQ(cli("catalog validate " + (tmp / "nothing").string(), tmp).code, 2);
}

TEST(Cli, UsageErrors) {
  TempDir tmp;
  EXPECT_EQ(cli("", tmp).code, 1);
  EXPECT_EQ(cli("frobnicate", tmp).code, 1);
  EXPECT_EQ(cli("run --catalog " + golden(), tmp).code, 1);
  EXPECT_EQ(cli("report --run " + tmp.path().string() + " --format xml", tmp).code, 1);
}

TEST(Cli, RunScoreReportAnnotate) {
  TempDir tmp;
  write(tmp / "backends.yaml",
        "- {name: gem, kind: mock, price_in_usd_per_1m: 1.25, price_out_usd_per_1m: 5,\n"
        "   mock_policy: {leaf_perturb_rate: 0.1, p_omit_explanation: 0.5, synthetic_latency_s: 18.6, seed: 4}}\n"
        "- {name: mistral, kind: mock, open_source: true}\n");
  const std::string run_args = "run --catalog " + golden() + " --backends " + (tmp / "backends.yaml").string() +
                               " --modes zero,few --reps 2 --seed 9 --out " + (tmp / "runs").string();
  const auto run = cli(run_args, tmp);
  ASSERT_EQ(run.code, 0) << run.out;
  std::vector<fs::path> runs;
  for (const auto& e : fs::directory_iterator(tmp / "runs")) runs.push_back(e.path());
  ASSERT_EQ(runs.size(), 1u);
  const auto run_dir = runs[0];
  EXPECT_EQ(load_trials(run_dir).size(), 80u);

  // Same arguments resume the same run without new calls.
  const auto again = cli(run_args, tmp);
  EXPECT_EQ(again.code, 0);
  EXPECT_NE(again.out.find("0 executed now"), std::string::npos) << again.out;

  const auto report_before = cli("report --run " + run_dir.string() + " --format csv", tmp);
  ASSERT_EQ(report_before.code, 0) << report_before.out;
  EXPECT_EQ(report_before.out.rfind("backend,mode,F,E,A,C,I,e_serv,n_trials\n", 0), 0u);

  const auto score = cli("score --run " + run_dir.string() + " --refs " + golden() +
                             " --weights 0.2,0.2,0.2,0.2,0.2 --c0 0.1 --i0 60 --gate-text-metrics-on-format",
                         tmp);
  ASSERT_EQ(score.code, 0) << score.out;
  EXPECT_TRUE(fs::exists(run_dir / "scores.json"));
  EXPECT_NE(score.out.find("Normalized Inference"), std::string::npos);

  const auto json = cli("report --run " + run_dir.string() + " --format json", tmp);
  ASSERT_EQ(json.code, 0);
  const auto bundle = bundle_from_json(nlohmann::json::parse(json.out));
  ASSERT_EQ(bundle.cells.size(), 4u);
  EXPECT_NEAR(bundle.cell("gem", PromptMode::kZero)->I, 0.31, 1e-12);

  // Flip one trial's explanation verdict and rescore.
  const auto trials = load_trials(run_dir);
  const TrialRecord* target = nullptr;
  for (const auto& t : trials)
    if (t.spec.backend == "gem" && t.spec.mode == PromptMode::kZero &&
        !explanation_rubric(t.response_text, *load_catalog(golden()).catalog.find_order(t.spec.order_id),
                            t.spec.mode))
      target = &t;
  ASSERT_NE(target, nullptr);
  const double e_before = bundle.cell("gem", PromptMode::kZero)->E;
  ASSERT_EQ(cli("annotate --run " + run_dir.string() + " --trial " + target->trial_id +
                    " --explanation 1 --annotator tester",
                tmp).code,
            0);
  EXPECT_TRUE(fs::exists(run_dir / "annotations.csv"));
  ASSERT_EQ(cli("score --run " + run_dir.string(), tmp).code, 0);
  const auto rescored = bundle_from_json(nlohmann::json::parse(read_file(run_dir / "scores.json")));
  EXPECT_NEAR(rescored.cell("gem", PromptMode::kZero)->E, e_before + 1.0 / 20.0, 1e-12);

  EXPECT_EQ(cli("annotate --run " + run_dir.string() + " --trial nope --explanation 1", tmp).code, 2);
  EXPECT_EQ(cli("annotate --run " + run_dir.string() + " --trial " + target->trial_id + " --explanation 2", tmp).code, 1);
}

TEST(Cli, BackendFailureExitCode) {
  TempDir tmp;
  write(tmp / "backends.yaml", "- {name: down, kind: mock, mock_policy: {p_error: 1}}\n");
  const auto r = cli("run --catalog " + golden() + " --backends " + (tmp / "backends.yaml").string() +
                         " --modes zero --reps 1 --out " + (tmp / "runs").string(),
                     tmp);
  EXPECT_EQ(r.code, 3) << r.out;
}

TEST(Cli, MissingCredentialIsValidationError) {
  TempDir tmp;
  ::unsetenv("INTENT_BENCH_CLI_UNSET");
  write(tmp / "backends.yaml",
        "- {name: gpt, kind: remote, endpoint_url: 'http://127.0.0.1:9/v1', api_key_env: INTENT_BENCH_CLI_UNSET}\n");
  const auto r = cli("run --catalog " + golden() + " --backends " + (tmp / "backends.yaml").string() +
                         " --reps 1 --out " + (tmp / "runs").string(),
                     tmp);
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.out.find("INTENT_BENCH_CLI_UNSET"), std::string::npos) << r.out;
}
