#include <gtest/gtest.h>

#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <sstream>

#include "brute_force.hpp"
#include "json.hpp"
#include "lotto/lotto.hpp"
#include "lotto_cli/cli.hpp"

namespace lotto {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

const std::string kExamples = LOTTO_EXAMPLES_DIR;

struct Outcome {
  int code = 0;
  std::string out;
  std::string err;
};

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    root_ = fs::temp_directory_path() /
            ("lotto_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()) + "_" +
             std::to_string(::getpid()));
    fs::remove_all(root_);
    fs::create_directories(root_);
  }
  void TearDown() override { fs::remove_all(root_); }

  std::string Dir(const std::string& name) const { return (root_ / name).string(); }

  static Outcome Lotto(std::vector<std::string> args) {
    std::ostringstream out, err;
    Outcome o;
    o.code = cli::Run(args, out, err);
    o.out = out.str();
    o.err = err.str();
    return o;
  }

  // Common toy arguments: task, 64-template lexicon, synthetic backend.
  static std::vector<std::string> Toy(std::vector<std::string> args, const std::string& backend = "synthetic:7") {
    for (const std::string& extra : {std::string("--task"), kExamples + "/toy_task.json", std::string("--lexicon"),
                                     kExamples + "/toy_lexicon.lex", std::string("--backend"), backend}) {
      args.push_back(extra);
    }
    return args;
  }

  static json ReadJson(const std::string& path) { return json::parse(ReadTextFile(path)); }

  fs::path root_;
};

TEST_F(CliTest, SearchRunsAreByteIdentical) {
  for (const char* name : {"a", "b"}) {
    const Outcome o = Lotto(Toy({"search", "--train", kExamples + "/toy_train.jsonl", "--seed", "42", "--out", Dir(name)}));
    ASSERT_EQ(o.code, 0) << o.err;
  }
  for (const char* file : {"search_report.json", "summary.txt", "manifest.json"}) {
    EXPECT_EQ(ReadTextFile(Dir("a") + "/" + file), ReadTextFile(Dir("b") + "/" + file)) << file;
  }
  const json report = ReadJson(Dir("a") + "/search_report.json");
  EXPECT_EQ(report["seed"], 42);
  EXPECT_EQ(report["backend_identity"], "synthetic:7");
  EXPECT_EQ(report["lexicon_source"].get<std::string>().rfind("toy_lexicon@", 0), 0u);
  EXPECT_EQ(report["results"].size(), 40u);
}

TEST_F(CliTest, MissingDatasetIsAConfigError) {
  const std::string missing = Dir("nope") + "/train.jsonl";
  const Outcome o = Lotto(Toy({"search", "--train", missing, "--out", Dir("out")}));
  EXPECT_EQ(o.code, cli::kExitConfigError);
  EXPECT_NE(o.err.find(missing), std::string::npos) << o.err;
}

TEST_F(CliTest, MissingRequiredFlagIsAConfigError) {
  const Outcome o = Lotto(Toy({"search", "--out", Dir("out")}));
  EXPECT_EQ(o.code, cli::kExitConfigError);
  EXPECT_NE(o.err.find("--train"), std::string::npos) << o.err;
}

TEST_F(CliTest, BudgetCapBoundsEveryCost) {
  const Outcome o = Lotto(Toy({"search", "--train", kExamples + "/toy_train.jsonl", "--budget", "5", "--out", Dir("o")}));
  ASSERT_EQ(o.code, 0) << o.err;
  const json report = ReadJson(Dir("o") + "/search_report.json");
  for (const auto& r : report["results"]) {
    EXPECT_LE(r["cost"].get<std::size_t>(), 5u);
    if (r["found"].is_null()) EXPECT_EQ(r["cost"], 5);
  }
}

TEST_F(CliTest, ManifestAccountingIdentity) {
  const Outcome o = Lotto(Toy({"search", "--train", kExamples + "/toy_train.jsonl", "--out", Dir("o")}));
  ASSERT_EQ(o.code, 0) << o.err;
  const json manifest = ReadJson(Dir("o") + "/manifest.json");
  const json report = ReadJson(Dir("o") + "/search_report.json");
  std::size_t costs = 0;
  for (const auto& r : report["results"]) costs += r["cost"].get<std::size_t>();
  const auto& calls = manifest["api_calls"];
  EXPECT_EQ(calls["total"].get<std::size_t>(), costs + calls["prior_calls"].get<std::size_t>());
  EXPECT_EQ(manifest["search_cost_total"].get<std::size_t>(), costs);
  EXPECT_EQ(manifest["config"]["seed"], 0);
  EXPECT_EQ(manifest["command"], "search");
}

TEST_F(CliTest, CacheReuseNeverChangesOutputs) {
  const std::string cache = Dir("priors.json");
  const auto rank = [&](const std::string& out, bool use_cache) {
    auto args = Toy({"rank", "--train", kExamples + "/toy_train.jsonl", "--out", Dir(out)});
    if (use_cache) args.insert(args.end(), {"--cache", cache});
    const Outcome o = Lotto(args);
    ASSERT_EQ(o.code, 0) << o.err;
  };
  rank("plain", false);
  rank("cold", true);
  rank("warm", true);
  for (const char* file : {"prompt_stats.csv", "prompts.json", "word_frequency.json", "summary.txt"}) {
    EXPECT_EQ(ReadTextFile(Dir("plain") + "/" + file), ReadTextFile(Dir("warm") + "/" + file)) << file;
    EXPECT_EQ(ReadTextFile(Dir("plain") + "/" + file), ReadTextFile(Dir("cold") + "/" + file)) << file;
  }
  const json warm = ReadJson(Dir("warm") + "/manifest.json");
  EXPECT_EQ(warm["api_calls"]["prior_calls"], 0);
  EXPECT_EQ(warm["api_calls"]["priors_loaded"], 64);
  // A different backend must not reuse the cached priors.
  const Outcome other = Lotto(Toy({"rank", "--train", kExamples + "/toy_train.jsonl", "--cache", cache, "--out", Dir("other")},
                                  "synthetic:8"));
  ASSERT_EQ(other.code, 0) << other.err;
  EXPECT_EQ(ReadJson(Dir("other") + "/manifest.json")["api_calls"]["priors_loaded"], 0);
}

TEST_F(CliTest, PruneAtZeroThresholdMatchesRank) {
  ASSERT_EQ(Lotto(Toy({"rank", "--train", kExamples + "/toy_train.jsonl", "--out", Dir("rank")})).code, 0);
  ASSERT_EQ(Lotto(Toy({"prune", "--train", kExamples + "/toy_train.jsonl", "--threshold", "0", "--seed", "3", "--out",
                       Dir("prune")}))
                .code,
            0);
  EXPECT_EQ(ReadJson(Dir("rank") + "/prompts.json")["templates"], ReadJson(Dir("prune") + "/prompts.json")["templates"]);
  EXPECT_EQ(ReadTextFile(Dir("rank") + "/prompt_stats.csv"), ReadTextFile(Dir("prune") + "/prompt_stats.csv"));
  const json prune = ReadJson(Dir("prune") + "/prune_report.json");
  EXPECT_EQ(prune["evaluated"], 64);
}

TEST_F(CliTest, RankThenEnsembleMatchesBruteForce) {
  ASSERT_EQ(Lotto(Toy({"rank", "--train", kExamples + "/toy_train.jsonl", "--k", "5", "--out", Dir("rank")})).code, 0);
  const std::string prompts = Dir("rank") + "/prompts.json";
  const TaskSpec task = LoadTaskSpec(kExamples + "/toy_task.json");
  const auto test = LoadInstances(kExamples + "/toy_test.jsonl", task);
  const SyntheticOracle oracle(ParseSyntheticUrl("synthetic:7"));
  const testing::BruteForce brute(oracle, task, LoadLexicon(kExamples + "/toy_lexicon.lex"), test);
  const StrongPromptSet strong = LoadStrongPromptSet(prompts);
  ASSERT_EQ(strong.templates.size(), 5u);

  const auto train = LoadInstances(kExamples + "/toy_train.jsonl", task);
  const testing::BruteForce brute_train(oracle, task, LoadLexicon(kExamples + "/toy_lexicon.lex"), train);
  const auto ranking = brute_train.Ranking();
  EXPECT_TRUE(std::equal(strong.templates.begin(), strong.templates.end(), ranking.begin()));

  for (const char* strategy : {"vote", "mi"}) {
    const std::string out = Dir(std::string("ens_") + strategy);
    const Outcome o = Lotto(Toy({"ensemble", "--test", kExamples + "/toy_test.jsonl", "--prompts", prompts, "--strategy",
                                 strategy, "--out", out}));
    ASSERT_EQ(o.code, 0) << o.err;
    const json report = ReadJson(out + "/eval_report.json");
    std::vector<std::size_t> preds;
    for (std::size_t i = 0; i < test.size(); ++i) {
      preds.push_back(std::string(strategy) == "vote" ? brute.VotePrediction(i, strong.templates)
                                                      : brute.prediction(i, brute.MiChoice(i, strong.templates)));
      EXPECT_EQ(report["per_instance"][i]["prediction"].get<std::size_t>(), preds.back());
    }
    EXPECT_EQ(report["metric_value"].get<double>(), brute.MetricOf(preds));
  }
}

TEST_F(CliTest, TransferClassMismatchIsAConfigError) {
  ASSERT_EQ(Lotto(Toy({"rank", "--train", kExamples + "/toy_train.jsonl", "--out", Dir("rank")})).code, 0);
  WriteTextFile(Dir("four.json"),
                R"({"name": "four", "format": "single", "label_words": ["a", "b", "c", "d"], "metric": "accuracy"})");
  WriteTextFile(Dir("four.jsonl"), "{\"text\": \"x a.\", \"label\": 0}\n");
  const Outcome o = Lotto({"transfer", "--task", Dir("four.json"), "--lexicon", kExamples + "/toy_lexicon.lex",
                           "--backend", "synthetic:7", "--test", Dir("four.jsonl"), "--prompts",
                           Dir("rank") + "/prompts.json", "--out", Dir("t")});
  EXPECT_EQ(o.code, cli::kExitConfigError);
  EXPECT_NE(o.err.find("ClassMismatch"), std::string::npos) << o.err;
}

TEST_F(CliTest, SelfTransferEqualsEnsemble) {
  ASSERT_EQ(Lotto(Toy({"rank", "--train", kExamples + "/toy_train.jsonl", "--out", Dir("rank")})).code, 0);
  const std::string prompts = Dir("rank") + "/prompts.json";
  ASSERT_EQ(Lotto(Toy({"ensemble", "--test", kExamples + "/toy_test.jsonl", "--prompts", prompts, "--out", Dir("e")})).code, 0);
  ASSERT_EQ(Lotto(Toy({"transfer", "--test", kExamples + "/toy_test.jsonl", "--prompts", prompts, "--out", Dir("t")})).code, 0);
  EXPECT_EQ(ReadTextFile(Dir("e") + "/eval_rows.csv"), ReadTextFile(Dir("t") + "/eval_rows.csv"));
}

TEST_F(CliTest, FewShotSweepReportsMeanAndStdev) {
  const Outcome o = Lotto(Toy({"few-shot-sweep", "--train", kExamples + "/toy_train.jsonl", "--test",
                               kExamples + "/toy_test.jsonl", "--shots", "4,8", "--runs", "3", "--k", "3", "--out",
                               Dir("s")}));
  ASSERT_EQ(o.code, 0) << o.err;
  const json doc = ReadJson(Dir("s") + "/sweep_report.json");
  ASSERT_EQ(doc["settings"].size(), 2u);
  const auto& runs = doc["settings"][1]["runs"];
  ASSERT_EQ(runs.size(), 3u);
  EXPECT_EQ(runs[0]["n_train"], 16);
  EXPECT_EQ(runs[2]["seed"], 2);
  double mean = 0.0;
  for (const auto& r : runs) mean += r["metric_value"].get<double>();
  EXPECT_NEAR(doc["settings"][1]["mean"].get<double>(), mean / 3.0, 1e-15);
}

TEST_F(CliTest, BackendFromEnvironment) {
  ::setenv("LOTTO_BACKEND_URL", "synthetic:9", 1);
  const Outcome o = Lotto({"search", "--task", kExamples + "/toy_task.json", "--lexicon", kExamples + "/toy_lexicon.lex",
                           "--train", kExamples + "/toy_train.jsonl", "--budget", "2", "--out", Dir("o")});
  ::unsetenv("LOTTO_BACKEND_URL");
  ASSERT_EQ(o.code, 0) << o.err;
  EXPECT_EQ(ReadJson(Dir("o") + "/manifest.json")["backend_identity"], "synthetic:9");
}

TEST_F(CliTest, ConfigFileSuppliesOptions) {
  WriteTextFile(Dir("run.ini"), "task = " + kExamples + "/toy_task.json\nlexicon = " + kExamples +
                                    "/toy_lexicon.lex\nbackend = synthetic:7\ntrain = " + kExamples +
                                    "/toy_train.jsonl\nbudget = 3\nseed = 5\n");
  const Outcome o = Lotto({"search", "--config", Dir("run.ini"), "--out", Dir("o")});
  ASSERT_EQ(o.code, 0) << o.err;
  const json manifest = ReadJson(Dir("o") + "/manifest.json");
  EXPECT_EQ(manifest["budget"], 3);
  EXPECT_EQ(manifest["seed"], 5);
}

TEST_F(CliTest, UnreachableBackendExitsTwo) {
  const Outcome o = Lotto(Toy({"search", "--train", kExamples + "/toy_train.jsonl", "--out", Dir("o")},
                              "http://127.0.0.1:9"));
  EXPECT_EQ(o.code, cli::kExitBackendError);
}

TEST_F(CliTest, UsageErrors) {
  EXPECT_EQ(Lotto({}).code, cli::kExitConfigError);
  EXPECT_EQ(Lotto({"frobnicate"}).code, cli::kExitConfigError);
  EXPECT_EQ(Lotto(Toy({"search", "--train", kExamples + "/toy_train.jsonl", "--out", Dir("o")}, "synthetic:x")).code,
            cli::kExitConfigError);
  EXPECT_EQ(Lotto({"--version"}).code, cli::kExitOk);
  EXPECT_EQ(Lotto({"search", "--help"}).code, cli::kExitOk);
}

}  // namespace
}  // namespace lotto
