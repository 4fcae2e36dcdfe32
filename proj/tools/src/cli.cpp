#include "lotto_cli/cli.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <numeric>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "lotto/lotto.hpp"

#ifndef LOTTO_VERSION
#define LOTTO_VERSION "0.0.0"
#endif

namespace lotto::cli {

namespace {

namespace fs = std::filesystem;
using ojson = nlohmann::ordered_json;

const std::string& Require(const std::string& value, const char* flag, const std::string& command) {
  if (value.empty()) {
    throw Error(ErrorCode::kInvalidArgument, command + " requires " + flag);
  }
  return value;
}

std::unique_ptr<ScoringBackend> MakeBackend(const std::string& url) {
  if (url.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "no backend given (use --backend or set LOTTO_BACKEND_URL)");
  }
  if (url.rfind("synthetic:", 0) == 0) return std::make_unique<SyntheticOracle>(ParseSyntheticUrl(url));
  if (url.rfind("http://", 0) == 0) return std::make_unique<HttpBackend>(url);
  throw Error(ErrorCode::kInvalidArgument, "backend '" + url + "' must be http://host:port or synthetic:<seed>");
}

PromptSpace LoadSpace(const std::string& lexicon_path) {
  if (lexicon_path.empty()) return build_space(DefaultLexicon());
  return build_space(LoadLexicon(lexicon_path));
}

ojson ConfigEcho(const RunConfig& c) {
  // Output and cache locations are left out so that runs writing to
  // different directories still produce identical manifests.
  ojson doc;
  doc["command"] = c.command;
  doc["task"] = c.task_path;
  doc["lexicon"] = c.lexicon_path.empty() ? ojson(nullptr) : ojson(c.lexicon_path);
  doc["backend"] = c.backend;
  doc["train"] = c.train_path.empty() ? ojson(nullptr) : ojson(c.train_path);
  doc["test"] = c.test_path.empty() ? ojson(nullptr) : ojson(c.test_path);
  doc["prompts"] = c.prompts_path.empty() ? ojson(nullptr) : ojson(c.prompts_path);
  doc["seed"] = c.seed;
  doc["budget"] = c.budget ? ojson(*c.budget) : ojson(nullptr);
  doc["k"] = c.k;
  doc["strategy"] = c.strategy;
  doc["shots"] = c.shots;
  doc["runs"] = c.runs;
  doc["batch_size"] = c.batch_size;
  doc["threshold"] = c.threshold;
  doc["max_concurrency"] = c.max_concurrency;
  return doc;
}

// Everything a subcommand needs, loaded once from the config.
class Session {
 public:
  explicit Session(const RunConfig& config)
      : config_(config),
        task_(LoadTaskSpec(Require(config.task_path, "--task", config.command))),
        space_(LoadSpace(config.lexicon_path)),
        backend_(MakeBackend(config.backend)),
        client_(*backend_, ClientOptions{config.max_concurrency, 0}),
        out_dir_(config.out_dir) {
    if (!config_.cache_path.empty() && fs::exists(config_.cache_path)) {
      priors_loaded_ = LoadPriorCache(ReadTextFile(config_.cache_path), cache_identity(), priors_);
    }
  }

  const TaskSpec& task() const { return task_; }
  const PromptSpace& space() const { return space_; }
  Scorer scorer() { return Scorer(client_, task_, space_, priors_); }

  std::vector<Instance> dataset(const std::string& path, const char* flag) const {
    auto data = LoadInstances(Require(path, flag, config_.command), task_);
    if (data.empty()) throw Error(ErrorCode::kEmptyDataset, path + " contains no instances");
    return data;
  }

  RunMeta meta() const {
    return {space_.lexicon().source_id, task_.name, backend_->info().identity, config_.seed};
  }

  fs::path Write(const std::string& name, std::string_view content) const {
    const fs::path path = out_dir_ / name;
    WriteTextFile(path, content);
    return path;
  }

  void Finish(ojson extra = ojson::object()) {
    ojson doc;
    doc["command"] = config_.command;
    doc["version"] = LOTTO_VERSION;
    doc["config"] = ConfigEcho(config_);
    doc["lexicon_source"] = space_.lexicon().source_id;
    doc["space_size"] = space_.size();
    doc["backend_identity"] = backend_->info().identity;
    doc["seed"] = config_.seed;
    const std::uint64_t total = client_.calls();
    const std::size_t prior_calls = priors_.computed();
    doc["api_calls"] = {{"total", total},
                        {"instance_calls", total - prior_calls},
                        {"prior_calls", prior_calls},
                        {"priors_loaded", priors_loaded_}};
    for (auto& [key, value] : extra.items()) doc[key] = value;
    Write("manifest.json", doc.dump(2) + "\n");
    if (!config_.cache_path.empty()) {
      WriteTextFile(config_.cache_path, PriorCacheJson(cache_identity(), priors_));
    }
  }

 private:
  CacheIdentity cache_identity() const { return {backend_->info().identity, space_.lexicon().source_id}; }

  const RunConfig& config_;
  TaskSpec task_;
  PromptSpace space_;
  std::unique_ptr<ScoringBackend> backend_;
  BackendClient client_;
  PriorCache priors_;
  std::size_t priors_loaded_ = 0;
  fs::path out_dir_;
};

fs::path CmdSearch(const RunConfig& config, std::ostream& out) {
  Session session(config);
  const auto train = session.dataset(config.train_path, "--train");
  Scorer scorer = session.scorer();
  const std::size_t budget = std::min(config.budget.value_or(session.space().size()), session.space().size());
  const auto results = search_dataset(train, scorer, budget);
  const fs::path report = session.Write("search_report.json", SearchReportJson(session.meta(), results));

  std::ostringstream summary;
  summary << "task: " << session.task().name << "\n"
          << "instances: " << results.size() << "\n"
          << "space size: " << session.space().size() << "\n"
          << "budget: " << budget << "\n"
          << "success rate: " << FormatDouble(success_rate(results)) << "\n"
          << "mean cost: " << FormatDouble(mean_cost(results)) << "\n";
  session.Write("summary.txt", summary.str());
  std::size_t cost_sum = 0;
  for (const auto& r : results) cost_sum += r.cost;
  session.Finish({{"budget", budget}, {"search_cost_total", cost_sum}});
  out << summary.str();
  return report;
}

fs::path WriteRanking(Session& session, const RunConfig& config, std::span<const PromptStats> evaluated,
                      std::ostream& out) {
  const auto top = top_k(std::vector<PromptStats>(evaluated.begin(), evaluated.end()), config.k);
  const StrongPromptSet strong = MakeStrongPromptSet(top, session.task(), session.space().lexicon());
  session.Write("prompt_stats.csv", PromptStatsCsv(evaluated, session.space()));
  const fs::path prompts = session.Write("prompts.json", StrongPromptSetJson(strong, session.space()));
  session.Write("word_frequency.json", WordFrequencyJson(word_frequency(strong, session.space())));

  std::ostringstream summary;
  summary << "task: " << session.task().name << "\n"
          << "prompts evaluated: " << evaluated.size() << " of " << session.space().size() << "\n"
          << "top " << top.size() << ":\n";
  for (const auto& s : top) {
    summary << "  " << s.space_index << "  " << session.space().text(s.space_index) << "  "
            << FormatDouble(s.metric_value) << "\n";
  }
  session.Write("summary.txt", summary.str());
  out << summary.str();
  return prompts;
}

fs::path CmdRank(const RunConfig& config, std::ostream& out) {
  if (config.k == 0) throw Error(ErrorCode::kInvalidArgument, "--k must be at least 1");
  Session session(config);
  const auto train = session.dataset(config.train_path, "--train");
  Scorer scorer = session.scorer();
  const auto stats = evaluate_space(train, scorer);
  const fs::path path = WriteRanking(session, config, stats, out);
  session.Finish({{"k", config.k}});
  return path;
}

fs::path CmdPrune(const RunConfig& config, std::ostream& out) {
  if (config.k == 0) throw Error(ErrorCode::kInvalidArgument, "--k must be at least 1");
  Session session(config);
  const auto train = session.dataset(config.train_path, "--train");
  Scorer scorer = session.scorer();
  const PruneResult result = pruned_search(train, scorer, {config.batch_size, config.threshold, config.seed});
  const fs::path path = WriteRanking(session, config, result.stats, out);
  ojson prune;
  prune["seed"] = config.seed;
  prune["batch_size"] = config.batch_size;
  prune["threshold"] = config.threshold;
  prune["rounds"] = result.rounds;
  prune["evaluated"] = result.stats.size();
  prune["space_size"] = session.space().size();
  prune["evaluation_order"] = result.evaluation_order;
  session.Write("prune_report.json", prune.dump(2) + "\n");
  session.Finish({{"k", config.k}, {"prune_rounds", result.rounds}});
  return path;
}

fs::path WriteEval(Session& session, const EvalReport& report, const std::string& name, std::ostream& out) {
  const fs::path path = session.Write(name, EvalReportJson(session.meta(), report));
  session.Write("eval_rows.csv", EvalRowsCsv(report));
  std::ostringstream summary;
  summary << "task: " << report.task << "\n"
          << "prompts from: " << report.source_task << "\n"
          << "strategy: " << ToString(report.strategy) << " (k=" << report.k << ")\n"
          << "test instances: " << report.rows.size() << "\n"
          << ToString(report.metric) << ": " << FormatDouble(report.metric_value) << "\n";
  session.Write("summary.txt", summary.str());
  out << summary.str();
  return path;
}

fs::path CmdEnsemble(const RunConfig& config, std::ostream& out, bool transfer) {
  const EnsembleStrategy strategy = ParseEnsembleStrategy(config.strategy);
  const StrongPromptSet strong = LoadStrongPromptSet(Require(config.prompts_path, "--prompts", config.command));
  Session session(config);
  const auto test = session.dataset(config.test_path, "--test");
  Scorer scorer = session.scorer();
  const EvalReport report =
      transfer ? transfer_eval(strong, test, scorer, strategy) : evaluate_ensemble(test, strong, strategy, scorer);
  const fs::path path = WriteEval(session, report, transfer ? "transfer_report.json" : "eval_report.json", out);
  session.Finish({{"source_task", strong.source_task}});
  return path;
}

fs::path CmdFewShotSweep(const RunConfig& config, std::ostream& out) {
  const EnsembleStrategy strategy = ParseEnsembleStrategy(config.strategy);
  if (config.k == 0) throw Error(ErrorCode::kInvalidArgument, "--k must be at least 1");
  if (config.runs == 0) throw Error(ErrorCode::kInvalidArgument, "--runs must be at least 1");
  if (config.shots.empty()) throw Error(ErrorCode::kInvalidArgument, "--shots needs at least one value");
  Session session(config);
  const auto train = session.dataset(config.train_path, "--train");
  const auto test = session.dataset(config.test_path, "--test");
  Scorer scorer = session.scorer();

  ojson doc;
  const RunMeta meta = session.meta();
  doc["lexicon_source"] = meta.lexicon_source;
  doc["task"] = meta.task;
  doc["backend_identity"] = meta.backend_identity;
  doc["seed"] = meta.seed;
  doc["strategy"] = ToString(strategy);
  doc["k"] = config.k;
  doc["metric"] = ToString(session.task().metric);
  ojson settings = ojson::array();
  std::ostringstream summary;
  summary << "task: " << session.task().name << "  strategy: " << ToString(strategy) << "  k: " << config.k << "\n";
  for (std::size_t shots : config.shots) {
    ojson runs = ojson::array();
    std::vector<double> values;
    for (std::size_t r = 0; r < config.runs; ++r) {
      const std::uint64_t run_seed = config.seed + r;
      const auto sample = sample_few_shot(train, shots, run_seed, session.task().num_classes());
      const auto top = rank_prompts(sample, scorer, config.k);
      const StrongPromptSet strong = MakeStrongPromptSet(top, session.task(), session.space().lexicon());
      const EvalReport report = evaluate_ensemble(test, strong, strategy, scorer);
      values.push_back(report.metric_value);
      runs.push_back({{"seed", run_seed},
                      {"n_train", sample.size()},
                      {"prompts", strong.templates},
                      {"metric_value", report.metric_value}});
    }
    const double mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
    double var = 0.0;
    for (double v : values) var += (v - mean) * (v - mean);
    const double stdev = values.size() > 1 ? std::sqrt(var / static_cast<double>(values.size() - 1)) : 0.0;
    settings.push_back({{"shots", shots}, {"runs", std::move(runs)}, {"mean", mean}, {"stdev", stdev}});
    summary << "  " << shots << "-shot: " << FormatDouble(mean) << " +/- " << FormatDouble(stdev) << "\n";
  }
  doc["settings"] = std::move(settings);
  const fs::path path = session.Write("sweep_report.json", doc.dump(2) + "\n");
  session.Write("summary.txt", summary.str());
  session.Finish();
  out << summary.str();
  return path;
}

}  // namespace

int Execute(const RunConfig& config, std::ostream& out, std::ostream& err) {
  try {
    fs::path report;
    if (config.command == "search") {
      report = CmdSearch(config, out);
    } else if (config.command == "rank") {
      report = CmdRank(config, out);
    } else if (config.command == "prune") {
      report = CmdPrune(config, out);
    } else if (config.command == "ensemble") {
      report = CmdEnsemble(config, out, false);
    } else if (config.command == "transfer") {
      report = CmdEnsemble(config, out, true);
    } else if (config.command == "few-shot-sweep") {
      report = CmdFewShotSweep(config, out);
    } else {
      err << "lotto: unknown command '" << config.command << "'\n";
      return kExitConfigError;
    }
    out << "report: " << report.string() << "\n";
    return kExitOk;
  } catch (const Error& e) {
    err << "lotto: " << e.what() << "\n";
    return e.is_backend_failure() ? kExitBackendError : kExitConfigError;
  } catch (const std::exception& e) {
    err << "lotto: " << e.what() << "\n";
    return kExitConfigError;
  }
}

int Run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Lottery prompt search, ranking and ensembling over a black-box scoring API", "lotto"};
  app.set_version_flag("--version", std::string(LOTTO_VERSION));
  app.set_config("--config", "", "Key-value config file (one `key = value` per line, keys as long flags)");
  app.require_subcommand(1, 1);

  RunConfig config;
  app.add_option("--task", config.task_path, "Task config JSON");
  app.add_option("--lexicon", config.lexicon_path, "Lexicon file (#NOUNS/#VERBS/#THIRD sections)");
  app.add_option("--backend", config.backend, "http://host:port or synthetic:<seed>[?params]")
      ->envname("LOTTO_BACKEND_URL");
  app.add_option("--train", config.train_path, "Training instances (JSON Lines)");
  app.add_option("--test", config.test_path, "Test instances (JSON Lines)");
  app.add_option("--prompts", config.prompts_path, "prompts.json written by rank or prune");
  app.add_option("--seed", config.seed, "Seed for sampling")->capture_default_str();
  app.add_option("--budget", config.budget, "Per-instance search cap (default: whole space)");
  app.add_option("--k", config.k, "Size of the strong prompt set")->capture_default_str();
  app.add_option("--strategy", config.strategy, "Ensembling strategy: vote or mi")->capture_default_str();
  app.add_option("--shots", config.shots, "Comma-separated shot counts for few-shot-sweep")
      ->delimiter(',')
      ->capture_default_str();
  app.add_option("--runs", config.runs, "Seeds per shot setting")->capture_default_str();
  app.add_option("--batch-size", config.batch_size, "Prompts per pruning round")->capture_default_str();
  app.add_option("--threshold", config.threshold, "Pruning validity threshold")->capture_default_str();
  app.add_option("--max-concurrency", config.max_concurrency, "Backend requests in flight")->capture_default_str();
  app.add_option("--out", config.out_dir, "Output directory")->capture_default_str();
  app.add_option("--cache", config.cache_path, "Calibration prior cache file (read and updated)");

  const std::vector<std::pair<std::string, std::string>> commands = {
      {"search", "Per-instance lottery prompt search"},
      {"rank", "Evaluate every prompt on the training set and keep the top k"},
      {"prune", "Word-score pruned prompt evaluation"},
      {"ensemble", "Evaluate a strong prompt set on test data"},
      {"transfer", "Evaluate prompts ranked on one task against another task"},
      {"few-shot-sweep", "Sample, rank and ensemble across shot counts and seeds"},
  };
  for (const auto& [name, description] : commands) {
    app.add_subcommand(name, description)->fallthrough();
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      app.exit(e, out, err);
      return kExitOk;
    }
    err << "lotto: " << e.what() << "\n";
    return kExitConfigError;
  }
  config.command = app.get_subcommands().front()->get_name();
  return Execute(config, out, err);
}

}  // namespace lotto::cli
