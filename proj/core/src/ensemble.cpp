#include "lotto/ensemble.hpp"

#include <algorithm>
#include <string>
#include <unordered_set>

#include "lotto/errors.hpp"
#include "lotto/random.hpp"
#include "parallel.hpp"

namespace lotto {

void StrongPromptSet::Validate() const {
  if (templates.empty()) throw Error(ErrorCode::kEmptyEnsemble, "strong prompt set is empty");
  std::unordered_set<std::size_t> seen;
  for (std::size_t index : templates) {
    if (!seen.insert(index).second) {
      throw Error(ErrorCode::kInvalidArgument, "strong prompt set repeats template " + std::to_string(index));
    }
  }
  if (!source_stats.empty()) {
    if (source_stats.size() != templates.size()) {
      throw Error(ErrorCode::kInvalidArgument, "strong prompt set stats do not match its templates");
    }
    for (std::size_t i = 0; i < templates.size(); ++i) {
      if (source_stats[i].space_index != templates[i]) {
        throw Error(ErrorCode::kInvalidArgument, "strong prompt set stats are out of order");
      }
    }
  }
}

StrongPromptSet MakeStrongPromptSet(std::span<const PromptStats> ranked, const TaskSpec& task,
                                    const WordLexicon& lexicon) {
  StrongPromptSet strong;
  strong.source_task = task.name;
  strong.num_classes = task.num_classes();
  strong.lexicon_source = lexicon.source_id;
  for (const auto& s : ranked) {
    strong.templates.push_back(s.space_index);
    strong.source_stats.push_back(s);
  }
  strong.Validate();
  return strong;
}

std::string_view ToString(EnsembleStrategy strategy) { return strategy == EnsembleStrategy::kVote ? "vote" : "mi"; }

EnsembleStrategy ParseEnsembleStrategy(std::string_view text) {
  if (text == "vote") return EnsembleStrategy::kVote;
  if (text == "mi") return EnsembleStrategy::kMi;
  throw Error(ErrorCode::kInvalidArgument, "unknown strategy '" + std::string(text) + "' (expected vote or mi)");
}

ProbVector ensemble_vote(std::span<const ProbVector> members) {
  if (members.empty()) throw Error(ErrorCode::kEmptyEnsemble, "cannot vote with no members");
  ProbVector mean(members.front().size(), 0.0);
  for (const auto& p : members) {
    if (p.size() != mean.size()) throw Error(ErrorCode::kDimensionMismatch, "ensemble members differ in length");
    for (std::size_t i = 0; i < p.size(); ++i) mean[i] += p[i];
  }
  const double t = static_cast<double>(members.size());
  for (double& v : mean) v /= t;
  return mean;
}

MiChoice select_by_information(std::span<const CalibratedDistribution> members) {
  if (members.empty()) throw Error(ErrorCode::kEmptyEnsemble, "cannot select from no members");
  MiChoice best{0, mutual_information(members[0].q, members[0].p)};
  for (std::size_t k = 1; k < members.size(); ++k) {
    const double info = mutual_information(members[k].q, members[k].p);
    if (info > best.information) best = {k, info};
  }
  return best;
}

namespace {

void CheckCompatible(const StrongPromptSet& strong, const Scorer& scorer) {
  strong.Validate();
  const TaskSpec& task = scorer.task();
  if (strong.num_classes != 0 && strong.num_classes != task.num_classes()) {
    throw Error(ErrorCode::kClassMismatch, "prompts from task '" + strong.source_task + "' have " +
                                               std::to_string(strong.num_classes) + " classes but task '" +
                                               task.name + "' has " + std::to_string(task.num_classes()));
  }
  const std::string& lexicon_source = scorer.space().lexicon().source_id;
  if (!strong.lexicon_source.empty() && strong.lexicon_source != lexicon_source) {
    throw Error(ErrorCode::kLexiconMismatch, "prompts were ranked over lexicon '" + strong.lexicon_source +
                                                 "' but the current lexicon is '" + lexicon_source + "'");
  }
  for (std::size_t index : strong.templates) {
    if (index >= scorer.space().size()) {
      throw Error(ErrorCode::kIndexOutOfRange, "template " + std::to_string(index) + " is outside the space");
    }
  }
}

}  // namespace

MiSelection ensemble_mi(const Instance& instance, const StrongPromptSet& strong, Scorer& scorer) {
  CheckCompatible(strong, scorer);
  std::vector<CalibratedDistribution> members;
  members.reserve(strong.templates.size());
  for (std::size_t index : strong.templates) members.push_back(scorer.distribution(instance, scorer.space().at(index)));
  const MiChoice choice = select_by_information(members);
  return {strong.templates[choice.member], std::move(members[choice.member].p)};
}

EvalReport evaluate_ensemble(std::span<const Instance> testset, const StrongPromptSet& strong,
                             EnsembleStrategy strategy, Scorer& scorer) {
  if (testset.empty()) throw Error(ErrorCode::kEmptyTestSet, "test set is empty");
  CheckCompatible(strong, scorer);
  const std::size_t t = strong.templates.size();

  // member_dists[k][i]: calibrated distribution of instance i under member k.
  std::vector<std::vector<CalibratedDistribution>> member_dists(t);
  detail::ParallelFor(t, scorer.workers(), [&](std::size_t k) {
    member_dists[k] = scorer.distributions(testset, scorer.space().at(strong.templates[k]));
  });

  EvalReport report;
  report.task = scorer.task().name;
  report.source_task = strong.source_task;
  report.strategy = strategy;
  report.k = t;
  report.metric = scorer.task().metric;
  report.rows.reserve(testset.size());
  std::vector<CalibratedDistribution> column(t);
  std::vector<ProbVector> ps(t);
  for (std::size_t i = 0; i < testset.size(); ++i) {
    EvalRow row{i, std::nullopt, 0, testset[i].label};
    if (strategy == EnsembleStrategy::kVote) {
      for (std::size_t k = 0; k < t; ++k) ps[k] = member_dists[k][i].p;
      row.prediction = predict(ensemble_vote(ps));
    } else {
      for (std::size_t k = 0; k < t; ++k) column[k] = member_dists[k][i];
      const MiChoice choice = select_by_information(column);
      row.chosen = strong.templates[choice.member];
      row.prediction = predict(member_dists[choice.member][i].p);
    }
    report.rows.push_back(row);
  }
  report.metric_value = recompute_metric(report);
  return report;
}

EvalReport transfer_eval(const StrongPromptSet& source_strong, std::span<const Instance> target_testset,
                         Scorer& target_scorer, EnsembleStrategy strategy) {
  return evaluate_ensemble(target_testset, source_strong, strategy, target_scorer);
}

double recompute_metric(const EvalReport& report) {
  std::vector<std::size_t> predictions, gold;
  predictions.reserve(report.rows.size());
  gold.reserve(report.rows.size());
  for (const auto& row : report.rows) {
    predictions.push_back(row.prediction);
    gold.push_back(row.gold);
  }
  return compute_metric(report.metric, predictions, gold);
}

std::vector<Instance> sample_few_shot(std::span<const Instance> dataset, std::size_t shots, std::uint64_t seed,
                                      std::size_t num_classes) {
  if (shots == 0) throw Error(ErrorCode::kInvalidArgument, "shots must be at least 1");
  std::vector<std::vector<std::size_t>> by_class(num_classes);
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    if (dataset[i].label >= num_classes) {
      throw Error(ErrorCode::kInvalidInstance, "instance " + std::to_string(i) + " has label outside the task");
    }
    by_class[dataset[i].label].push_back(i);
  }
  for (std::size_t c = 0; c < num_classes; ++c) {
    if (by_class[c].empty()) {
      throw Error(ErrorCode::kInsufficientData, "class " + std::to_string(c) + " has no instances to sample");
    }
  }
  SeededRng rng(seed);
  std::vector<std::size_t> picked;
  for (const auto& members : by_class) {
    const auto sample = SampleWithoutReplacement(members, shots, rng);
    picked.insert(picked.end(), sample.begin(), sample.end());
  }
  std::sort(picked.begin(), picked.end());
  std::vector<Instance> out;
  out.reserve(picked.size());
  for (std::size_t i : picked) out.push_back(dataset[i]);
  return out;
}

WordFrequency word_frequency(const StrongPromptSet& strong, const PromptSpace& space) {
  WordFrequency freq;
  for (std::size_t index : strong.templates) {
    const auto words = space.words(index);
    for (std::size_t slot = 0; slot < 3; ++slot) ++freq[slot][words[slot]];
  }
  return freq;
}

}  // namespace lotto
