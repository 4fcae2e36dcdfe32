#include "lotto/search.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "lotto/errors.hpp"
#include "lotto/random.hpp"
#include "parallel.hpp"

namespace lotto {

SearchResult search_lottery(const Instance& instance, std::size_t instance_id, Scorer& scorer, std::size_t budget) {
  const PromptSpace& space = scorer.space();
  if (budget > space.size()) {
    throw Error(ErrorCode::kInvalidArgument, "budget " + std::to_string(budget) + " exceeds space size " +
                                                 std::to_string(space.size()));
  }
  SearchResult result{instance_id, std::nullopt, 0};
  for (std::size_t index = 0; index < budget; ++index) {
    const CalibratedDistribution d = scorer.distribution(instance, space.at(index));
    result.cost = index + 1;
    if (predict(d.p) == instance.label) {
      result.found = index;
      break;
    }
  }
  return result;
}

std::vector<SearchResult> search_dataset(std::span<const Instance> dataset, Scorer& scorer, std::size_t budget) {
  std::vector<SearchResult> results(dataset.size());
  detail::ParallelFor(dataset.size(), scorer.workers(),
                      [&](std::size_t i) { results[i] = search_lottery(dataset[i], i, scorer, budget); });
  return results;
}

double success_rate(std::span<const SearchResult> results) {
  if (results.empty()) throw Error(ErrorCode::kEmptyInput, "success_rate of no results");
  const auto hits = std::count_if(results.begin(), results.end(), [](const SearchResult& r) { return r.found.has_value(); });
  return static_cast<double>(hits) / static_cast<double>(results.size());
}

double mean_cost(std::span<const SearchResult> results) {
  if (results.empty()) throw Error(ErrorCode::kEmptyInput, "mean_cost of no results");
  std::size_t total = 0;
  for (const auto& r : results) total += r.cost;
  return static_cast<double>(total) / static_cast<double>(results.size());
}

double compute_metric(Metric metric, std::span<const std::size_t> predictions, std::span<const std::size_t> gold) {
  if (predictions.size() != gold.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "predictions and gold labels differ in length");
  }
  if (predictions.empty()) throw Error(ErrorCode::kEmptyInput, "metric over no predictions");
  if (metric == Metric::kAccuracy) {
    std::size_t correct = 0;
    for (std::size_t i = 0; i < gold.size(); ++i) correct += predictions[i] == gold[i] ? 1 : 0;
    return static_cast<double>(correct) / static_cast<double>(gold.size());
  }
  // Binary F1, positive class = 1.
  std::size_t tp = 0, fp = 0, fn = 0;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    const bool pred_pos = predictions[i] == 1;
    const bool gold_pos = gold[i] == 1;
    if (pred_pos && gold_pos) ++tp;
    if (pred_pos && !gold_pos) ++fp;
    if (!pred_pos && gold_pos) ++fn;
  }
  const std::size_t denom = 2 * tp + fp + fn;
  if (denom == 0) return 1.0;
  return static_cast<double>(2 * tp) / static_cast<double>(denom);
}

PromptStats evaluate_prompt(const PromptTemplate& tpl, std::span<const Instance> dataset, Scorer& scorer) {
  if (dataset.empty()) throw Error(ErrorCode::kEmptyDataset, "cannot evaluate a prompt on an empty dataset");
  const std::vector<std::size_t> predictions = scorer.predictions(dataset, tpl);
  std::vector<std::size_t> gold;
  gold.reserve(dataset.size());
  for (const auto& instance : dataset) gold.push_back(instance.label);
  return {tpl.space_index, compute_metric(scorer.task().metric, predictions, gold), dataset.size()};
}

std::vector<PromptStats> evaluate_prompts(std::span<const std::size_t> space_indices,
                                          std::span<const Instance> dataset, Scorer& scorer) {
  if (dataset.empty()) throw Error(ErrorCode::kEmptyDataset, "cannot evaluate prompts on an empty dataset");
  std::vector<PromptStats> stats(space_indices.size());
  detail::ParallelFor(space_indices.size(), scorer.workers(), [&](std::size_t i) {
    stats[i] = evaluate_prompt(scorer.space().at(space_indices[i]), dataset, scorer);
  });
  return stats;
}

std::vector<PromptStats> evaluate_space(std::span<const Instance> dataset, Scorer& scorer) {
  std::vector<std::size_t> all(scorer.space().size());
  std::iota(all.begin(), all.end(), std::size_t{0});
  return evaluate_prompts(all, dataset, scorer);
}

std::vector<PromptStats> top_k(std::vector<PromptStats> stats, std::size_t k) {
  std::sort(stats.begin(), stats.end(), [](const PromptStats& a, const PromptStats& b) {
    if (a.metric_value != b.metric_value) return a.metric_value > b.metric_value;
    return a.space_index < b.space_index;
  });
  if (stats.size() > k) stats.resize(k);
  return stats;
}

std::vector<PromptStats> rank_prompts(std::span<const Instance> dataset, Scorer& scorer, std::size_t k) {
  if (k == 0) throw Error(ErrorCode::kInvalidArgument, "k must be at least 1");
  if (dataset.empty()) throw Error(ErrorCode::kEmptyDataset, "cannot rank prompts on an empty dataset");
  return top_k(evaluate_space(dataset, scorer), k);
}

WordScoreTable::WordScoreTable(const WordLexicon& lexicon) {
  observed_[0].resize(lexicon.nouns.size());
  observed_[1].resize(lexicon.verbs.size());
  observed_[2].resize(lexicon.third.size());
}

void WordScoreTable::Record(const PromptTemplate& tpl, double metric_value) {
  observed_[0].at(tpl.noun_idx).push_back(metric_value);
  observed_[1].at(tpl.verb_idx).push_back(metric_value);
  observed_[2].at(tpl.third_idx).push_back(metric_value);
}

std::span<const double> WordScoreTable::observations(WordSlot slot, std::size_t word_idx) const {
  return observed_[static_cast<std::size_t>(slot)].at(word_idx);
}

std::optional<double> WordScoreTable::mean(WordSlot slot, std::size_t word_idx) const {
  const auto values = observations(slot, word_idx);
  if (values.empty()) return std::nullopt;
  return std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
}

std::optional<double> WordScoreTable::prompt_score(const PromptTemplate& tpl) const {
  double total = 0.0;
  int seen = 0;
  for (const auto& [slot, idx] : {std::pair{WordSlot::kNoun, tpl.noun_idx}, std::pair{WordSlot::kVerb, tpl.verb_idx},
                                  std::pair{WordSlot::kThird, tpl.third_idx}}) {
    if (const auto m = mean(slot, idx)) {
      total += *m;
      ++seen;
    }
  }
  if (seen == 0) return std::nullopt;
  return total / seen;
}

PruneResult pruned_search(std::span<const Instance> dataset, Scorer& scorer, const PruneOptions& options) {
  if (dataset.empty()) throw Error(ErrorCode::kEmptyDataset, "cannot prune on an empty dataset");
  if (options.batch_size == 0) throw Error(ErrorCode::kInvalidArgument, "batch_size must be at least 1");
  if (!(options.threshold >= 0.0 && options.threshold <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "threshold must lie in [0, 1]");
  }
  const PromptSpace& space = scorer.space();
  WordScoreTable table(space.lexicon());
  std::vector<bool> evaluated(space.size(), false);
  SeededRng rng(options.seed);
  PruneResult result;
  std::vector<std::size_t> valid;
  valid.reserve(space.size());
  while (true) {
    valid.clear();
    for (std::size_t i = 0; i < space.size(); ++i) {
      if (evaluated[i]) continue;
      const auto score = table.prompt_score(space.at(i));
      if (!score || *score >= options.threshold) valid.push_back(i);
    }
    if (valid.empty()) break;
    const std::vector<std::size_t> batch = SampleWithoutReplacement(valid, options.batch_size, rng);
    const std::vector<PromptStats> stats = evaluate_prompts(batch, dataset, scorer);
    for (const auto& s : stats) {
      table.Record(space.at(s.space_index), s.metric_value);
      evaluated[s.space_index] = true;
      result.evaluation_order.push_back(s.space_index);
      result.stats.push_back(s);
    }
    ++result.rounds;
  }
  std::sort(result.stats.begin(), result.stats.end(),
            [](const PromptStats& a, const PromptStats& b) { return a.space_index < b.space_index; });
  return result;
}

}  // namespace lotto
