#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "lotto/lexicon.hpp"
#include "lotto/scorer.hpp"
#include "lotto/task.hpp"

namespace lotto {

struct SearchResult {
  std::size_t instance_id = 0;
  std::optional<std::size_t> found;  // space_index of the lottery prompt
  std::size_t cost = 0;              // templates scored for this instance

  friend bool operator==(const SearchResult&, const SearchResult&) = default;
};

struct PromptStats {
  std::size_t space_index = 0;
  double metric_value = 0.0;
  std::size_t n_evaluated = 0;

  friend bool operator==(const PromptStats&, const PromptStats&) = default;
};

/// Walks templates in space_index order and stops at the first whose
/// calibrated prediction equals the gold label. Priors are not charged to
/// the instance's cost. Throws kInvalidArgument when budget > space size.
SearchResult search_lottery(const Instance& instance, std::size_t instance_id, Scorer& scorer,
                            std::size_t budget);

/// search_lottery for every instance; results[i].instance_id == i.
std::vector<SearchResult> search_dataset(std::span<const Instance> dataset, Scorer& scorer,
                                         std::size_t budget);

double success_rate(std::span<const SearchResult> results);
double mean_cost(std::span<const SearchResult> results);

/// Accuracy, or binary F1 with class 1 as the positive class. F1 is 1 when
/// neither predictions nor gold contain a positive. Throws kEmptyInput,
/// kDimensionMismatch.
double compute_metric(Metric metric, std::span<const std::size_t> predictions,
                      std::span<const std::size_t> gold);

PromptStats evaluate_prompt(const PromptTemplate& tpl, std::span<const Instance> dataset, Scorer& scorer);

/// evaluate_prompt for every listed template, in the order given.
std::vector<PromptStats> evaluate_prompts(std::span<const std::size_t> space_indices,
                                          std::span<const Instance> dataset, Scorer& scorer);

/// Every template of the space, in space_index order.
std::vector<PromptStats> evaluate_space(std::span<const Instance> dataset, Scorer& scorer);

/// Sorts by metric descending, ties to the lower space_index, keeps k.
std::vector<PromptStats> top_k(std::vector<PromptStats> stats, std::size_t k);

/// Exhaustive evaluation followed by top_k. Throws kEmptyDataset, kInvalidArgument (k == 0).
std::vector<PromptStats> rank_prompts(std::span<const Instance> dataset, Scorer& scorer, std::size_t k);

/// Per-word record of the metrics of every evaluated prompt containing it.
class WordScoreTable {
 public:
  explicit WordScoreTable(const WordLexicon& lexicon);

  void Record(const PromptTemplate& tpl, double metric_value);

  std::span<const double> observations(WordSlot slot, std::size_t word_idx) const;
  std::optional<double> mean(WordSlot slot, std::size_t word_idx) const;

  /// Mean of the three word means; a word without observations counts as
  /// passing, so it drops out of the mean. All three unseen yields nullopt.
  std::optional<double> prompt_score(const PromptTemplate& tpl) const;

 private:
  std::array<std::vector<std::vector<double>>, 3> observed_;
};

struct PruneOptions {
  std::size_t batch_size = 16;
  double threshold = 0.7;
  std::uint64_t seed = 0;
};

struct PruneResult {
  std::vector<PromptStats> stats;             // ordered by space_index
  std::vector<std::size_t> evaluation_order;  // space indices as evaluated
  std::size_t rounds = 0;
};

/// A prompt is valid while it is unevaluated and its prompt_score is absent
/// or at least the threshold. Each round samples batch_size valid prompts
/// uniformly without replacement, evaluates them on the whole dataset and
/// updates the word table; stops when no valid prompt remains.
PruneResult pruned_search(std::span<const Instance> dataset, Scorer& scorer, const PruneOptions& options);

}  // namespace lotto
