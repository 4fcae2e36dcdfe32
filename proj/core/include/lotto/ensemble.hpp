#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lotto/calibration.hpp"
#include "lotto/scorer.hpp"
#include "lotto/search.hpp"

namespace lotto {

/// Top-ranked templates carried from training search to test time.
struct StrongPromptSet {
  std::vector<std::size_t> templates;  // ranking order
  std::string source_task;
  std::size_t num_classes = 0;
  std::string lexicon_source;
  std::vector<PromptStats> source_stats;  // parallel to templates

  /// Throws kEmptyEnsemble or kInvalidArgument (duplicates, stats mismatch).
  void Validate() const;
};

StrongPromptSet MakeStrongPromptSet(std::span<const PromptStats> ranked, const TaskSpec& task,
                                    const WordLexicon& lexicon);

enum class EnsembleStrategy { kVote, kMi };

std::string_view ToString(EnsembleStrategy strategy);
EnsembleStrategy ParseEnsembleStrategy(std::string_view text);

struct EvalRow {
  std::size_t instance_id = 0;
  std::optional<std::size_t> chosen;  // mi only
  std::size_t prediction = 0;
  std::size_t gold = 0;

  friend bool operator==(const EvalRow&, const EvalRow&) = default;
};

struct EvalReport {
  std::string task;
  std::string source_task;
  EnsembleStrategy strategy = EnsembleStrategy::kMi;
  std::size_t k = 0;
  Metric metric = Metric::kAccuracy;
  double metric_value = 0.0;
  std::vector<EvalRow> rows;
};

/// Componentwise mean. Throws kEmptyEnsemble, kDimensionMismatch.
ProbVector ensemble_vote(std::span<const ProbVector> members);

struct MiChoice {
  std::size_t member = 0;  // position in the ensemble
  double information = 0.0;
};

/// Member maximizing mutual_information(q, p); exact ties keep the earlier
/// member. Throws kEmptyEnsemble.
MiChoice select_by_information(std::span<const CalibratedDistribution> members);

struct MiSelection {
  std::size_t space_index = 0;
  ProbVector p;
};

MiSelection ensemble_mi(const Instance& instance, const StrongPromptSet& strong, Scorer& scorer);

/// Throws kEmptyTestSet, kClassMismatch, kLexiconMismatch.
EvalReport evaluate_ensemble(std::span<const Instance> testset, const StrongPromptSet& strong,
                             EnsembleStrategy strategy, Scorer& scorer);

/// evaluate_ensemble with prompts ranked on another task. The scorer is bound
/// to the target task.
EvalReport transfer_eval(const StrongPromptSet& source_strong, std::span<const Instance> target_testset,
                         Scorer& target_scorer, EnsembleStrategy strategy = EnsembleStrategy::kMi);

/// The report's metric recomputed from its rows.
double recompute_metric(const EvalReport& report);

/// Up to `shots` instances per class, seeded. Output keeps dataset order.
/// Throws kInsufficientData when a class has no instances.
std::vector<Instance> sample_few_shot(std::span<const Instance> dataset, std::size_t shots,
                                      std::uint64_t seed, std::size_t num_classes);

/// Word counts per slot (noun, verb, third) across the set's templates.
using WordFrequency = std::array<std::map<std::string, std::size_t>, 3>;
WordFrequency word_frequency(const StrongPromptSet& strong, const PromptSpace& space);

}  // namespace lotto
