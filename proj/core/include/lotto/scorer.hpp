#pragma once

#include <cstddef>
#include <functional>
#include <future>
#include <map>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "lotto/backend.hpp"
#include "lotto/calibration.hpp"
#include "lotto/lexicon.hpp"
#include "lotto/task.hpp"

namespace lotto {

/// Calibration priors keyed by (task name, space_index). Each prior is
/// computed at most once even when several threads ask for it first.
class PriorCache {
 public:
  struct Entry {
    std::string task;
    std::size_t space_index = 0;
    ProbVector q;
  };

  ProbVector GetOrCompute(const std::string& task, std::size_t space_index,
                          const std::function<ProbVector()>& compute);

  /// Seeds an entry (e.g. from a cache file). Existing entries are kept.
  void Insert(const std::string& task, std::size_t space_index, ProbVector q);
  std::optional<ProbVector> Find(const std::string& task, std::size_t space_index) const;

  /// Settled entries ordered by (task, space_index).
  std::vector<Entry> Entries() const;

  std::size_t computed() const;
  std::size_t hits() const;
  std::size_t size() const;

 private:
  using Key = std::pair<std::string, std::size_t>;

  mutable std::mutex mutex_;
  std::map<Key, std::shared_future<ProbVector>> slots_;
  std::size_t computed_ = 0;
  std::size_t hits_ = 0;
};

/// Produces calibrated distributions for one task over one prompt space.
/// Thread-safe; priors are shared through the PriorCache.
class Scorer {
 public:
  /// Throws kInvalidArgument when the backend does not serve the task's style.
  Scorer(BackendClient& client, const TaskSpec& task, const PromptSpace& space, PriorCache& priors);

  const TaskSpec& task() const noexcept { return task_; }
  const PromptSpace& space() const noexcept { return space_; }
  BackendClient& client() noexcept { return client_; }
  std::size_t workers() const noexcept { return client_.max_concurrency(); }

  /// q for the template: the distribution on the empty-wrapped input.
  ProbVector prior(const PromptTemplate& tpl);

  CalibratedDistribution distribution(const Instance& instance, const PromptTemplate& tpl);

  /// One batched request stream for all instances under one template.
  std::vector<CalibratedDistribution> distributions(std::span<const Instance> instances,
                                                    const PromptTemplate& tpl);

  std::vector<std::size_t> predictions(std::span<const Instance> instances, const PromptTemplate& tpl);

 private:
  BackendClient& client_;
  const TaskSpec& task_;
  const PromptSpace& space_;
  PriorCache& priors_;
};

}  // namespace lotto
