#pragma once

#include <atomic>
#include <cstddef>
#include <cstdint>
#include <semaphore>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lotto/calibration.hpp"
#include "lotto/task.hpp"

namespace lotto {

using LogitRows = std::vector<std::vector<double>>;

struct BackendInfo {
  std::string identity;
  ModelStyle model_style = ModelStyle::kMasked;
  std::string mask_token;
};

/// A model that returns raw label-word logits for wrapped texts. Must be
/// deterministic: the same (text, label_words) always yields the same row.
/// Implementations must tolerate concurrent calls to score().
class ScoringBackend {
 public:
  virtual ~ScoringBackend() = default;

  virtual BackendInfo info() const = 0;
  virtual bool supports(ModelStyle style) const = 0;
  virtual std::size_t max_batch() const { return 64; }

  /// One row per text, one column per label word.
  virtual LogitRows score(ModelStyle style, std::span<const std::string> label_words,
                          std::span<const std::string> texts) const = 0;
};

/// Throws kProtocolError on shape mismatch and kNonFiniteLogit on NaN/inf.
void CheckLogitRows(const LogitRows& rows, std::size_t num_texts, std::size_t num_labels);

/// Softmax over the label-word logits for one text.
ProbVector raw_distribution(const ScoringBackend& backend, std::string_view text,
                            const Verbalizer& verbalizer, ModelStyle style);

struct ClientOptions {
  std::size_t max_concurrency = 8;
  std::size_t max_batch = 0;  // 0: use the backend's own limit
};

/// Wraps a backend with batching, a bounded in-flight window and call
/// accounting (one call per scored text, regardless of batching).
class BackendClient {
 public:
  BackendClient(const ScoringBackend& backend, ClientOptions options = {});

  BackendClient(const BackendClient&) = delete;
  BackendClient& operator=(const BackendClient&) = delete;

  std::vector<ProbVector> raw_distributions(ModelStyle style, const Verbalizer& verbalizer,
                                            std::span<const std::string> texts);

  const ScoringBackend& backend() const noexcept { return backend_; }
  std::size_t max_concurrency() const noexcept { return options_.max_concurrency; }
  std::uint64_t calls() const noexcept { return calls_.load(std::memory_order_relaxed); }
  std::size_t peak_in_flight() const noexcept { return peak_.load(std::memory_order_relaxed); }

 private:
  const ScoringBackend& backend_;
  ClientOptions options_;
  std::counting_semaphore<> window_;
  std::atomic<std::uint64_t> calls_{0};
  std::atomic<std::size_t> in_flight_{0};
  std::atomic<std::size_t> peak_{0};
};

}  // namespace lotto
