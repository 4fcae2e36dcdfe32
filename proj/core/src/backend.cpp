#include "lotto/backend.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "lotto/errors.hpp"

namespace lotto {

void CheckLogitRows(const LogitRows& rows, std::size_t num_texts, std::size_t num_labels) {
  if (rows.size() != num_texts) {
    throw Error(ErrorCode::kProtocolError, "backend returned " + std::to_string(rows.size()) + " logit rows for " +
                                               std::to_string(num_texts) + " texts");
  }
  for (const auto& row : rows) {
    if (row.size() != num_labels) {
      throw Error(ErrorCode::kProtocolError, "backend returned a row of " + std::to_string(row.size()) +
                                                 " logits for " + std::to_string(num_labels) + " label words");
    }
    for (double v : row) {
      if (!std::isfinite(v)) throw Error(ErrorCode::kNonFiniteLogit, "backend returned a non-finite logit");
    }
  }
}

ProbVector raw_distribution(const ScoringBackend& backend, std::string_view text, const Verbalizer& verbalizer,
                            ModelStyle style) {
  if (text.empty()) throw Error(ErrorCode::kInvalidArgument, "cannot score an empty text");
  const std::string owned(text);
  const LogitRows rows = backend.score(style, verbalizer.label_words, std::span<const std::string>(&owned, 1));
  CheckLogitRows(rows, 1, verbalizer.num_classes());
  return softmax(rows.front());
}

BackendClient::BackendClient(const ScoringBackend& backend, ClientOptions options)
    : backend_(backend),
      options_(options),
      window_(static_cast<std::ptrdiff_t>(std::max<std::size_t>(options.max_concurrency, 1))) {
  options_.max_concurrency = std::max<std::size_t>(options_.max_concurrency, 1);
  if (options_.max_batch == 0) options_.max_batch = std::max<std::size_t>(backend.max_batch(), 1);
}

std::vector<ProbVector> BackendClient::raw_distributions(ModelStyle style, const Verbalizer& verbalizer,
                                                         std::span<const std::string> texts) {
  std::vector<ProbVector> out;
  out.reserve(texts.size());
  for (std::size_t start = 0; start < texts.size(); start += options_.max_batch) {
    const auto chunk = texts.subspan(start, std::min(options_.max_batch, texts.size() - start));
    LogitRows rows;
    window_.acquire();
    const std::size_t now = in_flight_.fetch_add(1, std::memory_order_relaxed) + 1;
    std::size_t peak = peak_.load(std::memory_order_relaxed);
    while (now > peak && !peak_.compare_exchange_weak(peak, now, std::memory_order_relaxed)) {
    }
    try {
      rows = backend_.score(style, verbalizer.label_words, chunk);
    } catch (...) {
      in_flight_.fetch_sub(1, std::memory_order_relaxed);
      window_.release();
      throw;
    }
    in_flight_.fetch_sub(1, std::memory_order_relaxed);
    window_.release();
    calls_.fetch_add(chunk.size(), std::memory_order_relaxed);
    CheckLogitRows(rows, chunk.size(), verbalizer.num_classes());
    for (const auto& row : rows) out.push_back(softmax(row));
  }
  return out;
}

}  // namespace lotto
