#pragma once

#include <chrono>
#include <cstddef>
#include <mutex>
#include <optional>
#include <string>

#include "lotto/backend.hpp"

namespace lotto {

struct HttpBackendOptions {
  std::chrono::milliseconds connect_timeout{5000};
  std::chrono::milliseconds read_timeout{120000};
  std::size_t max_batch = 32;
};

/// Client for the JSON scoring protocol:
///   GET  /v1/info  -> {"identity", "model_style", "mask_token"}
///   POST /v1/score -> {"logits": [[...], ...]}
/// A 422 {"error": "multi_token_label_word", "word": w} becomes
/// kMultiTokenLabelWord; transport failures become kBackendUnavailable.
class HttpBackend final : public ScoringBackend {
 public:
  explicit HttpBackend(std::string base_url, HttpBackendOptions options = {});

  BackendInfo info() const override;
  bool supports(ModelStyle style) const override;
  std::size_t max_batch() const override { return options_.max_batch; }
  LogitRows score(ModelStyle style, std::span<const std::string> label_words,
                  std::span<const std::string> texts) const override;

  const std::string& base_url() const noexcept { return base_url_; }

 private:
  std::string base_url_;
  HttpBackendOptions options_;
  mutable std::mutex info_mutex_;
  mutable std::optional<BackendInfo> info_;
};

}  // namespace lotto
