#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "lotto/backend.hpp"

namespace lotto {

// Static bias: while `word` appears in the text, class `label` gains `weight`.
struct PlantedRule {
  std::string word;
  std::size_t label = 0;
  double weight = 0.0;
};

// Evidence amplifier: while `word` appears in the text, every occurrence of
// label word i in the text adds `weight` to class i. Instances that mention
// their gold label word therefore favour prompts containing `word`.
struct Amplifier {
  std::string word;
  double weight = 0.0;
};

struct SyntheticOracleConfig {
  std::uint64_t seed = 0;
  double noise = 1.0;
  std::size_t num_classes = 0;  // 0 accepts any verbalizer size
  std::vector<PlantedRule> planted_rules;
  std::vector<Amplifier> amplifiers;
};

/// Parses `synthetic:<seed>[?noise=x&classes=n&bias=w:c:x&amp=w:x]`; bias and
/// amp may repeat or hold comma-separated lists. Throws kInvalidArgument.
SyntheticOracleConfig ParseSyntheticUrl(std::string_view url);

/// Canonical URL form; ParseSyntheticUrl(ToSyntheticUrl(c)) == c.
std::string ToSyntheticUrl(const SyntheticOracleConfig& config);

/// Deterministic stand-in for a language model. Each logit is a seeded hash
/// of (seed, text, label word) scaled into [-noise, noise), plus planted
/// rule and amplifier contributions. Label words containing whitespace are
/// rejected as multi-token.
class SyntheticOracle final : public ScoringBackend {
 public:
  explicit SyntheticOracle(SyntheticOracleConfig config);

  BackendInfo info() const override;
  bool supports(ModelStyle) const override { return true; }
  std::size_t max_batch() const override { return 256; }
  LogitRows score(ModelStyle style, std::span<const std::string> label_words,
                  std::span<const std::string> texts) const override;

  std::vector<double> logits(std::string_view text, std::span<const std::string> label_words) const;

  const SyntheticOracleConfig& config() const noexcept { return config_; }

 private:
  SyntheticOracleConfig config_;
};

/// Whitespace tokens with surrounding punctuation stripped.
std::vector<std::string_view> OracleTokens(std::string_view text);

/// Uniform value in [-1, 1) from a hash of (seed, text, word).
double OracleNoise(std::uint64_t seed, std::string_view text, std::string_view word);

}  // namespace lotto
