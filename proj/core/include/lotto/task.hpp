#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "lotto/lexicon.hpp"

namespace lotto {

/// Literal placeholder the backend swaps for its own mask token.
inline constexpr std::string_view kMaskPlaceholder = "<MASK>";

enum class PromptFormat { kSingle, kPair };
enum class Metric { kAccuracy, kBinaryF1 };
enum class ModelStyle { kMasked, kNextToken };

std::string_view ToString(PromptFormat format);
std::string_view ToString(Metric metric);
std::string_view ToString(ModelStyle style);
PromptFormat ParsePromptFormat(std::string_view text);
Metric ParseMetric(std::string_view text);
ModelStyle ParseModelStyle(std::string_view text);

/// Position i holds the label word for class i.
struct Verbalizer {
  std::vector<std::string> label_words;

  std::size_t num_classes() const noexcept { return label_words.size(); }
  void Validate() const;
};

struct TaskSpec {
  std::string name;
  PromptFormat format = PromptFormat::kSingle;
  Verbalizer verbalizer;
  Metric metric = Metric::kAccuracy;
  ModelStyle model_style = ModelStyle::kMasked;

  std::size_t num_classes() const noexcept { return verbalizer.num_classes(); }
  void Validate() const;
};

struct Instance {
  std::string text;
  std::optional<std::string> text2;
  std::size_t label = 0;
};

/// Throws kInvalidInstance or kFormatMismatch.
void ValidateInstance(const Instance& instance, const TaskSpec& task);

/// Wraps an instance with a template.
///   masked, single:     "<text> <noun> <verb> <third> <MASK>"
///   masked, pair:       "<text1> <noun> <verb> <third>? <MASK>, <text2>"
///   next_token, single: "<text> <noun> <verb> <third> "
///   next_token, pair:   "<text1> <text2> <noun> <verb> <third>? "
/// Throws kFormatMismatch when text2 presence disagrees with the format.
std::string render(const Instance& instance, const PromptTemplate& tpl, const TaskSpec& task,
                   const WordLexicon& lexicon);

/// The template wrapped around empty text, used for the calibration prior.
/// Empty segments are dropped rather than leaving doubled or dangling spaces.
std::string render_empty(const PromptTemplate& tpl, const TaskSpec& task, const WordLexicon& lexicon);

// Task config (JSON object with name, format, label_words, metric, model_style).
TaskSpec ParseTaskSpec(std::string_view json_text);
TaskSpec LoadTaskSpec(const std::filesystem::path& path);
std::string TaskSpecToJson(const TaskSpec& task);

// JSON Lines: {"text": ..., "text2": ... (optional), "label": int} per line.
std::vector<Instance> ParseInstances(std::string_view jsonl, const TaskSpec& task);
std::vector<Instance> LoadInstances(const std::filesystem::path& path, const TaskSpec& task);
std::string InstancesToJsonl(const std::vector<Instance>& instances);

}  // namespace lotto
