#include "lotto/task.hpp"

#include <fstream>
#include <iterator>
#include <unordered_set>

#include <json.hpp>

#include "lotto/errors.hpp"

namespace lotto {

namespace {

using nlohmann::json;

// Joins the non-empty segments with single spaces.
std::string JoinSegments(std::initializer_list<std::string_view> segments) {
  std::string out;
  for (std::string_view segment : segments) {
    if (segment.empty()) continue;
    if (!out.empty()) out.push_back(' ');
    out.append(segment);
  }
  return out;
}

std::string Wrap(std::string_view text1, std::string_view text2, const PromptTemplate& tpl, const TaskSpec& task,
                 const WordLexicon& lexicon) {
  const auto [noun, verb, third] = template_words(tpl, lexicon);
  const bool pair = task.format == PromptFormat::kPair;
  const std::string third_word = pair ? third + "?" : third;
  if (task.model_style == ModelStyle::kMasked) {
    if (!pair) return JoinSegments({text1, noun, verb, third_word, kMaskPlaceholder});
    const std::string mask = std::string(kMaskPlaceholder) + ",";
    return JoinSegments({text1, noun, verb, third_word, mask, text2});
  }
  // Next-token models read the label word right after the trailing space.
  std::string out = pair ? JoinSegments({text1, text2, noun, verb, third_word})
                         : JoinSegments({text1, noun, verb, third_word});
  out.push_back(' ');
  return out;
}

std::string ReadFile(const std::filesystem::path& path, std::string_view what) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::kIoError, "cannot open " + std::string(what) + ": " + path.string());
  }
  return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

}  // namespace

std::string_view ToString(PromptFormat format) { return format == PromptFormat::kPair ? "pair" : "single"; }
std::string_view ToString(Metric metric) { return metric == Metric::kBinaryF1 ? "binary_f1" : "accuracy"; }
std::string_view ToString(ModelStyle style) { return style == ModelStyle::kNextToken ? "next_token" : "masked"; }

PromptFormat ParsePromptFormat(std::string_view text) {
  if (text == "single") return PromptFormat::kSingle;
  if (text == "pair") return PromptFormat::kPair;
  throw Error(ErrorCode::kInvalidTask, "unknown format '" + std::string(text) + "' (expected single or pair)");
}

Metric ParseMetric(std::string_view text) {
  if (text == "accuracy") return Metric::kAccuracy;
  if (text == "binary_f1") return Metric::kBinaryF1;
  throw Error(ErrorCode::kInvalidTask, "unknown metric '" + std::string(text) + "' (expected accuracy or binary_f1)");
}

ModelStyle ParseModelStyle(std::string_view text) {
  if (text == "masked") return ModelStyle::kMasked;
  if (text == "next_token") return ModelStyle::kNextToken;
  throw Error(ErrorCode::kInvalidTask, "unknown model_style '" + std::string(text) + "' (expected masked or next_token)");
}

void Verbalizer::Validate() const {
  if (label_words.size() < 2) {
    throw Error(ErrorCode::kInvalidTask, "verbalizer needs at least two label words");
  }
  std::unordered_set<std::string_view> seen;
  for (const auto& word : label_words) {
    if (word.empty()) throw Error(ErrorCode::kInvalidTask, "verbalizer contains an empty label word");
    if (!seen.insert(word).second) {
      throw Error(ErrorCode::kInvalidTask, "verbalizer repeats label word '" + word + "'");
    }
  }
}

void TaskSpec::Validate() const {
  if (name.empty()) throw Error(ErrorCode::kInvalidTask, "task name is empty");
  verbalizer.Validate();
  if (metric == Metric::kBinaryF1 && verbalizer.num_classes() != 2) {
    throw Error(ErrorCode::kInvalidTask, "task '" + name + "': binary_f1 requires exactly two label words");
  }
}

void ValidateInstance(const Instance& instance, const TaskSpec& task) {
  if (instance.label >= task.num_classes()) {
    throw Error(ErrorCode::kInvalidInstance, "label " + std::to_string(instance.label) + " is outside task '" +
                                                 task.name + "' with " + std::to_string(task.num_classes()) +
                                                 " classes");
  }
  const bool pair = task.format == PromptFormat::kPair;
  if (instance.text2.has_value() != pair) {
    throw Error(ErrorCode::kFormatMismatch, pair ? "pair task '" + task.name + "' needs text2"
                                                 : "single task '" + task.name + "' does not take text2");
  }
}

std::string render(const Instance& instance, const PromptTemplate& tpl, const TaskSpec& task,
                   const WordLexicon& lexicon) {
  const bool pair = task.format == PromptFormat::kPair;
  if (instance.text2.has_value() != pair) {
    throw Error(ErrorCode::kFormatMismatch, pair ? "pair task '" + task.name + "' needs text2"
                                                 : "single task '" + task.name + "' does not take text2");
  }
  return Wrap(instance.text, instance.text2.value_or(std::string{}), tpl, task, lexicon);
}

std::string render_empty(const PromptTemplate& tpl, const TaskSpec& task, const WordLexicon& lexicon) {
  return Wrap({}, {}, tpl, task, lexicon);
}

TaskSpec ParseTaskSpec(std::string_view json_text) {
  TaskSpec task;
  try {
    const json doc = json::parse(json_text);
    task.name = doc.at("name").get<std::string>();
    task.format = ParsePromptFormat(doc.value("format", std::string("single")));
    task.verbalizer.label_words = doc.at("label_words").get<std::vector<std::string>>();
    task.metric = ParseMetric(doc.value("metric", std::string("accuracy")));
    task.model_style = ParseModelStyle(doc.value("model_style", std::string("masked")));
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kParseError, std::string("task config: ") + e.what());
  }
  task.Validate();
  return task;
}

TaskSpec LoadTaskSpec(const std::filesystem::path& path) {
  try {
    return ParseTaskSpec(ReadFile(path, "task config"));
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kIoError) throw;
    throw Error(e.code(), path.string() + ": " + e.message());
  }
}

std::string TaskSpecToJson(const TaskSpec& task) {
  json doc;
  doc["name"] = task.name;
  doc["format"] = ToString(task.format);
  doc["label_words"] = task.verbalizer.label_words;
  doc["metric"] = ToString(task.metric);
  doc["model_style"] = ToString(task.model_style);
  return doc.dump(2) + "\n";
}

std::vector<Instance> ParseInstances(std::string_view jsonl, const TaskSpec& task) {
  std::vector<Instance> out;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= jsonl.size()) {
    const std::size_t end = std::min(jsonl.find('\n', pos), jsonl.size());
    std::string_view line = jsonl.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.find_first_not_of(" \t") == std::string_view::npos) continue;
    Instance instance;
    try {
      const json row = json::parse(line);
      instance.text = row.at("text").get<std::string>();
      if (auto it = row.find("text2"); it != row.end() && !it->is_null()) {
        instance.text2 = it->get<std::string>();
      }
      const auto label = row.at("label").get<long long>();
      if (label < 0) {
        throw Error(ErrorCode::kInvalidInstance, "negative label");
      }
      instance.label = static_cast<std::size_t>(label);
    } catch (const json::exception& e) {
      throw Error(ErrorCode::kParseError, "dataset line " + std::to_string(line_no) + ": " + e.what());
    } catch (const Error& e) {
      throw Error(e.code(), "dataset line " + std::to_string(line_no) + ": " + e.message());
    }
    try {
      ValidateInstance(instance, task);
    } catch (const Error& e) {
      throw Error(e.code(), "dataset line " + std::to_string(line_no) + ": " + e.message());
    }
    out.push_back(std::move(instance));
  }
  return out;
}

std::vector<Instance> LoadInstances(const std::filesystem::path& path, const TaskSpec& task) {
  const std::string content = ReadFile(path, "dataset");
  try {
    return ParseInstances(content, task);
  } catch (const Error& e) {
    throw Error(e.code(), path.string() + ": " + e.message());
  }
}

std::string InstancesToJsonl(const std::vector<Instance>& instances) {
  std::string out;
  for (const auto& instance : instances) {
    json row;
    row["text"] = instance.text;
    if (instance.text2) row["text2"] = *instance.text2;
    row["label"] = instance.label;
    out += row.dump();
    out.push_back('\n');
  }
  return out;
}

}  // namespace lotto
