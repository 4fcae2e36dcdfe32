#include "toy_data.hpp"

namespace lotto::testing {

namespace {

const std::vector<std::string> kFiller = {"plot",  "scene", "story", "cast",  "score", "frame",
                                          "pace",  "tone",  "light", "sound", "mood",  "ending"};

}  // namespace

WordLexicon MakeLexicon(std::vector<std::string> nouns, std::vector<std::string> verbs,
                        std::vector<std::string> third, std::string source_id) {
  WordLexicon lexicon{std::move(nouns), std::move(verbs), std::move(third), std::move(source_id)};
  lexicon.Validate();
  return lexicon;
}

WordLexicon ToyLexicon64() {
  return MakeLexicon({"it", "he", "she", "they"}, {"was", "is", "felt", "seems"}, {"really", "very", "so", "just"},
                     "toy64");
}

WordLexicon ToyLexicon8() { return MakeLexicon({"it", "he"}, {"was", "is"}, {"really", "very"}, "toy8"); }

TaskSpec BinaryTask(std::string name, ModelStyle style) {
  TaskSpec task;
  task.name = std::move(name);
  task.format = PromptFormat::kSingle;
  task.verbalizer.label_words = {"bad", "great"};
  task.metric = Metric::kAccuracy;
  task.model_style = style;
  return task;
}

TaskSpec FourClassTask(std::string name) {
  TaskSpec task;
  task.name = std::move(name);
  task.format = PromptFormat::kSingle;
  task.verbalizer.label_words = {"world", "sports", "business", "science"};
  task.metric = Metric::kAccuracy;
  return task;
}

TaskSpec PairTask(std::string name) {
  TaskSpec task;
  task.name = std::move(name);
  task.format = PromptFormat::kPair;
  task.verbalizer.label_words = {"Yes", "No"};
  task.metric = Metric::kBinaryF1;
  return task;
}

std::vector<Instance> MakeToyDataset(const TaskSpec& task, const ToyDataOptions& options) {
  SeededRng rng(options.seed);
  const auto& labels = task.verbalizer.label_words;
  std::vector<Instance> out;
  out.reserve(options.size);
  for (std::size_t i = 0; i < options.size; ++i) {
    Instance instance;
    instance.label = i % labels.size();
    std::string text = "Sample " + std::to_string(i) + ":";
    const std::size_t filler = 2 + rng.below(3);
    for (std::size_t f = 0; f < filler; ++f) text += " " + kFiller[rng.below(kFiller.size())];
    const bool distract = static_cast<double>(rng.below(1000)) < options.distractor_rate * 1000.0;
    if (distract) {
      const std::size_t wrong = (instance.label + 1 + rng.below(labels.size() - 1)) % labels.size();
      text += " " + labels[wrong];
    }
    text += " " + labels[instance.label] + ".";
    if (task.format == PromptFormat::kPair) {
      instance.text2 = "Second " + kFiller[rng.below(kFiller.size())] + ".";
    }
    instance.text = std::move(text);
    out.push_back(std::move(instance));
  }
  return out;
}

}  // namespace lotto::testing
