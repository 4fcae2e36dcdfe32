#include "lotto/lexicon.hpp"

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <istream>
#include <iterator>
#include <sstream>
#include <unordered_set>

#include "default_lexicon_data.hpp"
#include "lotto/errors.hpp"

namespace lotto {

namespace {

constexpr std::array<WordSlot, 3> kSlots = {WordSlot::kNoun, WordSlot::kVerb, WordSlot::kThird};

std::string_view Trim(std::string_view s) {
  constexpr std::string_view kSpace = " \t\r\n\f\v";
  const auto first = s.find_first_not_of(kSpace);
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(kSpace);
  return s.substr(first, last - first + 1);
}

bool HasWhitespace(std::string_view word) {
  return std::any_of(word.begin(), word.end(), [](unsigned char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
  });
}

}  // namespace

std::string_view SlotName(WordSlot slot) {
  switch (slot) {
    case WordSlot::kNoun: return "noun";
    case WordSlot::kVerb: return "verb";
    case WordSlot::kThird: return "third";
  }
  return "unknown";
}

const std::vector<std::string>& WordLexicon::group(WordSlot slot) const {
  switch (slot) {
    case WordSlot::kNoun: return nouns;
    case WordSlot::kVerb: return verbs;
    case WordSlot::kThird: return third;
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown word slot");
}

void WordLexicon::Validate() const {
  for (WordSlot slot : kSlots) {
    const auto& words = group(slot);
    const std::string name(SlotName(slot));
    if (words.empty()) {
      throw Error(ErrorCode::kEmptyGroup, "lexicon '" + source_id + "' has no " + name + " words");
    }
    std::unordered_set<std::string_view> seen;
    for (const auto& word : words) {
      if (word.empty() || HasWhitespace(word)) {
        throw Error(ErrorCode::kInvalidWord,
                    "lexicon '" + source_id + "' " + name + " group contains invalid word '" + word + "'");
      }
      if (!seen.insert(word).second) {
        throw Error(ErrorCode::kDuplicateWord,
                    "lexicon '" + source_id + "' " + name + " group repeats '" + word + "'");
      }
    }
  }
}

WordLexicon ParseLexicon(std::istream& in, std::string source_id) {
  WordLexicon lexicon;
  lexicon.source_id = std::move(source_id);
  std::vector<std::string>* current = nullptr;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view trimmed = Trim(line);
    if (trimmed.empty()) continue;
    if (trimmed.front() == '#') {
      if (trimmed == "#NOUNS") {
        current = &lexicon.nouns;
      } else if (trimmed == "#VERBS") {
        current = &lexicon.verbs;
      } else if (trimmed == "#THIRD") {
        current = &lexicon.third;
      }
      continue;
    }
    if (current == nullptr) {
      throw Error(ErrorCode::kParseError, "lexicon '" + lexicon.source_id + "' line " + std::to_string(line_no) +
                                              ": word before any #NOUNS/#VERBS/#THIRD section");
    }
    if (HasWhitespace(trimmed)) {
      throw Error(ErrorCode::kInvalidWord, "lexicon '" + lexicon.source_id + "' line " + std::to_string(line_no) +
                                               ": '" + std::string(trimmed) + "' is not a single word");
    }
    current->emplace_back(trimmed);
  }
  lexicon.Validate();
  return lexicon;
}

WordLexicon ParseLexicon(std::string_view text, std::string source_id) {
  std::istringstream in{std::string(text)};
  return ParseLexicon(in, std::move(source_id));
}

std::string MakeSourceId(std::string_view name, std::string_view content) {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char c : content) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string hex(16, '0');
  for (int i = 15; i >= 0; --i) {
    hex[static_cast<std::size_t>(i)] = kHex[hash & 0xF];
    hash >>= 4;
  }
  return std::string(name) + "@" + hex;
}

WordLexicon LoadLexicon(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::kIoError, "cannot open lexicon file: " + path.string());
  }
  const std::string content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return ParseLexicon(content, MakeSourceId(path.stem().string(), content));
}

const WordLexicon& DefaultLexicon() {
  static const WordLexicon lexicon =
      ParseLexicon(detail::kDefaultLexiconText, MakeSourceId(detail::kDefaultLexiconName, detail::kDefaultLexiconText));
  return lexicon;
}

TemplateWords template_words(const PromptTemplate& tpl, const WordLexicon& lexicon) {
  if (tpl.noun_idx >= lexicon.nouns.size() || tpl.verb_idx >= lexicon.verbs.size() ||
      tpl.third_idx >= lexicon.third.size()) {
    throw Error(ErrorCode::kIndexOutOfRange, "template (" + std::to_string(tpl.noun_idx) + ", " +
                                                 std::to_string(tpl.verb_idx) + ", " +
                                                 std::to_string(tpl.third_idx) + ") is outside the lexicon");
  }
  return {lexicon.nouns[tpl.noun_idx], lexicon.verbs[tpl.verb_idx], lexicon.third[tpl.third_idx]};
}

PromptSpace::PromptSpace(WordLexicon lexicon) : lexicon_(std::move(lexicon)) {
  lexicon_.Validate();
  size_ = lexicon_.nouns.size() * lexicon_.verbs.size() * lexicon_.third.size();
}

PromptTemplate PromptSpace::at(std::size_t space_index) const {
  if (space_index >= size_) {
    throw Error(ErrorCode::kIndexOutOfRange,
                "space index " + std::to_string(space_index) + " >= space size " + std::to_string(size_));
  }
  const std::size_t n_third = lexicon_.third.size();
  const std::size_t n_verbs = lexicon_.verbs.size();
  PromptTemplate tpl;
  tpl.space_index = space_index;
  tpl.third_idx = space_index % n_third;
  tpl.verb_idx = (space_index / n_third) % n_verbs;
  tpl.noun_idx = space_index / (n_third * n_verbs);
  return tpl;
}

PromptTemplate PromptSpace::compose(std::size_t noun_idx, std::size_t verb_idx, std::size_t third_idx) const {
  if (noun_idx >= lexicon_.nouns.size() || verb_idx >= lexicon_.verbs.size() || third_idx >= lexicon_.third.size()) {
    throw Error(ErrorCode::kIndexOutOfRange, "word indices outside the lexicon");
  }
  const std::size_t n_third = lexicon_.third.size();
  const std::size_t n_verbs = lexicon_.verbs.size();
  return {noun_idx, verb_idx, third_idx, noun_idx * n_verbs * n_third + verb_idx * n_third + third_idx};
}

std::string PromptSpace::text(std::size_t space_index) const {
  const auto w = words(space_index);
  return w[0] + " " + w[1] + " " + w[2];
}

std::vector<PromptTemplate> PromptSpace::enumerate() const {
  std::vector<PromptTemplate> out;
  out.reserve(size_);
  for (std::size_t n = 0; n < lexicon_.nouns.size(); ++n) {
    for (std::size_t v = 0; v < lexicon_.verbs.size(); ++v) {
      for (std::size_t t = 0; t < lexicon_.third.size(); ++t) {
        out.push_back({n, v, t, out.size()});
      }
    }
  }
  return out;
}

PromptSpace build_space(WordLexicon lexicon) { return PromptSpace(std::move(lexicon)); }

PromptTemplate template_from_index(const PromptSpace& space, std::size_t space_index) {
  return space.at(space_index);
}

}  // namespace lotto
