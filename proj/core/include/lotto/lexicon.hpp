#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace lotto {

enum class WordSlot { kNoun = 0, kVerb = 1, kThird = 2 };

std::string_view SlotName(WordSlot slot);

/// Part-of-speech grouped vocabulary the prompt space is built from. The third
/// group is the union of prepositions, adjectives and adverbs.
struct WordLexicon {
  std::vector<std::string> nouns;
  std::vector<std::string> verbs;
  std::vector<std::string> third;
  std::string source_id;

  const std::vector<std::string>& group(WordSlot slot) const;

  /// Throws kEmptyGroup, kDuplicateWord or kInvalidWord.
  void Validate() const;
};

/// Parses the sectioned text format (`#NOUNS`, `#VERBS`, `#THIRD`, one word
/// per line, any other `#` line is a comment). The result is validated.
WordLexicon ParseLexicon(std::istream& in, std::string source_id);
WordLexicon ParseLexicon(std::string_view text, std::string source_id);

/// Reads a lexicon file; source_id becomes `<file stem>@<content hash>`.
WordLexicon LoadLexicon(const std::filesystem::path& path);

/// The versioned lexicon compiled into the library.
const WordLexicon& DefaultLexicon();

/// `<name>@<16 hex digits of FNV-1a 64 over content>`.
std::string MakeSourceId(std::string_view name, std::string_view content);

struct PromptTemplate {
  std::size_t noun_idx = 0;
  std::size_t verb_idx = 0;
  std::size_t third_idx = 0;
  std::size_t space_index = 0;

  friend bool operator==(const PromptTemplate&, const PromptTemplate&) = default;
};

using TemplateWords = std::array<std::string, 3>;

/// Returns (noun, verb, third). Throws kIndexOutOfRange.
TemplateWords template_words(const PromptTemplate& tpl, const WordLexicon& lexicon);

/// The Cartesian product NOUNS x VERBS x THIRD, enumerated noun-major.
/// Immutable once built.
class PromptSpace {
 public:
  explicit PromptSpace(WordLexicon lexicon);

  const WordLexicon& lexicon() const noexcept { return lexicon_; }
  std::size_t size() const noexcept { return size_; }

  /// Throws kIndexOutOfRange when index >= size().
  PromptTemplate at(std::size_t space_index) const;

  /// Throws kIndexOutOfRange when any index exceeds its group.
  PromptTemplate compose(std::size_t noun_idx, std::size_t verb_idx, std::size_t third_idx) const;

  TemplateWords words(const PromptTemplate& tpl) const { return template_words(tpl, lexicon_); }
  TemplateWords words(std::size_t space_index) const { return words(at(space_index)); }

  /// Words joined by single spaces, e.g. "it was really".
  std::string text(std::size_t space_index) const;

  /// All templates in increasing space_index order.
  std::vector<PromptTemplate> enumerate() const;

 private:
  WordLexicon lexicon_;
  std::size_t size_;
};

/// Validates the lexicon and builds its space. Throws on invalid lexicons.
PromptSpace build_space(WordLexicon lexicon);

/// Inverse of PromptTemplate::space_index.
PromptTemplate template_from_index(const PromptSpace& space, std::size_t space_index);

}  // namespace lotto
