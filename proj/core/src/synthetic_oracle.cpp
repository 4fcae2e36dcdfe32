#include "lotto/synthetic_oracle.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <string>

#include "lotto/errors.hpp"

namespace lotto {

namespace {

constexpr std::string_view kScheme = "synthetic:";
constexpr std::string_view kPunctuation = ".,?!;:\"'()[]";

std::uint64_t Fnv1a(std::uint64_t hash, std::string_view bytes) {
  for (unsigned char c : bytes) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  return hash;
}

std::uint64_t Mix(std::uint64_t x) {
  x ^= x >> 30;
  x *= 0xbf58476d1ce4e5b9ULL;
  x ^= x >> 27;
  x *= 0x94d049bb133111ebULL;
  x ^= x >> 31;
  return x;
}

[[noreturn]] void BadUrl(std::string_view url, const std::string& why) {
  throw Error(ErrorCode::kInvalidArgument, "bad synthetic backend '" + std::string(url) + "': " + why);
}

template <typename T>
T ParseNumber(std::string_view text, std::string_view url) {
  T value{};
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    BadUrl(url, "'" + std::string(text) + "' is not a number");
  }
  return value;
}

std::vector<std::string_view> Split(std::string_view text, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = text.find(sep, start);
    parts.push_back(text.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

std::string FormatNumber(double value) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, ptr);
}

}  // namespace

std::vector<std::string_view> OracleTokens(std::string_view text) {
  std::vector<std::string_view> tokens;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const std::size_t start = text.find_first_not_of(" \t\r\n", pos);
    if (start == std::string_view::npos) break;
    std::size_t end = text.find_first_of(" \t\r\n", start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view token = text.substr(start, end - start);
    const std::size_t first = token.find_first_not_of(kPunctuation);
    if (first != std::string_view::npos) {
      const std::size_t last = token.find_last_not_of(kPunctuation);
      tokens.push_back(token.substr(first, last - first + 1));
    }
    pos = end;
  }
  return tokens;
}

double OracleNoise(std::uint64_t seed, std::string_view text, std::string_view word) {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (int i = 0; i < 8; ++i) {
    const char byte = static_cast<char>((seed >> (8 * i)) & 0xFF);
    hash = Fnv1a(hash, std::string_view(&byte, 1));
  }
  hash = Fnv1a(hash, "\x1f");
  hash = Fnv1a(hash, text);
  hash = Fnv1a(hash, "\x1f");
  hash = Fnv1a(hash, word);
  const double unit = static_cast<double>(Mix(hash) >> 11) * 0x1.0p-53;
  return 2.0 * unit - 1.0;
}

SyntheticOracleConfig ParseSyntheticUrl(std::string_view url) {
  if (url.substr(0, kScheme.size()) != kScheme) BadUrl(url, "missing 'synthetic:' scheme");
  std::string_view rest = url.substr(kScheme.size());
  std::string_view query;
  if (const auto q = rest.find('?'); q != std::string_view::npos) {
    query = rest.substr(q + 1);
    rest = rest.substr(0, q);
  }
  SyntheticOracleConfig config;
  if (rest.empty()) BadUrl(url, "missing seed");
  config.seed = ParseNumber<std::uint64_t>(rest, url);
  if (query.empty()) return config;
  for (std::string_view param : Split(query, '&')) {
    if (param.empty()) continue;
    const auto eq = param.find('=');
    if (eq == std::string_view::npos) BadUrl(url, "parameter '" + std::string(param) + "' has no value");
    const std::string_view key = param.substr(0, eq);
    const std::string_view value = param.substr(eq + 1);
    if (key == "noise") {
      config.noise = ParseNumber<double>(value, url);
    } else if (key == "classes") {
      config.num_classes = ParseNumber<std::size_t>(value, url);
    } else if (key == "bias") {
      for (std::string_view item : Split(value, ',')) {
        const auto fields = Split(item, ':');
        if (fields.size() != 3 || fields[0].empty()) BadUrl(url, "bias expects word:class:weight");
        config.planted_rules.push_back(
            {std::string(fields[0]), ParseNumber<std::size_t>(fields[1], url), ParseNumber<double>(fields[2], url)});
      }
    } else if (key == "amp") {
      for (std::string_view item : Split(value, ',')) {
        const auto fields = Split(item, ':');
        if (fields.size() != 2 || fields[0].empty()) BadUrl(url, "amp expects word:weight");
        config.amplifiers.push_back({std::string(fields[0]), ParseNumber<double>(fields[1], url)});
      }
    } else {
      BadUrl(url, "unknown parameter '" + std::string(key) + "'");
    }
  }
  if (!std::isfinite(config.noise) || config.noise < 0.0) BadUrl(url, "noise must be finite and >= 0");
  return config;
}

std::string ToSyntheticUrl(const SyntheticOracleConfig& config) {
  std::string url = std::string(kScheme) + std::to_string(config.seed);
  std::vector<std::string> params;
  if (config.noise != 1.0) params.push_back("noise=" + FormatNumber(config.noise));
  if (config.num_classes != 0) params.push_back("classes=" + std::to_string(config.num_classes));
  if (!config.planted_rules.empty()) {
    std::string value = "bias=";
    for (std::size_t i = 0; i < config.planted_rules.size(); ++i) {
      const auto& rule = config.planted_rules[i];
      if (i) value += ",";
      value += rule.word + ":" + std::to_string(rule.label) + ":" + FormatNumber(rule.weight);
    }
    params.push_back(std::move(value));
  }
  if (!config.amplifiers.empty()) {
    std::string value = "amp=";
    for (std::size_t i = 0; i < config.amplifiers.size(); ++i) {
      if (i) value += ",";
      value += config.amplifiers[i].word + ":" + FormatNumber(config.amplifiers[i].weight);
    }
    params.push_back(std::move(value));
  }
  for (std::size_t i = 0; i < params.size(); ++i) url += (i == 0 ? "?" : "&") + params[i];
  return url;
}

SyntheticOracle::SyntheticOracle(SyntheticOracleConfig config) : config_(std::move(config)) {}

BackendInfo SyntheticOracle::info() const { return {ToSyntheticUrl(config_), ModelStyle::kMasked, "<mask>"}; }

std::vector<double> SyntheticOracle::logits(std::string_view text, std::span<const std::string> label_words) const {
  const auto tokens = OracleTokens(text);
  const auto present = [&tokens](std::string_view word) {
    return std::find(tokens.begin(), tokens.end(), word) != tokens.end();
  };
  std::vector<double> out(label_words.size());
  for (std::size_t i = 0; i < label_words.size(); ++i) {
    out[i] = config_.noise * OracleNoise(config_.seed, text, label_words[i]);
  }
  for (const auto& rule : config_.planted_rules) {
    if (rule.label < out.size() && present(rule.word)) out[rule.label] += rule.weight;
  }
  for (const auto& amp : config_.amplifiers) {
    if (!present(amp.word)) continue;
    for (std::size_t i = 0; i < label_words.size(); ++i) {
      const auto mentions = std::count(tokens.begin(), tokens.end(), std::string_view(label_words[i]));
      out[i] += amp.weight * static_cast<double>(mentions);
    }
  }
  return out;
}

LogitRows SyntheticOracle::score(ModelStyle, std::span<const std::string> label_words,
                                 std::span<const std::string> texts) const {
  if (config_.num_classes != 0 && label_words.size() != config_.num_classes) {
    throw Error(ErrorCode::kDimensionMismatch, "synthetic oracle serves " + std::to_string(config_.num_classes) +
                                                   " classes, got " + std::to_string(label_words.size()));
  }
  for (const auto& word : label_words) {
    if (word.empty() || word.find_first_of(" \t\r\n") != std::string::npos) {
      throw Error(ErrorCode::kMultiTokenLabelWord, "label word '" + word + "' is not a single token");
    }
  }
  LogitRows rows;
  rows.reserve(texts.size());
  for (const auto& text : texts) rows.push_back(logits(text, label_words));
  return rows;
}

}  // namespace lotto
