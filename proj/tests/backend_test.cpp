#include <gtest/gtest.h>

#include <atomic>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <thread>

#include "lotto/lotto.hpp"

namespace lotto {
namespace {

const std::vector<std::string> kBinaryWords{"bad", "great"};
const std::vector<std::string> kFourWords{"world", "sports", "business", "science"};

// One "<label words>|<text>|<hex logits...>" line per golden row, pinned from
// the first run of SyntheticOracle(seed=7).
struct GoldenRow {
  std::vector<std::string> words;
  std::string text;
  std::vector<double> logits;
};

std::vector<GoldenRow> LoadGolden() {
  std::ifstream in(std::string(LOTTO_TEST_DATA_DIR) + "/oracle_seed7.golden");
  std::vector<GoldenRow> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    const auto a = line.find('|');
    const auto b = line.find('|', a + 1);
    GoldenRow row;
    std::istringstream words(line.substr(0, a));
    for (std::string w; std::getline(words, w, ',');) row.words.push_back(w);
    row.text = line.substr(a + 1, b - a - 1);
    std::istringstream values(line.substr(b + 1));
    for (std::string v; values >> v;) row.logits.push_back(std::strtod(v.c_str(), nullptr));
    rows.push_back(std::move(row));
  }
  return rows;
}

TEST(SyntheticOracle, MatchesGoldenFile) {
  const SyntheticOracle oracle(ParseSyntheticUrl("synthetic:7"));
  const auto golden = LoadGolden();
  ASSERT_GE(golden.size(), 4u);
  for (const auto& row : golden) {
    const auto logits = oracle.logits(row.text, row.words);
    ASSERT_EQ(logits.size(), row.logits.size());
    for (std::size_t i = 0; i < logits.size(); ++i) EXPECT_EQ(logits[i], row.logits[i]) << row.text;
  }
}

TEST(SyntheticOracle, DeterministicAcrossRepeatedCalls) {
  const SyntheticOracle oracle(ParseSyntheticUrl("synthetic:7"));
  const Verbalizer verbalizer{kBinaryWords};
  const ProbVector first = raw_distribution(oracle, "A fun movie. it was really <MASK>", verbalizer, ModelStyle::kMasked);
  for (int i = 0; i < 100; ++i) {
    EXPECT_EQ(raw_distribution(oracle, "A fun movie. it was really <MASK>", verbalizer, ModelStyle::kMasked), first);
  }
  const SyntheticOracle twin(ParseSyntheticUrl("synthetic:7"));
  EXPECT_EQ(raw_distribution(twin, "A fun movie. it was really <MASK>", verbalizer, ModelStyle::kMasked), first);
  const SyntheticOracle other(ParseSyntheticUrl("synthetic:8"));
  EXPECT_NE(raw_distribution(other, "A fun movie. it was really <MASK>", verbalizer, ModelStyle::kMasked), first);
}

TEST(SyntheticOracle, NoiseIsBoundedAndSpread) {
  double lo = 1.0, hi = -1.0;
  for (int i = 0; i < 2000; ++i) {
    const double v = OracleNoise(7, "text " + std::to_string(i), "w");
    ASSERT_GE(v, -1.0);
    ASSERT_LT(v, 1.0);
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  EXPECT_LT(lo, -0.9);
  EXPECT_GT(hi, 0.9);
}

TEST(SyntheticOracle, PlantedRulesAndAmplifiers) {
  SyntheticOracleConfig config;
  config.seed = 1;
  config.noise = 0.0;
  config.planted_rules = {{"very", 1, 2.5}};
  config.amplifiers = {{"he", 3.0}};
  const SyntheticOracle oracle(config);
  EXPECT_EQ(oracle.logits("it was so", kBinaryWords), (std::vector<double>{0.0, 0.0}));
  EXPECT_EQ(oracle.logits("it was very", kBinaryWords), (std::vector<double>{0.0, 2.5}));
  // Tokens are matched after stripping punctuation.
  EXPECT_EQ(oracle.logits("bad, bad great. he was", kBinaryWords), (std::vector<double>{6.0, 3.0}));
  EXPECT_EQ(oracle.logits("bad, bad great. she was", kBinaryWords), (std::vector<double>{0.0, 0.0}));
}

TEST(SyntheticOracle, RejectsMultiTokenLabelWords) {
  const SyntheticOracle oracle(ParseSyntheticUrl("synthetic:7"));
  const std::vector<std::string> words{"very good", "bad"};
  const std::vector<std::string> texts{"x"};
  try {
    oracle.score(ModelStyle::kMasked, words, texts);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kMultiTokenLabelWord);
    EXPECT_TRUE(e.is_backend_failure());
  }
}

TEST(SyntheticOracle, ClassCountRestriction) {
  const SyntheticOracle oracle(ParseSyntheticUrl("synthetic:7?classes=2"));
  const std::vector<std::string> texts{"x"};
  EXPECT_NO_THROW(oracle.score(ModelStyle::kMasked, kBinaryWords, texts));
  EXPECT_THROW(oracle.score(ModelStyle::kMasked, kFourWords, texts), Error);
}

TEST(SyntheticUrl, ParseAndCanonicalRoundTrip) {
  const auto config = ParseSyntheticUrl("synthetic:42?noise=0.5&classes=4&bias=very:1:2,so:0:0.25&amp=he:3");
  EXPECT_EQ(config.seed, 42u);
  EXPECT_EQ(config.noise, 0.5);
  EXPECT_EQ(config.num_classes, 4u);
  ASSERT_EQ(config.planted_rules.size(), 2u);
  EXPECT_EQ(config.planted_rules[1].word, "so");
  EXPECT_EQ(config.planted_rules[1].weight, 0.25);
  ASSERT_EQ(config.amplifiers.size(), 1u);
  const std::string canonical = ToSyntheticUrl(config);
  EXPECT_EQ(ToSyntheticUrl(ParseSyntheticUrl(canonical)), canonical);
  EXPECT_EQ(SyntheticOracle(config).info().identity, canonical);
  EXPECT_EQ(ToSyntheticUrl(ParseSyntheticUrl("synthetic:7")), "synthetic:7");
}

TEST(SyntheticUrl, Errors) {
  for (const char* bad : {"synthetic:", "synthetic:x", "synthetic:7?noise=abc", "synthetic:7?bias=a:b",
                          "synthetic:7?amp=he", "synthetic:7?colour=red", "http://x", "synthetic:7?noise=-1"}) {
    EXPECT_THROW(ParseSyntheticUrl(bad), Error) << bad;
  }
}

// Backend that records how many score() calls overlap.
class SlowBackend : public ScoringBackend {
 public:
  BackendInfo info() const override { return {"slow", ModelStyle::kMasked, "<mask>"}; }
  bool supports(ModelStyle) const override { return true; }
  std::size_t max_batch() const override { return 3; }
  LogitRows score(ModelStyle, std::span<const std::string> words, std::span<const std::string> texts) const override {
    const int now = ++active_;
    int prev = peak_.load();
    while (now > prev && !peak_.compare_exchange_weak(prev, now)) {
    }
    std::this_thread::sleep_for(std::chrono::milliseconds(2));
    ++requests_;
    --active_;
    return LogitRows(texts.size(), std::vector<double>(words.size(), 0.0));
  }
  mutable std::atomic<int> active_{0};
  mutable std::atomic<int> peak_{0};
  mutable std::atomic<int> requests_{0};
};

TEST(BackendClient, CountsOneCallPerTextAndBatches) {
  SlowBackend backend;
  BackendClient client(backend, {.max_concurrency = 2});
  const std::vector<std::string> texts(10, "t");
  const auto out = client.raw_distributions(ModelStyle::kMasked, Verbalizer{kBinaryWords}, texts);
  EXPECT_EQ(out.size(), 10u);
  EXPECT_EQ(client.calls(), 10u);
  EXPECT_EQ(backend.requests_.load(), 4);  // batches of 3, 3, 3, 1
}

TEST(BackendClient, InFlightWindowIsBounded) {
  SlowBackend backend;
  BackendClient client(backend, {.max_concurrency = 3, .max_batch = 1});
  std::vector<std::jthread> threads;
  for (int t = 0; t < 12; ++t) {
    threads.emplace_back([&client] {
      const std::vector<std::string> texts(5, "t");
      client.raw_distributions(ModelStyle::kMasked, Verbalizer{kBinaryWords}, texts);
    });
  }
  threads.clear();
  EXPECT_EQ(client.calls(), 60u);
  EXPECT_LE(backend.peak_.load(), 3);
  EXPECT_LE(client.peak_in_flight(), 3u);
  EXPECT_GE(client.peak_in_flight(), 2u);
}

class BrokenBackend : public SlowBackend {
 public:
  explicit BrokenBackend(LogitRows rows) : rows_(std::move(rows)) {}
  LogitRows score(ModelStyle, std::span<const std::string>, std::span<const std::string>) const override {
    return rows_;
  }
  LogitRows rows_;
};

TEST(BackendClient, RejectsMalformedResponses) {
  const std::vector<std::string> texts{"a"};
  const Verbalizer verbalizer{kBinaryWords};
  {
    BrokenBackend backend(LogitRows{{0.0, 1.0}, {0.0, 1.0}});
    BackendClient client(backend);
    EXPECT_THROW(client.raw_distributions(ModelStyle::kMasked, verbalizer, texts), Error);
  }
  {
    BrokenBackend backend(LogitRows{{0.0, std::numeric_limits<double>::quiet_NaN()}});
    BackendClient client(backend);
    try {
      client.raw_distributions(ModelStyle::kMasked, verbalizer, texts);
      FAIL();
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::kNonFiniteLogit);
    }
  }
}

}  // namespace
}  // namespace lotto
