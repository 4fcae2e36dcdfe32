#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "json.hpp"
#include "lotto/lotto.hpp"
#include "toy_data.hpp"

namespace lotto {
namespace {

using nlohmann::json;

const PromptSpace& Space() {
  static const PromptSpace space = build_space(testing::ToyLexicon8());
  return space;
}

TEST(FormatDouble, ShortestRoundTrip) {
  EXPECT_EQ(FormatDouble(0.75), "0.75");
  EXPECT_EQ(FormatDouble(1.0), "1");
  EXPECT_EQ(FormatDouble(0.1 + 0.2), "0.30000000000000004");
  for (double v : {1.0 / 3.0, 2.5e-17, 12345.678}) EXPECT_EQ(std::stod(FormatDouble(v)), v);
}

TEST(SearchReport, FieldsAndSummary) {
  const RunMeta meta{"toy8@0", "toy", "synthetic:7", 42};
  const std::vector<SearchResult> results{{0, 3, 4}, {1, std::nullopt, 8}, {2, 0, 1}};
  const json doc = json::parse(SearchReportJson(meta, results));
  EXPECT_EQ(doc["lexicon_source"], "toy8@0");
  EXPECT_EQ(doc["task"], "toy");
  EXPECT_EQ(doc["backend_identity"], "synthetic:7");
  EXPECT_EQ(doc["seed"], 42);
  ASSERT_EQ(doc["results"].size(), 3u);
  EXPECT_EQ(doc["results"][0]["found"], 3);
  EXPECT_TRUE(doc["results"][1]["found"].is_null());
  EXPECT_EQ(doc["results"][1]["cost"], 8);
  EXPECT_DOUBLE_EQ(doc["summary"]["success_rate"].get<double>(), 2.0 / 3.0);
  EXPECT_DOUBLE_EQ(doc["summary"]["mean_cost"].get<double>(), 13.0 / 3.0);
  EXPECT_EQ(doc["hardest_instances"][0]["instance_id"], 1);
  EXPECT_EQ(doc["hardest_instances"][1]["instance_id"], 0);
}

TEST(PromptStatsCsvTest, HeaderAndRows) {
  const std::vector<PromptStats> stats{{0, 0.5, 4}, {7, 1.0, 4}};
  EXPECT_EQ(PromptStatsCsv(stats, Space()),
            "space_index,words,metric,n_evaluated\n0,it was really,0.5,4\n7,he is very,1,4\n");
}

TEST(StrongPromptSetJsonTest, RoundTrip) {
  const std::vector<PromptStats> ranked{{5, 0.9, 10}, {2, 0.8, 10}};
  const StrongPromptSet strong = MakeStrongPromptSet(ranked, testing::BinaryTask("src"), Space().lexicon());
  const StrongPromptSet back = ParseStrongPromptSet(StrongPromptSetJson(strong, Space()));
  EXPECT_EQ(back.templates, strong.templates);
  EXPECT_EQ(back.source_task, "src");
  EXPECT_EQ(back.num_classes, 2u);
  EXPECT_EQ(back.lexicon_source, "toy8");
  EXPECT_EQ(back.source_stats, strong.source_stats);
  EXPECT_THROW(ParseStrongPromptSet("{}"), Error);
  EXPECT_THROW(LoadStrongPromptSet("/nonexistent/prompts.json"), Error);
}

TEST(EvalReportJsonTest, RowsAndCsv) {
  EvalReport report;
  report.task = "t";
  report.source_task = "s";
  report.strategy = EnsembleStrategy::kMi;
  report.k = 2;
  report.metric_value = 0.5;
  report.rows = {{0, 3, 1, 1}, {1, 5, 0, 1}};
  const json doc = json::parse(EvalReportJson({"lex", "t", "synthetic:1", 0}, report));
  EXPECT_EQ(doc["strategy"], "mi");
  EXPECT_EQ(doc["metric_value"], 0.5);
  EXPECT_EQ(doc["per_instance"][1]["chosen"], 5);
  EXPECT_EQ(doc["per_instance"][1]["prediction"], 0);
  EXPECT_EQ(EvalRowsCsv(report), "instance_id,chosen,prediction,gold\n0,3,1,1\n1,5,0,1\n");
  report.strategy = EnsembleStrategy::kVote;
  report.rows = {{0, std::nullopt, 1, 1}};
  EXPECT_EQ(EvalRowsCsv(report), "instance_id,chosen,prediction,gold\n0,,1,1\n");
}

TEST(EvalReportJsonTest, RefusesNonFinite) {
  EvalReport report;
  report.metric_value = std::numeric_limits<double>::quiet_NaN();
  EXPECT_THROW(EvalReportJson({}, report), Error);
}

TEST(PriorCacheFile, ReusedOnlyOnIdentityMatch) {
  PriorCache cache;
  cache.Insert("toy", 3, {0.25, 0.75});
  cache.Insert("toy", 1, {1.0 / 3.0, 2.0 / 3.0});
  const CacheIdentity identity{"synthetic:7", "toy8"};
  const std::string text = PriorCacheJson(identity, cache);

  PriorCache same;
  EXPECT_EQ(LoadPriorCache(text, identity, same), 2u);
  EXPECT_EQ(same.Find("toy", 1), (ProbVector{1.0 / 3.0, 2.0 / 3.0}));  // bit-exact
  PriorCache other_backend;
  EXPECT_EQ(LoadPriorCache(text, {"synthetic:8", "toy8"}, other_backend), 0u);
  EXPECT_EQ(other_backend.size(), 0u);
  PriorCache other_lexicon;
  EXPECT_EQ(LoadPriorCache(text, {"synthetic:7", "toy64"}, other_lexicon), 0u);
  EXPECT_THROW(LoadPriorCache("not json", identity, same), Error);
}

TEST(WordFrequencyJsonTest, SlotsByName) {
  WordFrequency freq;
  freq[0]["it"] = 2;
  freq[2]["very"] = 1;
  const json doc = json::parse(WordFrequencyJson(freq));
  EXPECT_EQ(doc["noun"]["it"], 2);
  EXPECT_EQ(doc["third"]["very"], 1);
  EXPECT_TRUE(doc["verb"].empty());
}

}  // namespace
}  // namespace lotto
