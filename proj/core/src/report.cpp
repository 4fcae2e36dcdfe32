#include "lotto/report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iterator>

#include <json.hpp>

#include "lotto/errors.hpp"

namespace lotto {

namespace {

using ojson = nlohmann::ordered_json;

double Finite(double value, const char* field) {
  if (!std::isfinite(value)) {
    throw Error(ErrorCode::kInvalidArgument, std::string("refusing to write non-finite value for ") + field);
  }
  return value;
}

std::string Dump(const ojson& doc) { return doc.dump(2) + "\n"; }

std::string CsvField(const std::string& value) {
  if (value.find_first_of(",\"\n") == std::string::npos) return value;
  std::string out = "\"";
  for (char c : value) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

ojson OptionalIndex(const std::optional<std::size_t>& value) {
  return value ? ojson(*value) : ojson(nullptr);
}

}  // namespace

std::string FormatDouble(double value) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, ptr);
}

std::string SearchReportJson(const RunMeta& meta, std::span<const SearchResult> results, std::size_t hardest_count) {
  ojson doc;
  doc["lexicon_source"] = meta.lexicon_source;
  doc["task"] = meta.task;
  doc["backend_identity"] = meta.backend_identity;
  doc["seed"] = meta.seed;
  ojson rows = ojson::array();
  for (const auto& r : results) {
    rows.push_back({{"instance_id", r.instance_id}, {"found", OptionalIndex(r.found)}, {"cost", r.cost}});
  }
  doc["results"] = std::move(rows);
  const auto n_found =
      std::count_if(results.begin(), results.end(), [](const SearchResult& r) { return r.found.has_value(); });
  doc["summary"] = {{"success_rate", Finite(success_rate(results), "success_rate")},
                    {"mean_cost", Finite(mean_cost(results), "mean_cost")},
                    {"n_instances", results.size()},
                    {"n_found", n_found}};

  // Failures first, then by descending cost.
  std::vector<SearchResult> hardest(results.begin(), results.end());
  std::sort(hardest.begin(), hardest.end(), [](const SearchResult& a, const SearchResult& b) {
    if (a.found.has_value() != b.found.has_value()) return !a.found.has_value();
    if (a.cost != b.cost) return a.cost > b.cost;
    return a.instance_id < b.instance_id;
  });
  hardest.resize(std::min(hardest.size(), hardest_count));
  ojson hard = ojson::array();
  for (const auto& r : hardest) {
    hard.push_back({{"instance_id", r.instance_id}, {"found", OptionalIndex(r.found)}, {"cost", r.cost}});
  }
  doc["hardest_instances"] = std::move(hard);
  return Dump(doc);
}

std::string PromptStatsCsv(std::span<const PromptStats> stats, const PromptSpace& space) {
  std::string out = "space_index,words,metric,n_evaluated\n";
  for (const auto& s : stats) {
    out += std::to_string(s.space_index) + "," + CsvField(space.text(s.space_index)) + "," +
           FormatDouble(Finite(s.metric_value, "metric")) + "," + std::to_string(s.n_evaluated) + "\n";
  }
  return out;
}

std::string StrongPromptSetJson(const StrongPromptSet& strong, const PromptSpace& space) {
  strong.Validate();
  ojson doc;
  doc["source_task"] = strong.source_task;
  doc["num_classes"] = strong.num_classes;
  doc["lexicon_source"] = strong.lexicon_source;
  ojson prompts = ojson::array();
  for (std::size_t i = 0; i < strong.templates.size(); ++i) {
    const std::size_t index = strong.templates[i];
    const auto words = space.words(index);
    ojson entry;
    entry["space_index"] = index;
    entry["words"] = {words[0], words[1], words[2]};
    if (!strong.source_stats.empty()) {
      entry["metric"] = Finite(strong.source_stats[i].metric_value, "metric");
      entry["n_evaluated"] = strong.source_stats[i].n_evaluated;
    }
    prompts.push_back(std::move(entry));
  }
  doc["prompts"] = std::move(prompts);
  return Dump(doc);
}

StrongPromptSet ParseStrongPromptSet(std::string_view json_text) {
  StrongPromptSet strong;
  try {
    const auto doc = ojson::parse(json_text);
    strong.source_task = doc.at("source_task").get<std::string>();
    strong.num_classes = doc.value("num_classes", std::size_t{0});
    strong.lexicon_source = doc.value("lexicon_source", std::string{});
    bool has_stats = true;
    for (const auto& entry : doc.at("prompts")) {
      const auto index = entry.at("space_index").get<std::size_t>();
      strong.templates.push_back(index);
      if (entry.contains("metric") && entry.contains("n_evaluated")) {
        strong.source_stats.push_back(
            {index, entry.at("metric").get<double>(), entry.at("n_evaluated").get<std::size_t>()});
      } else {
        has_stats = false;
      }
    }
    if (!has_stats) strong.source_stats.clear();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kParseError, std::string("prompts file: ") + e.what());
  }
  strong.Validate();
  return strong;
}

StrongPromptSet LoadStrongPromptSet(const std::filesystem::path& path) {
  const std::string text = ReadTextFile(path);
  try {
    return ParseStrongPromptSet(text);
  } catch (const Error& e) {
    throw Error(e.code(), path.string() + ": " + e.message());
  }
}

std::string EvalReportJson(const RunMeta& meta, const EvalReport& report) {
  ojson doc;
  doc["lexicon_source"] = meta.lexicon_source;
  doc["task"] = report.task;
  doc["source_task"] = report.source_task;
  doc["backend_identity"] = meta.backend_identity;
  doc["seed"] = meta.seed;
  doc["strategy"] = ToString(report.strategy);
  doc["k"] = report.k;
  doc["metric"] = ToString(report.metric);
  doc["metric_value"] = Finite(report.metric_value, "metric_value");
  ojson rows = ojson::array();
  for (const auto& row : report.rows) {
    rows.push_back({{"instance_id", row.instance_id},
                    {"chosen", OptionalIndex(row.chosen)},
                    {"prediction", row.prediction},
                    {"gold", row.gold}});
  }
  doc["per_instance"] = std::move(rows);
  return Dump(doc);
}

std::string EvalRowsCsv(const EvalReport& report) {
  std::string out = "instance_id,chosen,prediction,gold\n";
  for (const auto& row : report.rows) {
    out += std::to_string(row.instance_id) + "," + (row.chosen ? std::to_string(*row.chosen) : std::string{}) + "," +
           std::to_string(row.prediction) + "," + std::to_string(row.gold) + "\n";
  }
  return out;
}

std::string WordFrequencyJson(const WordFrequency& freq) {
  ojson doc;
  for (std::size_t slot = 0; slot < 3; ++slot) {
    std::vector<std::pair<std::string, std::size_t>> counts(freq[slot].begin(), freq[slot].end());
    std::stable_sort(counts.begin(), counts.end(), [](const auto& a, const auto& b) { return a.second > b.second; });
    ojson slot_doc = ojson::object();
    for (const auto& [word, count] : counts) slot_doc[word] = count;
    doc[std::string(SlotName(static_cast<WordSlot>(slot)))] = std::move(slot_doc);
  }
  return Dump(doc);
}

std::string PriorCacheJson(const CacheIdentity& identity, const PriorCache& cache) {
  ojson doc;
  doc["backend_identity"] = identity.backend_identity;
  doc["lexicon_source"] = identity.lexicon_source;
  ojson entries = ojson::array();
  for (const auto& entry : cache.Entries()) {
    ojson q = ojson::array();
    for (double v : entry.q) q.push_back(Finite(v, "prior"));
    entries.push_back({{"task", entry.task}, {"space_index", entry.space_index}, {"q", std::move(q)}});
  }
  doc["entries"] = std::move(entries);
  return Dump(doc);
}

std::size_t LoadPriorCache(std::string_view json_text, const CacheIdentity& identity, PriorCache& cache) {
  try {
    const auto doc = ojson::parse(json_text);
    if (doc.value("backend_identity", std::string{}) != identity.backend_identity ||
        doc.value("lexicon_source", std::string{}) != identity.lexicon_source) {
      return 0;
    }
    std::size_t loaded = 0;
    for (const auto& entry : doc.at("entries")) {
      cache.Insert(entry.at("task").get<std::string>(), entry.at("space_index").get<std::size_t>(),
                   entry.at("q").get<std::vector<double>>());
      ++loaded;
    }
    return loaded;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kParseError, std::string("prior cache: ") + e.what());
  }
}

void WriteTextFile(const std::filesystem::path& path, std::string_view content) {
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIoError, "cannot write " + path.string());
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw Error(ErrorCode::kIoError, "failed writing " + path.string());
}

std::string ReadTextFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open " + path.string());
  return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

}  // namespace lotto
