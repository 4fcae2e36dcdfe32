#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lotto/ensemble.hpp"
#include "lotto/lexicon.hpp"
#include "lotto/scorer.hpp"
#include "lotto/search.hpp"

namespace lotto {

struct RunMeta {
  std::string lexicon_source;
  std::string task;
  std::string backend_identity;
  std::uint64_t seed = 0;
};

// All JSON writers emit two-space indented output with a trailing newline and
// never produce NaN or Infinity literals.

std::string SearchReportJson(const RunMeta& meta, std::span<const SearchResult> results,
                             std::size_t hardest_count = 10);

/// Header: space_index,words,metric,n_evaluated.
std::string PromptStatsCsv(std::span<const PromptStats> stats, const PromptSpace& space);

std::string StrongPromptSetJson(const StrongPromptSet& strong, const PromptSpace& space);
StrongPromptSet ParseStrongPromptSet(std::string_view json_text);
StrongPromptSet LoadStrongPromptSet(const std::filesystem::path& path);

std::string EvalReportJson(const RunMeta& meta, const EvalReport& report);
/// Header: instance_id,chosen,prediction,gold (chosen empty for vote).
std::string EvalRowsCsv(const EvalReport& report);

std::string WordFrequencyJson(const WordFrequency& freq);

/// Cache file: priors are reused only when backend identity and lexicon
/// source both match.
struct CacheIdentity {
  std::string backend_identity;
  std::string lexicon_source;
};
std::string PriorCacheJson(const CacheIdentity& identity, const PriorCache& cache);
/// Returns the number of entries loaded (0 on identity mismatch).
std::size_t LoadPriorCache(std::string_view json_text, const CacheIdentity& identity, PriorCache& cache);

/// Shortest decimal text that round-trips the double.
std::string FormatDouble(double value);

void WriteTextFile(const std::filesystem::path& path, std::string_view content);
std::string ReadTextFile(const std::filesystem::path& path);

}  // namespace lotto
