#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace lotto::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfigError = 1;
inline constexpr int kExitBackendError = 2;

struct RunConfig {
  std::string command;
  std::string task_path;
  std::string lexicon_path;  // empty: built-in default lexicon
  std::string backend;       // http://host:port or synthetic:<seed>[?...]
  std::string train_path;
  std::string test_path;
  std::string prompts_path;
  std::uint64_t seed = 0;
  std::optional<std::size_t> budget;  // default: the whole space
  std::size_t k = 10;
  std::string strategy = "mi";
  std::vector<std::size_t> shots = {8, 16, 32, 64, 128, 256};
  std::size_t runs = 5;
  std::size_t batch_size = 16;
  double threshold = 0.7;
  std::size_t max_concurrency = 8;
  std::string out_dir = "lotto_out";
  std::string cache_path;
};

/// Executes one subcommand. Never throws; returns the process exit code.
int Execute(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Parses argv-style arguments (without the program name) and executes.
int Run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace lotto::cli
