#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "iwalog/random_matrices.hpp"
#include "iwalog/rank_growth.hpp"

namespace iwalog {

inline constexpr const char* kToolVersion = "0.1.0";
inline constexpr int kSchemaVersion = 1;

struct NamedModule {
  std::string name;
  ModulePresentation module;
};

struct RunConfig {
  nlohmann::json echo;  // parsed config with overrides applied
  unsigned p = 3;
  int g = 1;
  int precision = kDefaultPrecision;
  int tau = kDefaultPrecision / 2;
  std::uint64_t seed = 0;
  bool random_matrices = false;
  bool random_block = false;
  IntMatrix c_p;
  IntMatrix c_pc;
  int r_max = 3;
  int s_max = 3;
  int k_max = 4;
  int conv_n_max = 4;
  int conv_degree = 3;
  std::optional<IntMatrix> basis;
  int coinv_n_max = 3;
  std::vector<NamedModule> modules;
  GrowthScenario scenario;
  int growth_n_max = 6;

  DieudonneInput input() const;
};

/// Throws ConfigError on any malformed or out-of-range field.
RunConfig parse_config(const nlohmann::json& j, std::optional<std::uint64_t> seed = {},
                       std::optional<int> precision = {});
RunConfig load_config(const std::string& path, std::optional<std::uint64_t> seed = {},
                      std::optional<int> precision = {});

enum class CheckStatus { Pass, Fail, UpperBoundOnly, Skipped };

const char* status_name(CheckStatus s);

struct CsvTable {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  void add(std::vector<std::string> row);
  /// LF line endings; fields quoted only when they contain ',' or '"'.
  std::string render(const std::string& comment) const;
};

struct CheckResult {
  std::string command;
  std::string header;
  CheckStatus status = CheckStatus::Pass;
  std::string detail;
  CsvTable table;
  nlohmann::json data = nlohmann::json::object();
};

const std::vector<std::string>& command_names();

/// Runs one check command (not "all") in memory.
CheckResult run_check(const RunConfig& cfg, const std::string& command);

/// 0 pass, 1 some check failed, 3 upper-bound-only degradation without failures.
int exit_code_for(const std::vector<CheckResult>& results);

/// Runs `command` (or every command for "all"), writes <command>.csv files and summary.json
/// into out_dir, and returns the exit code.
int run_and_write(const RunConfig& cfg, const std::string& command, const std::string& out_dir);

}  // namespace iwalog
