#pragma once

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace afmass {

inline constexpr const char* kToolVersion = "0.1.0";
inline constexpr int kDefaultQuadrature = 32;

struct RunConfig {
  std::string command;       // adm-mass | fg-profile | weighted-mass | sequence | cone-angle | cone-sequence
  nlohmann::json document;   // parsed config file
  std::string out_dir = ".";
  std::optional<int> quadrature;
  int threads = 1;
  std::uint64_t seed = 0;
};

struct RunResult {
  int exit_code = 0;
  nlohmann::json report;              // the JSON written to disk (or the error report)
  std::vector<std::string> written;   // paths of files produced
};

/// Parses a config file; malformed JSON is ConfigInvalid, unreadable files IoError.
nlohmann::json read_json_file(const std::string& path);

/// Writes JSON with a fixed layout; IoError when the file cannot be written.
void write_report(const std::string& path, const nlohmann::json& report);
nlohmann::json read_report(const std::string& path);
void write_text(const std::string& path, const std::string& text);

/// Runs one command and writes its reports. Never throws: failures produce an
/// error report and exit code 2 (ConfigInvalid) or 1 (anything else).
RunResult run(const RunConfig& config);

/// Thread count from --threads, then AFMASS_THREADS, then 1.
int resolve_threads(std::optional<int> flag);

}  // namespace afmass
