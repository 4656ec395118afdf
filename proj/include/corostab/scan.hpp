#pragma once

#include <filesystem>
#include <string>

#include "corostab/config.hpp"
#include "corostab/report.hpp"
#include "corostab/stability.hpp"

namespace corostab {

/// Exit statuses of a scan.
inline constexpr int kExitConsistent = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitViolation = 2;

struct ScanResult {
  AuditReport audit;
  OracleStats oracles;
  std::string body;  ///< serialized report in the configured format
  int exit_code = kExitConsistent;
};

/// Worker count from COROSTAB_JOBS, else the hardware concurrency.
int default_jobs();

/// Runs the audit over the configured states. Deterministic for a fixed
/// config, independent of `jobs`.
ScanResult run_scan(const ScanConfig& config, int jobs = 1);

/// Writes `content` to a sibling temporary file, then renames it over
/// `path`. No partial file is left on failure. Throws IoError.
void write_file_atomically(const std::filesystem::path& path, const std::string& content);

}  // namespace corostab
