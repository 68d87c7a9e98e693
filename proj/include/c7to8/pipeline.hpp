// SPDX-License-Identifier: Apache-2.0
//
// Input discovery, the per-file convert pipeline and the batch runner behind
// the command-line tool. Files convert independently, so the batch loop runs
// them in parallel by default; summaries and log sections always come out in
// sorted-input order.

#pragma once

#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "c7to8/engine.hpp"

namespace c7to8 {

struct RunConfig {
  std::filesystem::path input_path;
  std::string platform_version = "8.0.0";
  bool parallel = true;
  bool timestamps = false;
  bool recursive = false;
  std::filesystem::path log_path = "logs/transformation.log";
};

class PathNotFound : public std::runtime_error {
public:
  explicit PathNotFound(const std::filesystem::path& path)
      : std::runtime_error("path not found: " + path.generic_string()) {}
};

/// A file resolves to itself (any extension); a directory to its `.bpmn`
/// entries (case-insensitive), sorted lexicographically, with previous
/// `-transformed.bpmn` outputs excluded. Empty result for an empty directory.
std::vector<std::filesystem::path> discover_inputs(const std::filesystem::path& path,
                                                   bool recursive = false);

/// Sibling path with `-transformed` before the final extension:
/// `models/taxi.bpmn` -> `models/taxi-transformed.bpmn`.
std::filesystem::path output_path(const std::filesystem::path& input);

struct FileResult {
  std::filesystem::path input;
  std::filesystem::path output;
  bool failed = false;     // parse or I/O failure; no output written
  std::string error;
  bool overwrote = false;  // an existing output file was replaced
  TransformReport report;
};

/// parse -> transform -> validate -> serialize -> atomic write. Failures are
/// captured in the result, never thrown.
FileResult convert_file(const std::filesystem::path& input, const RunConfig& config);

/// Batch entry point. Returns the process exit code: 0 all converted (TODOs
/// allowed), 1 at least one file failed (the rest still convert), 2 usage
/// errors such as a missing input path.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

} // namespace c7to8
