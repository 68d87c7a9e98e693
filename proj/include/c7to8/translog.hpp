// SPDX-License-Identifier: Apache-2.0
//
// Transformation-log data model and rendering. Five standardized message
// kinds document what the converter changed automatically and what is left
// for the user; the entry order mirrors the outer-to-inner traversal of the
// model.

#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace c7to8 {

enum class LogKind {
  Mapping,         // transformation of an element has begun
  FinishedMapping, // mapping for the element completed
  NoMappingNeeded, // element is compatible as-is
  Todo,            // manual work required for a correct Camunda 8 model
  TodoOptional,    // manual work that may improve the model
};

struct LogEntry {
  LogKind kind = LogKind::Mapping;
  std::string subject;                    // element description, e.g. `bpmn:serviceTask`
  std::optional<std::string> element_id;  // present for entries about identifiable elements
  std::optional<std::string> detail;      // free text
  std::size_t depth = 0;                  // nesting level at emission; carried, not rendered

  static LogEntry mapping(std::string subject, std::optional<std::string> id = std::nullopt);
  static LogEntry finished(std::string subject, std::optional<std::string> id = std::nullopt);
  static LogEntry no_mapping(std::string subject, std::optional<std::string> id = std::nullopt,
                             std::optional<std::string> detail = std::nullopt);
  static LogEntry todo(std::string detail, std::optional<std::string> id = std::nullopt);
  static LogEntry todo_optional(std::string detail, std::optional<std::string> id = std::nullopt);
};

/// Exact rendered prefix for a kind, including the trailing `: `.
std::string_view log_prefix(LogKind kind);

/// Render one line, no trailing whitespace:
///   `<PREFIX>: <subject> with id=<id>`         element entries
///   `<PREFIX>: <subject>`                      entries with no usable id
///   `<PREFIX>: <detail>`                       file-level / free-text entries
/// When subject and detail are both present the detail follows the id clause.
std::string render_line(const LogEntry& entry);

/// Inverse of render_line for element entries; used to check that lines stay
/// machine-recoverable. Returns false for lines that are not log entries.
bool parse_line(const std::string& line, LogKind& kind, std::string& subject, std::string& id);

struct TransformReport; // engine.hpp

/// Write every entry of a report to both sinks, preceded by a `FILE:` header
/// naming the source path. Console output is identical to file content.
void write_report(const TransformReport& report, std::ostream& console, std::ostream& file,
                  bool timestamps = false);

/// Owns logs/transformation.log for one converter invocation. The file is
/// created lazily on first write and truncated per invocation; an unwritable
/// log directory degrades to a console warning, never an error.
class LogWriter {
public:
  explicit LogWriter(std::filesystem::path log_path, bool timestamps = false);
  ~LogWriter();

  void write(const TransformReport& report, std::ostream& console);
  bool file_ok() const { return !failed_; }

private:
  std::filesystem::path path_;
  bool timestamps_;
  bool opened_ = false;
  bool failed_ = false;
  std::unique_ptr<std::ofstream> file_;
};

} // namespace c7to8
