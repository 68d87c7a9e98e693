// SPDX-License-Identifier: Apache-2.0

#include "c7to8/translog.hpp"

#include <array>
#include <ctime>
#include <fstream>
#include <iostream>

#include "c7to8/engine.hpp"

namespace c7to8 {

namespace {

constexpr std::array<std::string_view, 5> kPrefixes = {
    "MAPPING",
    "FINISHED MAPPING",
    "NO MAPPING NEEDED",
    "TODO",
    "TODO (OPTIONAL)",
};

std::string timestamp_prefix() {
  std::time_t now = std::time(nullptr);
  std::tm tm{};
  localtime_r(&now, &tm);
  char buf[24];
  std::strftime(buf, sizeof buf, "[%H:%M:%S] ", &tm);
  return buf;
}

void write_lines(const TransformReport& report, std::ostream& out, bool timestamps) {
  out << "FILE: " << report.document.source_path.generic_string() << '\n';
  for (const LogEntry& e : report.entries) {
    if (timestamps) out << timestamp_prefix();
    out << render_line(e) << '\n';
  }
}

} // namespace

LogEntry LogEntry::mapping(std::string subject, std::optional<std::string> id) {
  LogEntry e;
  e.kind = LogKind::Mapping;
  e.subject = std::move(subject);
  e.element_id = std::move(id);
  return e;
}

LogEntry LogEntry::finished(std::string subject, std::optional<std::string> id) {
  LogEntry e;
  e.kind = LogKind::FinishedMapping;
  e.subject = std::move(subject);
  e.element_id = std::move(id);
  return e;
}

LogEntry LogEntry::no_mapping(std::string subject, std::optional<std::string> id,
                              std::optional<std::string> detail) {
  LogEntry e;
  e.kind = LogKind::NoMappingNeeded;
  e.subject = std::move(subject);
  e.element_id = std::move(id);
  e.detail = std::move(detail);
  return e;
}

LogEntry LogEntry::todo(std::string detail, std::optional<std::string> id) {
  LogEntry e;
  e.kind = LogKind::Todo;
  e.detail = std::move(detail);
  e.element_id = std::move(id);
  return e;
}

LogEntry LogEntry::todo_optional(std::string detail, std::optional<std::string> id) {
  LogEntry e;
  e.kind = LogKind::TodoOptional;
  e.detail = std::move(detail);
  e.element_id = std::move(id);
  return e;
}

std::string_view log_prefix(LogKind kind) { return kPrefixes[static_cast<std::size_t>(kind)]; }

std::string render_line(const LogEntry& entry) {
  std::string line(log_prefix(entry.kind));
  line += ": ";
  if (!entry.subject.empty()) {
    line += entry.subject;
    if (entry.element_id && !entry.element_id->empty()) {
      line += " with id=";
      line += *entry.element_id;
    }
    if (entry.detail && !entry.detail->empty()) {
      line += ' ';
      line += *entry.detail;
    }
  } else if (entry.detail) {
    line += *entry.detail;
  }
  while (!line.empty() && (line.back() == ' ' || line.back() == '\t')) line.pop_back();
  return line;
}

bool parse_line(const std::string& line, LogKind& kind, std::string& subject, std::string& id) {
  for (std::size_t k = 0; k < kPrefixes.size(); ++k) {
    std::string prefix = std::string(kPrefixes[k]) + ": ";
    if (line.rfind(prefix, 0) != 0) continue;
    kind = static_cast<LogKind>(k);
    std::string rest = line.substr(prefix.size());
    std::size_t marker = rest.rfind(" with id=");
    if (marker == std::string::npos) {
      subject = rest;
      id.clear();
    } else {
      subject = rest.substr(0, marker);
      id = rest.substr(marker + 9);
      std::size_t space = id.find(' ');
      if (space != std::string::npos) id.resize(space);
    }
    return true;
  }
  return false;
}

void write_report(const TransformReport& report, std::ostream& console, std::ostream& file,
                  bool timestamps) {
  write_lines(report, console, timestamps);
  write_lines(report, file, timestamps);
}

LogWriter::LogWriter(std::filesystem::path log_path, bool timestamps)
    : path_(std::move(log_path)), timestamps_(timestamps) {}

LogWriter::~LogWriter() = default;

void LogWriter::write(const TransformReport& report, std::ostream& console) {
  write_lines(report, console, timestamps_);
  if (failed_) return;
  if (!opened_) {
    opened_ = true;
    std::error_code ec;
    std::filesystem::create_directories(path_.parent_path(), ec);
    file_ = std::make_unique<std::ofstream>(path_, std::ios::trunc);
    if (!*file_) {
      failed_ = true;
      std::cerr << "warning: log file " << path_.generic_string()
                << " is not writable; console output only\n";
      return;
    }
  }
  write_lines(report, *file_, timestamps_);
  file_->flush();
}

} // namespace c7to8
