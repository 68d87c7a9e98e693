// SPDX-License-Identifier: Apache-2.0

#include "c7to8/pipeline.hpp"

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <fstream>
#include <ostream>
#include <sstream>

#include "c7to8/translog.hpp"
#include "c7to8/validator.hpp"

namespace c7to8 {

namespace {

std::string lowercase(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

bool is_bpmn_file(const std::filesystem::path& p) {
  return lowercase(p.extension().string()) == ".bpmn";
}

bool is_previous_output(const std::filesystem::path& p) {
  std::string name = lowercase(p.filename().string());
  constexpr std::string_view suffix = "-transformed.bpmn";
  return name.size() >= suffix.size() &&
         name.compare(name.size() - suffix.size(), suffix.size(), suffix) == 0;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.generic_string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void atomic_write(const std::filesystem::path& target, const std::string& bytes) {
  std::filesystem::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.generic_string());
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw std::runtime_error("short write to " + tmp.generic_string());
  }
  std::filesystem::rename(tmp, target);
}

const char* status_label(TransformStatus status) {
  switch (status) {
    case TransformStatus::Success: return "success";
    case TransformStatus::SuccessWithTodos: return "success with TODOs";
    case TransformStatus::Failed: return "failed";
  }
  return "unknown";
}

} // namespace

std::vector<std::filesystem::path> discover_inputs(const std::filesystem::path& path,
                                                   bool recursive) {
  if (!std::filesystem::exists(path)) throw PathNotFound(path);
  if (!std::filesystem::is_directory(path)) return {path};

  std::vector<std::filesystem::path> inputs;
  auto consider = [&inputs](const std::filesystem::path& p) {
    if (is_bpmn_file(p) && !is_previous_output(p)) inputs.push_back(p);
  };
  if (recursive) {
    for (const auto& entry : std::filesystem::recursive_directory_iterator(path))
      if (entry.is_regular_file()) consider(entry.path());
  } else {
    for (const auto& entry : std::filesystem::directory_iterator(path))
      if (entry.is_regular_file()) consider(entry.path());
  }
  std::sort(inputs.begin(), inputs.end(),
            [](const std::filesystem::path& a, const std::filesystem::path& b) {
              return a.generic_string() < b.generic_string();
            });
  return inputs;
}

std::filesystem::path output_path(const std::filesystem::path& input) {
  std::filesystem::path out = input.parent_path();
  std::string stem = input.stem().string();
  std::string ext = input.extension().string();
  out /= stem + "-transformed" + ext;
  return out;
}

FileResult convert_file(const std::filesystem::path& input, const RunConfig& config) {
  FileResult result;
  result.input = input;
  result.output = output_path(input);
  result.report.document.source_path = input;

  std::string bytes;
  try {
    bytes = read_file(input);
  } catch (const std::exception& e) {
    result.failed = true;
    result.error = e.what();
    result.report.status = TransformStatus::Failed;
    result.report.entries.push_back(LogEntry::todo(std::string("input could not be read: ") +
                                                   e.what()));
    return result;
  }

  BpmnDocument doc;
  try {
    doc = parse_bpmn(bytes, input);
  } catch (const std::exception& e) {
    result.failed = true;
    result.error = e.what();
    result.report.status = TransformStatus::Failed;
    result.report.entries.push_back(
        LogEntry::todo(std::string("input could not be parsed: ") + e.what()));
    return result;
  }

  TransformOptions opts;
  opts.platform_version = config.platform_version;
  result.report = transform_document(doc, opts);

  std::vector<ValidationFinding> findings = validate_c8(result.report.document,
                                                        result.report.entries);
  for (LogEntry& e : findings_to_entries(findings))
    result.report.entries.push_back(std::move(e));
  recount_todos(result.report);

  try {
    result.overwrote = std::filesystem::exists(result.output);
    atomic_write(result.output, serialize_bpmn(result.report.document));
  } catch (const std::exception& e) {
    result.failed = true;
    result.error = e.what();
  }
  return result;
}

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  std::vector<std::filesystem::path> inputs;
  try {
    inputs = discover_inputs(config.input_path, config.recursive);
  } catch (const PathNotFound& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
  if (inputs.empty()) {
    out << "warning: no .bpmn files found in " << config.input_path.generic_string() << '\n';
    return 0;
  }

  std::vector<FileResult> results(inputs.size());
  const auto n = static_cast<std::int64_t>(inputs.size());
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) if (config.parallel && inputs.size() > 1)
#endif
  for (std::int64_t i = 0; i < n; ++i) {
    const std::filesystem::path& input = inputs[static_cast<std::size_t>(i)];
    FileResult& slot = results[static_cast<std::size_t>(i)];
    try {
      slot = convert_file(input, config);
    } catch (const std::exception& e) {
      slot.input = input;
      slot.failed = true;
      slot.error = e.what();
      slot.report.status = TransformStatus::Failed;
    }
  }

  LogWriter log_writer(config.log_path, config.timestamps);
  bool any_failed = false;
  for (const FileResult& r : results) {
    log_writer.write(r.report, out);
    if (r.failed) {
      any_failed = true;
      err << r.input.generic_string() << ": FAILED (" << r.error << ")\n";
      continue;
    }
    const ReportCounters& c = r.report.counters;
    out << r.input.generic_string() << " -> " << r.output.generic_string() << ": " << status_label(
        r.report.status)
        << ", " << c.elements_visited << " elements visited, " << c.elements_mapped << " mapped, "
        << c.passthrough << " pass-through, " << c.todos << " TODO, " << c.optional_todos
        << " TODO (OPTIONAL)";
    if (r.overwrote) out << " (overwrote existing output)";
    out << '\n';
  }
  return any_failed ? 1 : 0;
}

} // namespace c7to8
