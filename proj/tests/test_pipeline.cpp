// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "c7to8/pipeline.hpp"

using namespace c7to8;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / name) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

void copy_fixture(const std::string& name, const fs::path& to) {
  fs::copy_file(fs::path(C7TO8_FIXTURE_DIR) / name, to, fs::copy_options::overwrite_existing);
}

void write_file(const fs::path& p, const std::string& content) {
  std::ofstream out(p, std::ios::binary);
  REQUIRE(out);
  out << content;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

RunConfig config_for(const TempDir& dir, const fs::path& input) {
  RunConfig cfg;
  cfg.input_path = input;
  cfg.log_path = dir.path / "logs" / "transformation.log";
  return cfg;
}

} // namespace

TEST_CASE("discovery: directory picks .bpmn case-insensitively, sorted, outputs excluded") {
  TempDir dir("c7to8_discovery");
  write_file(dir.path / "b.BPMN", "x");
  write_file(dir.path / "a.bpmn", "x");
  write_file(dir.path / "notes.txt", "x");
  write_file(dir.path / "a-transformed.bpmn", "x");
  write_file(dir.path / "B-TRANSFORMED.BPMN", "x");
  fs::create_directories(dir.path / "nested");
  write_file(dir.path / "nested" / "c.bpmn", "x");

  std::vector<fs::path> inputs = discover_inputs(dir.path);
  REQUIRE(inputs.size() == 2);
  CHECK(inputs[0].filename() == "a.bpmn");
  CHECK(inputs[1].filename() == "b.BPMN");

  std::vector<fs::path> rec = discover_inputs(dir.path, /*recursive=*/true);
  REQUIRE(rec.size() == 3);
  CHECK(rec[2].filename() == "c.bpmn");
}

TEST_CASE("discovery: explicit file accepted with any extension; missing path throws") {
  TempDir dir("c7to8_discovery_file");
  write_file(dir.path / "model.xml", "x");
  std::vector<fs::path> inputs = discover_inputs(dir.path / "model.xml");
  REQUIRE(inputs.size() == 1);
  CHECK(inputs[0].filename() == "model.xml");
  CHECK_THROWS_AS(discover_inputs(dir.path / "nope.bpmn"), PathNotFound);
}

TEST_CASE("output naming inserts -transformed before the final extension") {
  CHECK(output_path("models/taxi.bpmn") == fs::path("models/taxi-transformed.bpmn"));
  CHECK(output_path("a.b.bpmn") == fs::path("a.b-transformed.bpmn"));
  CHECK(output_path("noext") == fs::path("noext-transformed"));
}

TEST_CASE("convert_file writes a complete output next to the input") {
  TempDir dir("c7to8_convert");
  copy_fixture("service_tasks.bpmn", dir.path / "service_tasks.bpmn");
  RunConfig cfg = config_for(dir, dir.path / "service_tasks.bpmn");
  FileResult result = convert_file(dir.path / "service_tasks.bpmn", cfg);
  CHECK_FALSE(result.failed);
  CHECK(fs::exists(dir.path / "service_tasks-transformed.bpmn"));
  CHECK(result.report.status == TransformStatus::SuccessWithTodos);
  // output parses and is itself recognized as already migrated on a re-run
  std::string out = slurp(dir.path / "service_tasks-transformed.bpmn");
  CHECK(parse_bpmn(out).root.name.local_name == "definitions");
}

TEST_CASE("single valid model: exit 0, output and log written") {
  TempDir dir("c7to8_run_single");
  copy_fixture("conditions.bpmn", dir.path / "conditions.bpmn");
  RunConfig cfg = config_for(dir, dir.path / "conditions.bpmn");
  std::ostringstream out;
  std::ostringstream err;
  CHECK(run(cfg, out, err) == 0);
  CHECK(fs::exists(dir.path / "conditions-transformed.bpmn"));
  std::string log = slurp(cfg.log_path);
  CHECK(log.find("FILE: ") != std::string::npos);
  CHECK(out.str().find("conditions.bpmn") != std::string::npos);
}

TEST_CASE("nonexistent path: exit 2 and no log file") {
  TempDir dir("c7to8_run_missing");
  RunConfig cfg = config_for(dir, dir.path / "missing.bpmn");
  std::ostringstream out;
  std::ostringstream err;
  CHECK(run(cfg, out, err) == 2);
  CHECK_FALSE(fs::exists(cfg.log_path));
  CHECK(err.str().find("path not found") != std::string::npos);
}

TEST_CASE("empty directory: warning, exit 0") {
  TempDir dir("c7to8_run_empty");
  fs::create_directories(dir.path / "only-outputs");
  write_file(dir.path / "only-outputs" / "x-transformed.bpmn", "x");
  RunConfig cfg = config_for(dir, dir.path / "only-outputs");
  std::ostringstream out;
  std::ostringstream err;
  CHECK(run(cfg, out, err) == 0);
  CHECK(out.str().find("no .bpmn files") != std::string::npos);
}

TEST_CASE("batch isolation: malformed file reports, valid file still converts, exit 1") {
  TempDir dir("c7to8_run_mixed");
  copy_fixture("timers.bpmn", dir.path / "good.bpmn");
  copy_fixture("invalid/truncated.bpmn", dir.path / "broken.bpmn");
  RunConfig cfg = config_for(dir, dir.path);
  std::ostringstream out;
  std::ostringstream err;
  CHECK(run(cfg, out, err) == 1);
  CHECK(fs::exists(dir.path / "good-transformed.bpmn"));
  CHECK_FALSE(fs::exists(dir.path / "broken-transformed.bpmn"));
  CHECK(err.str().find("broken.bpmn") != std::string::npos);
  std::string log = slurp(cfg.log_path);
  CHECK(log.find("TODO: input could not be parsed") != std::string::npos);
}

TEST_CASE("wrong root namespace also fails the file") {
  TempDir dir("c7to8_run_notbpmn");
  copy_fixture("invalid/wrong_namespace.bpmn", dir.path / "wrong.bpmn");
  RunConfig cfg = config_for(dir, dir.path / "wrong.bpmn");
  std::ostringstream out;
  std::ostringstream err;
  CHECK(run(cfg, out, err) == 1);
  CHECK(err.str().find("not a BPMN document") != std::string::npos);
}

TEST_CASE("running twice converts the same inputs and overwrites outputs") {
  TempDir dir("c7to8_run_idempotent");
  copy_fixture("user_tasks.bpmn", dir.path / "user_tasks.bpmn");
  copy_fixture("multi_instance.bpmn", dir.path / "multi_instance.bpmn");
  RunConfig cfg = config_for(dir, dir.path);
  std::ostringstream out1;
  std::ostringstream err1;
  REQUIRE(run(cfg, out1, err1) == 0);
  std::string first_a = slurp(dir.path / "user_tasks-transformed.bpmn");
  std::string first_log = slurp(cfg.log_path);

  std::ostringstream out2;
  std::ostringstream err2;
  REQUIRE(run(cfg, out2, err2) == 0);
  CHECK(out2.str().find("overwrote existing output") != std::string::npos);
  CHECK(slurp(dir.path / "user_tasks-transformed.bpmn") == first_a);
  CHECK(slurp(cfg.log_path) == first_log);
  // outputs were not picked up as inputs
  CHECK(out2.str().find("user_tasks-transformed.bpmn ->") == std::string::npos);
}

TEST_CASE("parallel and serial runs produce identical bytes and logs") {
  TempDir serial_dir("c7to8_run_serial");
  TempDir parallel_dir("c7to8_run_parallel");
  const char* names[] = {"service_tasks.bpmn", "conditions.bpmn",  "multi_instance.bpmn",
                         "message_catch.bpmn", "user_tasks.bpmn",  "timers.bpmn",
                         "script_task.bpmn",   "call_activity.bpmn"};
  for (const char* n : names) {
    copy_fixture(n, serial_dir.path / n);
    copy_fixture(n, parallel_dir.path / n);
  }

  // Run each from inside its directory so log sections carry identical
  // relative paths.
  fs::path old_cwd = fs::current_path();
  auto run_in = [&old_cwd](const fs::path& dir, bool parallel) {
    fs::current_path(dir);
    RunConfig cfg;
    cfg.input_path = ".";
    cfg.log_path = "logs/transformation.log";
    cfg.parallel = parallel;
    std::ostringstream out;
    std::ostringstream err;
    int code = run(cfg, out, err);
    fs::current_path(old_cwd);
    REQUIRE(code == 0);
  };
  run_in(serial_dir.path, false);
  run_in(parallel_dir.path, true);

  CHECK(slurp(serial_dir.path / "logs" / "transformation.log") ==
        slurp(parallel_dir.path / "logs" / "transformation.log"));
  for (const char* n : names) {
    CAPTURE(n);
    CHECK(slurp(output_path(serial_dir.path / n)) == slurp(output_path(parallel_dir.path / n)));
  }
}
