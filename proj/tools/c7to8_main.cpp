// SPDX-License-Identifier: Apache-2.0

#include <iostream>

#include <CLI11.hpp>

#include "c7to8/pipeline.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Convert Camunda 7 BPMN models into Camunda 8 models"};
  app.name("c7to8");

  c7to8::RunConfig config;
  std::string input;
  bool no_parallel = false;

  app.add_option("path", input, "BPMN file or directory of .bpmn files to convert")->required();
  app.add_option("--platform-version", config.platform_version,
                 "execution platform version stamped on the output root")
      ->capture_default_str();
  app.add_flag("--recursive", config.recursive, "also scan subdirectories of a directory input");
  app.add_flag("--no-parallel", no_parallel, "convert files one at a time");
  app.add_flag("--timestamps", config.timestamps, "prefix log lines with a wall-clock timestamp");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  config.input_path = input;
  config.parallel = !no_parallel;
  return c7to8::run(config, std::cout, std::cerr);
}
