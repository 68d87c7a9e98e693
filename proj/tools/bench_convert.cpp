// SPDX-License-Identifier: Apache-2.0
//
// Throughput benchmark for the convert pipeline: runs the same synthetic
// corpus through the serial reference loop and the OpenMP batch loop and
// checks both produce identical bytes.
//
//   c7to8-bench [files] [tasks-per-file]

#include <chrono>
#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "c7to8/engine.hpp"
#include "c7to8/validator.hpp"
#include "c7to8/xml.hpp"

namespace {

std::string synthetic_model(int index, int tasks) {
  std::string p = "M" + std::to_string(index) + "_";
  std::string xml =
      "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      "<bpmn:definitions xmlns:bpmn=\"http://www.omg.org/spec/BPMN/20100524/MODEL\"\n"
      "    xmlns:camunda=\"http://camunda.org/schema/1.0/bpmn\"\n"
      "    xmlns:xsi=\"http://www.w3.org/2001/XMLSchema-instance\"\n"
      "    id=\"" + p + "Definitions\" targetNamespace=\"http://example.com/bench\">\n"
      "  <bpmn:process id=\"" + p + "Process\" isExecutable=\"true\">\n"
      "    <bpmn:startEvent id=\"" + p + "Start\"/>\n";
  std::string prev = p + "Start";
  for (int t = 0; t < tasks; ++t) {
    std::string task = p + "Task" + std::to_string(t);
    std::string flow = p + "Flow" + std::to_string(t);
    xml += "    <bpmn:sequenceFlow id=\"" + flow + "\" sourceRef=\"" + prev + "\" targetRef=\"" +
           task + "\">\n"
           "      <bpmn:conditionExpression xsi:type=\"bpmn:tFormalExpression\">${count" +
           std::to_string(t) + " &gt; " + std::to_string(t) +
           "}</bpmn:conditionExpression>\n"
           "    </bpmn:sequenceFlow>\n";
    xml += "    <bpmn:serviceTask id=\"" + task + "\" name=\"Task " + std::to_string(t) +
           "\" camunda:delegateExpression=\"${worker" + std::to_string(t) + "}\"/>\n";
    prev = task;
  }
  xml += "    <bpmn:sequenceFlow id=\"" + p + "FlowEnd\" sourceRef=\"" + prev +
         "\" targetRef=\"" + p + "End\"/>\n"
         "    <bpmn:endEvent id=\"" + p + "End\"/>\n"
         "  </bpmn:process>\n"
         "</bpmn:definitions>\n";
  return xml;
}

// The kernel under measurement: full parse -> transform -> validate ->
// serialize of one model, no disk I/O.
std::string convert_one(const std::string& xml) {
  c7to8::BpmnDocument doc = c7to8::parse_bpmn(xml);
  c7to8::TransformReport report = c7to8::transform_document(doc);
  (void)c7to8::validate_c8(report.document, report.entries);
  return c7to8::serialize_bpmn(report.document);
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

} // namespace

int main(int argc, char** argv) {
  int files = argc > 1 ? std::atoi(argv[1]) : 200;
  int tasks = argc > 2 ? std::atoi(argv[2]) : 40;
  if (files <= 0 || tasks <= 0) {
    std::cerr << "usage: c7to8-bench [files] [tasks-per-file]\n";
    return 2;
  }

  std::vector<std::string> corpus(static_cast<std::size_t>(files));
  for (int i = 0; i < files; ++i) corpus[static_cast<std::size_t>(i)] = synthetic_model(i, tasks);

  // Serial reference.
  std::vector<std::string> serial(corpus.size());
  auto t0 = std::chrono::steady_clock::now();
  for (std::size_t i = 0; i < corpus.size(); ++i) serial[i] = convert_one(corpus[i]);
  double serial_s = seconds_since(t0);

  // Parallel batch.
  std::vector<std::string> parallel(corpus.size());
  auto t1 = std::chrono::steady_clock::now();
  const auto n = static_cast<std::int64_t>(corpus.size());
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
  for (std::int64_t i = 0; i < n; ++i) {
    parallel[static_cast<std::size_t>(i)] = convert_one(corpus[static_cast<std::size_t>(i)]);
  }
  double parallel_s = seconds_since(t1);

  for (std::size_t i = 0; i < corpus.size(); ++i) {
    if (serial[i] != parallel[i]) {
      std::cerr << "MISMATCH: parallel output differs from serial reference at file " << i << "\n";
      return 1;
    }
  }

  int threads = 1;
#ifdef _OPENMP
  threads = omp_get_max_threads();
#endif
  std::cout << "corpus: " << files << " models x " << tasks << " service tasks\n";
  std::cout << "serial:   " << serial_s << " s (" << static_cast<double>(files) / serial_s
            << " files/s)\n";
  std::cout << "parallel: " << parallel_s << " s (" << static_cast<double>(files) / parallel_s
            << " files/s, " << threads << " threads)\n";
  std::cout << "speedup:  " << serial_s / parallel_s << "x\n";
  std::cout << "outputs identical: yes\n";
  return 0;
}
