// SPDX-License-Identifier: Apache-2.0
//
// Post-transformation structural checks over the output document. These are
// deliberately narrow: they cover exactly the constructs this converter
// emits, so a clean result means the model loads in a Camunda 8 modeler
// without the converter having introduced breakage.

#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "c7to8/translog.hpp"
#include "c7to8/xml.hpp"

namespace c7to8 {

enum class Severity { Error, Warning };

struct ValidationFinding {
  Severity severity = Severity::Error;
  std::optional<std::string> element_id;
  std::string message;
};

/// Checks, in order:
///  1. no camunda-namespace attribute or element remains unless a TODO entry
///     referenced it (entries passed in from the transformation report);
///  2. every zeebe:taskDefinition has a non-empty type;
///  3. every zeebe:loopCharacteristics has an inputCollection starting `=`;
///  4. zeebe elements appear only inside bpmn:extensionElements (or nested in
///     another zeebe element);
///  5. sourceRef/targetRef/bpmnElement and friends resolve to an existing id;
///  6. the document declares the zeebe namespace when zeebe content exists.
/// An empty result means pass.
std::vector<ValidationFinding> validate_c8(const BpmnDocument& doc,
                                           std::span<const LogEntry> log_entries = {});

/// Findings rendered as log entries: Error -> TODO, Warning -> TODO (OPTIONAL).
std::vector<LogEntry> findings_to_entries(const std::vector<ValidationFinding>& findings);

} // namespace c7to8
