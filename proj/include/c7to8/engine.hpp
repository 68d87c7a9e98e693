// SPDX-License-Identifier: Apache-2.0
//
// Depth-first traversal of a parsed model: one rule per element, parents
// logged before children, FINISHED emitted once a subtree completes. The
// traversal also owns the cross-cutting steps a single rule cannot see:
// dropping per-element async flags, the residual camunda-attribute scan,
// and the root's namespace/platform metadata.

#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "c7to8/translog.hpp"
#include "c7to8/xml.hpp"

namespace c7to8 {

enum class TransformStatus { Success, SuccessWithTodos, Failed };

struct ReportCounters {
  std::size_t elements_visited = 0;
  std::size_t elements_mapped = 0;
  std::size_t passthrough = 0;
  std::size_t todos = 0;
  std::size_t optional_todos = 0;
};

struct TransformReport {
  BpmnDocument document; // transformed
  std::vector<LogEntry> entries;
  ReportCounters counters;
  TransformStatus status = TransformStatus::Success;
};

struct TransformOptions {
  std::string platform_version = "8.0.0";
};

/// Transform a parsed Camunda 7 model. Never fails: everything the rules
/// cannot convert becomes a TODO entry. Diagram-interchange subtrees are
/// preserved node-for-node.
TransformReport transform_document(const BpmnDocument& doc, const TransformOptions& opts = {});

/// One traversal step, exposed for direct testing: visits `node` and its
/// subtree, extending the report, and returns the rewritten node.
XmlNode visit_element(XmlNode node, std::size_t depth, TransformReport& report,
                      const XmlNode* parent = nullptr, const XmlNode* definitions = nullptr,
                      const std::string& inherited_id = {});

/// Recompute the TODO counters and status from the entry list (used after
/// appending validation findings).
void recount_todos(TransformReport& report);

} // namespace c7to8
