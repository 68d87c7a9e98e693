// SPDX-License-Identifier: Apache-2.0
//
// The Camunda 7 -> Camunda 8 mapping-rule registry. Each rule pairs a matcher
// over document nodes with a rewrite action and the log entries the rewrite
// obliges. The traversal engine dispatches exactly one rule per element;
// registry order defines priority.

#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "c7to8/translog.hpp"
#include "c7to8/xml.hpp"

namespace c7to8 {

enum class RuleAction {
  Rewritten,          // the element tree changed
  PassThrough,        // element compatible as-is, tree unmodified
  DeprecatedWarning,  // element no longer exists in Camunda 8, left in place
  Unsupported,        // element not handled by the converter, left in place
};

struct RuleOutcome {
  RuleAction action = RuleAction::PassThrough;
  // Entries emitted right after the element's opening MAPPING line(s), before
  // the children are visited.
  std::vector<LogEntry> pre_entries;
  // Entries emitted after the children, before the FINISHED line(s).
  std::vector<LogEntry> entries;
  bool replacement_applied = false;
  // Children are normally visited by the engine; a rule that fully handles
  // its subtree sets skip_children and reports how many input elements it
  // consumed so visit counting stays exact.
  bool skip_children = false;
  std::size_t consumed_elements = 0;
  // Indices (into the rewritten node's children) of subtrees the rule
  // inserted; the engine must not visit or count them.
  std::vector<std::size_t> inserted_children;
  // Indices of input children the rule rewrote itself; not visited again,
  // but counted as visited.
  std::vector<std::size_t> consumed_children;
};

struct RuleContext {
  const XmlNode* parent = nullptr;       // enclosing element, pre-rewrite
  const XmlNode* definitions = nullptr;  // document root, for cross-references
  std::string nearest_id;                // id of the node or its closest identified ancestor
};

struct RuleResult {
  XmlNode node;
  RuleOutcome outcome;
};

struct MappingRule {
  std::string id;          // stable identifier, e.g. `service-task.job-type`
  std::string description; // one line for the rendered mapping table
  std::function<bool(const XmlNode&, const RuleContext&)> matches;
  std::function<RuleResult(XmlNode, const RuleContext&)> apply;
};

/// The registry in priority order: unsupported and deprecated detection first,
/// then the mappers, then pass-through.
const std::vector<MappingRule>& default_registry();

/// First matching rule or nullptr (elements with unhandled `camunda:`
/// attributes match nothing and are covered by the residual scan).
const MappingRule* match_rule(const XmlNode& node, const RuleContext& ctx);

// Individual rule entry points, exposed for direct testing.
RuleResult map_service_task(XmlNode node, const RuleContext& ctx);
RuleResult map_condition_expression(XmlNode node, const RuleContext& ctx);
RuleResult map_multi_instance(XmlNode node, const RuleContext& ctx);
RuleResult map_message_event_definition(XmlNode node, const RuleContext& ctx);
RuleResult map_message_event_scope(XmlNode node, const RuleContext& ctx);
RuleResult map_user_task(XmlNode node, const RuleContext& ctx);
RuleResult map_call_activity(XmlNode node, const RuleContext& ctx);
RuleResult map_timer_event_definition(XmlNode node, const RuleContext& ctx);
RuleResult detect_deprecated(XmlNode node, const RuleContext& ctx);
RuleResult detect_unsupported(XmlNode node, const RuleContext& ctx);
RuleResult flag_camunda_extension(XmlNode node, const RuleContext& ctx);
RuleResult passthrough(XmlNode node, const RuleContext& ctx);

/// True for start/end/boundary/intermediate events.
bool is_event_element(const XmlNode& node);
/// True for events whose semantics are "throwing" (end, intermediate throw).
bool is_throw_event(const XmlNode& node);

} // namespace c7to8
