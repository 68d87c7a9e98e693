// SPDX-License-Identifier: Apache-2.0

#include "c7to8/rules.hpp"

#include <array>
#include <optional>
#include <utility>

#include "c7to8/expression.hpp"

namespace c7to8 {

namespace {

std::size_t count_descendant_elements(const XmlNode& node) {
  std::size_t n = 0;
  for (const XmlNode& c : node.children) {
    if (!c.is_element()) continue;
    n += 1 + count_descendant_elements(c);
  }
  return n;
}

// Index of the bpmn:extensionElements child, inserting one as the first
// child when absent. Second member reports the insertion.
std::pair<std::size_t, bool> ensure_extension_elements(XmlNode& node) {
  for (std::size_t i = 0; i < node.children.size(); ++i)
    if (node.children[i].is(uri::bpmn, "extensionElements")) return {i, false};
  node.children.insert(node.children.begin(), XmlNode::element(uri::bpmn, "extensionElements"));
  return {0, true};
}

struct JobTypeBinding {
  std::string attr;  // camunda attribute local name the type came from
  std::string value; // raw attribute value
  std::string type;  // resolved zeebe:taskDefinition type
};

// Resolve the job type from the first present binding attribute, consuming
// it (and for `topic`, the matching camunda:type="external" marker).
std::optional<JobTypeBinding> take_job_type(XmlNode& node, bool include_topic) {
  struct Candidate {
    const char* attr;
    bool unwrap;
  };
  static constexpr std::array<Candidate, 4> kPriority = {{
      {"delegateExpression", true},
      {"topic", false},
      {"expression", true},
      {"class", false},
  }};
  for (const Candidate& c : kPriority) {
    if (!include_topic && std::string_view(c.attr) == "topic") continue;
    const std::string* v = node.attr(uri::camunda, c.attr);
    if (!v) continue;
    JobTypeBinding binding;
    binding.attr = c.attr;
    binding.value = *v;
    binding.type = c.unwrap ? unwrap_interpolation(*v) : *v;
    node.remove_attr(uri::camunda, c.attr);
    if (binding.attr == "topic") {
      const std::string* type_marker = node.attr(uri::camunda, "type");
      if (type_marker && *type_marker == "external") node.remove_attr(uri::camunda, "type");
    }
    return binding;
  }
  return std::nullopt;
}

void append_task_definition(XmlNode& node, const std::string& type, RuleOutcome& outcome) {
  auto [ext_index, inserted] = ensure_extension_elements(node);
  XmlNode def = XmlNode::element(uri::zeebe, "taskDefinition");
  def.set_attr("", "type", type);
  node.children[ext_index].children.push_back(std::move(def));
  if (inserted) outcome.inserted_children.push_back(ext_index);
}

void log_job_type_conversion(const JobTypeBinding& binding, std::vector<LogEntry>& entries) {
  entries.push_back(
      LogEntry::mapping("bpmn:" + binding.attr + " configureJobType into zeebe:taskDefinition"));
  if (is_interpolation(binding.value)) {
    entries.push_back(
        LogEntry::mapping("camunda:expression configureJobType into FEEL Expression Language"));
  }
}

bool has_camunda_attribute(const XmlNode& node) {
  for (const XmlAttribute& a : node.attributes)
    if (a.name.namespace_uri == uri::camunda) return true;
  return false;
}

const XmlNode* find_by_id(const XmlNode& node, const std::string& id) {
  if (node.is_element() && node.id() == id) return &node;
  for (const XmlNode& c : node.children)
    if (const XmlNode* hit = find_by_id(c, id)) return hit;
  return nullptr;
}

bool has_event_definition(const XmlNode& node, std::string_view local) {
  return node.first_child(uri::bpmn, local) != nullptr;
}

} // namespace

bool is_event_element(const XmlNode& node) {
  if (!node.is_element() || node.name.namespace_uri != uri::bpmn) return false;
  const std::string& l = node.name.local_name;
  return l == "startEvent" || l == "endEvent" || l == "intermediateThrowEvent" ||
         l == "intermediateCatchEvent" || l == "boundaryEvent";
}

bool is_throw_event(const XmlNode& node) {
  const std::string& l = node.name.local_name;
  return l == "endEvent" || l == "intermediateThrowEvent";
}

// ---------------------------------------------------------------------------

RuleResult map_service_task(XmlNode node, const RuleContext& ctx) {
  RuleOutcome outcome;
  std::string id = node.id().empty() ? ctx.nearest_id : node.id();

  // Re-running on an already migrated model must not double-insert.
  if (const XmlNode* ext = node.first_child(uri::bpmn, "extensionElements");
      ext && ext->first_child(uri::zeebe, "taskDefinition")) {
    outcome.action = RuleAction::PassThrough;
    return {std::move(node), std::move(outcome)};
  }

  std::optional<JobTypeBinding> binding = take_job_type(node, /*include_topic=*/true);
  if (!binding) {
    outcome.action = RuleAction::PassThrough;
    outcome.entries.push_back(LogEntry::todo(
        "no implementation binding found for bpmn:serviceTask id=" + id +
            "; configure zeebe:taskDefinition manually",
        id));
    return {std::move(node), std::move(outcome)};
  }

  // Lower-priority binding attributes lose; say so instead of guessing.
  for (const char* other : {"delegateExpression", "topic", "expression", "class"}) {
    const std::string* v = node.attr(uri::camunda, other);
    if (!v) continue;
    outcome.entries.push_back(LogEntry::todo(
        "additional binding camunda:" + std::string(other) + "=\"" + *v +
            "\" on bpmn:serviceTask id=" + id + " dropped; job type taken from camunda:" +
            binding->attr,
        id));
    node.remove_attr(uri::camunda, other);
  }

  append_task_definition(node, binding->type, outcome);
  log_job_type_conversion(*binding, outcome.entries);
  outcome.entries.push_back(
      LogEntry::todo_optional("set retries=?? in zeebe:taskDefinition Element", id));
  if (binding->attr == "expression") {
    outcome.entries.push_back(LogEntry::todo_optional(
        "adapt zeebe:taskDefinition type for Service Task with id=" + id +
            " to select correct JobWorker",
        id));
  } else if (binding->attr == "class") {
    outcome.entries.push_back(LogEntry::todo_optional(
        "adapt job type for Service Task with id=" + id +
            "; zeebe:taskDefinition type is the delegate class name",
        id));
  }
  outcome.action = RuleAction::Rewritten;
  outcome.replacement_applied = true;
  return {std::move(node), std::move(outcome)};
}

RuleResult map_condition_expression(XmlNode node, const RuleContext& ctx) {
  RuleOutcome outcome;
  std::string id = node.id().empty() ? ctx.nearest_id : node.id();

  for (std::size_t i = 0; i < node.children.size(); ++i) {
    XmlNode& cond = node.children[i];
    if (!cond.is(uri::bpmn, "conditionExpression")) continue;

    outcome.consumed_children.push_back(i);
    if (cond.attr("", "language") != nullptr) {
      outcome.pre_entries.push_back(LogEntry::todo(
          "translate condition to FEEL manually for sequence flow id=" + id +
              " (script conditions are not supported in Camunda 8)",
          id));
      outcome.action = RuleAction::PassThrough;
      return {std::move(node), std::move(outcome)};
    }

    ExpressionRewrite rewrite = juel_to_feel(cond.text.value_or(""));
    if (rewrite.confident) {
      cond.text = rewrite.rewritten;
      outcome.pre_entries.push_back(
          LogEntry::mapping("bpmn:conditionExpression into FEEL Expression Language"));
      outcome.action = RuleAction::Rewritten;
      outcome.replacement_applied = true;
    } else {
      std::string reason = rewrite.notes.empty() ? std::string("unsupported construct")
                                                 : rewrite.notes.front();
      outcome.pre_entries.push_back(LogEntry::todo(
          "translate condition to FEEL manually for sequence flow id=" + id + " (" + reason + ")",
          id));
      outcome.action = RuleAction::PassThrough;
    }
    return {std::move(node), std::move(outcome)};
  }

  outcome.action = RuleAction::PassThrough;
  return {std::move(node), std::move(outcome)};
}

RuleResult map_multi_instance(XmlNode node, const RuleContext& ctx) {
  RuleOutcome outcome;
  std::string id = node.id().empty() ? ctx.nearest_id : node.id();

  // Re-running on an already migrated model must not double-insert.
  if (const XmlNode* ext = node.first_child(uri::bpmn, "extensionElements");
      ext && ext->first_child(uri::zeebe, "loopCharacteristics")) {
    outcome.action = RuleAction::PassThrough;
    return {std::move(node), std::move(outcome)};
  }

  // Copy both values up front: removing an attribute shifts the vector.
  const std::string* collection_ptr = node.attr(uri::camunda, "collection");
  const std::string* element_var_ptr = node.attr(uri::camunda, "elementVariable");
  std::optional<std::string> collection =
      collection_ptr ? std::optional<std::string>(*collection_ptr) : std::nullopt;
  std::optional<std::string> element_var =
      element_var_ptr ? std::optional<std::string>(*element_var_ptr) : std::nullopt;

  if (!collection) {
    outcome.action = RuleAction::PassThrough;
    outcome.entries.push_back(LogEntry::todo(
        "define inputCollection for multi-instance activity id=" + id +
            " (zeebe:loopCharacteristics)",
        id));
    return {std::move(node), std::move(outcome)};
  }

  XmlNode loop = XmlNode::element(uri::zeebe, "loopCharacteristics");
  loop.set_attr("", "inputCollection", "=" + unwrap_interpolation(*collection));
  outcome.entries.push_back(
      LogEntry::mapping("camunda:collection into zeebe:loopCharacteristics inputCollection"));
  node.remove_attr(uri::camunda, "collection");
  if (element_var) {
    loop.set_attr("", "inputElement", unwrap_interpolation(*element_var));
    outcome.entries.push_back(
        LogEntry::mapping("camunda:elementVariable into zeebe:loopCharacteristics inputElement"));
    node.remove_attr(uri::camunda, "elementVariable");
  }
  auto [ext_index, inserted] = ensure_extension_elements(node);
  node.children[ext_index].children.push_back(std::move(loop));
  if (inserted) outcome.inserted_children.push_back(ext_index);

  outcome.action = RuleAction::Rewritten;
  outcome.replacement_applied = true;
  return {std::move(node), std::move(outcome)};
}

RuleResult map_message_event_definition(XmlNode node, const RuleContext& ctx) {
  RuleOutcome outcome;
  std::string id = node.id().empty() ? ctx.nearest_id : node.id();
  bool throw_context = ctx.parent != nullptr && is_throw_event(*ctx.parent);

  if (throw_context) {
    outcome.pre_entries.push_back(LogEntry::todo(
        "manually configure Jobworker for Message Event Definition with id=" + id, id));
    outcome.action = RuleAction::PassThrough;
    return {std::move(node), std::move(outcome)};
  }

  // Catch context: scaffold the subscription and ask for the correlation key.
  if (const XmlNode* ext = node.first_child(uri::bpmn, "extensionElements");
      ext && ext->first_child(uri::zeebe, "subscription")) {
    outcome.action = RuleAction::PassThrough;
    return {std::move(node), std::move(outcome)};
  }
  std::string message_name = id;
  if (const std::string* ref = node.attr("", "messageRef")) {
    message_name = *ref;
    if (ctx.definitions) {
      if (const XmlNode* message = find_by_id(*ctx.definitions, *ref)) {
        if (const std::string* name = message->attr("", "name")) message_name = *name;
      }
    }
  }
  XmlNode subscription = XmlNode::element(uri::zeebe, "subscription");
  subscription.set_attr("", "correlationKey", "");
  auto [ext_index, inserted] = ensure_extension_elements(node);
  node.children[ext_index].children.push_back(std::move(subscription));
  if (inserted) outcome.inserted_children.push_back(ext_index);

  outcome.pre_entries.push_back(LogEntry::todo(
      "define correlation key for message " + message_name + " (zeebe:subscription)", id));
  outcome.action = RuleAction::Rewritten;
  outcome.replacement_applied = true;
  return {std::move(node), std::move(outcome)};
}

RuleResult map_message_event_scope(XmlNode node, const RuleContext& ctx) {
  RuleOutcome outcome;
  std::string id = node.id().empty() ? ctx.nearest_id : node.id();

  if (is_throw_event(node)) {
    std::optional<JobTypeBinding> binding = take_job_type(node, /*include_topic=*/false);
    if (binding) {
      append_task_definition(node, binding->type, outcome);
      log_job_type_conversion(*binding, outcome.entries);
      outcome.entries.push_back(
          LogEntry::todo_optional("set retries=?? in zeebe:taskDefinition Element", id));
      outcome.entries.push_back(LogEntry::todo_optional(
          "adapt zeebe:taskDefinition type for Event with id=" + id +
              " to select correct JobWorker",
          id));
      outcome.action = RuleAction::Rewritten;
      outcome.replacement_applied = true;
      return {std::move(node), std::move(outcome)};
    }
  }
  outcome.action = RuleAction::PassThrough;
  return {std::move(node), std::move(outcome)};
}

RuleResult map_user_task(XmlNode node, const RuleContext& ctx) {
  RuleOutcome outcome;
  std::string id = node.id().empty() ? ctx.nearest_id : node.id();

  if (!has_camunda_attribute(node)) {
    outcome.action = RuleAction::PassThrough;
    return {std::move(node), std::move(outcome)};
  }

  auto feel_value = [&outcome, &id](const std::string& raw, const char* what) {
    ExpressionRewrite r = juel_to_feel(raw);
    if (!r.confident) {
      outcome.entries.push_back(LogEntry::todo(
          std::string("translate ") + what + " expression to FEEL manually for bpmn:userTask id=" +
              id + " (" + (r.notes.empty() ? "unsupported construct" : r.notes.front()) + ")",
          id));
    }
    return r.rewritten;
  };

  XmlNode assignment = XmlNode::element(uri::zeebe, "assignmentDefinition");
  static constexpr std::array<std::pair<const char*, const char*>, 3> kAssignment = {{
      {"assignee", "assignee"},
      {"candidateGroups", "candidateGroups"},
      {"candidateUsers", "candidateUsers"},
  }};
  for (const auto& [from, to] : kAssignment) {
    if (const std::string* v = node.attr(uri::camunda, from)) {
      assignment.set_attr("", to, feel_value(*v, from));
      outcome.entries.push_back(
          LogEntry::mapping("camunda:" + std::string(from) + " into zeebe:assignmentDefinition"));
      node.remove_attr(uri::camunda, from);
    }
  }

  XmlNode schedule = XmlNode::element(uri::zeebe, "taskSchedule");
  for (const char* when : {"dueDate", "followUpDate"}) {
    if (const std::string* v = node.attr(uri::camunda, when)) {
      schedule.set_attr("", when, feel_value(*v, when));
      outcome.entries.push_back(
          LogEntry::mapping("camunda:" + std::string(when) + " into zeebe:taskSchedule"));
      node.remove_attr(uri::camunda, when);
    }
  }

  if (const std::string* form = node.attr(uri::camunda, "formKey")) {
    outcome.entries.push_back(LogEntry::todo(
        "migrate form " + *form + " manually for bpmn:userTask id=" + id, id));
    node.remove_attr(uri::camunda, "formKey");
  }

  // Whatever is left has no Camunda 8 counterpart on a user task. The async
  // flags stay put here; the traversal drops them with their own note.
  for (std::size_t i = 0; i < node.attributes.size();) {
    const XmlAttribute& a = node.attributes[i];
    if (a.name.namespace_uri != uri::camunda || a.name.local_name == "asyncBefore" ||
        a.name.local_name == "asyncAfter") {
      ++i;
      continue;
    }
    outcome.entries.push_back(LogEntry::todo(
        "camunda:" + a.name.local_name + "=\"" + a.value + "\" on bpmn:userTask id=" + id +
            " has no Camunda 8 counterpart; dropped",
        id));
    node.attributes.erase(node.attributes.begin() + static_cast<std::ptrdiff_t>(i));
  }

  bool any_insert = false;
  if (!assignment.attributes.empty() || !schedule.attributes.empty()) {
    auto [ext_index, inserted] = ensure_extension_elements(node);
    if (!assignment.attributes.empty())
      node.children[ext_index].children.push_back(std::move(assignment));
    if (!schedule.attributes.empty())
      node.children[ext_index].children.push_back(std::move(schedule));
    if (inserted) outcome.inserted_children.push_back(ext_index);
    any_insert = true;
  }

  // A user task whose only camunda attributes were async flags is untouched.
  if (!any_insert && outcome.entries.empty()) {
    outcome.action = RuleAction::PassThrough;
    return {std::move(node), std::move(outcome)};
  }
  outcome.action = RuleAction::Rewritten;
  outcome.replacement_applied = any_insert;
  return {std::move(node), std::move(outcome)};
}

RuleResult map_call_activity(XmlNode node, const RuleContext& ctx) {
  RuleOutcome outcome;
  std::string id = node.id().empty() ? ctx.nearest_id : node.id();

  const std::string* called = node.attr("", "calledElement");
  if (!called) {
    outcome.action = RuleAction::PassThrough;
    return {std::move(node), std::move(outcome)};
  }

  std::string process_id = *called;
  if (is_interpolation(*called)) {
    ExpressionRewrite r = juel_to_feel(*called);
    if (r.confident) process_id = r.rewritten;
    outcome.entries.push_back(LogEntry::todo(
        "verify called process id expression for bpmn:callActivity id=" + id +
            " (zeebe:calledElement processId)",
        id));
  }
  node.remove_attr("", "calledElement");

  XmlNode called_element = XmlNode::element(uri::zeebe, "calledElement");
  called_element.set_attr("", "processId", process_id);
  auto [ext_index, inserted] = ensure_extension_elements(node);
  node.children[ext_index].children.push_back(std::move(called_element));
  if (inserted) outcome.inserted_children.push_back(ext_index);

  outcome.entries.push_back(LogEntry::mapping("calledElement into zeebe:calledElement processId"));
  outcome.action = RuleAction::Rewritten;
  outcome.replacement_applied = true;
  return {std::move(node), std::move(outcome)};
}

RuleResult map_timer_event_definition(XmlNode node, const RuleContext& ctx) {
  RuleOutcome outcome;
  std::string id = node.id().empty() ? ctx.nearest_id : node.id();
  outcome.pre_entries.push_back(LogEntry::todo_optional(
      "verify timer expression compatibility for bpmn:timerEventDefinition id=" + id, id));
  outcome.action = RuleAction::PassThrough;
  return {std::move(node), std::move(outcome)};
}

RuleResult detect_deprecated(XmlNode node, const RuleContext& ctx) {
  RuleOutcome outcome;
  std::string id = node.id().empty() ? ctx.nearest_id : node.id();
  const char* kind = has_event_definition(node, "conditionalEventDefinition")
                         ? "bpmn:conditionalEventDefinition"
                         : "bpmn:cancelEventDefinition";
  outcome.pre_entries.push_back(LogEntry::todo(
      std::string("element ") + kind + " id=" + id +
          " is not supported in Camunda 8; remodel manually",
      id));
  outcome.action = RuleAction::DeprecatedWarning;
  return {std::move(node), std::move(outcome)};
}

RuleResult detect_unsupported(XmlNode node, const RuleContext& ctx) {
  RuleOutcome outcome;
  std::string id = node.id().empty() ? ctx.nearest_id : node.id();
  outcome.pre_entries.push_back(LogEntry::todo(
      "scriptTask id=" + id + " is unsupported; convert to a job-worker-based task manually", id));
  outcome.action = RuleAction::Unsupported;
  return {std::move(node), std::move(outcome)};
}

RuleResult flag_camunda_extension(XmlNode node, const RuleContext& ctx) {
  RuleOutcome outcome;
  outcome.pre_entries.push_back(LogEntry::todo(
      display_name(node.name) + " on element id=" + ctx.nearest_id +
          " has no automatic mapping; migrate manually",
      ctx.nearest_id));
  outcome.action = RuleAction::PassThrough;
  outcome.skip_children = true;
  outcome.consumed_elements = count_descendant_elements(node);
  return {std::move(node), std::move(outcome)};
}

RuleResult passthrough(XmlNode node, const RuleContext&) {
  RuleOutcome outcome;
  outcome.action = RuleAction::PassThrough;
  return {std::move(node), std::move(outcome)};
}

// ---------------------------------------------------------------------------

const std::vector<MappingRule>& default_registry() {
  static const std::vector<MappingRule> registry = [] {
    std::vector<MappingRule> rules;
    auto add = [&rules](std::string id, std::string description, auto matcher, auto applier) {
      MappingRule r;
      r.id = std::move(id);
      r.description = std::move(description);
      r.matches = matcher;
      r.apply = applier;
      rules.push_back(std::move(r));
    };

    add("script-task.unsupported", "Script Task: unsupported, reported for manual conversion",
        [](const XmlNode& n, const RuleContext&) { return n.is(uri::bpmn, "scriptTask"); },
        detect_unsupported);

    add("event.deprecated-definition",
        "Conditional/Cancel Events: deprecated in Camunda 8, warned and left in place",
        [](const XmlNode& n, const RuleContext&) {
          return is_event_element(n) && (has_event_definition(n, "conditionalEventDefinition") ||
                                         has_event_definition(n, "cancelEventDefinition"));
        },
        detect_deprecated);

    add("service-task.job-type",
        "Service Task: delegate expression / topic / expression / class into zeebe:taskDefinition",
        [](const XmlNode& n, const RuleContext&) { return n.is(uri::bpmn, "serviceTask"); },
        map_service_task);

    add("sequence-flow.condition-expression",
        "Sequence Flow conditions: JUEL into FEEL",
        [](const XmlNode& n, const RuleContext&) {
          return n.is(uri::bpmn, "sequenceFlow") &&
                 n.first_child(uri::bpmn, "conditionExpression") != nullptr;
        },
        map_condition_expression);

    add("multi-instance.loop-characteristics",
        "Multi-instance: camunda collection/elementVariable into zeebe:loopCharacteristics",
        [](const XmlNode& n, const RuleContext&) {
          return n.is(uri::bpmn, "multiInstanceLoopCharacteristics");
        },
        map_multi_instance);

    add("event.message-scope",
        "Message events: event-scope implementation binding into zeebe:taskDefinition",
        [](const XmlNode& n, const RuleContext&) {
          return is_event_element(n) && has_event_definition(n, "messageEventDefinition");
        },
        map_message_event_scope);

    add("message-event-definition.manual-work",
        "Message event definitions: job worker (throw) or correlation key (catch) follow-up",
        [](const XmlNode& n, const RuleContext&) {
          return n.is(uri::bpmn, "messageEventDefinition");
        },
        map_message_event_definition);

    add("user-task.assignment",
        "User Task: assignment, schedule and form attributes into zeebe extensions",
        [](const XmlNode& n, const RuleContext&) { return n.is(uri::bpmn, "userTask"); },
        map_user_task);

    add("call-activity.called-element",
        "Call Activity: calledElement into zeebe:calledElement",
        [](const XmlNode& n, const RuleContext&) { return n.is(uri::bpmn, "callActivity"); },
        map_call_activity);

    add("timer-event-definition.compatibility",
        "Timer event definitions: kept, expression compatibility flagged",
        [](const XmlNode& n, const RuleContext&) {
          return n.is(uri::bpmn, "timerEventDefinition");
        },
        map_timer_event_definition);

    add("camunda-extension.manual",
        "Camunda extension elements (inputOutput, listeners, properties): flagged for manual work",
        [](const XmlNode& n, const RuleContext&) {
          return n.is_element() && n.name.namespace_uri == uri::camunda;
        },
        flag_camunda_extension);

    add("element.passthrough",
        "Elements identical in both engines: transferred without modification",
        [](const XmlNode& n, const RuleContext&) {
          return n.is_element() && !has_camunda_attribute(n);
        },
        passthrough);

    return rules;
  }();
  return registry;
}

const MappingRule* match_rule(const XmlNode& node, const RuleContext& ctx) {
  for (const MappingRule& rule : default_registry())
    if (rule.matches(node, ctx)) return &rule;
  return nullptr;
}

} // namespace c7to8
