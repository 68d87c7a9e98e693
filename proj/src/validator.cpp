// SPDX-License-Identifier: Apache-2.0

#include "c7to8/validator.hpp"

#include <set>

namespace c7to8 {

namespace {

bool in_di_namespace(const XmlNode& node) {
  const std::string& ns = node.name.namespace_uri;
  return ns == uri::bpmndi || ns == uri::dc || ns == uri::di;
}

// A camunda item counts as referenced when some TODO mentions its qualified
// name and, when known, the id of the element carrying it.
bool todo_references(std::span<const LogEntry> log, const std::string& camunda_name,
                     const std::string& id) {
  for (const LogEntry& e : log) {
    if (e.kind != LogKind::Todo && e.kind != LogKind::TodoOptional) continue;
    std::string text = e.subject;
    if (e.detail) text += " " + *e.detail;
    if (text.find(camunda_name) == std::string::npos) continue;
    if (id.empty()) return true;
    if ((e.element_id && *e.element_id == id) || text.find(id) != std::string::npos) return true;
  }
  return false;
}

void check_camunda_residue(const XmlNode& node, const std::string& inherited_id,
                           std::span<const LogEntry> log, bool inside_flagged,
                           std::vector<ValidationFinding>& findings) {
  if (!node.is_element() || in_di_namespace(node)) return;
  std::string id = node.id().empty() ? inherited_id : node.id();

  bool flagged_here = inside_flagged;
  if (node.name.namespace_uri == uri::camunda && !inside_flagged) {
    std::string qname = "camunda:" + node.name.local_name;
    if (todo_references(log, qname, id)) {
      flagged_here = true;
    } else {
      findings.push_back(ValidationFinding{
          Severity::Error, id.empty() ? std::nullopt : std::optional<std::string>(id),
          "residual element " + qname + " has no TODO entry"});
    }
  }
  if (!inside_flagged) {
    for (const XmlAttribute& a : node.attributes) {
      if (a.name.namespace_uri != uri::camunda) continue;
      std::string qname = "camunda:" + a.name.local_name;
      if (!todo_references(log, qname, id)) {
        findings.push_back(ValidationFinding{
            Severity::Error, id.empty() ? std::nullopt : std::optional<std::string>(id),
            "residual attribute " + qname + " on " + display_name(node.name) +
                " has no TODO entry"});
      }
    }
  }
  for (const XmlNode& c : node.children)
    check_camunda_residue(c, id, log, flagged_here, findings);
}

void check_zeebe_shape(const XmlNode& node, const XmlNode* parent,
                       std::vector<ValidationFinding>& findings) {
  if (!node.is_element()) return;
  if (node.name.namespace_uri == uri::zeebe) {
    bool placed_ok = parent != nullptr && (parent->is(uri::bpmn, "extensionElements") ||
                                           parent->name.namespace_uri == uri::zeebe);
    if (!placed_ok) {
      findings.push_back(ValidationFinding{
          Severity::Error, std::nullopt,
          display_name(node.name) + " must live inside bpmn:extensionElements"});
    }
    if (node.name.local_name == "taskDefinition") {
      const std::string* type = node.attr("", "type");
      if (!type || type->empty()) {
        findings.push_back(ValidationFinding{Severity::Error, std::nullopt,
                                             "zeebe:taskDefinition with empty type"});
      }
    }
    if (node.name.local_name == "loopCharacteristics") {
      const std::string* input = node.attr("", "inputCollection");
      if (!input || input->empty() || (*input)[0] != '=') {
        findings.push_back(
            ValidationFinding{Severity::Error, std::nullopt,
                              "zeebe:loopCharacteristics inputCollection must start with '='"});
      }
    }
  }
  for (const XmlNode& c : node.children) check_zeebe_shape(c, &node, findings);
}

void collect_ids(const XmlNode& node, std::set<std::string>& ids) {
  if (!node.is_element()) return;
  std::string id = node.id();
  if (!id.empty()) ids.insert(id);
  for (const XmlNode& c : node.children) collect_ids(c, ids);
}

std::string strip_prefix(const std::string& ref) {
  std::size_t colon = ref.find(':');
  return colon == std::string::npos ? ref : ref.substr(colon + 1);
}

void check_references(const XmlNode& node, const std::set<std::string>& ids,
                      std::vector<ValidationFinding>& findings) {
  if (!node.is_element()) return;

  static const std::set<std::string, std::less<>> kRefAttrs = {
      "sourceRef", "targetRef", "attachedToRef", "bpmnElement",
      "messageRef", "errorRef",  "signalRef",    "processRef",
      "default"};
  static const std::set<std::string, std::less<>> kRefTextElements = {
      "incoming", "outgoing", "flowNodeRef", "sourceRef", "targetRef"};

  for (const XmlAttribute& a : node.attributes) {
    if (!kRefAttrs.contains(a.name.local_name)) continue;
    if (a.value.empty()) continue;
    if (!ids.contains(strip_prefix(a.value))) {
      findings.push_back(ValidationFinding{
          Severity::Error, node.id().empty() ? std::nullopt : std::optional<std::string>(node.id()),
          "dangling reference " + a.name.local_name + "=\"" + a.value + "\" on " +
              display_name(node.name)});
    }
  }
  if (node.name.namespace_uri == uri::bpmn && kRefTextElements.contains(node.name.local_name) &&
      node.text && !node.text->empty()) {
    if (!ids.contains(strip_prefix(*node.text))) {
      findings.push_back(ValidationFinding{Severity::Error, std::nullopt,
                                           "dangling reference in " + display_name(node.name) +
                                               ": \"" + *node.text + "\""});
    }
  }
  for (const XmlNode& c : node.children) check_references(c, ids, findings);
}

} // namespace

std::vector<ValidationFinding> validate_c8(const BpmnDocument& doc,
                                           std::span<const LogEntry> log_entries) {
  std::vector<ValidationFinding> findings;

  check_camunda_residue(doc.root, {}, log_entries, false, findings);
  check_zeebe_shape(doc.root, nullptr, findings);

  std::set<std::string> ids;
  collect_ids(doc.root, ids);
  check_references(doc.root, ids, findings);

  if (uses_namespace(doc.root, uri::zeebe) && !doc.namespaces.declares(uri::zeebe)) {
    findings.push_back(ValidationFinding{Severity::Error, std::nullopt,
                                         "document uses zeebe content but does not declare the "
                                         "zeebe namespace"});
  }
  return findings;
}

std::vector<LogEntry> findings_to_entries(const std::vector<ValidationFinding>& findings) {
  std::vector<LogEntry> entries;
  entries.reserve(findings.size());
  for (const ValidationFinding& f : findings) {
    std::string detail = "validation: " + f.message;
    if (f.severity == Severity::Error) {
      entries.push_back(LogEntry::todo(std::move(detail), f.element_id));
    } else {
      entries.push_back(LogEntry::todo_optional(std::move(detail), f.element_id));
    }
  }
  return entries;
}

} // namespace c7to8
