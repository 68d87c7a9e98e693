// SPDX-License-Identifier: Apache-2.0
//
// Namespace-aware XML document model for BPMN 2.0 files.
//
// The model is a plain value tree: elements carry a resolved (namespace URI,
// local name) identity, ordered attributes, ordered children and optional
// character content. Prefixes are resolved at parse time and re-assigned from
// a fixed table at serialize time, so two documents that differ only in
// prefix choice or insignificant whitespace compare equal in canonical form.

#pragma once

#include <compare>
#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace c7to8 {

/// Well-known namespace URIs found in Camunda modeler output.
namespace uri {
inline constexpr std::string_view bpmn = "http://www.omg.org/spec/BPMN/20100524/MODEL";
inline constexpr std::string_view bpmndi = "http://www.omg.org/spec/BPMN/20100524/DI";
inline constexpr std::string_view dc = "http://www.omg.org/spec/DD/20100524/DC";
inline constexpr std::string_view di = "http://www.omg.org/spec/DD/20100524/DI";
inline constexpr std::string_view camunda = "http://camunda.org/schema/1.0/bpmn";
inline constexpr std::string_view zeebe = "http://camunda.org/schema/zeebe/1.0";
inline constexpr std::string_view modeler = "http://camunda.org/schema/modeler/1.0";
inline constexpr std::string_view xsi = "http://www.w3.org/2001/XMLSchema-instance";
inline constexpr std::string_view xml = "http://www.w3.org/XML/1998/namespace";
} // namespace uri

/// Qualified XML name. Equality ignores the prefix a document happened to use.
struct XmlName {
  std::string namespace_uri; // empty for unqualified names
  std::string local_name;    // non-empty NCName, never contains ':'

  auto operator<=>(const XmlName&) const = default;
  bool operator==(const XmlName&) const = default;
};

struct XmlAttribute {
  XmlName name;
  std::string value;
};

enum class NodeKind { Element, Comment };

/// One node of the document tree. Comments are kept in place among children
/// so they survive a parse/serialize round trip; their body lives in `text`.
struct XmlNode {
  NodeKind kind = NodeKind::Element;
  XmlName name;
  std::vector<XmlAttribute> attributes;
  std::vector<XmlNode> children;
  std::optional<std::string> text;

  bool is_element() const { return kind == NodeKind::Element; }
  bool is(std::string_view ns, std::string_view local) const {
    return is_element() && name.namespace_uri == ns && name.local_name == local;
  }

  const std::string* attr(std::string_view ns, std::string_view local) const;
  void set_attr(std::string_view ns, std::string_view local, std::string value);
  bool remove_attr(std::string_view ns, std::string_view local);

  XmlNode* first_child(std::string_view ns, std::string_view local);
  const XmlNode* first_child(std::string_view ns, std::string_view local) const;

  /// Shorthand for the `id` attribute; empty string when absent.
  std::string id() const {
    const std::string* v = attr("", "id");
    return v ? *v : std::string();
  }

  static XmlNode element(std::string_view ns, std::string_view local) {
    XmlNode n;
    n.name = XmlName{std::string(ns), std::string(local)};
    return n;
  }
};

/// Children matching `name` by namespace-aware equality, in document order.
std::vector<const XmlNode*> find_children(const XmlNode& node, const XmlName& name);
std::vector<XmlNode*> find_children(XmlNode& node, const XmlName& name);

/// Prefix bindings visible at document scope. Output documents always use the
/// fixed prefix set (bpmn, bpmndi, dc, di, camunda, zeebe, modeler, xsi).
struct NamespaceTable {
  std::map<std::string, std::string> bindings; // prefix -> URI
  std::optional<std::string> default_namespace;

  std::optional<std::string> prefix_for(std::string_view ns) const;
  bool declares(std::string_view ns) const;
};

/// A parsed BPMN file. The root is always `definitions` in the BPMN model
/// namespace; diagram-interchange subtrees ride along untouched.
struct BpmnDocument {
  XmlNode root;
  NamespaceTable namespaces;
  std::filesystem::path source_path;
  std::string xml_declaration; // raw declaration from the input, if any
};

class MalformedXml : public std::runtime_error {
public:
  MalformedXml(std::size_t line, std::size_t column, const std::string& detail);
  std::size_t line;
  std::size_t column;
};

class NotBpmn : public std::runtime_error {
public:
  explicit NotBpmn(const std::string& detail);
};

/// Parse a candidate XML document into a BpmnDocument.
///
/// Element order, attribute values, text content and comment positions are
/// kept; inter-element whitespace is not. DOCTYPE declarations are skipped
/// without being processed and undefined entities are rejected, so external
/// entity expansion cannot occur.
///
/// Throws MalformedXml when the bytes are not well-formed XML and NotBpmn
/// when the root element is not `definitions` in the BPMN model namespace.
BpmnDocument parse_bpmn(std::string_view bytes, std::filesystem::path source_path = {});

/// Serialize back to XML: UTF-8 declaration, a single root-level declaration
/// set covering every namespace used anywhere in the tree, fixed prefixes,
/// 2-space indentation. Re-parsing the result yields a tree canonically equal
/// to the input document.
std::string serialize_bpmn(const BpmnDocument& doc);

/// Canonical text form: URIs instead of prefixes, attributes sorted, text
/// trimmed. Two trees are considered equal when their canonical forms match.
std::string canonical_form(const XmlNode& node);
bool canonically_equal(const XmlNode& a, const XmlNode& b);

/// Deep scan: does any element or attribute in the subtree live in `ns`?
bool uses_namespace(const XmlNode& node, std::string_view ns);

/// Display name using the fixed prefix table, e.g. `bpmn:serviceTask`,
/// `camunda:assignee`. Unqualified names render as the bare local name.
std::string display_name(const XmlName& name);

} // namespace c7to8
