// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "c7to8/xml.hpp"

using namespace c7to8;

namespace {

std::string fixture(const std::string& name) {
  std::ifstream in(std::filesystem::path(C7TO8_FIXTURE_DIR) / name, std::ios::binary);
  REQUIRE(in);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// Independent structural comparison used as the oracle for serializer tests;
// deliberately not built on canonical_form.
bool struct_equal(const XmlNode& a, const XmlNode& b) {
  if (a.kind != b.kind) return false;
  if (a.kind == NodeKind::Comment) return a.text == b.text;
  if (a.name != b.name) return false;
  auto sorted_attrs = [](const XmlNode& n) {
    auto attrs = n.attributes;
    std::sort(attrs.begin(), attrs.end(),
              [](const XmlAttribute& x, const XmlAttribute& y) { return x.name < y.name; });
    return attrs;
  };
  auto aa = sorted_attrs(a);
  auto ba = sorted_attrs(b);
  if (aa.size() != ba.size()) return false;
  for (std::size_t i = 0; i < aa.size(); ++i)
    if (aa[i].name != ba[i].name || aa[i].value != ba[i].value) return false;
  auto text_of = [](const XmlNode& n) {
    if (!n.text) return std::string();
    auto t = *n.text;
    std::size_t b1 = t.find_first_not_of(" \t\r\n");
    if (b1 == std::string::npos) return std::string();
    std::size_t e1 = t.find_last_not_of(" \t\r\n");
    return t.substr(b1, e1 - b1 + 1);
  };
  if (text_of(a) != text_of(b)) return false;
  if (a.children.size() != b.children.size()) return false;
  for (std::size_t i = 0; i < a.children.size(); ++i)
    if (!struct_equal(a.children[i], b.children[i])) return false;
  return true;
}

constexpr const char* kMinimal =
    "<bpmn:definitions xmlns:bpmn=\"http://www.omg.org/spec/BPMN/20100524/MODEL\">"
    "<bpmn:process id=\"P\"/></bpmn:definitions>";

} // namespace

TEST_CASE("minimal document parses") {
  BpmnDocument doc = parse_bpmn(kMinimal);
  CHECK(doc.root.name.local_name == "definitions");
  CHECK(doc.root.name.namespace_uri == uri::bpmn);
  REQUIRE(doc.root.children.size() == 1);
  const XmlNode& process = doc.root.children[0];
  CHECK(process.is(uri::bpmn, "process"));
  CHECK(process.id() == "P");
}

TEST_CASE("service task fragment resolves the camunda attribute namespace") {
  std::string xml =
      "<bpmn:definitions xmlns:bpmn=\"http://www.omg.org/spec/BPMN/20100524/MODEL\" "
      "xmlns:camunda=\"http://camunda.org/schema/1.0/bpmn\">"
      "<bpmn:process id=\"P\">"
      "<bpmn:serviceTask id=\"Service-Task-2\" name=\"DelegateExpression\" "
      "camunda:delegateExpression=\"${SomeDelegateExpression}\"></bpmn:serviceTask>"
      "</bpmn:process></bpmn:definitions>";
  BpmnDocument doc = parse_bpmn(xml);
  const XmlNode* task = doc.root.children[0].first_child(uri::bpmn, "serviceTask");
  REQUIRE(task != nullptr);
  const std::string* v = task->attr(uri::camunda, "delegateExpression");
  REQUIRE(v != nullptr);
  CHECK(*v == "${SomeDelegateExpression}");
}

TEST_CASE("truncated input is malformed") {
  CHECK_THROWS_AS(parse_bpmn("<bpmn:definitions xmlns:bpmn=\"x\"><bpmn:proc"), MalformedXml);
  CHECK_THROWS_AS(parse_bpmn(""), MalformedXml);
  CHECK_THROWS_AS(parse_bpmn("<a>&bad;</a>"), MalformedXml);
  CHECK_THROWS_AS(parse_bpmn("<a xmlns=\"u\"><b></a>"), MalformedXml);
  CHECK_THROWS_AS(parse_bpmn("<p:a/>"), MalformedXml); // undeclared prefix
}

TEST_CASE("non-definitions root is rejected") {
  CHECK_THROWS_AS(parse_bpmn("<other/>"), NotBpmn);
  CHECK_THROWS_AS(parse_bpmn("<definitions/>"), NotBpmn); // missing namespace
}

TEST_CASE("duplicate attributes are rejected") {
  std::string xml =
      "<bpmn:definitions xmlns:bpmn=\"http://www.omg.org/spec/BPMN/20100524/MODEL\" "
      "id=\"a\" id=\"b\"/>";
  CHECK_THROWS_AS(parse_bpmn(xml), MalformedXml);
}

TEST_CASE("entities and cdata decode; doctype is skipped unprocessed") {
  std::string xml =
      "<?xml version=\"1.0\"?><!DOCTYPE definitions [<!ELEMENT definitions ANY>]>"
      "<bpmn:definitions xmlns:bpmn=\"http://www.omg.org/spec/BPMN/20100524/MODEL\">"
      "<bpmn:process id=\"P\" name=\"a &amp; b &#65;\">"
      "<bpmn:documentation><![CDATA[x < y]]></bpmn:documentation>"
      "</bpmn:process></bpmn:definitions>";
  BpmnDocument doc = parse_bpmn(xml);
  const XmlNode& process = doc.root.children[0];
  CHECK(*process.attr("", "name") == "a & b A");
  CHECK(process.children[0].text.value() == "x < y");
}

TEST_CASE("find_children is namespace-aware and ordered") {
  std::string xml =
      "<bpmn:definitions xmlns:bpmn=\"http://www.omg.org/spec/BPMN/20100524/MODEL\" "
      "xmlns:other=\"urn:other\">"
      "<bpmn:process id=\"a\"/><other:process id=\"x\"/><bpmn:process id=\"b\"/>"
      "</bpmn:definitions>";
  BpmnDocument doc = parse_bpmn(xml);
  auto hits = find_children(doc.root, XmlName{std::string(uri::bpmn), "process"});
  REQUIRE(hits.size() == 2);
  CHECK(hits[0]->id() == "a");
  CHECK(hits[1]->id() == "b");
  CHECK(find_children(doc.root, XmlName{"urn:unused", "process"}).empty());
}

TEST_CASE("round-trip: parse(serialize(parse(x))) is structurally identical") {
  for (const char* name : {"service_tasks.bpmn", "passthrough_large.bpmn", "message_catch.bpmn"}) {
    CAPTURE(name);
    BpmnDocument doc = parse_bpmn(fixture(name));
    std::string serialized = serialize_bpmn(doc);
    BpmnDocument again = parse_bpmn(serialized);
    CHECK(struct_equal(doc.root, again.root));
    CHECK(canonically_equal(doc.root, again.root));
  }
}

TEST_CASE("serializer declares each used namespace exactly once at the root") {
  // zeebe only appears on one nested attribute.
  std::string xml =
      "<bpmn:definitions xmlns:bpmn=\"http://www.omg.org/spec/BPMN/20100524/MODEL\" "
      "xmlns:zb=\"http://camunda.org/schema/zeebe/1.0\">"
      "<bpmn:process id=\"P\"><bpmn:task id=\"T\" zb:marker=\"1\"/></bpmn:process>"
      "</bpmn:definitions>";
  std::string out = serialize_bpmn(parse_bpmn(xml));

  std::size_t first = out.find("http://camunda.org/schema/zeebe/1.0");
  REQUIRE(first != std::string::npos);
  CHECK(out.find("http://camunda.org/schema/zeebe/1.0", first + 1) == std::string::npos);

  BpmnDocument again = parse_bpmn(out);
  CHECK(again.namespaces.declares(uri::zeebe));
  CHECK(*again.namespaces.prefix_for(uri::zeebe) == "zeebe"); // fixed prefix, not the input's
}

TEST_CASE("comments survive in place") {
  std::string xml =
      "<bpmn:definitions xmlns:bpmn=\"http://www.omg.org/spec/BPMN/20100524/MODEL\">"
      "<!-- first --><bpmn:process id=\"P\"/><!-- second -->"
      "</bpmn:definitions>";
  BpmnDocument doc = parse_bpmn(xml);
  REQUIRE(doc.root.children.size() == 3);
  CHECK(doc.root.children[0].kind == NodeKind::Comment);
  CHECK(doc.root.children[2].kind == NodeKind::Comment);
  BpmnDocument again = parse_bpmn(serialize_bpmn(doc));
  REQUIRE(again.root.children.size() == 3);
  CHECK(again.root.children[0].text.value() == " first ");
}

TEST_CASE("DI subtree round-trips canonically") {
  BpmnDocument doc = parse_bpmn(fixture("passthrough_large.bpmn"));
  const XmlNode* diagram = doc.root.first_child(uri::bpmndi, "BPMNDiagram");
  REQUIRE(diagram != nullptr);
  BpmnDocument again = parse_bpmn(serialize_bpmn(doc));
  const XmlNode* diagram2 = again.root.first_child(uri::bpmndi, "BPMNDiagram");
  REQUIRE(diagram2 != nullptr);
  CHECK(struct_equal(*diagram, *diagram2));
}

TEST_CASE("canonical form ignores prefix and attribute order") {
  std::string a =
      "<bpmn:definitions xmlns:bpmn=\"http://www.omg.org/spec/BPMN/20100524/MODEL\">"
      "<bpmn:task id=\"T\" name=\"n\"/></bpmn:definitions>";
  std::string b =
      "<d:definitions xmlns:d=\"http://www.omg.org/spec/BPMN/20100524/MODEL\">"
      "<d:task name=\"n\" id=\"T\"/></d:definitions>";
  CHECK(canonically_equal(parse_bpmn(a).root, parse_bpmn(b).root));
}

TEST_CASE("default namespace applies to elements, not attributes") {
  std::string xml =
      "<definitions xmlns=\"http://www.omg.org/spec/BPMN/20100524/MODEL\">"
      "<process id=\"P\"/></definitions>";
  BpmnDocument doc = parse_bpmn(xml);
  CHECK(doc.root.name.namespace_uri == uri::bpmn);
  const XmlNode& process = doc.root.children[0];
  CHECK(process.name.namespace_uri == uri::bpmn);
  CHECK(process.attr("", "id") != nullptr);
}

namespace {

// Random-tree generator for the serialize/parse round-trip property. Values
// exercise the escaping paths (quotes, angle brackets, ampersands, newlines).
struct TreeGen {
  std::mt19937 rng{20260808};

  std::string value() {
    static const char chars[] =
        "abcXYZ 0123456789<>&\"'\n\t${}=;#\xC3\xA9"; // includes a UTF-8 e-acute
    std::uniform_int_distribution<std::size_t> len(0, 20);
    std::uniform_int_distribution<std::size_t> pick(0, sizeof(chars) - 2);
    std::string out;
    std::size_t n = len(rng);
    for (std::size_t i = 0; i < n; ++i) out.push_back(chars[pick(rng)]);
    return out;
  }

  std::string text() {
    // leading/trailing whitespace is insignificant by contract; keep it out
    std::string t = value();
    std::size_t b = t.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "x";
    std::size_t e = t.find_last_not_of(" \t\r\n");
    return t.substr(b, e - b + 1);
  }

  XmlNode node(int depth) {
    static const char* locals[] = {"task", "userTask", "extensionElements", "documentation",
                                   "sequenceFlow", "incoming"};
    static const char* spaces[] = {"http://www.omg.org/spec/BPMN/20100524/MODEL",
                                   "http://camunda.org/schema/1.0/bpmn",
                                   "http://camunda.org/schema/zeebe/1.0", "urn:custom:space"};
    std::uniform_int_distribution<std::size_t> lp(0, 5);
    std::uniform_int_distribution<std::size_t> sp(0, 3);
    std::uniform_int_distribution<int> nattrs(0, 3);
    std::uniform_int_distribution<int> nkids(0, depth > 0 ? 3 : 0);
    std::uniform_int_distribution<int> coin(0, 3);

    XmlNode n = XmlNode::element(spaces[sp(rng)], locals[lp(rng)]);
    int attrs = nattrs(rng);
    for (int i = 0; i < attrs; ++i) {
      // unique names by index; values arbitrary
      n.set_attr(i % 2 == 0 ? "" : spaces[sp(rng)], "attr" + std::to_string(i), value());
    }
    if (coin(rng) == 0) n.text = text();
    int kids = nkids(rng);
    for (int k = 0; k < kids; ++k) {
      if (coin(rng) == 0) {
        XmlNode comment;
        comment.kind = NodeKind::Comment;
        comment.text = "note " + std::to_string(k); // no double hyphens
        n.children.push_back(std::move(comment));
      } else {
        n.children.push_back(node(depth - 1));
      }
    }
    return n;
  }
};

} // namespace

TEST_CASE("property: arbitrary trees survive serialize -> parse structurally") {
  TreeGen gen;
  for (int i = 0; i < 150; ++i) {
    BpmnDocument doc;
    doc.root = XmlNode::element(uri::bpmn, "definitions");
    doc.root.set_attr("", "id", "D" + std::to_string(i));
    std::uniform_int_distribution<int> nkids(1, 4);
    int kids = nkids(gen.rng);
    for (int k = 0; k < kids; ++k) doc.root.children.push_back(gen.node(3));

    std::string bytes = serialize_bpmn(doc);
    CAPTURE(i);
    BpmnDocument again = parse_bpmn(bytes);
    REQUIRE(struct_equal(doc.root, again.root));
    REQUIRE(canonically_equal(doc.root, again.root));
  }
}

TEST_CASE("fuzz: mutated documents never crash the parser") {
  std::string base = fixture("service_tasks.bpmn");
  std::mt19937 rng(99);
  std::uniform_int_distribution<std::size_t> pos(0, base.size() - 1);
  std::uniform_int_distribution<int> byte(0, 255);
  std::uniform_int_distribution<int> mode(0, 2);
  for (int i = 0; i < 400; ++i) {
    std::string mutated = base;
    switch (mode(rng)) {
      case 0: mutated[pos(rng)] = static_cast<char>(byte(rng)); break;
      case 1: mutated.erase(pos(rng), 1); break;
      case 2: mutated.insert(pos(rng), 1, static_cast<char>(byte(rng))); break;
    }
    try {
      BpmnDocument doc = parse_bpmn(mutated);
      (void)serialize_bpmn(doc); // if it parsed, it must serialize
    } catch (const MalformedXml&) {
    } catch (const NotBpmn&) {
    }
  }
  CHECK(true); // reaching here means no crash, no unexpected exception type
}
