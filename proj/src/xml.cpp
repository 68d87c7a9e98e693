// SPDX-License-Identifier: Apache-2.0

#include "c7to8/xml.hpp"

#include <algorithm>
#include <array>
#include <cstdint>
#include <utility>

namespace c7to8 {

namespace {

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; }

bool is_name_start(char c) {
  return c == '_' || c == ':' || (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') ||
         static_cast<unsigned char>(c) >= 0x80;
}

bool is_name_char(char c) {
  return is_name_start(c) || c == '-' || c == '.' || (c >= '0' && c <= '9');
}

std::string trim(std::string_view s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && is_space(s[b])) ++b;
  while (e > b && is_space(s[e - 1])) --e;
  return std::string(s.substr(b, e - b));
}

void append_utf8(std::uint32_t cp, std::string& out) {
  if (cp <= 0x7F) {
    out.push_back(static_cast<char>(cp));
  } else if (cp <= 0x7FF) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp <= 0xFFFF) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

// ---------------------------------------------------------------------------
// Parser

struct RawAttribute {
  std::string qname;
  std::string value;
};

class Parser {
public:
  Parser(std::string_view input, std::filesystem::path source)
      : input_(input), source_(std::move(source)) {}

  BpmnDocument run() {
    skip_bom();
    BpmnDocument doc;
    doc.source_path = source_;
    doc.xml_declaration = read_declaration();

    // Prolog: comments and PIs before the root element are skipped; the root
    // element itself starts the tree.
    bool have_root = false;
    while (!eof()) {
      skip_ws();
      if (eof()) break;
      if (peek() != '<') fail("text content outside of the root element");
      if (try_consume("<!--")) {
        read_comment_body();
        continue;
      }
      if (try_consume("<?")) {
        skip_past("?>", "unterminated processing instruction");
        continue;
      }
      if (try_consume("<!DOCTYPE")) {
        skip_doctype();
        continue;
      }
      if (have_root) fail("multiple root elements");
      push_scope();
      doc.root = read_element();
      pop_scope();
      have_root = true;
    }
    if (!have_root) fail("no root element");

    if (!(doc.root.name.local_name == "definitions" && doc.root.name.namespace_uri == uri::bpmn)) {
      throw NotBpmn("root element is " + display_name(doc.root.name) +
                    ", expected definitions in " + std::string(uri::bpmn));
    }
    doc.namespaces = document_table_;
    return doc;
  }

private:
  [[noreturn]] void fail(const std::string& detail) const {
    throw MalformedXml(line_, col_, detail);
  }

  bool eof() const { return pos_ >= input_.size(); }
  char peek() const { return input_[pos_]; }

  char get() {
    char c = input_[pos_++];
    if (c == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    return c;
  }

  void skip_bom() {
    if (input_.size() >= 3 && input_.substr(0, 3) == "\xEF\xBB\xBF") pos_ = 3;
  }

  void skip_ws() {
    while (!eof() && is_space(peek())) get();
  }

  bool try_consume(std::string_view token) {
    if (input_.compare(pos_, token.size(), token) != 0) return false;
    for (std::size_t i = 0; i < token.size(); ++i) get();
    return true;
  }

  void expect(char c, const char* what) {
    if (eof() || peek() != c) fail(std::string("expected '") + c + "' " + what);
    get();
  }

  void skip_past(std::string_view end, const char* err) {
    std::size_t found = input_.find(end, pos_);
    if (found == std::string_view::npos) fail(err);
    while (pos_ < found + end.size()) get();
  }

  // DOCTYPE is skipped, not processed: no DTD handling, no entity definitions.
  void skip_doctype() {
    int brackets = 0;
    while (!eof()) {
      char c = get();
      if (c == '[') ++brackets;
      else if (c == ']') --brackets;
      else if (c == '>' && brackets == 0) return;
    }
    fail("unterminated DOCTYPE");
  }

  std::string read_declaration() {
    skip_ws();
    if (input_.compare(pos_, 5, "<?xml") != 0) return {};
    std::size_t start = pos_;
    std::size_t end = input_.find("?>", pos_);
    if (end == std::string_view::npos) fail("unterminated XML declaration");
    while (pos_ < end + 2) get();
    return std::string(input_.substr(start, end + 2 - start));
  }

  std::string read_name() {
    if (eof() || !is_name_start(peek())) fail("invalid name");
    std::string out;
    out.push_back(get());
    while (!eof() && is_name_char(peek())) out.push_back(get());
    return out;
  }

  std::string read_comment_body() {
    std::size_t end = input_.find("-->", pos_);
    if (end == std::string_view::npos) fail("unterminated comment");
    std::string body(input_.substr(pos_, end - pos_));
    while (pos_ < end + 3) get();
    return body;
  }

  std::string decode_entities(std::string_view raw) {
    std::string out;
    out.reserve(raw.size());
    for (std::size_t i = 0; i < raw.size();) {
      char c = raw[i];
      if (c != '&') {
        out.push_back(c);
        ++i;
        continue;
      }
      std::size_t semi = raw.find(';', i + 1);
      if (semi == std::string_view::npos) fail("unterminated entity reference");
      std::string_view ent = raw.substr(i + 1, semi - i - 1);
      if (ent == "lt") out.push_back('<');
      else if (ent == "gt") out.push_back('>');
      else if (ent == "amp") out.push_back('&');
      else if (ent == "apos") out.push_back('\'');
      else if (ent == "quot") out.push_back('"');
      else if (!ent.empty() && ent[0] == '#') {
        std::uint32_t cp = 0;
        bool ok = ent.size() > 1;
        if (ok && (ent[1] == 'x' || ent[1] == 'X')) {
          ok = ent.size() > 2;
          for (std::size_t k = 2; ok && k < ent.size(); ++k) {
            char h = ent[k];
            std::uint32_t v;
            if (h >= '0' && h <= '9') v = h - '0';
            else if (h >= 'a' && h <= 'f') v = 10 + h - 'a';
            else if (h >= 'A' && h <= 'F') v = 10 + h - 'A';
            else { ok = false; break; }
            cp = cp * 16 + v;
          }
        } else {
          for (std::size_t k = 1; ok && k < ent.size(); ++k) {
            if (ent[k] < '0' || ent[k] > '9') { ok = false; break; }
            cp = cp * 10 + static_cast<std::uint32_t>(ent[k] - '0');
          }
        }
        if (!ok || cp == 0 || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF))
          fail("invalid character reference");
        append_utf8(cp, out);
      } else {
        // Undefined entities are rejected rather than expanded.
        fail("undefined entity '&" + std::string(ent) + ";'");
      }
      i = semi + 1;
    }
    return out;
  }

  // --- namespace scopes ---

  void push_scope() { scopes_.push_back(scopes_.empty() ? Scope{} : scopes_.back()); }
  void pop_scope() { scopes_.pop_back(); }

  struct Scope {
    std::map<std::string, std::string> prefixes;
    std::string default_ns;
  };

  std::string resolve_prefix(const std::string& prefix) {
    if (prefix == "xml") return std::string(uri::xml);
    const Scope& s = scopes_.back();
    auto it = s.prefixes.find(prefix);
    if (it == s.prefixes.end()) fail("undeclared namespace prefix '" + prefix + "'");
    return it->second;
  }

  XmlName resolve(const std::string& qname, bool is_attribute) {
    std::size_t colon = qname.find(':');
    if (colon == std::string::npos) {
      // Unprefixed attributes are in no namespace; unprefixed elements take
      // the default namespace.
      if (is_attribute || scopes_.back().default_ns.empty())
        return XmlName{"", qname};
      return XmlName{scopes_.back().default_ns, qname};
    }
    std::string prefix = qname.substr(0, colon);
    std::string local = qname.substr(colon + 1);
    if (local.empty() || local.find(':') != std::string::npos) fail("invalid qualified name");
    return XmlName{resolve_prefix(prefix), local};
  }

  std::string read_attr_value() {
    skip_ws();
    expect('=', "after attribute name");
    skip_ws();
    if (eof() || (peek() != '"' && peek() != '\'')) fail("expected quoted attribute value");
    char quote = get();
    std::string raw;
    while (!eof() && peek() != quote) {
      if (peek() == '<') fail("'<' in attribute value");
      raw.push_back(get());
    }
    if (eof()) fail("unterminated attribute value");
    get();
    return decode_entities(raw);
  }

  XmlNode read_element() {
    // cursor sits on '<'
    expect('<', "at element start");
    std::string qname = read_name();

    std::vector<RawAttribute> raw_attrs;
    bool self_closing = false;
    for (;;) {
      skip_ws();
      if (eof()) fail("unterminated start tag");
      if (peek() == '/') {
        get();
        expect('>', "after '/' in empty element tag");
        self_closing = true;
        break;
      }
      if (peek() == '>') {
        get();
        break;
      }
      std::string aname = read_name();
      std::string avalue = read_attr_value();
      raw_attrs.push_back(RawAttribute{std::move(aname), std::move(avalue)});
    }

    // First pass: apply xmlns declarations to the current scope.
    Scope& scope = scopes_.back();
    for (const RawAttribute& a : raw_attrs) {
      if (a.qname == "xmlns") {
        scope.default_ns = a.value;
        if (!document_table_.default_namespace) document_table_.default_namespace = a.value;
      } else if (a.qname.rfind("xmlns:", 0) == 0) {
        std::string prefix = a.qname.substr(6);
        if (prefix.empty()) fail("empty namespace prefix declaration");
        scope.prefixes[prefix] = a.value;
        document_table_.bindings.emplace(prefix, a.value); // first binding wins
      }
    }

    XmlNode node;
    node.name = resolve(qname, false);
    for (RawAttribute& a : raw_attrs) {
      if (a.qname == "xmlns" || a.qname.rfind("xmlns:", 0) == 0) continue;
      XmlName an = resolve(a.qname, true);
      for (const XmlAttribute& existing : node.attributes)
        if (existing.name == an) fail("duplicate attribute " + display_name(an));
      node.attributes.push_back(XmlAttribute{std::move(an), std::move(a.value)});
    }

    if (self_closing) return node;

    std::string text;
    for (;;) {
      if (eof()) fail("unterminated element <" + qname + ">");
      if (peek() == '<') {
        if (try_consume("</")) {
          std::string end_name = read_name();
          if (end_name != qname)
            fail("mismatched end tag </" + end_name + ">, expected </" + qname + ">");
          skip_ws();
          expect('>', "after end tag name");
          break;
        }
        if (try_consume("<!--")) {
          XmlNode comment;
          comment.kind = NodeKind::Comment;
          comment.text = read_comment_body();
          node.children.push_back(std::move(comment));
          continue;
        }
        if (try_consume("<![CDATA[")) {
          std::size_t end = input_.find("]]>", pos_);
          if (end == std::string_view::npos) fail("unterminated CDATA section");
          text.append(input_.substr(pos_, end - pos_));
          while (pos_ < end + 3) get();
          continue;
        }
        if (try_consume("<?")) {
          skip_past("?>", "unterminated processing instruction");
          continue;
        }
        if (input_.compare(pos_, 2, "<!") == 0) fail("unsupported markup declaration");
        push_scope();
        node.children.push_back(read_element());
        pop_scope();
        continue;
      }
      std::string raw;
      while (!eof() && peek() != '<') raw.push_back(get());
      text += decode_entities(raw);
    }

    std::string trimmed = trim(text);
    if (!trimmed.empty()) node.text = std::move(trimmed);
    return node;
  }

  std::string_view input_;
  std::filesystem::path source_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t col_ = 1;
  std::vector<Scope> scopes_;
  NamespaceTable document_table_;
};

// ---------------------------------------------------------------------------
// Serializer

// Fixed output prefixes, declared in this order on the root element.
constexpr std::array<std::pair<std::string_view, std::string_view>, 8> kKnownPrefixes = {{
    {uri::bpmn, "bpmn"},
    {uri::bpmndi, "bpmndi"},
    {uri::dc, "dc"},
    {uri::di, "di"},
    {uri::camunda, "camunda"},
    {uri::zeebe, "zeebe"},
    {uri::modeler, "modeler"},
    {uri::xsi, "xsi"},
}};

void collect_uris(const XmlNode& node, std::vector<std::string>& out) {
  if (!node.is_element()) return;
  auto add = [&out](const std::string& ns) {
    if (ns.empty() || ns == uri::xml) return;
    if (std::find(out.begin(), out.end(), ns) == out.end()) out.push_back(ns);
  };
  add(node.name.namespace_uri);
  for (const XmlAttribute& a : node.attributes) add(a.name.namespace_uri);
  for (const XmlNode& c : node.children) collect_uris(c, out);
}

class PrefixMap {
public:
  explicit PrefixMap(const XmlNode& root) {
    std::vector<std::string> used;
    collect_uris(root, used);
    for (const auto& [ns, prefix] : kKnownPrefixes) {
      if (std::find(used.begin(), used.end(), std::string(ns)) != used.end())
        ordered_.emplace_back(std::string(ns), std::string(prefix));
    }
    std::size_t counter = 0;
    for (const std::string& ns : used) {
      if (lookup(ns).empty() && !is_known(ns))
        ordered_.emplace_back(ns, "ns" + std::to_string(counter++));
    }
  }

  std::string lookup(std::string_view ns) const {
    if (ns == uri::xml) return "xml";
    for (const auto& [u, p] : ordered_)
      if (u == ns) return p;
    return {};
  }

  const std::vector<std::pair<std::string, std::string>>& declarations() const {
    return ordered_;
  }

private:
  static bool is_known(std::string_view ns) {
    for (const auto& [u, p] : kKnownPrefixes)
      if (u == ns) return true;
    return false;
  }
  std::vector<std::pair<std::string, std::string>> ordered_;
};

void escape_text(std::string_view in, std::string& out) {
  for (char c : in) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      default: out.push_back(c);
    }
  }
}

void escape_attr(std::string_view in, std::string& out) {
  for (char c : in) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\n': out += "&#10;"; break;
      case '\t': out += "&#9;"; break;
      case '\r': out += "&#13;"; break;
      default: out.push_back(c);
    }
  }
}

std::string qualify(const XmlName& name, const PrefixMap& prefixes) {
  if (name.namespace_uri.empty()) return name.local_name;
  std::string prefix = prefixes.lookup(name.namespace_uri);
  if (prefix.empty()) return name.local_name;
  return prefix + ":" + name.local_name;
}

void write_node(const XmlNode& node, const PrefixMap& prefixes, int depth, bool is_root,
                std::string& out) {
  std::string indent(static_cast<std::size_t>(depth) * 2, ' ');
  if (node.kind == NodeKind::Comment) {
    out += indent;
    out += "<!--";
    out += node.text.value_or("");
    out += "-->\n";
    return;
  }

  out += indent;
  out += '<';
  std::string tag = qualify(node.name, prefixes);
  out += tag;
  if (is_root) {
    for (const auto& [ns, prefix] : prefixes.declarations()) {
      out += " xmlns:";
      out += prefix;
      out += "=\"";
      escape_attr(ns, out);
      out += '"';
    }
  }
  for (const XmlAttribute& a : node.attributes) {
    out += ' ';
    out += qualify(a.name, prefixes);
    out += "=\"";
    escape_attr(a.value, out);
    out += '"';
  }

  bool has_text = node.text.has_value() && !node.text->empty();
  if (node.children.empty() && !has_text) {
    out += "/>\n";
    return;
  }
  out += '>';
  if (has_text) escape_text(*node.text, out);
  if (!node.children.empty()) {
    out += '\n';
    for (const XmlNode& c : node.children) write_node(c, prefixes, depth + 1, false, out);
    out += indent;
  }
  out += "</";
  out += tag;
  out += ">\n";
}

void write_canonical(const XmlNode& node, std::string& out) {
  if (node.kind == NodeKind::Comment) {
    out += "<!--";
    out += node.text.value_or("");
    out += "-->";
    return;
  }
  out += "<{";
  out += node.name.namespace_uri;
  out += '}';
  out += node.name.local_name;
  std::vector<const XmlAttribute*> attrs;
  attrs.reserve(node.attributes.size());
  for (const XmlAttribute& a : node.attributes) attrs.push_back(&a);
  std::sort(attrs.begin(), attrs.end(),
            [](const XmlAttribute* a, const XmlAttribute* b) { return a->name < b->name; });
  for (const XmlAttribute* a : attrs) {
    out += " {";
    out += a->name.namespace_uri;
    out += '}';
    out += a->name.local_name;
    out += "=\"";
    escape_attr(a->value, out);
    out += '"';
  }
  out += '>';
  if (node.text) {
    std::string t = trim(*node.text);
    if (!t.empty()) escape_text(t, out);
  }
  for (const XmlNode& c : node.children) write_canonical(c, out);
  out += "</>";
}

} // namespace

// ---------------------------------------------------------------------------

MalformedXml::MalformedXml(std::size_t line_, std::size_t column_, const std::string& detail)
    : std::runtime_error("malformed XML at " + std::to_string(line_) + ":" +
                         std::to_string(column_) + ": " + detail),
      line(line_),
      column(column_) {}

NotBpmn::NotBpmn(const std::string& detail)
    : std::runtime_error("not a BPMN document: " + detail) {}

const std::string* XmlNode::attr(std::string_view ns, std::string_view local) const {
  for (const XmlAttribute& a : attributes)
    if (a.name.namespace_uri == ns && a.name.local_name == local) return &a.value;
  return nullptr;
}

void XmlNode::set_attr(std::string_view ns, std::string_view local, std::string value) {
  for (XmlAttribute& a : attributes) {
    if (a.name.namespace_uri == ns && a.name.local_name == local) {
      a.value = std::move(value);
      return;
    }
  }
  attributes.push_back(
      XmlAttribute{XmlName{std::string(ns), std::string(local)}, std::move(value)});
}

bool XmlNode::remove_attr(std::string_view ns, std::string_view local) {
  for (auto it = attributes.begin(); it != attributes.end(); ++it) {
    if (it->name.namespace_uri == ns && it->name.local_name == local) {
      attributes.erase(it);
      return true;
    }
  }
  return false;
}

XmlNode* XmlNode::first_child(std::string_view ns, std::string_view local) {
  for (XmlNode& c : children)
    if (c.is(ns, local)) return &c;
  return nullptr;
}

const XmlNode* XmlNode::first_child(std::string_view ns, std::string_view local) const {
  for (const XmlNode& c : children)
    if (c.is(ns, local)) return &c;
  return nullptr;
}

std::vector<const XmlNode*> find_children(const XmlNode& node, const XmlName& name) {
  std::vector<const XmlNode*> out;
  for (const XmlNode& c : node.children)
    if (c.is_element() && c.name == name) out.push_back(&c);
  return out;
}

std::vector<XmlNode*> find_children(XmlNode& node, const XmlName& name) {
  std::vector<XmlNode*> out;
  for (XmlNode& c : node.children)
    if (c.is_element() && c.name == name) out.push_back(&c);
  return out;
}

std::optional<std::string> NamespaceTable::prefix_for(std::string_view ns) const {
  for (const auto& [prefix, u] : bindings)
    if (u == ns) return prefix;
  return std::nullopt;
}

bool NamespaceTable::declares(std::string_view ns) const {
  if (default_namespace && *default_namespace == ns) return true;
  return prefix_for(ns).has_value();
}

BpmnDocument parse_bpmn(std::string_view bytes, std::filesystem::path source_path) {
  Parser parser(bytes, std::move(source_path));
  return parser.run();
}

std::string serialize_bpmn(const BpmnDocument& doc) {
  std::string out = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  PrefixMap prefixes(doc.root);
  write_node(doc.root, prefixes, 0, true, out);
  return out;
}

std::string canonical_form(const XmlNode& node) {
  std::string out;
  write_canonical(node, out);
  return out;
}

bool canonically_equal(const XmlNode& a, const XmlNode& b) {
  return canonical_form(a) == canonical_form(b);
}

bool uses_namespace(const XmlNode& node, std::string_view ns) {
  if (!node.is_element()) return false;
  if (node.name.namespace_uri == ns) return true;
  for (const XmlAttribute& a : node.attributes)
    if (a.name.namespace_uri == ns) return true;
  for (const XmlNode& c : node.children)
    if (uses_namespace(c, ns)) return true;
  return false;
}

std::string display_name(const XmlName& name) {
  for (const auto& [ns, prefix] : kKnownPrefixes) {
    if (name.namespace_uri == ns) {
      return std::string(prefix) + ":" + name.local_name;
    }
  }
  return name.local_name;
}

} // namespace c7to8
