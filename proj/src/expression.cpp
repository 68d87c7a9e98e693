// SPDX-License-Identifier: Apache-2.0

#include "c7to8/expression.hpp"

#include <cctype>
#include <optional>

namespace c7to8 {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  std::size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

// Returns the body of `expr` when it is exactly one balanced ${...} wrapper
// covering the whole (trimmed) string, nullopt otherwise.
std::optional<std::string> single_wrapper_body(const std::string& trimmed) {
  if (trimmed.size() < 3 || trimmed.rfind("${", 0) != 0) return std::nullopt;
  int depth = 1;
  for (std::size_t i = 2; i < trimmed.size(); ++i) {
    char c = trimmed[i];
    if (c == '{') ++depth;
    else if (c == '}') {
      --depth;
      if (depth == 0) {
        if (i + 1 != trimmed.size()) return std::nullopt; // trailing text
        return trimmed.substr(2, i - 2);
      }
    }
  }
  return std::nullopt; // unbalanced
}

enum class TokKind { Ident, Number, String, Op, LParen, RParen, Dot, Bang };

struct Token {
  TokKind kind;
  std::string text; // for Op: the FEEL spelling
};

bool ident_start(char c) {
  return c == '_' || c == '$' || std::isalpha(static_cast<unsigned char>(c));
}
bool ident_char(char c) { return ident_start(c) || std::isdigit(static_cast<unsigned char>(c)); }

// Tokenize a JUEL body, translating operators to FEEL as we go. Returns false
// with a note when a construct outside the supported subset shows up.
bool tokenize(const std::string& body, std::vector<Token>& out, std::string& note) {
  std::size_t i = 0;
  const std::size_t n = body.size();
  while (i < n) {
    char c = body[i];
    if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
      ++i;
      continue;
    }
    if (ident_start(c)) {
      std::size_t start = i;
      while (i < n && ident_char(body[i])) ++i;
      out.push_back(Token{TokKind::Ident, body.substr(start, i - start)});
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t start = i;
      while (i < n && (std::isdigit(static_cast<unsigned char>(body[i])) || body[i] == '.')) ++i;
      out.push_back(Token{TokKind::Number, body.substr(start, i - start)});
      continue;
    }
    if (c == '\'' || c == '"') {
      char quote = c;
      std::size_t start = ++i;
      while (i < n && body[i] != quote) ++i;
      if (i >= n) {
        note = "unterminated string literal";
        return false;
      }
      std::string content = body.substr(start, i - start);
      ++i;
      // FEEL strings are double-quoted; single-quoted JUEL literals convert
      // mechanically unless they embed a double quote.
      if (quote == '\'' && content.find('"') != std::string::npos) {
        note = "single-quoted string containing a double quote";
        return false;
      }
      out.push_back(Token{TokKind::String, "\"" + content + "\""});
      continue;
    }
    auto two = [&](const char* pat) { return i + 1 < n && body[i] == pat[0] && body[i + 1] == pat[1]; };
    if (two("==")) { out.push_back(Token{TokKind::Op, "="}); i += 2; continue; }
    if (two("!=")) { out.push_back(Token{TokKind::Op, "!="}); i += 2; continue; }
    if (two("&&")) { out.push_back(Token{TokKind::Op, "and"}); i += 2; continue; }
    if (two("||")) { out.push_back(Token{TokKind::Op, "or"}); i += 2; continue; }
    if (two("<=")) { out.push_back(Token{TokKind::Op, "<="}); i += 2; continue; }
    if (two(">=")) { out.push_back(Token{TokKind::Op, ">="}); i += 2; continue; }
    switch (c) {
      case '<': out.push_back(Token{TokKind::Op, "<"}); ++i; continue;
      case '>': out.push_back(Token{TokKind::Op, ">"}); ++i; continue;
      case '(': out.push_back(Token{TokKind::LParen, "("}); ++i; continue;
      case ')': out.push_back(Token{TokKind::RParen, ")"}); ++i; continue;
      case '.': out.push_back(Token{TokKind::Dot, "."}); ++i; continue;
      case '!': out.push_back(Token{TokKind::Bang, "!"}); ++i; continue;
      default:
        note = std::string("unsupported character '") + c + "' in expression";
        return false;
    }
  }

  // JUEL word operators gt/lt/ge/le become their symbol form when they sit in
  // operator position (between two operands).
  auto is_operand_end = [](const Token& t) {
    return t.kind == TokKind::Ident || t.kind == TokKind::Number || t.kind == TokKind::String ||
           t.kind == TokKind::RParen;
  };
  auto is_operand_start = [](const Token& t) {
    return t.kind == TokKind::Ident || t.kind == TokKind::Number || t.kind == TokKind::String ||
           t.kind == TokKind::LParen || t.kind == TokKind::Bang;
  };
  for (std::size_t k = 0; k + 1 < out.size(); ++k) {
    Token& t = out[k];
    if (t.kind != TokKind::Ident) continue;
    std::string mapped;
    if (t.text == "gt") mapped = ">";
    else if (t.text == "lt") mapped = "<";
    else if (t.text == "ge") mapped = ">=";
    else if (t.text == "le") mapped = "<=";
    else continue;
    if (k > 0 && is_operand_end(out[k - 1]) && is_operand_start(out[k + 1])) {
      t.kind = TokKind::Op;
      t.text = mapped;
    }
  }
  return true;
}

// Grammar check + rendering. Supported shape:
//   expr    := operand (op operand)*
//   operand := '!'? primary
//   primary := ident ('.' ident)* | number | string | '(' expr ')'
// Method calls (ident followed by '(') are out of scope on purpose.
class Renderer {
public:
  Renderer(const std::vector<Token>& tokens) : toks_(tokens) {}

  bool render(std::string& out, std::string& note) {
    std::string r;
    if (!expr(r, note)) return false;
    if (pos_ != toks_.size()) {
      note = "unexpected trailing tokens";
      return false;
    }
    out = std::move(r);
    return true;
  }

private:
  const Token* peek() const { return pos_ < toks_.size() ? &toks_[pos_] : nullptr; }
  const Token& take() { return toks_[pos_++]; }

  bool expr(std::string& out, std::string& note) {
    if (!operand(out, note)) return false;
    while (const Token* t = peek()) {
      if (t->kind != TokKind::Op) break;
      std::string op = take().text;
      std::string rhs;
      if (!operand(rhs, note)) return false;
      out += ' ';
      out += op;
      out += ' ';
      out += rhs;
    }
    return true;
  }

  bool operand(std::string& out, std::string& note) {
    const Token* t = peek();
    if (!t) {
      note = "expression ends where a value was expected";
      return false;
    }
    if (t->kind == TokKind::Bang) {
      take();
      std::string inner;
      const Token* next = peek();
      if (next && next->kind == TokKind::LParen) {
        if (!group(inner, note)) return false;
        out = "not" + inner;
        return true;
      }
      if (!primary(inner, note)) return false;
      out = "not(" + inner + ")";
      return true;
    }
    return primary(out, note);
  }

  bool primary(std::string& out, std::string& note) {
    const Token* t = peek();
    if (!t) {
      note = "expression ends where a value was expected";
      return false;
    }
    if (t->kind == TokKind::LParen) return group(out, note);
    if (t->kind == TokKind::Number || t->kind == TokKind::String) {
      out = take().text;
      return true;
    }
    if (t->kind == TokKind::Ident) {
      out = take().text;
      while (const Token* d = peek()) {
        if (d->kind == TokKind::Dot) {
          take();
          const Token* name = peek();
          if (!name || name->kind != TokKind::Ident) {
            note = "dangling '.' in property access";
            return false;
          }
          out += '.';
          out += take().text;
        } else if (d->kind == TokKind::LParen) {
          note = "method call has no mechanical FEEL equivalent";
          return false;
        } else {
          break;
        }
      }
      return true;
    }
    note = "unsupported construct in expression";
    return false;
  }

  bool group(std::string& out, std::string& note) {
    take(); // '('
    std::string inner;
    if (!expr(inner, note)) return false;
    const Token* t = peek();
    if (!t || t->kind != TokKind::RParen) {
      note = "unbalanced parentheses";
      return false;
    }
    take();
    out = "(" + inner + ")";
    return true;
  }

  const std::vector<Token>& toks_;
  std::size_t pos_ = 0;
};

ExpressionRewrite unchanged(const std::string& expr, std::string note) {
  ExpressionRewrite r;
  r.original = expr;
  r.rewritten = expr;
  r.confident = false;
  r.notes.push_back(std::move(note));
  return r;
}

} // namespace

ExpressionRewrite juel_to_feel(const std::string& expr) {
  std::string trimmed = trim(expr);
  if (trimmed.find("${") == std::string::npos) {
    return ExpressionRewrite{expr, expr, true, {}};
  }

  std::optional<std::string> body = single_wrapper_body(trimmed);
  if (!body) {
    return unchanged(expr, "mixed literal/interpolation or multiple interpolations");
  }
  if (body->find("${") != std::string::npos) {
    return unchanged(expr, "nested interpolation");
  }

  std::vector<Token> tokens;
  std::string note;
  if (!tokenize(*body, tokens, note)) return unchanged(expr, note);
  if (tokens.empty()) return unchanged(expr, "empty expression body");

  Renderer renderer(tokens);
  std::string rendered;
  if (!renderer.render(rendered, note)) return unchanged(expr, note);

  return ExpressionRewrite{expr, "=" + rendered, true, {}};
}

std::string unwrap_interpolation(const std::string& expr) {
  std::string trimmed = trim(expr);
  std::optional<std::string> body = single_wrapper_body(trimmed);
  // Bodies that still contain `${` stay wrapped so repeated unwrapping is a
  // fixed point.
  if (!body || body->find("${") != std::string::npos) return trimmed;
  return trim(*body);
}

bool is_interpolation(const std::string& expr) {
  return single_wrapper_body(trim(expr)).has_value();
}

} // namespace c7to8
