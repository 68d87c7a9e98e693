// SPDX-License-Identifier: Apache-2.0
//
// Camunda 7 expressions are JUEL, written `${...}`; Camunda 8 expressions are
// FEEL, written with a leading `=`. Translation is deliberately conservative:
// only constructs with a known-safe FEEL equivalent are rewritten, everything
// else is returned untouched and flagged so the caller can emit a TODO.

#pragma once

#include <string>
#include <vector>

namespace c7to8 {

struct ExpressionRewrite {
  std::string original;
  std::string rewritten;
  bool confident = false;          // true when the translation is mechanical and known-safe
  std::vector<std::string> notes;  // reasons confidence is false
};

/// Translate a raw Camunda 7 attribute or text value.
///
/// A value without `${` passes through unchanged. A value that is exactly one
/// `${body}` wrapper is rewritten to `=` + translated body when the body uses
/// only identifiers, literals, `.` property access, the supported
/// comparison/logical operators and parentheses. Anything else (method calls,
/// arithmetic, ternaries, mixed literal/interpolation text, nesting) comes
/// back unchanged with confident == false and an explanatory note.
ExpressionRewrite juel_to_feel(const std::string& expr);

/// Strip a single `${...}` wrapper: `${collection}` -> `collection`.
/// Values that are not exactly one wrapper are returned trimmed but unchanged;
/// the function is idempotent.
std::string unwrap_interpolation(const std::string& expr);

/// True when the trimmed value is exactly one `${...}` wrapper.
bool is_interpolation(const std::string& expr);

} // namespace c7to8
