// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace csvg {

struct SourcePos {
  int line = 0;  // 1-based
  int col = 0;   // 1-based
};

struct Diagnostic {
  enum class Severity { Error, Warning, Note };
  Severity severity = Severity::Error;
  SourcePos pos;
  std::string message;

  std::string render() const;  // "line:col: severity: message"
};

bool has_errors(const std::vector<Diagnostic> &diags);

class ParseError : public std::runtime_error {
 public:
  ParseError(SourcePos pos, const std::string &message);
  SourcePos pos() const { return pos_; }

 private:
  SourcePos pos_;
};

// Argument values of the DSL: "text", ["a", "b"], VAR, {VAR_A, VAR_B}.
struct Value {
  enum class Kind { StringLit, StringList, VarRef, VarSet };
  Kind kind = Kind::StringLit;
  std::string str;                 // StringLit / VarRef
  std::vector<std::string> items;  // StringList / VarSet, source order
  SourcePos pos;

  bool operator==(const Value &o) const {
    return kind == o.kind && str == o.str && items == o.items;
  }

  static Value string_lit(std::string s);
  static Value string_list(std::vector<std::string> items);
  static Value var_ref(std::string name);
  static Value var_set(std::vector<std::string> names);
};

struct Call {
  std::string func_name;
  std::vector<std::pair<std::string, Value>> kwargs;  // source order, unique keys
  // The single bare-identifier positional form, allowed as the sole argument:
  // SET_TARGET(CHAIR_0).
  std::optional<Value> positional;

  bool operator==(const Call &o) const {
    return func_name == o.func_name && kwargs == o.kwargs && positional == o.positional;
  }
};

struct ProgramStmt {
  std::optional<std::string> assign_name;  // NAME = CALL(...) when present
  Call call;
  int source_line = 0;

  bool operator==(const ProgramStmt &o) const {
    return assign_name == o.assign_name && call == o.call;
  }
};

// Parses program text into statements. Grammar errors throw ParseError with a
// 1-based line:col position. Comments (#) and blank lines are skipped; calls
// may continue across newlines inside parentheses or after '=' or ','.
std::vector<ProgramStmt> parse(std::string_view text);

// Canonical text form; parse(render(p)) == p.
std::string render(const std::vector<ProgramStmt> &stmts);

}  // namespace csvg
