// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "csvg/geometry.hpp"
#include "csvg/program.hpp"

namespace csvg {

enum class Polarity { Normal, Negative };

struct CspVariable {
  std::string name;
  std::vector<std::string> label_set;  // normalized, deduplicated, source order
  Polarity polarity = Polarity::Normal;

  bool operator==(const CspVariable &o) const {
    return name == o.name && label_set == o.label_set && polarity == o.polarity;
  }
};

struct CspConstraint {
  RelationKind kind = RelationKind::Near;
  std::string target;                    // variable name
  std::vector<std::string> anchors;      // 0..n variable names (Between: >= 2)
  std::optional<std::string> reference;  // Less / More second variable
  std::optional<ScoreFunc> score_func;   // Less / More / MaxOf / MinOf
  int source_line = 0;

  bool operator==(const CspConstraint &o) const {
    return kind == o.kind && target == o.target && anchors == o.anchors &&
           reference == o.reference && score_func == o.score_func;
  }
};

struct Csp {
  std::vector<CspVariable> variables;    // definition order
  std::vector<CspConstraint> constraints;  // textual order
  std::string target;

  const CspVariable *find_variable(const std::string &name) const;

  bool operator==(const Csp &o) const {
    return variables == o.variables && constraints == o.constraints && target == o.target;
  }
};

struct LowerResult {
  std::optional<Csp> csp;  // present iff no errors
  std::vector<Diagnostic> diagnostics;

  bool ok() const { return csp.has_value(); }
};

// Lowers parsed statements to a Csp. Strict mode turns every irregularity into
// an error; lenient mode repairs what it safely can (unknown calls skipped,
// undefined names fixed up at edit distance 1 when unambiguous, statements
// after SET_TARGET ignored) and reports warnings.
LowerResult lower(const std::vector<ProgramStmt> &stmts, bool strict);

// The registered-function block substituted into the system prompt; one
// signature per line, byte-stable.
std::string registry_signatures();

// The score-function listing substituted into the system prompt.
std::string score_function_listing();

}  // namespace csvg
