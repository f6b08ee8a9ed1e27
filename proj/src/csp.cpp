// SPDX-License-Identifier: Apache-2.0
#include "csvg/csp.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace csvg {

const CspVariable *Csp::find_variable(const std::string &name) const {
  for (const CspVariable &v : variables)
    if (v.name == name) return &v;
  return nullptr;
}

namespace {

// True when a and b differ by at most one edit (substitution, insertion or
// deletion); used for lenient-mode name repair.
bool within_one_edit(const std::string &a, const std::string &b) {
  if (a == b) return true;
  std::size_t la = a.size(), lb = b.size();
  if (la > lb) return within_one_edit(b, a);
  if (lb - la > 1) return false;
  std::size_t i = 0;
  while (i < la && a[i] == b[i]) ++i;
  if (la == lb) return a.compare(i + 1, std::string::npos, b, i + 1) == 0;
  return a.compare(i, std::string::npos, b, i + 1) == 0;
}

struct FuncSpec {
  enum class Kind { DefineVar, DefineNegVar, Spatial, Between, Compare, MinMax, SetTarget };
  Kind kind;
  RelationKind relation;  // meaningful for constraint kinds
};

const std::map<std::string, FuncSpec> &func_registry() {
  static const std::map<std::string, FuncSpec> table = [] {
    std::map<std::string, FuncSpec> t;
    auto add = [&t](const std::string &name, FuncSpec spec) { t[name] = spec; };
    const std::pair<const char *, RelationKind> spatial[] = {
        {"ABOVE", RelationKind::Above},   {"BELOW", RelationKind::Below},
        {"ON", RelationKind::On},         {"UNDER", RelationKind::Under},
        {"FAR", RelationKind::Far},       {"AWAY", RelationKind::Away},
        {"ACROSS", RelationKind::Across}, {"OPPOSITE", RelationKind::Opposite},
        {"NEAR", RelationKind::Near},     {"BESIDE", RelationKind::Beside},
        {"CLOSE", RelationKind::Close},   {"LEFT", RelationKind::Left},
        {"RIGHT", RelationKind::Right},   {"FRONT", RelationKind::Front},
        {"BEHIND", RelationKind::Behind}, {"CENTER", RelationKind::Center},
        {"MIDDLE", RelationKind::Middle}, {"IN", RelationKind::In},
        {"INSIDE", RelationKind::Inside},
    };
    for (auto &[name, rel] : spatial) {
      add(std::string("CONSTRAINT_") + name, {FuncSpec::Kind::Spatial, rel});
      add(name, {FuncSpec::Kind::Spatial, rel});
    }
    add("CONSTRAINT_BETWEEN", {FuncSpec::Kind::Between, RelationKind::Between});
    add("BETWEEN", {FuncSpec::Kind::Between, RelationKind::Between});
    add("CONSTRAINT_LESS", {FuncSpec::Kind::Compare, RelationKind::Less});
    add("LESS", {FuncSpec::Kind::Compare, RelationKind::Less});
    add("CONSTRAINT_MORE", {FuncSpec::Kind::Compare, RelationKind::More});
    add("MORE", {FuncSpec::Kind::Compare, RelationKind::More});
    add("CONSTRAINT_MAX_OF", {FuncSpec::Kind::MinMax, RelationKind::MaxOf});
    add("MAX_OF", {FuncSpec::Kind::MinMax, RelationKind::MaxOf});
    add("CONSTRAINT_MIN_OF", {FuncSpec::Kind::MinMax, RelationKind::MinOf});
    add("MIN_OF", {FuncSpec::Kind::MinMax, RelationKind::MinOf});
    add("DEFINE_VARIABLE", {FuncSpec::Kind::DefineVar, RelationKind::Near});
    add("DEF_VAR", {FuncSpec::Kind::DefineVar, RelationKind::Near});
    add("DEFINE_NEGATIVE_VARIABLE", {FuncSpec::Kind::DefineNegVar, RelationKind::Near});
    add("DEF_NEG_VAR", {FuncSpec::Kind::DefineNegVar, RelationKind::Near});
    add("SET_TARGET", {FuncSpec::Kind::SetTarget, RelationKind::Near});
    return t;
  }();
  return table;
}

class Lowering {
 public:
  Lowering(const std::vector<ProgramStmt> &stmts, bool strict)
      : stmts_(stmts), strict_(strict) {}

  LowerResult run() {
    for (const ProgramStmt &stmt : stmts_) {
      if (!strict_ && target_set_) {
        warn(stmt, "statement after SET_TARGET is ignored");
        continue;
      }
      lower_stmt(stmt);
    }
    if (!target_set_) error_at({0, 0}, "program does not call SET_TARGET");
    warn_unused();

    LowerResult result;
    result.diagnostics = std::move(diags_);
    if (!has_errors(result.diagnostics)) result.csp = std::move(csp_);
    return result;
  }

 private:
  SourcePos stmt_pos(const ProgramStmt &stmt) const { return {stmt.source_line, 1}; }

  void error_at(SourcePos pos, std::string message) {
    diags_.push_back({Diagnostic::Severity::Error, pos, std::move(message)});
  }
  void error(const ProgramStmt &stmt, std::string message) {
    error_at(stmt_pos(stmt), std::move(message));
  }
  void warn(const ProgramStmt &stmt, std::string message) {
    diags_.push_back({Diagnostic::Severity::Warning, stmt_pos(stmt), std::move(message)});
  }
  void note(const ProgramStmt &stmt, std::string message) {
    diags_.push_back({Diagnostic::Severity::Note, stmt_pos(stmt), std::move(message)});
  }

  // A problem inside a constraint statement: an error in strict mode, but in
  // lenient mode the constraint is merely dropped with a warning.
  void constraint_problem(const ProgramStmt &stmt, std::string message) {
    if (strict_)
      error(stmt, std::move(message));
    else
      warn(stmt, message + "; dropping this constraint");
  }

  // In lenient mode an unknown name is repaired to the unique defined variable
  // within one edit, when there is one. `hard` problems stay errors even in
  // lenient mode (a program without a usable target cannot be salvaged).
  const CspVariable *resolve(const ProgramStmt &stmt, const std::string &name, bool hard) {
    if (const CspVariable *v = csp_.find_variable(name)) {
      used_.insert(name);
      return v;
    }
    if (!strict_) {
      const CspVariable *match = nullptr;
      bool ambiguous = false;
      for (const CspVariable &v : csp_.variables)
        if (within_one_edit(name, v.name)) {
          if (match) ambiguous = true;
          match = &v;
        }
      if (match && !ambiguous) {
        note(stmt, "undefined variable '" + name + "' taken to mean '" + match->name + "'");
        used_.insert(match->name);
        return match;
      }
    }
    if (hard)
      error(stmt, "undefined variable '" + name + "'");
    else
      constraint_problem(stmt, "undefined variable '" + name + "'");
    return nullptr;
  }

  const Value *kwarg(const Call &call, const std::string &key) {
    for (const auto &kv : call.kwargs)
      if (kv.first == key) return &kv.second;
    return nullptr;
  }

  bool check_kwargs(const ProgramStmt &stmt, std::initializer_list<const char *> required,
                    std::initializer_list<const char *> optional, bool hard) {
    bool ok = true;
    for (const char *key : required)
      if (!kwarg(stmt.call, key)) {
        std::string msg = stmt.call.func_name + " requires keyword argument '" +
                          std::string(key) + "'";
        if (hard)
          error(stmt, std::move(msg));
        else
          constraint_problem(stmt, std::move(msg));
        ok = false;
      }
    for (const auto &kv : stmt.call.kwargs) {
      bool known = false;
      for (const char *key : required)
        if (kv.first == key) known = true;
      for (const char *key : optional)
        if (kv.first == key) known = true;
      if (!known) {
        if (strict_) {
          error(stmt, "unknown keyword argument '" + kv.first + "' for " + stmt.call.func_name);
          ok = false;
        } else {
          warn(stmt, "ignoring unknown keyword argument '" + kv.first + "' for " +
                         stmt.call.func_name);
        }
      }
    }
    if (stmt.call.positional && stmt.call.func_name != "SET_TARGET") {
      error(stmt, stmt.call.func_name + " takes keyword arguments only");
      ok = false;
    }
    return ok;
  }

  const CspVariable *var_arg(const ProgramStmt &stmt, const Value &value,
                             const std::string &key, bool hard = false) {
    if (value.kind != Value::Kind::VarRef) {
      std::string msg = "argument '" + key + "' of " + stmt.call.func_name +
                        " must be a variable name";
      if (hard)
        error(stmt, std::move(msg));
      else
        constraint_problem(stmt, std::move(msg));
      return nullptr;
    }
    return resolve(stmt, value.str, hard);
  }

  void lower_define(const ProgramStmt &stmt, Polarity polarity) {
    if (!stmt.assign_name) {
      error(stmt, stmt.call.func_name + " result must be assigned to a name");
      return;
    }
    if (!check_kwargs(stmt, {"labels"}, {}, true)) return;
    const Value *labels = kwarg(stmt.call, "labels");
    if (labels->kind != Value::Kind::StringList) {
      error(stmt, "argument 'labels' of " + stmt.call.func_name + " must be a list of strings");
      return;
    }
    if (csp_.find_variable(*stmt.assign_name)) {
      error(stmt, "variable '" + *stmt.assign_name + "' is already defined");
      return;
    }
    CspVariable var;
    var.name = *stmt.assign_name;
    var.polarity = polarity;
    for (const std::string &raw : labels->items) {
      std::string label = normalize_label(raw);
      if (label.empty()) {
        error(stmt, "empty label in " + stmt.call.func_name);
        return;
      }
      if (std::find(var.label_set.begin(), var.label_set.end(), label) == var.label_set.end())
        var.label_set.push_back(label);
    }
    if (var.label_set.empty()) {
      error(stmt, stmt.call.func_name + " needs at least one label");
      return;
    }
    csp_.variables.push_back(std::move(var));
  }

  // Skipping a malformed constraint is the lenient response; strict mode has
  // already recorded the error so the distinction only matters for warnings.
  void lower_spatial(const ProgramStmt &stmt, RelationKind relation) {
    if (!check_kwargs(stmt, {"target", "anchor"}, {}, false)) return;
    const CspVariable *target = var_arg(stmt, *kwarg(stmt.call, "target"), "target");
    const CspVariable *anchor = var_arg(stmt, *kwarg(stmt.call, "anchor"), "anchor");
    if (!target || !anchor) return;
    if (target->polarity == Polarity::Negative && anchor->polarity == Polarity::Negative) {
      constraint_problem(stmt, "constraint cannot involve two negative variables");
      return;
    }
    if (target == anchor)
      warn(stmt, "constraint relates variable '" + target->name + "' to itself");
    CspConstraint con;
    con.kind = relation;
    con.target = target->name;
    con.anchors = {anchor->name};
    con.source_line = stmt.source_line;
    csp_.constraints.push_back(std::move(con));
  }

  void lower_between(const ProgramStmt &stmt) {
    if (!check_kwargs(stmt, {"target", "anchors"}, {}, false)) return;
    const CspVariable *target = var_arg(stmt, *kwarg(stmt.call, "target"), "target");
    const Value *anchors = kwarg(stmt.call, "anchors");
    if (anchors->kind != Value::Kind::VarSet) {
      constraint_problem(stmt, "argument 'anchors' of " + stmt.call.func_name +
                                   " must be a set of variables like {A, B}");
      return;
    }
    if (!target) return;
    std::vector<std::string> names;
    int negatives = target->polarity == Polarity::Negative ? 1 : 0;
    for (const std::string &raw : anchors->items) {
      const CspVariable *v = resolve(stmt, raw, false);
      if (!v) return;
      if (std::find(names.begin(), names.end(), v->name) != names.end()) {
        if (strict_) {
          error(stmt, "duplicate anchor '" + v->name + "' in " + stmt.call.func_name);
          return;
        }
        warn(stmt, "duplicate anchor '" + v->name + "' in " + stmt.call.func_name);
        continue;
      }
      if (v->polarity == Polarity::Negative) ++negatives;
      names.push_back(v->name);
    }
    if (names.size() < 2) {
      constraint_problem(stmt, stmt.call.func_name + " needs at least two distinct anchors");
      return;
    }
    if (negatives > 1) {
      constraint_problem(stmt, "constraint cannot involve two negative variables");
      return;
    }
    if (std::find(names.begin(), names.end(), target->name) != names.end())
      warn(stmt, "constraint relates variable '" + target->name + "' to itself");
    CspConstraint con;
    con.kind = RelationKind::Between;
    con.target = target->name;
    con.anchors = std::move(names);
    con.source_line = stmt.source_line;
    csp_.constraints.push_back(std::move(con));
  }

  std::optional<ScoreFunc> score_arg(const ProgramStmt &stmt) {
    const Value *value = kwarg(stmt.call, "score_func");
    if (value->kind != Value::Kind::StringLit) {
      constraint_problem(stmt, "argument 'score_func' of " + stmt.call.func_name +
                                   " must be a string");
      return std::nullopt;
    }
    std::optional<ScoreFunc> func = score_func_from_name(value->str);
    if (!func) {
      constraint_problem(stmt, "unknown score function '" + value->str + "'");
      return std::nullopt;
    }
    return func;
  }

  // Shared validation of the score/anchor pairing of LESS/MORE/MAX_OF/MIN_OF.
  bool score_anchor(const ProgramStmt &stmt, ScoreFunc func,
                    std::optional<std::string> *anchor_name) {
    const Value *anchor = kwarg(stmt.call, "anchor");
    if (score_needs_anchor(func)) {
      if (!anchor) {
        constraint_problem(stmt, "score function 'distance' needs an 'anchor' argument");
        return false;
      }
      const CspVariable *v = var_arg(stmt, *anchor, "anchor");
      if (!v) return false;
      if (v->polarity == Polarity::Negative) {
        constraint_problem(stmt, "score anchors cannot be negative variables");
        return false;
      }
      *anchor_name = v->name;
      return true;
    }
    if (anchor) {
      if (strict_) {
        error(stmt, "score function '" + score_func_name(func) + "' takes no anchor");
        return false;
      }
      warn(stmt, "score function '" + score_func_name(func) + "' takes no anchor; ignoring it");
    }
    return true;
  }

  const CspVariable *normal_var_arg(const ProgramStmt &stmt, const std::string &key) {
    const CspVariable *v = var_arg(stmt, *kwarg(stmt.call, key), key);
    if (v && v->polarity == Polarity::Negative) {
      constraint_problem(stmt, "argument '" + key + "' of " + stmt.call.func_name +
                                   " cannot be a negative variable");
      return nullptr;
    }
    return v;
  }

  void lower_compare(const ProgramStmt &stmt, RelationKind relation) {
    if (!check_kwargs(stmt, {"target", "reference", "score_func"}, {"anchor"}, false)) return;
    const CspVariable *target = normal_var_arg(stmt, "target");
    const CspVariable *reference = normal_var_arg(stmt, "reference");
    std::optional<ScoreFunc> func = score_arg(stmt);
    if (!target || !reference || !func) return;
    std::optional<std::string> anchor;
    if (!score_anchor(stmt, *func, &anchor)) return;
    if (target == reference)
      warn(stmt, "constraint relates variable '" + target->name + "' to itself");
    CspConstraint con;
    con.kind = relation;
    con.target = target->name;
    con.reference = reference->name;
    con.score_func = func;
    if (anchor) con.anchors = {*anchor};
    con.source_line = stmt.source_line;
    csp_.constraints.push_back(std::move(con));
  }

  void lower_minmax(const ProgramStmt &stmt, RelationKind relation) {
    if (!check_kwargs(stmt, {"target", "score_func"}, {"anchor"}, false)) return;
    const CspVariable *target = normal_var_arg(stmt, "target");
    std::optional<ScoreFunc> func = score_arg(stmt);
    if (!target || !func) return;
    std::optional<std::string> anchor;
    if (!score_anchor(stmt, *func, &anchor)) return;
    CspConstraint con;
    con.kind = relation;
    con.target = target->name;
    con.score_func = func;
    if (anchor) con.anchors = {*anchor};
    con.source_line = stmt.source_line;
    csp_.constraints.push_back(std::move(con));
  }

  void lower_set_target(const ProgramStmt &stmt) {
    const Value *value = nullptr;
    if (stmt.call.positional) {
      value = &*stmt.call.positional;
      for (const auto &kv : stmt.call.kwargs) {
        error(stmt, "unknown keyword argument '" + kv.first + "' for SET_TARGET");
        return;
      }
    } else {
      if (!check_kwargs(stmt, {"obj"}, {}, true)) return;
      value = kwarg(stmt.call, "obj");
    }
    const CspVariable *v = var_arg(stmt, *value, "obj", true);
    if (!v) return;
    if (target_set_) {
      error(stmt, "SET_TARGET called more than once");
      return;
    }
    if (v->polarity == Polarity::Negative) {
      error(stmt, "the target cannot be a negative variable");
      return;
    }
    csp_.target = v->name;
    target_set_ = true;
  }

  void lower_stmt(const ProgramStmt &stmt) {
    auto it = func_registry().find(stmt.call.func_name);
    if (it == func_registry().end()) {
      if (strict_)
        error(stmt, "unknown function '" + stmt.call.func_name + "'");
      else
        warn(stmt, "skipping unknown function '" + stmt.call.func_name + "'");
      return;
    }
    switch (it->second.kind) {
      case FuncSpec::Kind::DefineVar: lower_define(stmt, Polarity::Normal); break;
      case FuncSpec::Kind::DefineNegVar: lower_define(stmt, Polarity::Negative); break;
      case FuncSpec::Kind::Spatial: lower_spatial(stmt, it->second.relation); break;
      case FuncSpec::Kind::Between: lower_between(stmt); break;
      case FuncSpec::Kind::Compare: lower_compare(stmt, it->second.relation); break;
      case FuncSpec::Kind::MinMax: lower_minmax(stmt, it->second.relation); break;
      case FuncSpec::Kind::SetTarget: lower_set_target(stmt); break;
    }
  }

  void warn_unused() {
    for (const CspVariable &v : csp_.variables) {
      if (v.name == csp_.target || used_.count(v.name)) continue;
      diags_.push_back({Diagnostic::Severity::Warning, {0, 0},
                        "variable '" + v.name + "' is never used"});
    }
  }

  const std::vector<ProgramStmt> &stmts_;
  bool strict_;
  Csp csp_;
  bool target_set_ = false;
  std::set<std::string> used_;
  std::vector<Diagnostic> diags_;
};

}  // namespace

LowerResult lower(const std::vector<ProgramStmt> &stmts, bool strict) {
  return Lowering(stmts, strict).run();
}

std::string registry_signatures() {
  return
      "CONSTRAINT_ABOVE(target: CSPVar, anchor: CSPVar) -> CSPConstraint\n"
      "CONSTRAINT_BELOW(target: CSPVar, anchor: CSPVar) -> CSPConstraint\n"
      "CONSTRAINT_ON(target: CSPVar, anchor: CSPVar) -> CSPConstraint\n"
      "CONSTRAINT_UNDER(target: CSPVar, anchor: CSPVar) -> CSPConstraint\n"
      "CONSTRAINT_FAR(target: CSPVar, anchor: CSPVar) -> CSPConstraint\n"
      "CONSTRAINT_AWAY(target: CSPVar, anchor: CSPVar) -> CSPConstraint\n"
      "CONSTRAINT_ACROSS(target: CSPVar, anchor: CSPVar) -> CSPConstraint\n"
      "CONSTRAINT_OPPOSITE(target: CSPVar, anchor: CSPVar) -> CSPConstraint\n"
      "CONSTRAINT_NEAR(target: CSPVar, anchor: CSPVar) -> CSPConstraint\n"
      "CONSTRAINT_BESIDE(target: CSPVar, anchor: CSPVar) -> CSPConstraint\n"
      "CONSTRAINT_CLOSE(target: CSPVar, anchor: CSPVar) -> CSPConstraint\n"
      "CONSTRAINT_LEFT(target: CSPVar, anchor: CSPVar) -> CSPConstraint\n"
      "CONSTRAINT_RIGHT(target: CSPVar, anchor: CSPVar) -> CSPConstraint\n"
      "CONSTRAINT_FRONT(target: CSPVar, anchor: CSPVar) -> CSPConstraint\n"
      "CONSTRAINT_BEHIND(target: CSPVar, anchor: CSPVar) -> CSPConstraint\n"
      "CONSTRAINT_CENTER(target: CSPVar, anchor: CSPVar) -> CSPConstraint\n"
      "CONSTRAINT_MIDDLE(target: CSPVar, anchor: CSPVar) -> CSPConstraint\n"
      "CONSTRAINT_IN(target: CSPVar, anchor: CSPVar) -> CSPConstraint\n"
      "CONSTRAINT_INSIDE(target: CSPVar, anchor: CSPVar) -> CSPConstraint\n"
      "CONSTRAINT_BETWEEN(target: CSPVar, anchors: set[CSPVar]) -> CSPConstraint\n"
      "CONSTRAINT_LESS(target: CSPVar, reference: CSPVar, score_func: str, anchor: CSPVar | None = None) -> CSPConstraint\n"
      "CONSTRAINT_MORE(target: CSPVar, reference: CSPVar, score_func: str, anchor: CSPVar | None = None) -> CSPConstraint\n"
      "CONSTRAINT_MAX_OF(target: CSPVar, score_func: str, anchor: CSPVar | None = None) -> CSPConstraint\n"
      "CONSTRAINT_MIN_OF(target: CSPVar, score_func: str, anchor: CSPVar | None = None) -> CSPConstraint\n"
      "DEFINE_NEGATIVE_VARIABLE(labels: list[str]) -> CSPVar\n"
      "DEFINE_VARIABLE(labels: list[str]) -> CSPVar\n"
      "SET_TARGET(obj: CSPVar) -> None\n";
}

std::string score_function_listing() {
  return
      "\"distance\": the distance between the target instance and the anchor instance (requires an anchor).\n"
      "\"size-x\": the size of the bounding box of an instance along the x-axis.\n"
      "\"size-y\": the size of the bounding box of an instance along the y-axis.\n"
      "\"size-z\": the size of the bounding box of an instance along the z-axis.\n"
      "\"size\": the maximum extent of the bounding box of an instance over the x-, y- and z-axis.\n"
      "\"position-z\": the z-coordinate of the center of an instance.\n"
      "\"left\": how far to the left an instance is, seen from the center of the scene; larger means more to the left.\n"
      "\"right\": how far to the right an instance is, seen from the center of the scene; larger means more to the right.\n"
      "\"front\": how far an instance is from the center of the scene; larger means more to the front.\n"
      "\"distance-to-center\": the distance from the center of an instance to the center of the scene.\n"
      "\"distance-to-middle\": an alias for \"distance-to-center\".\n";
}

}  // namespace csvg
