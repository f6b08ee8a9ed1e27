// SPDX-License-Identifier: Apache-2.0
#include "csvg/solver.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

#include "csvg/rng.hpp"

namespace csvg {

std::string status_name(SolveStatus status) {
  switch (status) {
    case SolveStatus::Solved: return "SOLVED";
    case SolveStatus::Unsatisfiable: return "UNSATISFIABLE";
    case SolveStatus::InvalidProgram: return "INVALID_PROGRAM";
  }
  return "?";
}

namespace {

std::set<std::string> label_set_of(const CspVariable &var) {
  return std::set<std::string>(var.label_set.begin(), var.label_set.end());
}

// Per-variable domains plus lookup tables shared by both engines.
struct Context {
  const Csp &csp;
  const Scene &scene;
  const Thresholds &thresholds;
  std::map<std::string, const CspVariable *> vars;
  std::map<std::string, std::vector<const Instance *>> domains;
  GeomStats stats;

  Context(const Csp &c, const Scene &s, const Thresholds &t)
      : csp(c), scene(s), thresholds(t) {
    for (const CspVariable &v : c.variables) {
      vars[v.name] = &v;
      domains[v.name] = domain_of(s, label_set_of(v));
    }
  }

  bool is_negative(const std::string &name) const {
    auto it = vars.find(name);
    return it != vars.end() && it->second->polarity == Polarity::Negative;
  }
};

// Evaluates one constraint against fully chosen instances.
bool eval_concrete(const CspConstraint &con, const Instance &target,
                   const std::vector<const Instance *> &anchors, const Scene &scene,
                   const Thresholds &th, const Instance *reference, GeomStats *stats) {
  if (is_comparison(con.kind)) {
    const Instance *anchor = anchors.empty() ? nullptr : anchors.front();
    double ts = eval_score(*con.score_func, target, scene, anchor);
    double rs = eval_score(*con.score_func, *reference, scene, anchor);
    return con.kind == RelationKind::Less ? ts < rs : ts > rs;
  }
  return eval_relation(con.kind, target, anchors, scene, th, stats);
}

// The variable roles of a constraint in a fixed order: target, anchors,
// reference last.
std::vector<std::string> roles_of(const CspConstraint &con) {
  std::vector<std::string> roles;
  roles.push_back(con.target);
  for (const std::string &a : con.anchors) roles.push_back(a);
  if (con.reference) roles.push_back(*con.reference);
  return roles;
}

bool check_with_context(const Context &ctx, const Assignment &assignment,
                        const CspConstraint &con, GeomStats *stats) {
  std::vector<std::string> roles = roles_of(con);
  std::string neg_var;
  for (const std::string &name : roles)
    if (ctx.is_negative(name)) neg_var = name;

  auto instantiate = [&](const Instance *neg_inst) -> bool {
    auto pick = [&](const std::string &name) -> const Instance * {
      if (name == neg_var) return neg_inst;
      return ctx.scene.find(assignment.at(name));
    };
    const Instance *target = pick(con.target);
    std::vector<const Instance *> anchors;
    for (const std::string &a : con.anchors) anchors.push_back(pick(a));
    const Instance *reference = con.reference ? pick(*con.reference) : nullptr;
    return eval_concrete(con, *target, anchors, ctx.scene, ctx.thresholds, reference, stats);
  };

  if (neg_var.empty()) return instantiate(nullptr);

  // Negative rule: the assignment survives only when NO instance of the
  // negative variable's domain satisfies the constraint.
  for (const Instance *candidate : ctx.domains.at(neg_var))
    if (instantiate(candidate)) return false;
  return true;
}

std::vector<std::string> sorted_normal_vars(const Csp &csp) {
  std::vector<std::string> names;
  for (const CspVariable &v : csp.variables)
    if (v.polarity == Polarity::Normal) names.push_back(v.name);
  std::sort(names.begin(), names.end());
  return names;
}

void add_diag(std::vector<SolveDiagnostic> *diags, std::string stage, std::string message,
              std::optional<long long> count = std::nullopt) {
  if (diags) diags->push_back({std::move(stage), std::move(message), count});
}

// Enumerates all-different assignments in canonical order (variables by name,
// instance ids lexicographically), optionally filtering with the spatial and
// comparison constraints as soon as all their variables are assigned.
std::vector<Assignment> enumerate_assignments(const Context &ctx, bool filter,
                                              std::size_t max_solutions,
                                              std::vector<SolveDiagnostic> *diags,
                                              GeomStats *stats) {
  std::vector<Assignment> out;
  std::vector<std::string> order = sorted_normal_vars(ctx.csp);

  for (const std::string &name : order)
    if (ctx.domains.at(name).empty()) {
      add_diag(diags, "filter", "variable '" + name + "' has an empty domain", 0);
      return out;
    }

  // Constraints become checkable at the depth where their last normal
  // variable gets assigned.
  std::vector<std::vector<const CspConstraint *>> ready(order.size() + 1);
  for (const CspConstraint &con : ctx.csp.constraints) {
    if (is_minmax(con.kind)) continue;
    std::size_t depth = 0;
    for (const std::string &role : roles_of(con)) {
      if (ctx.is_negative(role)) continue;
      std::size_t at = std::find(order.begin(), order.end(), role) - order.begin() + 1;
      depth = std::max(depth, std::min(at, order.size()));
    }
    ready[depth].push_back(&con);
  }

  Assignment current;
  std::set<std::string> used;
  bool truncated = false;

  auto recurse = [&](auto &&self, std::size_t depth) -> void {
    if (truncated) return;
    if (filter)
      for (const CspConstraint *con : ready[depth])
        if (!check_with_context(ctx, current, *con, stats)) return;
    if (depth == order.size()) {
      if (out.size() >= max_solutions) {
        truncated = true;
        return;
      }
      out.push_back(current);
      return;
    }
    const std::string &name = order[depth];
    for (const Instance *inst : ctx.domains.at(name)) {
      if (used.count(inst->id)) continue;
      current[name] = inst->id;
      used.insert(inst->id);
      self(self, depth + 1);
      used.erase(inst->id);
      current.erase(name);
      if (truncated) return;
    }
  };
  recurse(recurse, 0);

  if (truncated)
    add_diag(diags, "filter", "solution limit reached; enumeration truncated",
             (long long)out.size());
  return out;
}

std::vector<Assignment> minmax_pass(std::vector<Assignment> solutions, const Context &ctx,
                                    std::vector<SolveDiagnostic> *diags) {
  for (const CspConstraint &con : ctx.csp.constraints) {
    if (!is_minmax(con.kind)) continue;
    if (solutions.empty()) break;
    long long before = (long long)solutions.size();

    // Group by the instances assigned to the anchor variables.
    std::map<std::vector<std::string>, std::vector<std::size_t>> groups;
    for (std::size_t i = 0; i < solutions.size(); ++i) {
      std::vector<std::string> key;
      for (const std::string &a : con.anchors) key.push_back(solutions[i].at(a));
      groups[key].push_back(i);
    }

    std::vector<bool> keep(solutions.size(), false);
    for (const auto &[key, members] : groups) {
      std::vector<double> scores(members.size());
      for (std::size_t m = 0; m < members.size(); ++m) {
        const Assignment &sol = solutions[members[m]];
        const Instance *target = ctx.scene.find(sol.at(con.target));
        const Instance *anchor =
            con.anchors.empty() ? nullptr : ctx.scene.find(sol.at(con.anchors.front()));
        scores[m] = eval_score(*con.score_func, *target, ctx.scene, anchor);
      }
      double best = scores.front();
      for (double s : scores)
        best = con.kind == RelationKind::MaxOf ? std::max(best, s) : std::min(best, s);
      for (std::size_t m = 0; m < members.size(); ++m)
        if (scores[m] == best) keep[members[m]] = true;
    }

    std::vector<Assignment> next;
    for (std::size_t i = 0; i < solutions.size(); ++i)
      if (keep[i]) next.push_back(std::move(solutions[i]));
    solutions = std::move(next);
    add_diag(diags, "minmax",
             relation_name(con.kind) + "(" + score_func_name(*con.score_func) + ") kept " +
                 std::to_string(solutions.size()) + " of " + std::to_string(before) +
                 " solutions",
             (long long)solutions.size());
  }
  return solutions;
}

double avg_pairwise_distance(const Assignment &assignment, const Scene &scene) {
  std::vector<const Instance *> insts;
  for (const auto &[var, id] : assignment) insts.push_back(scene.find(id));
  if (insts.size() < 2) return 0.0;
  double sum = 0.0;
  int pairs = 0;
  for (std::size_t i = 0; i < insts.size(); ++i)
    for (std::size_t j = i + 1; j < insts.size(); ++j) {
      sum += (insts[i]->center() - insts[j]->center()).norm();
      ++pairs;
    }
  return sum / pairs;
}

GroundingResult finish(const Context &ctx, const Assignment &chosen, long long count,
                       std::vector<SolveDiagnostic> diags) {
  GroundingResult result;
  result.status = SolveStatus::Solved;
  result.target_instance = chosen.at(ctx.csp.target);
  result.target_bbox = ctx.scene.find(*result.target_instance)->bbox;
  for (const auto &[var, id] : chosen)
    if (var != ctx.csp.target) result.anchor_assignment[var] = id;
  result.solution_count = count;
  result.diagnostics = std::move(diags);
  return result;
}

void add_geom_diag(const Context &ctx, std::vector<SolveDiagnostic> &diags) {
  if (ctx.stats.degenerate_frames > 0)
    diags.push_back({"geometry", "degenerate viewer frames encountered; fell back to the +x axis",
                     ctx.stats.degenerate_frames});
}

GroundingResult invalid(std::string message) {
  GroundingResult result;
  result.status = SolveStatus::InvalidProgram;
  result.diagnostics.push_back({"validate", std::move(message), std::nullopt});
  return result;
}

}  // namespace

bool check_solution(const Assignment &assignment, const CspConstraint &constraint,
                    const Csp &csp, const Scene &scene, const Thresholds &thresholds,
                    GeomStats *stats) {
  Context ctx(csp, scene, thresholds);
  return check_with_context(ctx, assignment, constraint, stats);
}

std::vector<Assignment> enumerate_valid(const Csp &csp, const Scene &scene,
                                        const Thresholds &thresholds,
                                        std::size_t max_solutions,
                                        std::vector<SolveDiagnostic> *diags,
                                        GeomStats *stats) {
  Context ctx(csp, scene, thresholds);
  return enumerate_assignments(ctx, true, max_solutions, diags, stats);
}

std::vector<Assignment> apply_minmax(std::vector<Assignment> solutions, const Csp &csp,
                                     const Scene &scene, const Thresholds &thresholds,
                                     std::vector<SolveDiagnostic> *diags) {
  Context ctx(csp, scene, thresholds);
  return minmax_pass(std::move(solutions), ctx, diags);
}

const Assignment &select_solution(const std::vector<Assignment> &solutions,
                                  Heuristic heuristic, std::uint64_t seed,
                                  const Scene &scene) {
  if (solutions.empty()) throw std::invalid_argument("no solutions to select from");
  switch (heuristic) {
    case Heuristic::First: return solutions.front();
    case Heuristic::Random: {
      Rng rng(seed);
      return solutions[rng.below(solutions.size())];
    }
    case Heuristic::MinAvgDistance:
    case Heuristic::MaxAvgDistance: {
      std::size_t best = 0;
      double best_score = avg_pairwise_distance(solutions[0], scene);
      for (std::size_t i = 1; i < solutions.size(); ++i) {
        double score = avg_pairwise_distance(solutions[i], scene);
        bool better = heuristic == Heuristic::MinAvgDistance ? score < best_score
                                                             : score > best_score;
        if (better) {
          best = i;
          best_score = score;
        }
      }
      return solutions[best];
    }
  }
  return solutions.front();
}

namespace {

GroundingResult solve_global(Context &ctx, const SolverConfig &config) {
  std::vector<SolveDiagnostic> diags;
  std::vector<Assignment> solutions = enumerate_assignments(
      ctx, true, config.max_solutions, &diags, &ctx.stats);
  add_diag(&diags, "filter",
           std::to_string(solutions.size()) + " assignments satisfy the constraints",
           (long long)solutions.size());
  if (solutions.empty()) {
    GroundingResult result;
    result.status = SolveStatus::Unsatisfiable;
    add_geom_diag(ctx, diags);
    result.diagnostics = std::move(diags);
    return result;
  }
  bool have_minmax = std::any_of(ctx.csp.constraints.begin(), ctx.csp.constraints.end(),
                                 [](const CspConstraint &c) { return is_minmax(c.kind); });
  if (have_minmax) {
    if (config.minmax_enabled)
      solutions = minmax_pass(std::move(solutions), ctx, &diags);
    else
      add_diag(&diags, "minmax", "min/max constraints disabled; skipped");
  }
  const Assignment &chosen =
      select_solution(solutions, config.heuristic, config.random_seed, ctx.scene);
  add_geom_diag(ctx, diags);
  return finish(ctx, chosen, (long long)solutions.size(), std::move(diags));
}

// Failure-mode variant: commit to min/max winners before spatial filtering.
// When no committed solution passes the spatial constraints, the min/max
// winner is returned anyway; this mirrors greedy pipelines that pick the
// extremal instance first and reason about relations afterwards.
GroundingResult solve_minmax_first(Context &ctx, const SolverConfig &config) {
  std::vector<SolveDiagnostic> diags;
  add_diag(&diags, "order", "min/max constraints applied before spatial filtering");
  std::vector<Assignment> all = enumerate_assignments(
      ctx, false, config.max_solutions, &diags, &ctx.stats);
  if (all.empty()) {
    GroundingResult result;
    result.status = SolveStatus::Unsatisfiable;
    add_diag(&diags, "filter", "no all-different assignment exists", 0);
    result.diagnostics = std::move(diags);
    return result;
  }
  std::vector<Assignment> committed = config.minmax_enabled
                                          ? minmax_pass(std::move(all), ctx, &diags)
                                          : std::move(all);
  std::vector<Assignment> filtered;
  for (const Assignment &sol : committed) {
    bool ok = true;
    for (const CspConstraint &con : ctx.csp.constraints) {
      if (is_minmax(con.kind)) continue;
      if (!check_with_context(ctx, sol, con, &ctx.stats)) {
        ok = false;
        break;
      }
    }
    if (ok) filtered.push_back(sol);
  }
  add_diag(&diags, "filter",
           std::to_string(filtered.size()) + " of " + std::to_string(committed.size()) +
               " committed solutions satisfy the constraints",
           (long long)filtered.size());
  const std::vector<Assignment> &pool = filtered.empty() ? committed : filtered;
  if (filtered.empty())
    add_diag(&diags, "filter",
             "spatial constraints unsatisfied after min/max commitment; "
             "returning the min/max winner anyway");
  const Assignment &chosen =
      select_solution(pool, config.heuristic, config.random_seed, ctx.scene);
  add_geom_diag(ctx, diags);
  return finish(ctx, chosen, (long long)pool.size(), std::move(diags));
}

// The local baseline. Every constraint filters the candidate set of one
// variable at a time; a constraint may run only when the candidate sets it
// reads are not pending refinement by some other unprocessed constraint.
// Cyclic structure therefore deadlocks, which is reported as failure.
GroundingResult run_local(Context &ctx, [[maybe_unused]] const SolverConfig &config) {
  std::vector<SolveDiagnostic> diags;
  std::map<std::string, std::vector<const Instance *>> candidates;
  for (const CspVariable &v : ctx.csp.variables)
    if (v.polarity == Polarity::Normal) candidates[v.name] = ctx.domains.at(v.name);

  for (const auto &[name, cands] : candidates)
    if (cands.empty()) {
      GroundingResult result;
      result.status = SolveStatus::Unsatisfiable;
      add_diag(&diags, "local", "variable '" + name + "' has an empty domain", 0);
      result.diagnostics = std::move(diags);
      return result;
    }

  struct Pending {
    const CspConstraint *con;
    std::string filtered;           // candidate set being refined
    std::vector<std::string> reads; // candidate sets consumed
  };
  std::vector<Pending> pending;
  std::vector<const CspConstraint *> minmax_cons;
  for (const CspConstraint &con : ctx.csp.constraints) {
    if (is_minmax(con.kind)) {
      minmax_cons.push_back(&con);
      continue;
    }
    bool neg_target = ctx.is_negative(con.target);
    std::vector<std::string> normals;
    for (const std::string &role : roles_of(con))
      if (!ctx.is_negative(role)) normals.push_back(role);
    if (normals.empty()) continue;  // nothing to refine
    if (!neg_target) {
      Pending p;
      p.con = &con;
      p.filtered = con.target;
      for (const std::string &role : normals)
        if (role != con.target) p.reads.push_back(role);
      pending.push_back(std::move(p));
    } else {
      // A negative target leaves only normal anchors to refine.
      for (const std::string &role : normals) {
        Pending p;
        p.con = &con;
        p.filtered = role;
        for (const std::string &other : normals)
          if (other != role) p.reads.push_back(other);
        pending.push_back(std::move(p));
      }
    }
  }

  // True when the candidate combination (target plus per-role picks) admits
  // at least one satisfying choice; negative variables quantify inside
  // check_with_context via the shared rule.
  auto admits = [&](const Pending &p, const Instance *value) -> bool {
    std::vector<std::string> others = p.reads;
    Assignment trial;
    trial[p.filtered] = value->id;
    auto try_fill = [&](auto &&self, std::size_t i) -> bool {
      if (i == others.size())
        return check_with_context(ctx, trial, *p.con, &ctx.stats);
      for (const Instance *cand : candidates.at(others[i])) {
        bool clash = false;
        for (const auto &[var, id] : trial)
          if (id == cand->id) clash = true;
        if (clash) continue;
        trial[others[i]] = cand->id;
        if (self(self, i + 1)) {
          trial.erase(others[i]);
          return true;
        }
        trial.erase(others[i]);
      }
      return false;
    };
    return try_fill(try_fill, 0);
  };

  std::vector<bool> done(pending.size(), false);
  std::size_t remaining = pending.size();
  while (remaining > 0) {
    std::size_t chosen = pending.size();
    for (std::size_t i = 0; i < pending.size(); ++i) {
      if (done[i]) continue;
      bool ready = true;
      for (const std::string &read : pending[i].reads)
        for (std::size_t j = 0; j < pending.size(); ++j)
          if (!done[j] && j != i && pending[j].filtered == read) ready = false;
      if (ready) {
        chosen = i;
        break;
      }
    }
    if (chosen == pending.size()) {
      GroundingResult result;
      result.status = SolveStatus::Unsatisfiable;
      add_diag(&diags, "local", "cyclic constraints; the local engine cannot order them");
      result.diagnostics = std::move(diags);
      return result;
    }
    Pending &p = pending[chosen];
    std::vector<const Instance *> kept;
    for (const Instance *cand : candidates.at(p.filtered))
      if (admits(p, cand)) kept.push_back(cand);
    add_diag(&diags, "local",
             relation_name(p.con->kind) + " kept " + std::to_string(kept.size()) + " of " +
                 std::to_string(candidates.at(p.filtered).size()) + " candidates for '" +
                 p.filtered + "'",
             (long long)kept.size());
    candidates[p.filtered] = std::move(kept);
    done[chosen] = true;
    --remaining;
    if (candidates.at(p.filtered).empty()) break;
  }

  // Min/max constraints refine the target variable's candidates afterwards:
  // without joint solutions only candidate-set extremes are available.
  for (const CspConstraint *con : minmax_cons) {
    std::vector<const Instance *> &cands = candidates.at(con->target);
    if (cands.empty()) break;
    std::vector<const Instance *> kept;
    if (con->anchors.empty()) {
      std::vector<double> scores;
      for (const Instance *c : cands)
        scores.push_back(eval_score(*con->score_func, *c, ctx.scene, nullptr));
      double best = scores.front();
      for (double s : scores)
        best = con->kind == RelationKind::MaxOf ? std::max(best, s) : std::min(best, s);
      for (std::size_t i = 0; i < cands.size(); ++i)
        if (scores[i] == best) kept.push_back(cands[i]);
    } else {
      // Keep a candidate when it is extremal for at least one anchor choice.
      std::set<const Instance *> kept_set;
      for (const Instance *anchor : candidates.at(con->anchors.front())) {
        std::vector<const Instance *> eligible;
        std::vector<double> scores;
        for (const Instance *c : cands) {
          if (c->id == anchor->id) continue;
          eligible.push_back(c);
          scores.push_back(eval_score(*con->score_func, *c, ctx.scene, anchor));
        }
        if (eligible.empty()) continue;
        double best = scores.front();
        for (double s : scores)
          best = con->kind == RelationKind::MaxOf ? std::max(best, s) : std::min(best, s);
        for (std::size_t i = 0; i < eligible.size(); ++i)
          if (scores[i] == best) kept_set.insert(eligible[i]);
      }
      for (const Instance *c : cands)
        if (kept_set.count(c)) kept.push_back(c);
    }
    add_diag(&diags, "local",
             relation_name(con->kind) + " kept " + std::to_string(kept.size()) + " of " +
                 std::to_string(cands.size()) + " candidates for '" + con->target + "'",
             (long long)kept.size());
    cands = std::move(kept);
  }

  const std::vector<const Instance *> &target_cands = candidates.at(ctx.csp.target);
  if (target_cands.empty()) {
    GroundingResult result;
    result.status = SolveStatus::Unsatisfiable;
    add_diag(&diags, "local", "no candidate left for the target variable", 0);
    add_geom_diag(ctx, diags);
    result.diagnostics = std::move(diags);
    return result;
  }

  GroundingResult result;
  result.status = SolveStatus::Solved;
  result.target_instance = target_cands.front()->id;
  result.target_bbox = target_cands.front()->bbox;
  result.solution_count = (long long)target_cands.size();

  // Best-effort distinct anchors for reporting; the local engine never forms
  // joint solutions.
  std::set<std::string> taken{*result.target_instance};
  for (const auto &[name, cands] : candidates) {
    if (name == ctx.csp.target) continue;
    const Instance *pick = nullptr;
    for (const Instance *c : cands)
      if (!taken.count(c->id)) {
        pick = c;
        break;
      }
    if (pick) {
      result.anchor_assignment[name] = pick->id;
      taken.insert(pick->id);
    } else {
      add_diag(&diags, "local", "no distinct candidate left to report for '" + name + "'");
    }
  }
  add_geom_diag(ctx, diags);
  result.diagnostics = std::move(diags);
  return result;
}

}  // namespace

GroundingResult solve(const Csp &csp, const Scene &scene, const SolverConfig &config) {
  const CspVariable *target = csp.find_variable(csp.target);
  if (csp.target.empty() || !target) return invalid("the CSP does not designate a target");
  if (target->polarity == Polarity::Negative)
    return invalid("the target cannot be a negative variable");

  Context ctx(csp, scene, config.thresholds);
  if (config.engine == Engine::Local) return run_local(ctx, config);
  if (config.minmax_first) return solve_minmax_first(ctx, config);
  return solve_global(ctx, config);
}

GroundingResult solve_local(const Csp &csp, const Scene &scene, const SolverConfig &config) {
  SolverConfig local = config;
  local.engine = Engine::Local;
  return solve(csp, scene, local);
}

nlohmann::ordered_json grounding_result_to_json(const GroundingResult &result) {
  nlohmann::ordered_json doc;
  doc["status"] = status_name(result.status);
  doc["target_instance"] =
      result.target_instance ? nlohmann::ordered_json(*result.target_instance)
                             : nlohmann::ordered_json(nullptr);
  doc["target_bbox"] = result.target_bbox ? aabb_to_json(*result.target_bbox)
                                          : nlohmann::ordered_json(nullptr);
  nlohmann::ordered_json anchors = nlohmann::ordered_json::object();
  for (const auto &[var, id] : result.anchor_assignment) anchors[var] = id;
  doc["anchor_assignment"] = std::move(anchors);
  doc["solution_count"] = result.solution_count;
  auto diags = nlohmann::ordered_json::array();
  for (const SolveDiagnostic &d : result.diagnostics) {
    nlohmann::ordered_json item;
    item["stage"] = d.stage;
    item["message"] = d.message;
    if (d.count) item["count"] = *d.count;
    diags.push_back(std::move(item));
  }
  doc["diagnostics"] = std::move(diags);
  return doc;
}

}  // namespace csvg
