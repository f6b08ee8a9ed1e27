// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "csvg/csp.hpp"
#include "csvg/geometry.hpp"
#include "csvg/scene.hpp"

namespace csvg {

// Maps every NORMAL variable to an instance id; pairwise distinct.
using Assignment = std::map<std::string, std::string>;

enum class Heuristic { MinAvgDistance, MaxAvgDistance, Random, First };
enum class Engine { Global, Local };

struct SolverConfig {
  Thresholds thresholds;
  Heuristic heuristic = Heuristic::MinAvgDistance;
  std::uint64_t random_seed = 0;
  Engine engine = Engine::Global;
  bool minmax_enabled = true;
  // Failure-mode variant: apply min/max aggregation before spatial filtering.
  bool minmax_first = false;
  std::size_t max_solutions = 100000;
};

enum class SolveStatus { Solved, Unsatisfiable, InvalidProgram };

std::string status_name(SolveStatus status);

struct SolveDiagnostic {
  std::string stage;
  std::string message;
  std::optional<long long> count;
};

struct GroundingResult {
  SolveStatus status = SolveStatus::Unsatisfiable;
  std::optional<std::string> target_instance;
  std::optional<Aabb> target_bbox;
  std::map<std::string, std::string> anchor_assignment;  // normal non-target vars
  long long solution_count = 0;
  std::vector<SolveDiagnostic> diagnostics;
};

// True iff `assignment` satisfies `constraint` (a spatial or comparison one).
// Negative variables are handled by the rule from the global engine: the
// assignment is rejected when ANY instance of the negative variable's domain
// satisfies the constraint.
bool check_solution(const Assignment &assignment, const CspConstraint &constraint,
                    const Csp &csp, const Scene &scene, const Thresholds &thresholds,
                    GeomStats *stats = nullptr);

// All all-different assignments of the normal variables satisfying every
// spatial and comparison constraint, in canonical order: variables sorted by
// name, instance ids compared lexicographically. Truncated at max_solutions.
std::vector<Assignment> enumerate_valid(const Csp &csp, const Scene &scene,
                                        const Thresholds &thresholds,
                                        std::size_t max_solutions = 100000,
                                        std::vector<SolveDiagnostic> *diags = nullptr,
                                        GeomStats *stats = nullptr);

// Applies MaxOf/MinOf constraints in textual order. Solutions are grouped by
// the assignment of the constraint's anchor variables (one trivial group when
// there are none) and only solutions whose target score is extremal within the
// group survive; ties all survive. Each constraint's output feeds the next.
std::vector<Assignment> apply_minmax(std::vector<Assignment> solutions, const Csp &csp,
                                     const Scene &scene, const Thresholds &thresholds,
                                     std::vector<SolveDiagnostic> *diags = nullptr);

// Deterministic pick among surviving solutions; ties (and Random) resolve by
// canonical enumeration order.
const Assignment &select_solution(const std::vector<Assignment> &solutions,
                                  Heuristic heuristic, std::uint64_t seed,
                                  const Scene &scene);

GroundingResult solve(const Csp &csp, const Scene &scene, const SolverConfig &config);

// Per-variable candidate filtering without joint search; the classical local
// baseline. Cyclic constraint structure deadlocks and reports UNSATISFIABLE.
GroundingResult solve_local(const Csp &csp, const Scene &scene,
                            const SolverConfig &config);

nlohmann::ordered_json grounding_result_to_json(const GroundingResult &result);

}  // namespace csvg
