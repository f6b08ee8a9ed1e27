// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <algorithm>
#include <set>

#include "csvg/solver.hpp"
#include "support.hpp"

using namespace csvg;
using testsupport::as_set;
using testsupport::box_at;

namespace {

CspVariable mk_var(std::string name, std::vector<std::string> labels,
                   Polarity polarity = Polarity::Normal) {
  CspVariable v;
  v.name = std::move(name);
  v.label_set = std::move(labels);
  v.polarity = polarity;
  return v;
}

CspConstraint mk_spatial(RelationKind kind, std::string target, std::string anchor) {
  CspConstraint c;
  c.kind = kind;
  c.target = std::move(target);
  c.anchors = {std::move(anchor)};
  return c;
}

CspConstraint mk_minmax(RelationKind kind, std::string target, ScoreFunc func,
                        std::optional<std::string> anchor = std::nullopt) {
  CspConstraint c;
  c.kind = kind;
  c.target = std::move(target);
  c.score_func = func;
  if (anchor) c.anchors = {*anchor};
  return c;
}

bool has_solver_diag(const std::vector<SolveDiagnostic> &diags, const std::string &stage,
                     const std::string &needle) {
  return std::any_of(diags.begin(), diags.end(), [&](const SolveDiagnostic &d) {
    return d.stage == stage && d.message.find(needle) != std::string::npos;
  });
}

}  // namespace

TEST_SUITE_BEGIN("solver");

TEST_CASE("check_solution applies the negative-domain rule") {
  Scene scene = make_scene("s", {
      box_at("fridge_0", "refrigerator", 0, 0, 0.9, 0.9, 0.8, 1.8),
      box_at("can_0", "trash can", 1.0, 0, 0.2, 0.3, 0.3, 0.4),
      box_at("can_1", "trash can", 6.0, 0, 0.2, 0.3, 0.3, 0.4),
  });
  Csp csp;
  csp.variables = {mk_var("CAN", {"trash can"}),
                   mk_var("NEG_F", {"refrigerator"}, Polarity::Negative)};
  csp.target = "CAN";
  CspConstraint near_neg = mk_spatial(RelationKind::Near, "NEG_F", "CAN");

  CHECK(!check_solution({{"CAN", "can_0"}}, near_neg, csp, scene, {}));
  CHECK(check_solution({{"CAN", "can_1"}}, near_neg, csp, scene, {}));

  // the rule is the same with the negative variable in the anchor slot
  CspConstraint near_anchor = mk_spatial(RelationKind::Near, "CAN", "NEG_F");
  CHECK(!check_solution({{"CAN", "can_0"}}, near_anchor, csp, scene, {}));
  CHECK(check_solution({{"CAN", "can_1"}}, near_anchor, csp, scene, {}));
}

TEST_CASE("check_solution evaluates comparisons with strict inequality") {
  Scene scene = make_scene("s", {
      box_at("small", "box", -1, 0, 0.25, 0.5, 0.5, 0.5),
      box_at("big", "box", 1, 0, 0.5, 1.0, 1.0, 1.0),
      box_at("twin", "box", 3, 0, 0.5, 1.0, 1.0, 1.0),
  });
  Csp csp;
  csp.variables = {mk_var("A", {"box"}), mk_var("B", {"box"})};
  csp.target = "A";
  CspConstraint less;
  less.kind = RelationKind::Less;
  less.target = "A";
  less.reference = "B";
  less.score_func = ScoreFunc::Size;

  CHECK(check_solution({{"A", "small"}, {"B", "big"}}, less, csp, scene, {}));
  CHECK(!check_solution({{"A", "big"}, {"B", "small"}}, less, csp, scene, {}));
  // equal scores satisfy neither LESS nor MORE
  CHECK(!check_solution({{"A", "big"}, {"B", "twin"}}, less, csp, scene, {}));
  CspConstraint more = less;
  more.kind = RelationKind::More;
  CHECK(!check_solution({{"A", "big"}, {"B", "twin"}}, more, csp, scene, {}));
}

TEST_CASE("enumeration follows the canonical order") {
  Scene scene = make_scene("s", {
      box_at("c1", "chair", 0, 0, 0.5, 0.5, 0.5, 1),
      box_at("c2", "chair", 2, 0, 0.5, 0.5, 0.5, 1),
      box_at("c3", "chair", 4, 0, 0.5, 0.5, 0.5, 1),
  });
  Csp csp;
  csp.variables = {mk_var("B_VAR", {"chair"}), mk_var("A_VAR", {"chair"})};
  csp.target = "A_VAR";

  std::vector<Assignment> sols = enumerate_valid(csp, scene, {});
  std::vector<Assignment> expected = {
      {{"A_VAR", "c1"}, {"B_VAR", "c2"}}, {{"A_VAR", "c1"}, {"B_VAR", "c3"}},
      {{"A_VAR", "c2"}, {"B_VAR", "c1"}}, {{"A_VAR", "c2"}, {"B_VAR", "c3"}},
      {{"A_VAR", "c3"}, {"B_VAR", "c1"}}, {{"A_VAR", "c3"}, {"B_VAR", "c2"}},
  };
  CHECK(sols == expected);
}

TEST_CASE("enumeration reports empty domains and truncation") {
  Scene scene = make_scene("s", {
      box_at("c1", "chair", 0, 0, 0.5, 0.5, 0.5, 1),
      box_at("c2", "chair", 2, 0, 0.5, 0.5, 0.5, 1),
      box_at("c3", "chair", 4, 0, 0.5, 0.5, 0.5, 1),
  });
  Csp missing;
  missing.variables = {mk_var("A", {"zeppelin"})};
  missing.target = "A";
  std::vector<SolveDiagnostic> diags;
  CHECK(enumerate_valid(missing, scene, {}, 1000, &diags).empty());
  CHECK(has_solver_diag(diags, "filter", "variable 'A' has an empty domain"));

  Csp wide;
  wide.variables = {mk_var("A", {"chair"})};
  wide.target = "A";
  diags.clear();
  std::vector<Assignment> sols = enumerate_valid(wide, scene, {}, 2, &diags);
  CHECK(sols.size() == 2);
  CHECK(has_solver_diag(diags, "filter", "solution limit reached; enumeration truncated"));
}

TEST_CASE("min max aggregation groups by anchor and keeps ties") {
  Scene scene = make_scene("s", {
      box_at("t_a", "table", 0, 0, 0.4, 1, 1, 0.8),
      box_at("t_b", "table", 10, 0, 0.4, 1, 1, 0.8),
      box_at("c_w", "cup", -1, 0, 0.9, 0.2, 0.2, 0.2),
      box_at("c_x", "cup", 1, 0, 0.9, 0.2, 0.2, 0.2),
      box_at("c_y", "cup", 2, 0, 0.9, 0.2, 0.2, 0.2),
      box_at("c_z", "cup", 9, 0, 0.9, 0.2, 0.2, 0.2),
  });
  Csp csp;
  csp.variables = {mk_var("CUP", {"cup"}), mk_var("TABLE", {"table"})};
  csp.target = "CUP";
  csp.constraints = {mk_minmax(RelationKind::MinOf, "CUP", ScoreFunc::Distance, "TABLE")};

  std::vector<Assignment> all = enumerate_valid(csp, scene, {});
  CHECK(all.size() == 8);
  std::vector<SolveDiagnostic> diags;
  std::vector<Assignment> kept = apply_minmax(all, csp, scene, {}, &diags);

  // per table group: c_w and c_x tie at distance 1 from t_a; c_z wins t_b
  std::set<Assignment> expected = {
      {{"CUP", "c_w"}, {"TABLE", "t_a"}},
      {{"CUP", "c_x"}, {"TABLE", "t_a"}},
      {{"CUP", "c_z"}, {"TABLE", "t_b"}},
  };
  CHECK(as_set(kept) == expected);
  CHECK(has_solver_diag(diags, "minmax", "MIN_OF(distance) kept 3 of 8 solutions"));
}

TEST_CASE("min max constraints chain in textual order") {
  Scene scene = make_scene("s", {
      box_at("low_big", "box", 0, 0, 1.0, 0.5, 0.5, 0.5),
      box_at("high_big", "box", 2, 0, 2.0, 0.5, 0.5, 0.5),
      box_at("small", "box", 4, 0, 0.2, 0.3, 0.3, 0.3),
  });
  Csp csp;
  csp.variables = {mk_var("B", {"box"})};
  csp.target = "B";
  csp.constraints = {mk_minmax(RelationKind::MaxOf, "B", ScoreFunc::Size),
                     mk_minmax(RelationKind::MinOf, "B", ScoreFunc::PositionZ)};

  std::vector<Assignment> all = enumerate_valid(csp, scene, {});
  std::vector<Assignment> kept = apply_minmax(all, csp, scene, {});
  REQUIRE(kept.size() == 1);
  CHECK(kept[0].at("B") == "low_big");

  // reversed order picks the lowest first, then the larger of the ties
  Csp reversed = csp;
  std::swap(reversed.constraints[0], reversed.constraints[1]);
  std::vector<Assignment> kept2 = apply_minmax(all, reversed, scene, {});
  REQUIRE(kept2.size() == 1);
  CHECK(kept2[0].at("B") == "small");
}

TEST_CASE("solution selection covers every heuristic") {
  Scene scene = make_scene("s", {
      box_at("a1", "box", 0, 0, 0.5, 0.5, 0.5, 0.5),
      box_at("b1", "box", 1, 0, 0.5, 0.5, 0.5, 0.5),
      box_at("a2", "box", 10, 0, 0.5, 0.5, 0.5, 0.5),
      box_at("b2", "box", 16, 0, 0.5, 0.5, 0.5, 0.5),
  });
  std::vector<Assignment> sols = {
      {{"A", "a1"}, {"B", "b1"}},   // avg pair distance 1
      {{"A", "a2"}, {"B", "b2"}},   // avg pair distance 6
  };
  CHECK(select_solution(sols, Heuristic::MinAvgDistance, 0, scene) == sols[0]);
  CHECK(select_solution(sols, Heuristic::MaxAvgDistance, 0, scene) == sols[1]);
  CHECK(select_solution(sols, Heuristic::First, 0, scene) == sols[0]);

  const Assignment &r7 = select_solution(sols, Heuristic::Random, 7, scene);
  CHECK(select_solution(sols, Heuristic::Random, 7, scene) == r7);
  std::set<std::string> seen;
  for (std::uint64_t seed = 0; seed < 32; ++seed)
    seen.insert(select_solution(sols, Heuristic::Random, seed, scene).at("A"));
  CHECK(seen.size() == 2);

  // single-variable assignments have no pairs; the first one wins ties
  std::vector<Assignment> singles = {{{"A", "a2"}}, {{"A", "a1"}}};
  CHECK(select_solution(singles, Heuristic::MinAvgDistance, 0, scene) == singles[0]);
  CHECK(select_solution(singles, Heuristic::MaxAvgDistance, 0, scene) == singles[0]);

  CHECK_THROWS_AS(select_solution({}, Heuristic::First, 0, scene), std::invalid_argument);
}

TEST_CASE("solve reports the three statuses") {
  Scene scene = make_scene("s", {
      box_at("d0", "desk", 0, 0, 0.4, 1, 0.6, 0.8),
      box_at("b0", "bed", 1.5, 0, 0.3, 2, 1.5, 0.6),
  });

  Csp good;
  good.variables = {mk_var("DESK", {"desk"}), mk_var("BED", {"bed"})};
  good.constraints = {mk_spatial(RelationKind::Near, "DESK", "BED")};
  good.target = "DESK";
  GroundingResult ok = solve(good, scene, {});
  CHECK(ok.status == SolveStatus::Solved);
  CHECK(*ok.target_instance == "d0");
  CHECK(ok.target_bbox == scene.find("d0")->bbox);
  CHECK(ok.anchor_assignment == std::map<std::string, std::string>{{"BED", "b0"}});
  CHECK(ok.solution_count == 1);
  CHECK(has_solver_diag(ok.diagnostics, "filter", "1 assignments satisfy the constraints"));

  Csp unsat = good;
  unsat.constraints = {mk_spatial(RelationKind::Far, "DESK", "BED")};
  GroundingResult no = solve(unsat, scene, {});
  CHECK(no.status == SolveStatus::Unsatisfiable);
  CHECK(!no.target_instance.has_value());
  CHECK(no.solution_count == 0);

  Csp headless = good;
  headless.target = "";
  GroundingResult inv = solve(headless, scene, {});
  CHECK(inv.status == SolveStatus::InvalidProgram);
  CHECK(has_solver_diag(inv.diagnostics, "validate", "the CSP does not designate a target"));

  Csp neg;
  neg.variables = {mk_var("N", {"desk"}, Polarity::Negative)};
  neg.target = "N";
  GroundingResult inv2 = solve(neg, scene, {});
  CHECK(inv2.status == SolveStatus::InvalidProgram);
  CHECK(has_solver_diag(inv2.diagnostics, "validate", "the target cannot be a negative variable"));
}

TEST_CASE("disabling min max keeps the full solution pool") {
  Scene scene = make_scene("s", {
      box_at("b1", "box", 0, 0, 0.25, 0.5, 0.5, 0.5),
      box_at("b2", "box", 2, 0, 0.5, 1, 1, 1),
  });
  Csp csp;
  csp.variables = {mk_var("B", {"box"})};
  csp.target = "B";
  csp.constraints = {mk_minmax(RelationKind::MaxOf, "B", ScoreFunc::Size)};

  SolverConfig with;
  GroundingResult a = solve(csp, scene, with);
  CHECK(a.solution_count == 1);
  CHECK(*a.target_instance == "b2");

  SolverConfig without;
  without.minmax_enabled = false;
  GroundingResult b = solve(csp, scene, without);
  CHECK(b.solution_count == 2);
  CHECK(has_solver_diag(b.diagnostics, "minmax", "min/max constraints disabled; skipped"));
}

TEST_CASE("scaling scene and thresholds together changes nothing") {
  for (std::uint64_t seed = 100; seed < 120; ++seed) {
    testsupport::RandomCase rc = testsupport::make_random_case(seed);

    std::vector<Instance> doubled;
    for (const Instance &inst : rc.scene.instances) {
      if (inst.is_virtual) continue;
      Instance copy = inst;
      copy.bbox.min_corner = inst.bbox.min_corner * 2.0;
      copy.bbox.max_corner = inst.bbox.max_corner * 2.0;
      copy.points.reset();
      doubled.push_back(copy);
    }
    Scene scaled = make_scene(rc.scene.id, doubled);

    Thresholds th;
    Thresholds th2;
    th2.near_distance *= 2;
    th2.far_distance *= 2;
    th2.above_below_horizontal_distance *= 2;
    th2.between_distance *= 2;

    std::vector<Assignment> base = enumerate_valid(rc.csp, rc.scene, th);
    std::vector<Assignment> big = enumerate_valid(rc.csp, scaled, th2);
    CHECK(base == big);
  }
}

TEST_CASE("adding a constraint never enlarges the solution set") {
  int shrunk = 0;
  for (std::uint64_t seed = 200; seed < 260; ++seed) {
    testsupport::RandomCase rc = testsupport::make_random_case(seed);
    if (rc.csp.constraints.empty()) continue;
    Csp relaxed = rc.csp;
    relaxed.constraints.pop_back();
    std::set<Assignment> strictly = as_set(enumerate_valid(rc.csp, rc.scene, {}));
    std::set<Assignment> loosely = as_set(enumerate_valid(relaxed, rc.scene, {}));
    for (const Assignment &a : strictly) CHECK(loosely.count(a) == 1);
    if (strictly.size() < loosely.size()) ++shrunk;
  }
  CHECK(shrunk > 0);
}

TEST_CASE("solved assignments pass a post hoc check of every constraint") {
  for (std::uint64_t seed = 300; seed < 340; ++seed) {
    testsupport::RandomCase rc = testsupport::make_random_case(seed);
    GroundingResult res = solve(rc.csp, rc.scene, {});
    if (res.status != SolveStatus::Solved) continue;
    if (res.solution_count > 1) continue;  // reported anchors are then the unique ones
    Assignment full = res.anchor_assignment;
    full[rc.csp.target] = *res.target_instance;
    for (const CspConstraint &con : rc.csp.constraints) {
      if (is_minmax(con.kind)) continue;
      CHECK(check_solution(full, con, rc.csp, rc.scene, {}));
    }
  }
}

TEST_CASE("the global engine agrees with the reference enumerator") {
  int nonempty = 0;
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    testsupport::RandomCase rc = testsupport::make_random_case(seed);
    std::set<Assignment> expected = testsupport::oracle_enumerate(rc.csp, rc.scene, {});
    std::vector<Assignment> got = enumerate_valid(rc.csp, rc.scene, {});
    CHECK(as_set(got) == expected);
    CHECK(got.size() == expected.size());  // no duplicates in the fast engine
    if (!expected.empty()) ++nonempty;
  }
  CHECK(nonempty > 25);
}

TEST_CASE("committing to min max before filtering is a documented failure mode") {
  // one shelf cup is biggest overall but sits away from the table
  Scene scene = make_scene("s", {
      box_at("shelf_0", "shelf", 4, 4, 0.9, 0.8, 0.4, 1.8),
      box_at("cup_0", "cup", 4, 4, 1.95, 0.45, 0.3, 0.35),
      box_at("table_0", "table", 0, 0, 0.375, 1.4, 1.4, 0.75),
      box_at("cup_1", "cup", -0.1, 0, 0.85, 0.2, 0.2, 0.2),
      box_at("cup_2", "cup", 0.35, 0, 0.9, 0.3, 0.3, 0.3),
  });
  Csp csp;
  csp.variables = {mk_var("CUP", {"cup"}), mk_var("TABLE", {"table"})};
  csp.constraints = {mk_spatial(RelationKind::On, "CUP", "TABLE"),
                     mk_minmax(RelationKind::MaxOf, "CUP", ScoreFunc::Size)};
  csp.target = "CUP";

  GroundingResult global = solve(csp, scene, {});
  CHECK(global.status == SolveStatus::Solved);
  CHECK(*global.target_instance == "cup_2");

  SolverConfig first;
  first.minmax_first = true;
  GroundingResult greedy = solve(csp, scene, first);
  CHECK(greedy.status == SolveStatus::Solved);
  CHECK(*greedy.target_instance == "cup_0");
  CHECK(has_solver_diag(greedy.diagnostics, "order",
                        "min/max constraints applied before spatial filtering"));
  CHECK(has_solver_diag(greedy.diagnostics, "filter",
                        "spatial constraints unsatisfied after min/max commitment"));
}

TEST_CASE("the local engine filters candidates one constraint at a time") {
  Scene scene = make_scene("s", {
      box_at("desk_0", "desk", 0, 0, 0.4, 1.2, 0.7, 0.8),
      box_at("desk_1", "desk", 4, 0, 0.4, 1.2, 0.7, 0.8),
      box_at("printer_0", "printer", 4, 0, 1.0, 0.4, 0.4, 0.4),
  });
  Csp csp;
  csp.variables = {mk_var("DESK", {"desk"}), mk_var("PRINTER", {"printer"})};
  csp.constraints = {mk_spatial(RelationKind::On, "PRINTER", "DESK")};
  csp.target = "DESK";

  // joint reasoning identifies the desk that carries the printer
  GroundingResult global = solve(csp, scene, {});
  CHECK(global.status == SolveStatus::Solved);
  CHECK(*global.target_instance == "desk_1");

  // the local pass filters PRINTER by desks, never DESK by the printer
  GroundingResult local = solve_local(csp, scene, {});
  CHECK(local.status == SolveStatus::Solved);
  CHECK(*local.target_instance == "desk_0");
  CHECK(has_solver_diag(local.diagnostics, "local", "kept 1 of 1 candidates for 'PRINTER'"));
}

TEST_CASE("the local engine deadlocks on cyclic structure") {
  Scene scene = make_scene("s", {
      box_at("c1", "chair", 0, 0, 0.5, 0.5, 0.5, 1),
      box_at("c2", "chair", 1, 0, 0.5, 0.5, 0.5, 1),
  });
  Csp csp;
  csp.variables = {mk_var("A", {"chair"}), mk_var("B", {"chair"})};
  csp.constraints = {mk_spatial(RelationKind::Near, "A", "B"),
                     mk_spatial(RelationKind::Near, "B", "A")};
  csp.target = "A";

  CHECK(solve(csp, scene, {}).status == SolveStatus::Solved);

  GroundingResult local = solve_local(csp, scene, {});
  CHECK(local.status == SolveStatus::Unsatisfiable);
  CHECK(has_solver_diag(local.diagnostics, "local",
                        "cyclic constraints; the local engine cannot order them"));
}

TEST_CASE("the local engine handles chains, negatives and min max candidates") {
  Scene scene = make_scene("s", {
      box_at("lamp_0", "lamp", 0, 0, 1.2, 0.3, 0.3, 0.6),
      box_at("lamp_1", "lamp", 6, 0, 1.2, 0.3, 0.3, 0.6),
      box_at("desk_0", "desk", 0.5, 0, 0.4, 1.2, 0.7, 0.8),
      box_at("chair_0", "chair", 1.2, 0, 0.5, 0.5, 0.5, 1),
      box_at("chair_1", "chair", 8, 0, 0.5, 0.5, 0.5, 1),
  });

  // chain: CHAIR near DESK, LAMP near CHAIR; orderable left to right
  Csp chain;
  chain.variables = {mk_var("CHAIR", {"chair"}), mk_var("DESK", {"desk"}),
                     mk_var("LAMP", {"lamp"})};
  chain.constraints = {mk_spatial(RelationKind::Near, "CHAIR", "DESK"),
                       mk_spatial(RelationKind::Near, "LAMP", "CHAIR")};
  chain.target = "LAMP";
  GroundingResult res = solve_local(chain, scene, {});
  CHECK(res.status == SolveStatus::Solved);
  CHECK(*res.target_instance == "lamp_0");
  CHECK(res.anchor_assignment.at("CHAIR") == "chair_0");
  CHECK(res.anchor_assignment.at("DESK") == "desk_0");

  // a negative constraint filters the surviving normal side
  Csp neg;
  neg.variables = {mk_var("CHAIR", {"chair"}),
                   mk_var("NEG_D", {"desk"}, Polarity::Negative)};
  neg.constraints = {mk_spatial(RelationKind::Near, "CHAIR", "NEG_D")};
  neg.target = "CHAIR";
  GroundingResult far_chair = solve_local(neg, scene, {});
  CHECK(far_chair.status == SolveStatus::Solved);
  CHECK(*far_chair.target_instance == "chair_1");

  // min/max refines the target candidate set after the relational passes
  Csp closest;
  closest.variables = {mk_var("LAMP", {"lamp"}), mk_var("DESK", {"desk"})};
  closest.constraints = {mk_minmax(RelationKind::MinOf, "LAMP", ScoreFunc::Distance, "DESK")};
  closest.target = "LAMP";
  GroundingResult nearest = solve_local(closest, scene, {});
  CHECK(nearest.status == SolveStatus::Solved);
  CHECK(*nearest.target_instance == "lamp_0");
}

TEST_CASE("the local engine reports empty domains") {
  Scene scene = make_scene("s", {box_at("c1", "chair", 0, 0, 0.5, 0.5, 0.5, 1)});
  Csp csp;
  csp.variables = {mk_var("A", {"unicorn"})};
  csp.target = "A";
  GroundingResult res = solve_local(csp, scene, {});
  CHECK(res.status == SolveStatus::Unsatisfiable);
  CHECK(has_solver_diag(res.diagnostics, "local", "variable 'A' has an empty domain"));
}

TEST_CASE("grounding results serialize with a fixed field order") {
  Scene scene = make_scene("s", {
      box_at("d0", "desk", 0, 0, 0.4, 1, 0.6, 0.8),
      box_at("b0", "bed", 1.5, 0, 0.3, 2, 1.5, 0.6),
  });
  Csp csp;
  csp.variables = {mk_var("DESK", {"desk"}), mk_var("BED", {"bed"})};
  csp.constraints = {mk_spatial(RelationKind::Near, "DESK", "BED")};
  csp.target = "DESK";
  nlohmann::ordered_json doc = grounding_result_to_json(solve(csp, scene, {}));

  std::vector<std::string> keys;
  for (auto it = doc.begin(); it != doc.end(); ++it) keys.push_back(it.key());
  CHECK(keys == std::vector<std::string>{"status", "target_instance", "target_bbox",
                                         "anchor_assignment", "solution_count",
                                         "diagnostics"});
  CHECK(doc["status"] == "SOLVED");
  CHECK(doc["target_instance"] == "d0");
  CHECK(doc["anchor_assignment"]["BED"] == "b0");
  CHECK(doc["diagnostics"].is_array());

  GroundingResult unsat;
  nlohmann::ordered_json empty_doc = grounding_result_to_json(unsat);
  CHECK(empty_doc["status"] == "UNSATISFIABLE");
  CHECK(empty_doc["target_instance"].is_null());
  CHECK(empty_doc["target_bbox"].is_null());
}

TEST_SUITE_END();
