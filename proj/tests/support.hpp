// SPDX-License-Identifier: Apache-2.0
//
// Shared helpers for the test binaries: small scene builders, a seeded random
// CSP generator, and an exhaustive solution oracle written directly from the
// solving rules. The oracle shares only the geometric predicates with the
// library; enumeration, the all-different rule and the negative-variable rule
// are reimplemented here so the two paths can disagree.
#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "csvg/csp.hpp"
#include "csvg/geometry.hpp"
#include "csvg/scene.hpp"
#include "csvg/solver.hpp"

namespace testsupport {

inline csvg::Instance box_at(std::string id, std::string label, double cx, double cy,
                             double cz, double ex, double ey, double ez) {
  csvg::Instance inst;
  inst.id = std::move(id);
  inst.label = std::move(label);
  inst.bbox = {{cx - ex / 2, cy - ey / 2, cz - ez / 2},
               {cx + ex / 2, cy + ey / 2, cz + ez / 2}};
  return inst;
}

// ---------------------------------------------------------------------------
// Exhaustive oracle.
//
// Rules, restated independently of the implementation:
//  - an assignment maps every NORMAL variable to an instance of its domain,
//    no instance used twice;
//  - a spatial or comparison constraint with only normal participants must
//    hold on the assigned instances (comparisons are strict inequalities);
//  - a constraint involving a negative variable rejects the assignment as
//    soon as ANY instance of the negative variable's domain makes the
//    constraint hold, with the other participants taken from the assignment.
// ---------------------------------------------------------------------------

inline bool oracle_holds(const csvg::CspConstraint &con,
                         const std::map<std::string, const csvg::Instance *> &bound,
                         const csvg::Scene &scene, const csvg::Thresholds &th) {
  if (csvg::is_comparison(con.kind)) {
    const csvg::Instance *anchor =
        con.anchors.empty() ? nullptr : bound.at(con.anchors.front());
    double st = csvg::eval_score(*con.score_func, *bound.at(con.target), scene, anchor);
    double sr = csvg::eval_score(*con.score_func, *bound.at(*con.reference), scene, anchor);
    return con.kind == csvg::RelationKind::Less ? st < sr : st > sr;
  }
  std::vector<const csvg::Instance *> anchors;
  for (const std::string &name : con.anchors) anchors.push_back(bound.at(name));
  return csvg::eval_relation(con.kind, *bound.at(con.target), anchors, scene, th);
}

inline std::vector<const csvg::Instance *> oracle_domain(
    const csvg::Scene &scene, const std::vector<std::string> &labels) {
  return csvg::domain_of(scene, std::set<std::string>(labels.begin(), labels.end()));
}

inline std::set<csvg::Assignment> oracle_enumerate(const csvg::Csp &csp,
                                                   const csvg::Scene &scene,
                                                   const csvg::Thresholds &th) {
  std::vector<const csvg::CspVariable *> normals;
  for (const csvg::CspVariable &v : csp.variables)
    if (v.polarity == csvg::Polarity::Normal) normals.push_back(&v);
  std::sort(normals.begin(), normals.end(),
            [](const csvg::CspVariable *a, const csvg::CspVariable *b) {
              return a->name < b->name;
            });

  std::vector<std::vector<const csvg::Instance *>> domains;
  for (const csvg::CspVariable *v : normals)
    domains.push_back(oracle_domain(scene, v->label_set));

  std::set<csvg::Assignment> out;
  if (normals.empty()) return out;
  for (const auto &dom : domains)
    if (dom.empty()) return out;

  std::vector<std::size_t> idx(normals.size(), 0);
  for (;;) {
    // materialize the candidate
    std::map<std::string, const csvg::Instance *> bound;
    bool distinct = true;
    {
      std::set<std::string> seen;
      for (std::size_t i = 0; i < normals.size(); ++i) {
        const csvg::Instance *inst = domains[i][idx[i]];
        if (!seen.insert(inst->id).second) distinct = false;
        bound[normals[i]->name] = inst;
      }
    }
    if (distinct) {
      bool ok = true;
      for (const csvg::CspConstraint &con : csp.constraints) {
        if (csvg::is_minmax(con.kind)) continue;

        // collect negative participants (the lowering allows at most one)
        const csvg::CspVariable *neg = nullptr;
        const csvg::CspVariable *tv = csp.find_variable(con.target);
        if (tv && tv->polarity == csvg::Polarity::Negative) neg = tv;
        for (const std::string &name : con.anchors) {
          const csvg::CspVariable *av = csp.find_variable(name);
          if (av && av->polarity == csvg::Polarity::Negative) neg = av;
        }

        if (!neg) {
          if (!oracle_holds(con, bound, scene, th)) ok = false;
        } else {
          for (const csvg::Instance *cand : oracle_domain(scene, neg->label_set)) {
            auto with = bound;
            with[neg->name] = cand;
            if (oracle_holds(con, with, scene, th)) {
              ok = false;
              break;
            }
          }
        }
        if (!ok) break;
      }
      if (ok) {
        csvg::Assignment a;
        for (const auto &[name, inst] : bound) a[name] = inst->id;
        out.insert(std::move(a));
      }
    }

    // odometer
    std::size_t i = idx.size();
    while (i > 0) {
      --i;
      if (++idx[i] < domains[i].size()) break;
      idx[i] = 0;
      if (i == 0) return out;
    }
  }
}

// ---------------------------------------------------------------------------
// Seeded random scenes and CSPs for the differential suite.
// ---------------------------------------------------------------------------

struct RandomCase {
  csvg::Scene scene;
  csvg::Csp csp;
};

inline RandomCase make_random_case(std::uint64_t seed) {
  std::mt19937_64 rng(seed ^ 0xD1B54A32D192ED03ull);
  auto pick = [&](int lo, int hi) { return lo + int(rng() % std::uint64_t(hi - lo + 1)); };
  auto real = [&](double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
  };
  static const std::vector<std::string> pool = {"chair", "table", "lamp", "box"};

  std::vector<csvg::Instance> instances;
  int n = pick(1, 8);
  for (int i = 0; i < n; ++i)
    instances.push_back(box_at("obj_" + std::to_string(i), pool[rng() % pool.size()],
                               real(-4, 4), real(-4, 4), real(0, 2), real(0.2, 1.2),
                               real(0.2, 1.2), real(0.2, 1.2)));
  RandomCase out{csvg::make_scene("rand_" + std::to_string(seed), std::move(instances)),
                 csvg::Csp{}};

  auto random_label_set = [&] {
    std::set<std::string> chosen;
    int count = pick(1, 2);
    while (int(chosen.size()) < count) chosen.insert(pool[rng() % pool.size()]);
    return std::vector<std::string>(chosen.begin(), chosen.end());
  };

  int nv = pick(1, 4);
  for (int i = 0; i < nv; ++i) {
    csvg::CspVariable v;
    v.name = std::string("VAR_") + char('A' + i);
    v.label_set = random_label_set();
    out.csp.variables.push_back(std::move(v));
  }
  bool with_negative = pick(0, 1) == 1;
  if (with_negative) {
    csvg::CspVariable v;
    v.name = "NEG_X";
    v.label_set = random_label_set();
    v.polarity = csvg::Polarity::Negative;
    out.csp.variables.push_back(std::move(v));
  }
  out.csp.target = "VAR_A";

  std::vector<std::string> normals;
  for (int i = 0; i < nv; ++i) normals.push_back(std::string("VAR_") + char('A' + i));

  static const csvg::RelationKind spatial_kinds[] = {
      csvg::RelationKind::Above, csvg::RelationKind::Below, csvg::RelationKind::On,
      csvg::RelationKind::Under, csvg::RelationKind::Far,   csvg::RelationKind::Near,
      csvg::RelationKind::Beside, csvg::RelationKind::Left, csvg::RelationKind::Right,
      csvg::RelationKind::Inside};
  static const csvg::ScoreFunc plain_scores[] = {
      csvg::ScoreFunc::SizeX, csvg::ScoreFunc::SizeZ, csvg::ScoreFunc::Size,
      csvg::ScoreFunc::PositionZ, csvg::ScoreFunc::Left, csvg::ScoreFunc::Front,
      csvg::ScoreFunc::DistanceToCenter};

  int nc = pick(1, 5);
  for (int c = 0; c < nc; ++c) {
    csvg::CspConstraint con;
    int style = pick(0, 9);
    if (style <= 5 || nv < 2) {
      // single-anchor spatial; one side may be the negative variable
      con.kind = spatial_kinds[rng() % std::size(spatial_kinds)];
      std::string a = normals[rng() % normals.size()];
      std::string b = with_negative && pick(0, 3) == 0 ? std::string("NEG_X")
                                                       : normals[rng() % normals.size()];
      if (a == b) b = with_negative ? "NEG_X" : a;  // self-relation stays legal
      if (pick(0, 1) == 0 && b == "NEG_X") {
        con.target = b;
        con.anchors = {a};
      } else {
        con.target = a;
        con.anchors = {b};
      }
    } else if (style <= 7 && nv >= 3) {
      con.kind = csvg::RelationKind::Between;
      con.target = normals[0];
      con.anchors = {normals[1], normals[2]};
      if (with_negative && pick(0, 3) == 0) con.anchors[1] = "NEG_X";
    } else {
      con.kind = pick(0, 1) == 0 ? csvg::RelationKind::Less : csvg::RelationKind::More;
      con.target = normals[rng() % normals.size()];
      con.reference = normals[rng() % normals.size()];
      if (*con.reference == con.target)
        con.reference = normals[(std::find(normals.begin(), normals.end(), con.target) -
                                 normals.begin() + 1) % normals.size()];
      if (nv >= 3 && pick(0, 1) == 0) {
        con.score_func = csvg::ScoreFunc::Distance;
        for (const std::string &name : normals)
          if (name != con.target && name != *con.reference) {
            con.anchors = {name};
            break;
          }
      } else {
        con.score_func = plain_scores[rng() % std::size(plain_scores)];
      }
    }
    con.source_line = c + 1;
    out.csp.constraints.push_back(std::move(con));
  }
  return out;
}

inline std::set<csvg::Assignment> as_set(const std::vector<csvg::Assignment> &v) {
  return std::set<csvg::Assignment>(v.begin(), v.end());
}

}  // namespace testsupport
