// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "csvg/scene.hpp"

namespace csvg {

// Distance thresholds, in scene units (meters). Generous defaults work best:
// the constraint structure, not tight metric cutoffs, does the discriminating.
struct Thresholds {
  double near_distance = 2.5;
  double far_distance = 2.5;
  double above_below_horizontal_distance = 1.5;
  double between_distance = 1.5;
  // Off by default: ON/UNDER behave exactly like ABOVE/BELOW. When set, they
  // additionally require center distance <= above_below_horizontal_distance.
  bool on_requires_proximity = false;
};

// Frame of a viewer standing at `origin` and looking toward the scene center.
// up is world +z, backward points from the scene center toward the viewer
// (horizontally), and right = up x backward. With the viewer's own x-axis
// pointing to their right, a positive x coordinate of a target is what the
// relation vocabulary calls "left": the relation names take the perspective of
// someone at the scene center looking at the arrangement, which mirrors the
// viewer's own left and right.
struct ViewerFrame {
  Point3 origin;
  Vec3 right;
  Vec3 up;
  Vec3 backward;
  bool degenerate = false;

  Vec3 to_frame(const Point3 &world) const {
    Vec3 d = world - origin;
    return {d.dot(right), d.dot(up), d.dot(backward)};
  }
};

// Falls back to backward = world +x (flagged) when the anchor sits on the
// vertical axis through the scene center.
ViewerFrame viewer_frame(const Point3 &anchor_center, const Point3 &scene_center);

enum class RelationKind {
  Above, Below, On, Under,
  Far, Away, Across, Opposite,
  Near, Beside, Close,
  Left, Right,
  Front, Behind,
  Center, Middle, In, Inside,
  Between,
  Less, More,
  MaxOf, MinOf,
};

bool is_spatial(RelationKind kind);
bool is_comparison(RelationKind kind);  // Less / More
bool is_minmax(RelationKind kind);      // MaxOf / MinOf
std::string relation_name(RelationKind kind);
std::optional<RelationKind> relation_from_name(std::string_view name);

enum class ScoreFunc {
  Distance,
  SizeX, SizeY, SizeZ, Size,
  PositionZ,
  Left, Right, Front,
  DistanceToCenter,
  DistanceToMiddle,  // alias of DistanceToCenter
};

bool score_needs_anchor(ScoreFunc func);
std::string score_func_name(ScoreFunc func);
std::optional<ScoreFunc> score_func_from_name(std::string_view name);

// Counters surfaced through solver diagnostics.
struct GeomStats {
  long long degenerate_frames = 0;
};

// Evaluates one spatial relation. `anchors` holds one instance for every
// family except Between, which takes two or more. Comparison and min/max kinds
// are not relations and are rejected.
bool eval_relation(RelationKind kind, const Instance &target,
                   const std::vector<const Instance *> &anchors,
                   const Scene &scene, const Thresholds &thresholds,
                   GeomStats *stats = nullptr);

// Score of one instance; `anchor` is required for Distance and rejected for
// every other function. Throws std::invalid_argument on a mismatched anchor.
double eval_score(ScoreFunc func, const Instance &inst, const Scene &scene,
                  const Instance *anchor = nullptr);

// Intersection over union of two boxes; 0 when the union has zero volume.
double iou_3d(const Aabb &a, const Aabb &b);

}  // namespace csvg
