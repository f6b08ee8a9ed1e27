// SPDX-License-Identifier: Apache-2.0
#include "csvg/geometry.hpp"

#include <cmath>
#include <stdexcept>
#include <unordered_map>

namespace csvg {

namespace {

constexpr double kDegenerateEps = 1e-9;

// The eight predicate families behind the twenty relation names.
enum class Family { AboveLike, BelowLike, FarLike, NearLike, LeftLike, RightLike, InsideLike, BetweenLike };

Family family_of(RelationKind kind) {
  switch (kind) {
    case RelationKind::Above:
    case RelationKind::On: return Family::AboveLike;
    case RelationKind::Below:
    case RelationKind::Under: return Family::BelowLike;
    case RelationKind::Far:
    case RelationKind::Away:
    case RelationKind::Across:
    case RelationKind::Opposite: return Family::FarLike;
    case RelationKind::Near:
    case RelationKind::Beside:
    case RelationKind::Close:
    case RelationKind::Front:
    case RelationKind::Behind: return Family::NearLike;
    case RelationKind::Left: return Family::LeftLike;
    case RelationKind::Right: return Family::RightLike;
    case RelationKind::Center:
    case RelationKind::Middle:
    case RelationKind::In:
    case RelationKind::Inside: return Family::InsideLike;
    case RelationKind::Between: return Family::BetweenLike;
    default: throw std::invalid_argument("not a spatial relation");
  }
}

}  // namespace

bool is_spatial(RelationKind kind) {
  switch (kind) {
    case RelationKind::Less:
    case RelationKind::More:
    case RelationKind::MaxOf:
    case RelationKind::MinOf: return false;
    default: return true;
  }
}

bool is_comparison(RelationKind kind) {
  return kind == RelationKind::Less || kind == RelationKind::More;
}

bool is_minmax(RelationKind kind) {
  return kind == RelationKind::MaxOf || kind == RelationKind::MinOf;
}

std::string relation_name(RelationKind kind) {
  switch (kind) {
    case RelationKind::Above: return "ABOVE";
    case RelationKind::Below: return "BELOW";
    case RelationKind::On: return "ON";
    case RelationKind::Under: return "UNDER";
    case RelationKind::Far: return "FAR";
    case RelationKind::Away: return "AWAY";
    case RelationKind::Across: return "ACROSS";
    case RelationKind::Opposite: return "OPPOSITE";
    case RelationKind::Near: return "NEAR";
    case RelationKind::Beside: return "BESIDE";
    case RelationKind::Close: return "CLOSE";
    case RelationKind::Left: return "LEFT";
    case RelationKind::Right: return "RIGHT";
    case RelationKind::Front: return "FRONT";
    case RelationKind::Behind: return "BEHIND";
    case RelationKind::Center: return "CENTER";
    case RelationKind::Middle: return "MIDDLE";
    case RelationKind::In: return "IN";
    case RelationKind::Inside: return "INSIDE";
    case RelationKind::Between: return "BETWEEN";
    case RelationKind::Less: return "LESS";
    case RelationKind::More: return "MORE";
    case RelationKind::MaxOf: return "MAX_OF";
    case RelationKind::MinOf: return "MIN_OF";
  }
  return "?";
}

std::optional<RelationKind> relation_from_name(std::string_view name) {
  static const std::unordered_map<std::string_view, RelationKind> table = {
      {"ABOVE", RelationKind::Above},     {"BELOW", RelationKind::Below},
      {"ON", RelationKind::On},           {"UNDER", RelationKind::Under},
      {"FAR", RelationKind::Far},         {"AWAY", RelationKind::Away},
      {"ACROSS", RelationKind::Across},   {"OPPOSITE", RelationKind::Opposite},
      {"NEAR", RelationKind::Near},       {"BESIDE", RelationKind::Beside},
      {"CLOSE", RelationKind::Close},     {"LEFT", RelationKind::Left},
      {"RIGHT", RelationKind::Right},     {"FRONT", RelationKind::Front},
      {"BEHIND", RelationKind::Behind},   {"CENTER", RelationKind::Center},
      {"MIDDLE", RelationKind::Middle},   {"IN", RelationKind::In},
      {"INSIDE", RelationKind::Inside},   {"BETWEEN", RelationKind::Between},
      {"LESS", RelationKind::Less},       {"MORE", RelationKind::More},
      {"MAX_OF", RelationKind::MaxOf},    {"MIN_OF", RelationKind::MinOf},
  };
  auto it = table.find(name);
  if (it == table.end()) return std::nullopt;
  return it->second;
}

bool score_needs_anchor(ScoreFunc func) { return func == ScoreFunc::Distance; }

std::string score_func_name(ScoreFunc func) {
  switch (func) {
    case ScoreFunc::Distance: return "distance";
    case ScoreFunc::SizeX: return "size-x";
    case ScoreFunc::SizeY: return "size-y";
    case ScoreFunc::SizeZ: return "size-z";
    case ScoreFunc::Size: return "size";
    case ScoreFunc::PositionZ: return "position-z";
    case ScoreFunc::Left: return "left";
    case ScoreFunc::Right: return "right";
    case ScoreFunc::Front: return "front";
    case ScoreFunc::DistanceToCenter: return "distance-to-center";
    case ScoreFunc::DistanceToMiddle: return "distance-to-middle";
  }
  return "?";
}

std::optional<ScoreFunc> score_func_from_name(std::string_view name) {
  static const std::unordered_map<std::string_view, ScoreFunc> table = {
      {"distance", ScoreFunc::Distance},
      {"size-x", ScoreFunc::SizeX},
      {"size-y", ScoreFunc::SizeY},
      {"size-z", ScoreFunc::SizeZ},
      {"size", ScoreFunc::Size},
      {"position-z", ScoreFunc::PositionZ},
      {"left", ScoreFunc::Left},
      {"right", ScoreFunc::Right},
      {"front", ScoreFunc::Front},
      {"distance-to-center", ScoreFunc::DistanceToCenter},
      {"distance-to-middle", ScoreFunc::DistanceToMiddle},
  };
  auto it = table.find(name);
  if (it == table.end()) return std::nullopt;
  return it->second;
}

ViewerFrame viewer_frame(const Point3 &anchor_center, const Point3 &scene_center) {
  ViewerFrame frame;
  frame.origin = anchor_center;
  frame.up = {0.0, 0.0, 1.0};
  Vec3 horiz{anchor_center.x - scene_center.x, anchor_center.y - scene_center.y, 0.0};
  if (horiz.norm() < kDegenerateEps) {
    frame.backward = {1.0, 0.0, 0.0};
    frame.degenerate = true;
  } else {
    frame.backward = horiz.normalized();
  }
  frame.right = frame.up.cross(frame.backward);
  return frame;
}

namespace {

double center_distance(const Instance &a, const Instance &b) {
  return (a.center() - b.center()).norm();
}

bool above_like(const Instance &target, const Instance &anchor, const Thresholds &th,
                bool on_kind) {
  if (target.center().z <= anchor.center().z) return false;
  if (horizontal_distance(target.center(), anchor.center()) >
      th.above_below_horizontal_distance)
    return false;
  if (on_kind && th.on_requires_proximity &&
      center_distance(target, anchor) > th.above_below_horizontal_distance)
    return false;
  return true;
}

}  // namespace

bool eval_relation(RelationKind kind, const Instance &target,
                   const std::vector<const Instance *> &anchors, const Scene &scene,
                   const Thresholds &thresholds, GeomStats *stats) {
  if (!is_spatial(kind)) throw std::invalid_argument("not a spatial relation");
  Family fam = family_of(kind);

  if (fam == Family::BetweenLike) {
    if (anchors.size() < 2)
      throw std::invalid_argument("BETWEEN needs at least two anchors");
    Point3 centroid;
    for (const Instance *a : anchors) centroid = centroid + a->center();
    centroid = centroid * (1.0 / double(anchors.size()));
    return (target.center() - centroid).norm() <= thresholds.between_distance;
  }

  if (anchors.size() != 1) throw std::invalid_argument("relation needs one anchor");
  const Instance &anchor = *anchors.front();

  switch (fam) {
    case Family::AboveLike:
      return above_like(target, anchor, thresholds,
                        kind == RelationKind::On);
    case Family::BelowLike:
      // Mirror of the above family with the roles of the z-coordinates swapped.
      return above_like(anchor, target, thresholds, kind == RelationKind::Under);
    case Family::FarLike:
      return center_distance(target, anchor) > thresholds.far_distance;
    case Family::NearLike:
      return center_distance(target, anchor) <= thresholds.near_distance;
    case Family::LeftLike:
    case Family::RightLike: {
      ViewerFrame frame = viewer_frame(anchor.center(), scene.scene_center);
      if (frame.degenerate && stats) stats->degenerate_frames++;
      double x = frame.to_frame(target.center()).x;
      return fam == Family::LeftLike ? x > 0.0 : x < 0.0;
    }
    case Family::InsideLike:
      return anchor.bbox.contains(target.center());
    default:
      return false;
  }
}

double eval_score(ScoreFunc func, const Instance &inst, const Scene &scene,
                  const Instance *anchor) {
  if (score_needs_anchor(func)) {
    if (!anchor)
      throw std::invalid_argument("score function 'distance' needs an anchor");
  } else if (anchor) {
    throw std::invalid_argument("score function '" + score_func_name(func) +
                                "' takes no anchor");
  }

  Vec3 ext = inst.bbox.extents();
  Vec3 off = inst.center() - scene.scene_center;
  switch (func) {
    case ScoreFunc::Distance: return center_distance(inst, *anchor);
    case ScoreFunc::SizeX: return ext.x;
    case ScoreFunc::SizeY: return ext.y;
    case ScoreFunc::SizeZ: return ext.z;
    case ScoreFunc::Size: return std::max(ext.x, std::max(ext.y, ext.z));
    case ScoreFunc::PositionZ: return inst.center().z;
    // Seen from the scene center, "more to the left" means further
    // counterclockwise, so the azimuth of the instance orders candidates the
    // same way the LEFT relation does for nearby anchors.
    case ScoreFunc::Left: return std::atan2(off.y, off.x);
    case ScoreFunc::Right: return -std::atan2(off.y, off.x);
    case ScoreFunc::Front: return horizontal_distance(inst.center(), scene.scene_center);
    case ScoreFunc::DistanceToCenter:
    case ScoreFunc::DistanceToMiddle: return off.norm();
  }
  return 0.0;
}

double iou_3d(const Aabb &a, const Aabb &b) {
  double ix = std::min(a.max_corner.x, b.max_corner.x) - std::max(a.min_corner.x, b.min_corner.x);
  double iy = std::min(a.max_corner.y, b.max_corner.y) - std::max(a.min_corner.y, b.min_corner.y);
  double iz = std::min(a.max_corner.z, b.max_corner.z) - std::max(a.min_corner.z, b.min_corner.z);
  double inter = std::max(ix, 0.0) * std::max(iy, 0.0) * std::max(iz, 0.0);
  double uni = a.volume() + b.volume() - inter;
  return uni > 0.0 ? inter / uni : 0.0;
}

}  // namespace csvg
