// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <iosfwd>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "csvg/geom.hpp"

namespace csvg {

// One labeled object of a scene. Virtual instances (room center, room corners)
// are injected by the loader and carry is_virtual = true; they never appear in
// serialized documents.
struct Instance {
  std::string id;
  std::string label;
  Aabb bbox;
  std::optional<std::vector<Point3>> points;
  bool is_virtual = false;

  Point3 center() const { return bbox.center(); }
};

struct Scene {
  std::string id;
  std::vector<Instance> instances;
  Point3 scene_center;  // center of the envelope of all non-virtual boxes

  const Instance *find(std::string_view instance_id) const;
};

class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Lowercases, trims, and collapses internal whitespace runs to single spaces.
std::string normalize_label(std::string_view raw);

// Validates instances, normalizes labels, computes the scene center and
// injects the virtual instances. Throws DataError on structural problems.
Scene make_scene(std::string id, std::vector<Instance> instances);

Scene scene_from_json(const nlohmann::json &doc);
Scene load_scene(std::istream &in);
Scene load_scene_file(const std::string &path);

// Document form: non-virtual instances only; loading it again gives back an
// identical Scene.
nlohmann::ordered_json scene_to_json(const Scene &scene);

// All instances (virtual ones included) whose label is in `labels`, ordered by
// id. `labels` must already be normalized.
std::vector<const Instance *> domain_of(const Scene &scene,
                                        const std::set<std::string> &labels);

nlohmann::ordered_json aabb_to_json(const Aabb &box);
Aabb aabb_from_json(const nlohmann::json &j);

}  // namespace csvg
