// SPDX-License-Identifier: Apache-2.0
#include "csvg/scene.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

namespace csvg {

namespace {

constexpr double kEnvelopeEps = 1e-9;

Aabb envelope_of(const std::vector<Instance> &instances) {
  Aabb env = instances.front().bbox;
  for (const Instance &inst : instances) env.expand(inst.bbox);
  return env;
}

bool nearly_equal(const Point3 &a, const Point3 &b) {
  return std::abs(a.x - b.x) <= kEnvelopeEps && std::abs(a.y - b.y) <= kEnvelopeEps &&
         std::abs(a.z - b.z) <= kEnvelopeEps;
}

}  // namespace

const Instance *Scene::find(std::string_view instance_id) const {
  for (const Instance &inst : instances)
    if (inst.id == instance_id) return &inst;
  return nullptr;
}

std::string normalize_label(std::string_view raw) {
  std::string out;
  out.reserve(raw.size());
  bool pending_space = false;
  for (char c : raw) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) {
      out.push_back(' ');
      pending_space = false;
    }
    out.push_back(char(std::tolower(static_cast<unsigned char>(c))));
  }
  return out;
}

Scene make_scene(std::string id, std::vector<Instance> instances) {
  if (instances.empty()) throw DataError("scene '" + id + "' has no instances");

  std::set<std::string> seen;
  for (Instance &inst : instances) {
    if (inst.id.empty()) throw DataError("scene '" + id + "': instance with empty id");
    if (!seen.insert(inst.id).second)
      throw DataError("scene '" + id + "': duplicate instance id '" + inst.id + "'");
    inst.label = normalize_label(inst.label);
    if (inst.label.empty())
      throw DataError("scene '" + id + "': instance '" + inst.id + "' has an empty label");
    if (inst.points) {
      if (inst.points->empty())
        throw DataError("scene '" + id + "': instance '" + inst.id + "' has an empty point set");
      Aabb env = Aabb::of_points(*inst.points);
      if (inst.bbox == Aabb{})
        inst.bbox = env;
      else if (!nearly_equal(inst.bbox.min_corner, env.min_corner) ||
               !nearly_equal(inst.bbox.max_corner, env.max_corner))
        throw DataError("scene '" + id + "': instance '" + inst.id +
                        "' bbox does not match its point envelope");
    }
    if (!inst.bbox.valid())
      throw DataError("scene '" + id + "': instance '" + inst.id + "' has an invalid bbox");
    inst.is_virtual = false;
  }

  Scene scene;
  scene.id = std::move(id);
  scene.instances = std::move(instances);

  Aabb env = envelope_of(scene.instances);
  scene.scene_center = env.center();

  auto inject = [&](std::string vid, std::string label, Point3 at) {
    if (seen.count(vid))
      throw DataError("scene '" + scene.id + "': duplicate instance id '" + vid + "'");
    Instance v;
    v.id = std::move(vid);
    v.label = std::move(label);
    v.bbox = Aabb{at, at};
    v.is_virtual = true;
    scene.instances.push_back(std::move(v));
  };

  inject("room_center", "room center", scene.scene_center);
  double zf = env.min_corner.z;
  inject("room_corner_0", "room corner", {env.min_corner.x, env.min_corner.y, zf});
  inject("room_corner_1", "room corner", {env.max_corner.x, env.min_corner.y, zf});
  inject("room_corner_2", "room corner", {env.min_corner.x, env.max_corner.y, zf});
  inject("room_corner_3", "room corner", {env.max_corner.x, env.max_corner.y, zf});
  return scene;
}

Aabb aabb_from_json(const nlohmann::json &j) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_array() || !j[1].is_array() ||
      j[0].size() != 3 || j[1].size() != 3)
    throw DataError("bbox must be [[x,y,z],[x,y,z]]");
  for (int c = 0; c < 2; ++c)
    for (int a = 0; a < 3; ++a)
      if (!j[c][a].is_number()) throw DataError("bbox must be numeric");
  Aabb box;
  box.min_corner = {j[0][0].get<double>(), j[0][1].get<double>(), j[0][2].get<double>()};
  box.max_corner = {j[1][0].get<double>(), j[1][1].get<double>(), j[1][2].get<double>()};
  if (!box.valid()) throw DataError("bbox has min > max");
  return box;
}

nlohmann::ordered_json aabb_to_json(const Aabb &box) {
  return nlohmann::ordered_json::array(
      {{box.min_corner.x, box.min_corner.y, box.min_corner.z},
       {box.max_corner.x, box.max_corner.y, box.max_corner.z}});
}

Scene scene_from_json(const nlohmann::json &doc) {
  if (!doc.is_object()) throw DataError("scene document must be a JSON object");
  if (!doc.contains("id") || !doc["id"].is_string())
    throw DataError("scene document needs a string 'id'");
  if (!doc.contains("instances") || !doc["instances"].is_array())
    throw DataError("scene document needs an 'instances' array");

  std::vector<Instance> instances;
  for (const auto &item : doc["instances"]) {
    if (!item.is_object()) throw DataError("instance entries must be objects");
    Instance inst;
    if (!item.contains("id") || !item["id"].is_string())
      throw DataError("instance needs a string 'id'");
    inst.id = item["id"].get<std::string>();
    if (!item.contains("label") || !item["label"].is_string())
      throw DataError("instance '" + inst.id + "' needs a string 'label'");
    inst.label = item["label"].get<std::string>();
    bool have_any = false;
    if (item.contains("bbox")) {
      inst.bbox = aabb_from_json(item["bbox"]);
      have_any = true;
    }
    if (item.contains("points")) {
      const auto &pts = item["points"];
      if (!pts.is_array() || pts.empty())
        throw DataError("instance '" + inst.id + "' has an invalid point set");
      std::vector<Point3> points;
      points.reserve(pts.size());
      for (const auto &p : pts) {
        if (!p.is_array() || p.size() != 3 || !p[0].is_number() || !p[1].is_number() ||
            !p[2].is_number())
          throw DataError("instance '" + inst.id + "' has a malformed point");
        points.push_back({p[0].get<double>(), p[1].get<double>(), p[2].get<double>()});
      }
      inst.points = std::move(points);
      have_any = true;
    }
    if (!have_any)
      throw DataError("instance '" + inst.id + "' needs a bbox or points");
    instances.push_back(std::move(inst));
  }
  return make_scene(doc["id"].get<std::string>(), std::move(instances));
}

Scene load_scene(std::istream &in) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception &e) {
    throw DataError(std::string("scene document is not valid JSON: ") + e.what());
  }
  return scene_from_json(doc);
}

Scene load_scene_file(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open scene file '" + path + "'");
  return load_scene(in);
}

nlohmann::ordered_json scene_to_json(const Scene &scene) {
  nlohmann::ordered_json doc;
  doc["id"] = scene.id;
  auto arr = nlohmann::ordered_json::array();
  for (const Instance &inst : scene.instances) {
    if (inst.is_virtual) continue;
    nlohmann::ordered_json item;
    item["id"] = inst.id;
    item["label"] = inst.label;
    item["bbox"] = aabb_to_json(inst.bbox);
    if (inst.points) {
      auto pts = nlohmann::ordered_json::array();
      for (const Point3 &p : *inst.points) pts.push_back({p.x, p.y, p.z});
      item["points"] = std::move(pts);
    }
    arr.push_back(std::move(item));
  }
  doc["instances"] = std::move(arr);
  return doc;
}

std::vector<const Instance *> domain_of(const Scene &scene,
                                        const std::set<std::string> &labels) {
  std::vector<const Instance *> out;
  for (const Instance &inst : scene.instances)
    if (labels.count(inst.label)) out.push_back(&inst);
  std::sort(out.begin(), out.end(),
            [](const Instance *a, const Instance *b) { return a->id < b->id; });
  return out;
}

}  // namespace csvg
