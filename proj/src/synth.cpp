// SPDX-License-Identifier: Apache-2.0
#include "csvg/synth.hpp"

#include <cmath>
#include <map>

namespace csvg {

namespace {

Vec3 vec_from_json(const nlohmann::json &j, const char *what) {
  if (!j.is_array() || j.size() != 3 || !j[0].is_number() || !j[1].is_number() ||
      !j[2].is_number())
    throw DataError(std::string(what) + " must be [x, y, z]");
  return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

bool boxes_overlap(const Aabb &a, const Aabb &b, double gap) {
  return a.min_corner.x - gap < b.max_corner.x && b.min_corner.x - gap < a.max_corner.x &&
         a.min_corner.y - gap < b.max_corner.y && b.min_corner.y - gap < a.max_corner.y &&
         a.min_corner.z - gap < b.max_corner.z && b.min_corner.z - gap < a.max_corner.z;
}

}  // namespace

SynthSpec SynthSpec::from_json(const nlohmann::json &doc) {
  if (!doc.is_object()) throw DataError("synth spec must be a JSON object");
  SynthSpec spec;
  if (doc.contains("room_extent")) spec.room_extent = vec_from_json(doc["room_extent"], "room_extent");
  if (doc.contains("min_gap")) spec.min_gap = doc["min_gap"].get<double>();
  if (doc.contains("max_retries")) spec.max_retries = doc["max_retries"].get<int>();
  if (doc.contains("target_group")) spec.target_group = doc["target_group"].get<int>();
  if (doc.contains("target_member")) spec.target_member = doc["target_member"].get<int>();
  if (!doc.contains("groups") || !doc["groups"].is_array() || doc["groups"].empty())
    throw DataError("synth spec needs a non-empty 'groups' array");
  for (const auto &g : doc["groups"]) {
    Group group;
    if (g.contains("kind")) group.kind = g["kind"].get<std::string>();
    if (group.kind != "scatter" && group.kind != "cluster" && group.kind != "row")
      throw DataError("unknown group kind '" + group.kind + "'");
    if (!g.contains("labels") || !g["labels"].is_array() || g["labels"].empty())
      throw DataError("synth group needs a non-empty 'labels' array");
    for (const auto &l : g["labels"]) group.labels.push_back(l.get<std::string>());
    if (g.contains("count")) group.count = g["count"].get<int>();
    if (g.contains("size")) group.size = vec_from_json(g["size"], "size");
    if (g.contains("radius")) group.radius = g["radius"].get<double>();
    if (g.contains("spacing")) group.spacing = g["spacing"].get<double>();
    spec.groups.push_back(std::move(group));
  }
  return spec;
}

nlohmann::ordered_json SynthSpec::to_json() const {
  nlohmann::ordered_json doc;
  doc["room_extent"] = {room_extent.x, room_extent.y, room_extent.z};
  doc["min_gap"] = min_gap;
  doc["max_retries"] = max_retries;
  doc["target_group"] = target_group;
  doc["target_member"] = target_member;
  auto arr = nlohmann::ordered_json::array();
  for (const Group &g : groups) {
    nlohmann::ordered_json item;
    item["kind"] = g.kind;
    item["labels"] = g.labels;
    item["count"] = g.count;
    item["size"] = {g.size.x, g.size.y, g.size.z};
    item["radius"] = g.radius;
    item["spacing"] = g.spacing;
    arr.push_back(std::move(item));
  }
  doc["groups"] = std::move(arr);
  return doc;
}

SynthResult synth_scene(std::uint64_t seed, const SynthSpec &spec) {
  Rng rng(seed);
  std::vector<Instance> placed;
  std::map<std::string, int> label_counts;

  auto place_box = [&](const std::string &label, const Vec3 &size, Point3 center,
                       bool clamp) -> bool {
    Aabb box{center - size * 0.5, center + size * 0.5};
    if (clamp) {
      if (box.min_corner.x < 0 || box.min_corner.y < 0 || box.min_corner.z < 0 ||
          box.max_corner.x > spec.room_extent.x || box.max_corner.y > spec.room_extent.y ||
          box.max_corner.z > spec.room_extent.z)
        return false;
    }
    for (const Instance &other : placed)
      if (boxes_overlap(box, other.bbox, spec.min_gap)) return false;
    Instance inst;
    int n = label_counts[label]++;
    inst.id = label + "_" + std::to_string(n);
    for (char &c : inst.id)
      if (c == ' ') c = '_';
    inst.label = label;
    inst.bbox = box;
    placed.push_back(std::move(inst));
    return true;
  };

  auto random_center = [&](const Vec3 &size) -> Point3 {
    return {rng.uniform(size.x * 0.5, spec.room_extent.x - size.x * 0.5),
            rng.uniform(size.y * 0.5, spec.room_extent.y - size.y * 0.5),
            size.z * 0.5};
  };

  SynthResult result;
  std::vector<std::vector<std::string>> member_ids(spec.groups.size());

  for (std::size_t gi = 0; gi < spec.groups.size(); ++gi) {
    const SynthSpec::Group &g = spec.groups[gi];
    if (g.kind == "scatter") {
      for (const std::string &label : g.labels)
        for (int k = 0; k < g.count; ++k) {
          int tries = 0;
          while (!place_box(label, g.size, random_center(g.size), true)) {
            if (++tries > spec.max_retries)
              throw DataError("synth_scene: cannot place '" + label + "'");
          }
          member_ids[gi].push_back(placed.back().id);
        }
    } else if (g.kind == "cluster") {
      int tries = 0;
      for (;;) {
        if (++tries > spec.max_retries)
          throw DataError("synth_scene: cannot place cluster group");
        Point3 base = random_center(g.size);
        std::size_t rollback = placed.size();
        std::map<std::string, int> counts_rollback = label_counts;
        std::vector<std::string> ids;
        bool ok = true;
        for (const std::string &label : g.labels) {
          double angle = rng.uniform(0.0, 2.0 * M_PI);
          double r = ids.empty() ? 0.0 : g.radius;
          Point3 at{base.x + r * std::cos(angle), base.y + r * std::sin(angle),
                    g.size.z * 0.5};
          if (!place_box(label, g.size, at, true)) {
            ok = false;
            break;
          }
          ids.push_back(placed.back().id);
        }
        if (ok) {
          member_ids[gi] = std::move(ids);
          break;
        }
        placed.resize(rollback);
        label_counts = counts_rollback;
      }
    } else {  // row
      int tries = 0;
      for (;;) {
        if (++tries > spec.max_retries)
          throw DataError("synth_scene: cannot place row group");
        Point3 base = random_center(g.size);
        double angle = rng.uniform(0.0, 2.0 * M_PI);
        Vec3 step{g.spacing * std::cos(angle), g.spacing * std::sin(angle), 0.0};
        std::size_t rollback = placed.size();
        std::map<std::string, int> counts_rollback = label_counts;
        std::vector<std::string> ids;
        bool ok = true;
        for (std::size_t k = 0; k < g.labels.size(); ++k) {
          Point3 at = base + step * double(k);
          at.z = g.size.z * 0.5;
          if (!place_box(g.labels[k], g.size, at, true)) {
            ok = false;
            break;
          }
          ids.push_back(placed.back().id);
        }
        if (ok) {
          member_ids[gi] = std::move(ids);
          break;
        }
        placed.resize(rollback);
        label_counts = counts_rollback;
      }
    }
  }

  if (spec.target_group < 0 || std::size_t(spec.target_group) >= spec.groups.size())
    throw DataError("synth spec target_group out of range");
  const std::vector<std::string> &targets = member_ids[spec.target_group];
  if (spec.target_member < 0 || std::size_t(spec.target_member) >= targets.size())
    throw DataError("synth spec target_member out of range");

  result.target_id = targets[spec.target_member];
  for (std::size_t i = 0; i < targets.size(); ++i)
    if (int(i) != spec.target_member) result.anchor_ids.push_back(targets[i]);

  result.scene = make_scene("synth_" + std::to_string(seed), std::move(placed));
  return result;
}

}  // namespace csvg
