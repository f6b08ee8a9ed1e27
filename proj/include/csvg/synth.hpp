// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "csvg/rng.hpp"
#include "csvg/scene.hpp"

namespace csvg {

// Declarative recipe for a random scene with a known ground-truth instance.
struct SynthSpec {
  Vec3 room_extent{8.0, 8.0, 3.0};
  double min_gap = 0.05;
  int max_retries = 500;

  struct Group {
    // "scatter": `count` boxes per label at independent positions.
    // "cluster": one box per label, all within `radius` of a common point.
    // "row": one box per label, spaced `spacing` apart along a random line.
    std::string kind = "scatter";
    std::vector<std::string> labels;
    int count = 1;          // scatter only: copies per label
    Vec3 size{0.6, 0.6, 0.8};
    double radius = 0.5;    // cluster spread
    double spacing = 1.2;   // row step
  };
  std::vector<Group> groups;

  // The planted ground truth: member `target_member` of group `target_group`;
  // the group's other members are its anchors.
  int target_group = 0;
  int target_member = 0;

  static SynthSpec from_json(const nlohmann::json &doc);
  nlohmann::ordered_json to_json() const;
};

struct SynthResult {
  Scene scene;
  std::string target_id;
  std::vector<std::string> anchor_ids;
};

// Deterministic in `seed`; throws DataError when placement cannot satisfy the
// spec within max_retries.
SynthResult synth_scene(std::uint64_t seed, const SynthSpec &spec);

}  // namespace csvg
