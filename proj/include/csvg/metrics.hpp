// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <iosfwd>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "csvg/llm.hpp"
#include "csvg/scene.hpp"
#include "csvg/solver.hpp"

namespace csvg {

enum class SubsetTag { Unique, Multiple };

std::string subset_name(SubsetTag tag);

struct QueryRecord {
  std::string scene_id;
  std::string query;
  std::optional<Aabb> gt_bbox;
  std::optional<std::string> gt_instance_id;
  std::string gt_label;
  std::optional<std::string> program;  // pre-generated program text
  std::optional<SubsetTag> subset_tag;
};

std::vector<QueryRecord> load_query_records(std::istream &in);
std::vector<QueryRecord> load_query_records_file(const std::string &path);
nlohmann::ordered_json query_record_to_json(const QueryRecord &record);

// Unique: exactly one instance of the scene carries the ground-truth label;
// Multiple otherwise. Zero matches classify as Multiple with a data warning.
SubsetTag classify_query(const Scene &scene, const std::string &gt_label,
                         bool *zero_matches = nullptr);

// Loads scenes from <dir>/<scene_id>.json, caching; safe for concurrent get().
class SceneStore {
 public:
  explicit SceneStore(std::string dir = "");
  const Scene &get(const std::string &scene_id);
  void put(Scene scene);  // in-memory registration, used by tests

 private:
  std::string dir_;
  std::mutex mutex_;
  std::map<std::string, std::unique_ptr<Scene>> cache_;
};

enum class EvalMode { Bbox, Selection };

struct RecordOutcome {
  std::size_t index = 0;
  std::string scene_id;
  std::string query;
  SubsetTag subset = SubsetTag::Unique;
  std::string status;  // SOLVED / UNSATISFIABLE / INVALID_PROGRAM / BAD_RECORD
  std::optional<std::string> predicted_instance;
  std::optional<Aabb> predicted_bbox;
  std::optional<double> iou;
  bool correct_at_025 = false;
  bool correct_at_05 = false;
  bool correct_selection = false;
  std::vector<std::string> notes;
};

struct SubsetMetrics {
  long long n_total = 0;
  long long n_solved = 0;
  long long n_correct_025 = 0;
  long long n_correct_05 = 0;
  long long n_correct_selection = 0;

  double acc_at_025() const { return n_total ? double(n_correct_025) / n_total : 0.0; }
  double acc_at_05() const { return n_total ? double(n_correct_05) / n_total : 0.0; }
  double selection_accuracy() const {
    return n_total ? double(n_correct_selection) / n_total : 0.0;
  }
};

struct MetricsReport {
  EvalMode mode = EvalMode::Bbox;
  SubsetMetrics overall;
  std::map<std::string, SubsetMetrics> per_subset;  // "unique" / "multiple"
  std::vector<RecordOutcome> outcomes;              // record order

  std::vector<const RecordOutcome *> failures() const;  // non-SOLVED outcomes
};

struct EvalOptions {
  SolverConfig solver;
  EvalMode mode = EvalMode::Bbox;
  int jobs = 1;
  std::optional<std::string> programs_dir;  // <index>.txt per record
  const LlmConfig *llm = nullptr;           // used when a record has no program
  const PromptTemplates *templates = nullptr;
};

// Runs every record through parse -> lower (strict, lenient fallback) ->
// solve and scores the prediction. Aggregation is by record order, so results
// do not depend on `jobs`.
MetricsReport evaluate(const std::vector<QueryRecord> &records, SceneStore &scenes,
                       const EvalOptions &options);

nlohmann::ordered_json report_to_json(const MetricsReport &report);
nlohmann::ordered_json outcome_to_json(const RecordOutcome &outcome);
void write_outcome_log(const MetricsReport &report, std::ostream &out);

}  // namespace csvg
