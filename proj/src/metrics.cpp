// SPDX-License-Identifier: Apache-2.0
#include "csvg/metrics.hpp"

#include <atomic>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <thread>

#include "csvg/program.hpp"

namespace csvg {

std::string subset_name(SubsetTag tag) {
  return tag == SubsetTag::Unique ? "unique" : "multiple";
}

std::vector<QueryRecord> load_query_records(std::istream &in) {
  std::vector<QueryRecord> records;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string trimmed = line;
    trimmed.erase(0, trimmed.find_first_not_of(" \t\r"));
    if (trimmed.empty()) continue;
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(trimmed);
    } catch (const nlohmann::json::exception &e) {
      throw DataError("queries line " + std::to_string(lineno) + ": invalid JSON: " + e.what());
    }
    QueryRecord rec;
    auto need_string = [&](const char *key) -> std::string {
      if (!doc.contains(key) || !doc[key].is_string())
        throw DataError("queries line " + std::to_string(lineno) + ": needs string '" +
                        key + "'");
      return doc[key].get<std::string>();
    };
    rec.scene_id = need_string("scene_id");
    rec.query = need_string("query");
    rec.gt_label = normalize_label(need_string("gt_label"));
    if (doc.contains("gt_bbox")) rec.gt_bbox = aabb_from_json(doc["gt_bbox"]);
    if (doc.contains("gt_instance_id")) {
      if (!doc["gt_instance_id"].is_string())
        throw DataError("queries line " + std::to_string(lineno) +
                        ": 'gt_instance_id' must be a string");
      rec.gt_instance_id = doc["gt_instance_id"].get<std::string>();
    }
    if (!rec.gt_bbox && !rec.gt_instance_id)
      throw DataError("queries line " + std::to_string(lineno) +
                      ": needs gt_bbox or gt_instance_id");
    if (doc.contains("program")) {
      if (!doc["program"].is_string())
        throw DataError("queries line " + std::to_string(lineno) +
                        ": 'program' must be a string");
      rec.program = doc["program"].get<std::string>();
    }
    if (doc.contains("subset_tag")) {
      std::string tag = doc["subset_tag"].get<std::string>();
      if (tag == "unique")
        rec.subset_tag = SubsetTag::Unique;
      else if (tag == "multiple")
        rec.subset_tag = SubsetTag::Multiple;
      else
        throw DataError("queries line " + std::to_string(lineno) +
                        ": unknown subset_tag '" + tag + "'");
    }
    records.push_back(std::move(rec));
  }
  return records;
}

std::vector<QueryRecord> load_query_records_file(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open queries file '" + path + "'");
  return load_query_records(in);
}

nlohmann::ordered_json query_record_to_json(const QueryRecord &record) {
  nlohmann::ordered_json doc;
  doc["scene_id"] = record.scene_id;
  doc["query"] = record.query;
  if (record.gt_bbox) doc["gt_bbox"] = aabb_to_json(*record.gt_bbox);
  if (record.gt_instance_id) doc["gt_instance_id"] = *record.gt_instance_id;
  doc["gt_label"] = record.gt_label;
  if (record.program) doc["program"] = *record.program;
  if (record.subset_tag) doc["subset_tag"] = subset_name(*record.subset_tag);
  return doc;
}

SubsetTag classify_query(const Scene &scene, const std::string &gt_label,
                         bool *zero_matches) {
  int matches = 0;
  for (const Instance &inst : scene.instances)
    if (!inst.is_virtual && inst.label == gt_label) ++matches;
  if (zero_matches) *zero_matches = matches == 0;
  return matches == 1 ? SubsetTag::Unique : SubsetTag::Multiple;
}

SceneStore::SceneStore(std::string dir) : dir_(std::move(dir)) {}

const Scene &SceneStore::get(const std::string &scene_id) {
  std::lock_guard<std::mutex> lock(mutex_);
  auto it = cache_.find(scene_id);
  if (it != cache_.end()) return *it->second;
  if (dir_.empty()) throw DataError("unknown scene '" + scene_id + "'");
  std::filesystem::path path = std::filesystem::path(dir_) / (scene_id + ".json");
  auto scene = std::make_unique<Scene>(load_scene_file(path.string()));
  if (scene->id != scene_id)
    throw DataError("scene file '" + path.string() + "' declares id '" + scene->id + "'");
  const Scene &ref = *scene;
  cache_[scene_id] = std::move(scene);
  return ref;
}

void SceneStore::put(Scene scene) {
  std::lock_guard<std::mutex> lock(mutex_);
  // grab the key first: the assignment's right side moves the scene away
  std::string key = scene.id;
  cache_[key] = std::make_unique<Scene>(std::move(scene));
}

std::vector<const RecordOutcome *> MetricsReport::failures() const {
  std::vector<const RecordOutcome *> out;
  for (const RecordOutcome &o : outcomes)
    if (o.status != "SOLVED") out.push_back(&o);
  return out;
}

namespace {

constexpr double kBboxMatchEps = 1e-6;

RecordOutcome evaluate_one(const QueryRecord &record, std::size_t index,
                           SceneStore &scenes, const EvalOptions &options) {
  RecordOutcome outcome;
  outcome.index = index;
  outcome.scene_id = record.scene_id;
  outcome.query = record.query;

  const Scene *scene = nullptr;
  try {
    scene = &scenes.get(record.scene_id);
  } catch (const DataError &e) {
    outcome.status = "BAD_RECORD";
    outcome.notes.push_back(e.what());
    return outcome;
  }

  bool zero_matches = false;
  outcome.subset = record.subset_tag ? *record.subset_tag
                                     : classify_query(*scene, record.gt_label, &zero_matches);
  if (zero_matches)
    outcome.notes.push_back("no instance carries the ground-truth label '" +
                            record.gt_label + "'");

  // Resolve the ground truth; a bad record is counted against accuracy but
  // reported distinctly.
  std::optional<Aabb> gt_bbox = record.gt_bbox;
  if (record.gt_instance_id) {
    const Instance *gt = scene->find(*record.gt_instance_id);
    if (!gt) {
      outcome.status = "BAD_RECORD";
      outcome.notes.push_back("ground-truth instance '" + *record.gt_instance_id +
                              "' is not in the scene");
      return outcome;
    }
    if (gt_bbox) {
      Aabb diff = gt->bbox;
      bool same = std::abs(diff.min_corner.x - gt_bbox->min_corner.x) <= kBboxMatchEps &&
                  std::abs(diff.min_corner.y - gt_bbox->min_corner.y) <= kBboxMatchEps &&
                  std::abs(diff.min_corner.z - gt_bbox->min_corner.z) <= kBboxMatchEps &&
                  std::abs(diff.max_corner.x - gt_bbox->max_corner.x) <= kBboxMatchEps &&
                  std::abs(diff.max_corner.y - gt_bbox->max_corner.y) <= kBboxMatchEps &&
                  std::abs(diff.max_corner.z - gt_bbox->max_corner.z) <= kBboxMatchEps;
      if (!same) {
        outcome.status = "BAD_RECORD";
        outcome.notes.push_back("gt_bbox disagrees with the bbox of '" +
                                *record.gt_instance_id + "'");
        return outcome;
      }
    } else {
      gt_bbox = gt->bbox;
    }
  }

  std::optional<std::string> program;
  if (record.program) {
    program = record.program;
  } else if (options.programs_dir) {
    std::filesystem::path path =
        std::filesystem::path(*options.programs_dir) / (std::to_string(index) + ".txt");
    std::ifstream in(path);
    if (in) {
      std::ostringstream body;
      body << in.rdbuf();
      program = body.str();
    } else {
      outcome.status = "BAD_RECORD";
      outcome.notes.push_back("no program file '" + path.string() + "'");
      return outcome;
    }
  } else if (options.llm && options.templates) {
    std::vector<std::string> labels;
    std::set<std::string> seen;
    for (const Instance &inst : scene->instances)
      if (!inst.is_virtual && seen.insert(inst.label).second) labels.push_back(inst.label);
    try {
      program = generate_program(*options.llm, *options.templates, record.query, labels);
    } catch (const LlmError &e) {
      outcome.status = "LLM_ERROR";
      outcome.notes.push_back(e.what());
      return outcome;
    }
  } else {
    outcome.status = "BAD_RECORD";
    outcome.notes.push_back("record has no program and no program source is configured");
    return outcome;
  }

  GroundingResult result;
  try {
    std::vector<ProgramStmt> stmts = parse(*program);
    LowerResult lowered = lower(stmts, true);
    if (!lowered.ok()) {
      lowered = lower(stmts, false);
      if (lowered.ok()) outcome.notes.push_back("program lowered in lenient mode");
    }
    if (!lowered.ok()) {
      result.status = SolveStatus::InvalidProgram;
      for (const Diagnostic &d : lowered.diagnostics)
        if (d.severity == Diagnostic::Severity::Error)
          result.diagnostics.push_back({"lower", d.render(), std::nullopt});
    } else {
      result = solve(*lowered.csp, *scene, options.solver);
    }
  } catch (const ParseError &e) {
    result.status = SolveStatus::InvalidProgram;
    result.diagnostics.push_back({"parse", e.what(), std::nullopt});
  }

  outcome.status = status_name(result.status);
  for (const SolveDiagnostic &d : result.diagnostics)
    outcome.notes.push_back(d.stage + ": " + d.message);

  if (result.status != SolveStatus::Solved) return outcome;

  outcome.predicted_instance = result.target_instance;
  outcome.predicted_bbox = result.target_bbox;
  if (gt_bbox && result.target_bbox) {
    double iou = iou_3d(*result.target_bbox, *gt_bbox);
    outcome.iou = iou;
    outcome.correct_at_025 = iou > 0.25;
    outcome.correct_at_05 = iou > 0.5;
  }
  if (record.gt_instance_id && result.target_instance)
    outcome.correct_selection = *record.gt_instance_id == *result.target_instance;
  return outcome;
}

void accumulate(SubsetMetrics &m, const RecordOutcome &o) {
  m.n_total++;
  if (o.status == "SOLVED") m.n_solved++;
  if (o.correct_at_025) m.n_correct_025++;
  if (o.correct_at_05) m.n_correct_05++;
  if (o.correct_selection) m.n_correct_selection++;
}

}  // namespace

MetricsReport evaluate(const std::vector<QueryRecord> &records, SceneStore &scenes,
                       const EvalOptions &options) {
  if (records.empty()) throw DataError("no records to evaluate");

  MetricsReport report;
  report.mode = options.mode;
  report.outcomes.resize(records.size());

  int jobs = options.jobs > 0 ? options.jobs : 1;
  if (jobs == 1) {
    for (std::size_t i = 0; i < records.size(); ++i)
      report.outcomes[i] = evaluate_one(records[i], i, scenes, options);
  } else {
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
      for (;;) {
        std::size_t i = next.fetch_add(1);
        if (i >= records.size()) return;
        report.outcomes[i] = evaluate_one(records[i], i, scenes, options);
      }
    };
    std::vector<std::thread> pool;
    for (int j = 0; j < jobs; ++j) pool.emplace_back(worker);
    for (std::thread &t : pool) t.join();
  }

  for (const RecordOutcome &o : report.outcomes) {
    accumulate(report.overall, o);
    accumulate(report.per_subset[subset_name(o.subset)], o);
  }
  return report;
}

nlohmann::ordered_json report_to_json(const MetricsReport &report) {
  auto subset = [&](const SubsetMetrics &m) {
    nlohmann::ordered_json doc;
    doc["n_total"] = m.n_total;
    doc["n_solved"] = m.n_solved;
    if (report.mode == EvalMode::Bbox) {
      doc["acc_at_025"] = m.acc_at_025();
      doc["acc_at_05"] = m.acc_at_05();
    } else {
      doc["selection_accuracy"] = m.selection_accuracy();
    }
    return doc;
  };

  nlohmann::ordered_json doc = subset(report.overall);
  nlohmann::ordered_json per;
  for (const auto &[name, metrics] : report.per_subset) per[name] = subset(metrics);
  doc["per_subset"] = std::move(per);
  auto failures = nlohmann::ordered_json::array();
  for (const RecordOutcome *o : report.failures()) {
    nlohmann::ordered_json item;
    item["index"] = o->index;
    item["scene_id"] = o->scene_id;
    item["query"] = o->query;
    item["status"] = o->status;
    failures.push_back(std::move(item));
  }
  doc["failures"] = std::move(failures);
  return doc;
}

nlohmann::ordered_json outcome_to_json(const RecordOutcome &outcome) {
  nlohmann::ordered_json doc;
  doc["index"] = outcome.index;
  doc["scene_id"] = outcome.scene_id;
  doc["query"] = outcome.query;
  doc["subset"] = subset_name(outcome.subset);
  doc["status"] = outcome.status;
  doc["predicted_instance"] = outcome.predicted_instance
                                  ? nlohmann::ordered_json(*outcome.predicted_instance)
                                  : nlohmann::ordered_json(nullptr);
  doc["predicted_bbox"] = outcome.predicted_bbox ? aabb_to_json(*outcome.predicted_bbox)
                                                 : nlohmann::ordered_json(nullptr);
  doc["iou"] = outcome.iou ? nlohmann::ordered_json(*outcome.iou)
                           : nlohmann::ordered_json(nullptr);
  doc["correct_at_025"] = outcome.correct_at_025;
  doc["correct_at_05"] = outcome.correct_at_05;
  doc["correct_selection"] = outcome.correct_selection;
  doc["notes"] = outcome.notes;
  return doc;
}

void write_outcome_log(const MetricsReport &report, std::ostream &out) {
  for (const RecordOutcome &o : report.outcomes) out << outcome_to_json(o).dump() << "\n";
}

}  // namespace csvg
