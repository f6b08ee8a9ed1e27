// SPDX-License-Identifier: Apache-2.0
//
// Command line front end. Subcommands: check, solve, gen, eval, signatures,
// synth. Exit codes: 0 ok, 1 usage, 2 data error, 3 solver or LLM failure.
// Failures additionally emit one machine-readable JSON line on stderr.

#include <cstdint>
#include <exception>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "csvg/csp.hpp"
#include "csvg/llm.hpp"
#include "csvg/metrics.hpp"
#include "csvg/program.hpp"
#include "csvg/scene.hpp"
#include "csvg/solver.hpp"
#include "csvg/synth.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitSolver = 3;

int fail(int code, const std::string &message) {
  nlohmann::ordered_json line;
  line["error"] = message;
  line["code"] = code;
  std::cerr << line.dump() << "\n";
  return code;
}

std::string slurp(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw csvg::DataError("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text(const std::string &path, const std::string &text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw csvg::DataError("cannot write " + path);
  out << text;
}

// Writes to `path` when given, stdout otherwise.
void emit(const std::optional<std::string> &path, const std::string &text) {
  if (path)
    write_text(*path, text);
  else
    std::cout << text;
}

// Everything the subcommands can configure. A --config JSON object is applied
// first; explicit flags then override individual fields because CLI11 leaves
// bound variables untouched when a flag is absent.
struct Options {
  csvg::SolverConfig solver;
  csvg::LlmConfig llm;
  std::string engine = "global";
  std::string heuristic = "min-avg-distance";
  std::string minmax = "on";
  std::string minmax_order = "last";
  std::string prompt_dir;
  std::string mode = "bbox";
  int jobs = 1;
  bool strict = false;
};

csvg::Engine parse_engine(const std::string &s) {
  if (s == "global") return csvg::Engine::Global;
  if (s == "local") return csvg::Engine::Local;
  throw csvg::DataError("unknown engine '" + s + "'");
}

csvg::Heuristic parse_heuristic(const std::string &s) {
  if (s == "min-avg-distance") return csvg::Heuristic::MinAvgDistance;
  if (s == "max-avg-distance") return csvg::Heuristic::MaxAvgDistance;
  if (s == "random") return csvg::Heuristic::Random;
  if (s == "first") return csvg::Heuristic::First;
  throw csvg::DataError("unknown heuristic '" + s + "'");
}

void materialize(Options &opt) {
  opt.solver.engine = parse_engine(opt.engine);
  opt.solver.heuristic = parse_heuristic(opt.heuristic);
  if (opt.minmax != "on" && opt.minmax != "off")
    throw csvg::DataError("minmax must be 'on' or 'off'");
  opt.solver.minmax_enabled = opt.minmax == "on";
  if (opt.minmax_order != "last" && opt.minmax_order != "first")
    throw csvg::DataError("minmax_order must be 'last' or 'first'");
  opt.solver.minmax_first = opt.minmax_order == "first";
}

void apply_config(const nlohmann::json &doc, Options &opt) {
  if (!doc.is_object()) throw csvg::DataError("config must be a JSON object");
  static const std::set<std::string> known = {
      "engine", "heuristic", "seed", "minmax", "minmax_order", "max_solutions",
      "near", "far", "above_below_horizontal", "between", "on_requires_proximity",
      "endpoint", "model", "temperature", "max_tokens", "api_key_env", "timeout",
      "retries", "audit", "prompt_dir", "mode", "jobs", "strict"};
  for (const auto &[key, value] : doc.items()) {
    if (!known.count(key)) throw csvg::DataError("unknown config key '" + key + "'");
    try {
      if (key == "engine") opt.engine = value.get<std::string>();
      else if (key == "heuristic") opt.heuristic = value.get<std::string>();
      else if (key == "seed") opt.solver.random_seed = value.get<std::uint64_t>();
      else if (key == "minmax") opt.minmax = value.get<std::string>();
      else if (key == "minmax_order") opt.minmax_order = value.get<std::string>();
      else if (key == "max_solutions") opt.solver.max_solutions = value.get<std::size_t>();
      else if (key == "near") opt.solver.thresholds.near_distance = value.get<double>();
      else if (key == "far") opt.solver.thresholds.far_distance = value.get<double>();
      else if (key == "above_below_horizontal")
        opt.solver.thresholds.above_below_horizontal_distance = value.get<double>();
      else if (key == "between") opt.solver.thresholds.between_distance = value.get<double>();
      else if (key == "on_requires_proximity")
        opt.solver.thresholds.on_requires_proximity = value.get<bool>();
      else if (key == "endpoint") opt.llm.endpoint_url = value.get<std::string>();
      else if (key == "model") opt.llm.model_name = value.get<std::string>();
      else if (key == "temperature") opt.llm.temperature = value.get<double>();
      else if (key == "max_tokens") opt.llm.max_output_tokens = value.get<int>();
      else if (key == "api_key_env") opt.llm.api_key_env = value.get<std::string>();
      else if (key == "timeout") opt.llm.timeout_seconds = value.get<double>();
      else if (key == "retries") opt.llm.retries = value.get<int>();
      else if (key == "audit") opt.llm.audit_path = value.get<std::string>();
      else if (key == "prompt_dir") opt.prompt_dir = value.get<std::string>();
      else if (key == "mode") opt.mode = value.get<std::string>();
      else if (key == "jobs") opt.jobs = value.get<int>();
      else if (key == "strict") opt.strict = value.get<bool>();
    } catch (const nlohmann::json::exception &e) {
      throw csvg::DataError("config key '" + key + "': " + e.what());
    }
  }
}

std::optional<std::string> find_config_arg(int argc, char **argv) {
  for (int i = 1; i < argc; ++i) {
    std::string a = argv[i];
    if (a == "--config" && i + 1 < argc) return std::string(argv[i + 1]);
    if (a.rfind("--config=", 0) == 0) return a.substr(9);
  }
  return std::nullopt;
}

void add_solver_flags(CLI::App *sub, Options &opt) {
  sub->add_option("--near", opt.solver.thresholds.near_distance,
                  "Near-family distance threshold in meters");
  sub->add_option("--far", opt.solver.thresholds.far_distance,
                  "Far-family distance threshold in meters");
  sub->add_option("--above-below-horizontal",
                  opt.solver.thresholds.above_below_horizontal_distance,
                  "Horizontal slack for the above/below families in meters");
  sub->add_option("--between", opt.solver.thresholds.between_distance,
                  "Between-family distance threshold in meters");
  sub->add_flag("--on-proximity", opt.solver.thresholds.on_requires_proximity,
                "Make ON/UNDER also require center proximity");
  sub->add_option("--engine", opt.engine, "Constraint engine")
      ->check(CLI::IsMember({"global", "local"}));
  sub->add_option("--heuristic", opt.heuristic, "Solution selection heuristic")
      ->check(CLI::IsMember({"min-avg-distance", "max-avg-distance", "random", "first"}));
  sub->add_option("--seed", opt.solver.random_seed, "Seed for the random heuristic");
  sub->add_option("--minmax", opt.minmax, "Apply min/max constraints")
      ->check(CLI::IsMember({"on", "off"}));
  sub->add_option("--minmax-order", opt.minmax_order,
                  "Apply min/max after spatial filtering (last) or before (first)")
      ->check(CLI::IsMember({"last", "first"}));
  sub->add_option("--max-solutions", opt.solver.max_solutions,
                  "Enumeration cap for the global engine");
}

void add_llm_flags(CLI::App *sub, Options &opt) {
  sub->add_option("--endpoint", opt.llm.endpoint_url, "Chat-completions endpoint URL");
  sub->add_option("--model", opt.llm.model_name, "Model name sent in the request");
  sub->add_option("--temperature", opt.llm.temperature, "Sampling temperature");
  sub->add_option("--max-tokens", opt.llm.max_output_tokens, "Response token cap");
  sub->add_option("--api-key-env", opt.llm.api_key_env,
                  "Environment variable holding the API key");
  sub->add_option("--timeout", opt.llm.timeout_seconds, "HTTP timeout in seconds");
  sub->add_option("--retries", opt.llm.retries, "Extra attempts after a failed call");
  sub->add_option("--audit", opt.llm.audit_path, "Append request/response records here");
  sub->add_option("--prompt-dir", opt.prompt_dir, "Directory with the prompt templates");
}

std::vector<std::string> scene_labels(const csvg::Scene &scene) {
  std::vector<std::string> labels;
  for (const csvg::Instance &inst : scene.instances) {
    if (inst.is_virtual) continue;
    if (std::find(labels.begin(), labels.end(), inst.label) == labels.end())
      labels.push_back(inst.label);
  }
  return labels;
}

int cmd_check(const std::string &program_path) {
  std::string text = slurp(program_path);
  std::vector<csvg::ProgramStmt> stmts;
  try {
    stmts = csvg::parse(text);
  } catch (const csvg::ParseError &e) {
    std::cout << e.what() << "\n";
    return fail(kExitData, e.what());
  }
  auto result = csvg::lower(stmts, /*strict=*/true);
  for (const csvg::Diagnostic &d : result.diagnostics) std::cout << d.render() << "\n";
  if (!result.ok()) return fail(kExitData, "program has errors");
  return kExitOk;
}

int cmd_solve(const Options &opt, const std::string &scene_path,
              const std::string &program_path, const std::optional<std::string> &out) {
  csvg::Scene scene = csvg::load_scene_file(scene_path);
  std::string text = slurp(program_path);

  csvg::GroundingResult result;
  bool lowered = false;
  try {
    auto stmts = csvg::parse(text);
    auto lower_result = csvg::lower(stmts, opt.strict);
    for (const csvg::Diagnostic &d : lower_result.diagnostics)
      result.diagnostics.push_back({"lower", d.render(), std::nullopt});
    if (lower_result.ok()) {
      auto diags = std::move(result.diagnostics);
      result = csvg::solve(*lower_result.csp, scene, opt.solver);
      result.diagnostics.insert(result.diagnostics.begin(),
                                std::make_move_iterator(diags.begin()),
                                std::make_move_iterator(diags.end()));
      lowered = true;
    } else {
      result.status = csvg::SolveStatus::InvalidProgram;
    }
  } catch (const csvg::ParseError &e) {
    result.status = csvg::SolveStatus::InvalidProgram;
    result.diagnostics.push_back({"parse", e.what(), std::nullopt});
  }
  (void)lowered;

  emit(out, csvg::grounding_result_to_json(result).dump(2) + "\n");
  switch (result.status) {
    case csvg::SolveStatus::Solved:
      return kExitOk;
    case csvg::SolveStatus::Unsatisfiable:
      return fail(kExitSolver, "no solution found");
    case csvg::SolveStatus::InvalidProgram:
      return fail(kExitData, "invalid program");
  }
  return kExitData;
}

int cmd_gen(const Options &opt, const std::string &query,
            const std::optional<std::string> &scene_path,
            std::vector<std::string> labels, const std::optional<std::string> &out) {
  if (labels.empty()) {
    if (!scene_path) return fail(kExitUsage, "gen needs --labels or --scene");
    labels = scene_labels(csvg::load_scene_file(*scene_path));
  }
  if (opt.llm.endpoint_url.empty()) return fail(kExitUsage, "gen needs --endpoint");
  std::string dir = opt.prompt_dir.empty() ? csvg::default_prompt_dir() : opt.prompt_dir;
  auto templates = csvg::PromptTemplates::load(dir);
  std::string program = csvg::generate_program(opt.llm, templates, query, labels);
  if (!program.empty() && program.back() != '\n') program += "\n";
  emit(out, program);
  return kExitOk;
}

int cmd_eval(Options &opt, const std::string &scenes_dir, const std::string &queries_path,
             bool use_llm, const std::optional<std::string> &programs_dir,
             const std::string &out_path) {
  auto records = csvg::load_query_records_file(queries_path);
  csvg::SceneStore store(scenes_dir);

  csvg::EvalOptions eval_opt;
  eval_opt.solver = opt.solver;
  if (opt.mode != "bbox" && opt.mode != "selection")
    throw csvg::DataError("mode must be 'bbox' or 'selection'");
  eval_opt.mode = opt.mode == "selection" ? csvg::EvalMode::Selection : csvg::EvalMode::Bbox;
  eval_opt.jobs = opt.jobs;
  eval_opt.programs_dir = programs_dir;

  csvg::PromptTemplates templates;
  if (use_llm) {
    if (opt.llm.endpoint_url.empty()) return fail(kExitUsage, "--llm needs --endpoint");
    std::string dir = opt.prompt_dir.empty() ? csvg::default_prompt_dir() : opt.prompt_dir;
    templates = csvg::PromptTemplates::load(dir);
    eval_opt.llm = &opt.llm;
    eval_opt.templates = &templates;
  }

  auto report = csvg::evaluate(records, store, eval_opt);
  write_text(out_path, csvg::report_to_json(report).dump(2) + "\n");

  std::string log_path = out_path;
  auto dot = log_path.find_last_of('.');
  auto slash = log_path.find_last_of("/\\");
  if (dot != std::string::npos && (slash == std::string::npos || dot > slash))
    log_path.resize(dot);
  log_path += ".records.jsonl";
  std::ofstream log(log_path, std::ios::binary);
  if (!log) throw csvg::DataError("cannot write " + log_path);
  csvg::write_outcome_log(report, log);
  return kExitOk;
}

int cmd_synth(std::uint64_t seed, const std::string &spec_path,
              const std::optional<std::string> &out, const std::optional<std::string> &meta) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(slurp(spec_path));
  } catch (const nlohmann::json::exception &e) {
    throw csvg::DataError(std::string("spec file: ") + e.what());
  }
  auto spec = csvg::SynthSpec::from_json(doc);
  auto result = csvg::synth_scene(seed, spec);
  emit(out, csvg::scene_to_json(result.scene).dump(2) + "\n");
  if (meta) {
    nlohmann::ordered_json m;
    m["scene_id"] = result.scene.id;
    m["target_id"] = result.target_id;
    m["anchor_ids"] = result.anchor_ids;
    write_text(*meta, m.dump(2) + "\n");
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char **argv) {
  Options opt;

  try {
    if (auto config_path = find_config_arg(argc, argv)) {
      nlohmann::json doc;
      try {
        doc = nlohmann::json::parse(slurp(*config_path));
      } catch (const nlohmann::json::exception &e) {
        return fail(kExitData, std::string("config file: ") + e.what());
      }
      apply_config(doc, opt);
    }
  } catch (const csvg::DataError &e) {
    return fail(kExitData, e.what());
  }

  CLI::App app{"Grounds natural-language object references in 3D scenes by solving "
               "constraint programs over labeled instances"};
  app.require_subcommand(1);
  std::string config_dummy;
  app.add_option("--config", config_dummy, "JSON file with flag defaults");

  std::string check_program;
  auto *check = app.add_subcommand("check", "Parse and lower a program strictly");
  check->fallthrough();
  check->add_option("program", check_program, "Program file")->required();

  std::string solve_scene, solve_program;
  std::optional<std::string> solve_out;
  auto *solve = app.add_subcommand("solve", "Ground a program against a scene");
  solve->fallthrough();
  solve->add_option("--scene", solve_scene, "Scene JSON file")->required();
  solve->add_option("--program", solve_program, "Program file")->required();
  solve->add_option("--out", solve_out, "Write the result document here");
  solve->add_flag("--strict", opt.strict, "Lower strictly instead of leniently");
  add_solver_flags(solve, opt);

  std::string gen_query;
  std::optional<std::string> gen_scene, gen_out;
  std::vector<std::string> gen_labels;
  auto *gen = app.add_subcommand("gen", "Generate a program for a query");
  gen->fallthrough();
  gen->add_option("--query", gen_query, "Natural-language query")->required();
  gen->add_option("--scene", gen_scene, "Scene JSON file supplying the labels");
  gen->add_option("--labels", gen_labels, "Relevant object labels")->delimiter(',');
  gen->add_option("--out", gen_out, "Write the program here");
  add_llm_flags(gen, opt);

  std::string eval_scenes, eval_queries, eval_out;
  std::optional<std::string> eval_programs;
  bool eval_llm = false;
  auto *eval = app.add_subcommand("eval", "Score query records against ground truth");
  eval->fallthrough();
  eval->add_option("--scenes", eval_scenes, "Directory with <scene_id>.json files")
      ->required();
  eval->add_option("--queries", eval_queries, "Query records, one JSON object per line")
      ->required();
  eval->add_option("--out", eval_out, "Write the report here")->required();
  eval->add_option("--mode", opt.mode, "Scoring mode")
      ->check(CLI::IsMember({"bbox", "selection"}));
  eval->add_option("--programs", eval_programs, "Directory with <index>.txt programs");
  eval->add_flag("--llm", eval_llm, "Generate missing programs through the endpoint");
  eval->add_option("--jobs", opt.jobs, "Records evaluated in parallel")
      ->check(CLI::PositiveNumber);
  add_solver_flags(eval, opt);
  add_llm_flags(eval, opt);

  auto *signatures = app.add_subcommand("signatures", "Print the registered functions");
  bool signatures_scores = false;
  signatures->add_flag("--scores", signatures_scores, "Print the score functions instead");

  std::uint64_t synth_seed = 0;
  std::string synth_spec;
  std::optional<std::string> synth_out, synth_meta;
  auto *synth = app.add_subcommand("synth", "Generate a synthetic scene");
  synth->fallthrough();
  synth->add_option("--seed", synth_seed, "Generator seed")->required();
  synth->add_option("--spec", synth_spec, "Generator spec JSON file")->required();
  synth->add_option("--out", synth_out, "Write the scene document here");
  synth->add_option("--meta", synth_meta, "Write the planted ground truth here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp &e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp &e) {
    return app.exit(e);
  } catch (const CLI::ParseError &e) {
    std::cerr << e.what() << "\n";
    return fail(kExitUsage, e.what());
  }

  try {
    materialize(opt);
    if (*check) return cmd_check(check_program);
    if (*solve) return cmd_solve(opt, solve_scene, solve_program, solve_out);
    if (*gen) return cmd_gen(opt, gen_query, gen_scene, gen_labels, gen_out);
    if (*eval) return cmd_eval(opt, eval_scenes, eval_queries, eval_llm, eval_programs,
                               eval_out);
    if (*signatures) {
      std::cout << (signatures_scores ? csvg::score_function_listing()
                                      : csvg::registry_signatures());
      return kExitOk;
    }
    if (*synth) return cmd_synth(synth_seed, synth_spec, synth_out, synth_meta);
  } catch (const csvg::LlmError &e) {
    return fail(kExitSolver, e.what());
  } catch (const csvg::DataError &e) {
    return fail(kExitData, e.what());
  } catch (const std::exception &e) {
    return fail(kExitData, e.what());
  }
  return fail(kExitUsage, "no subcommand");
}
