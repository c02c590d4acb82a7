// pdecheck: reconstruct physics contracts from MOOSE input files, score
// candidate inputs against reference contracts, batch-evaluate benchmark
// cases, and drive the generation/refinement pipeline.
//
// Exit codes: 0 ok, 1 gate failure, 2 parse/IO error, 3 registry error,
// 4 endpoint error.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "pde/bench.hpp"
#include "pde/endpoint.hpp"
#include "pde/hit.hpp"
#include "pde/ifs.hpp"
#include "pde/kernel_map.hpp"
#include "pde/mcs.hpp"
#include "pde/reconstruct.hpp"
#include "pde/refine.hpp"
#include "pde/util.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitGate = 1;
constexpr int kExitParse = 2;
constexpr int kExitRegistry = 3;
constexpr int kExitEndpoint = 4;

std::string fixed3(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

void emit(const std::string& out_path, const std::string& content) {
  if (out_path.empty() || out_path == "-")
    std::cout << content;
  else
    pde::write_file(out_path, content);
}

pde::MappingRegistry load_reg(const std::string& registry_path) {
  return pde::load_registry_file(registry_path);
}

void warn_unresolved(const pde::PhysicsContract& c) {
  for (const std::string& cls : c.unresolved)
    std::cerr << "warning: unresolved object class '" << cls << "'\n";
}

// A reference argument may hold a contract document or an input file; a
// leading '{' marks the contract.
pde::PhysicsContract load_reference(const std::string& path,
                                    const pde::MappingRegistry& reg) {
  const std::string text = pde::read_file(path);
  const size_t first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{')
    return pde::load_contract(text);
  return pde::reconstruct_contract(pde::hit::parse_input(text), reg);
}

std::string manifest_lines(const std::vector<std::string>& paths) {
  std::string out;
  for (const std::string& p : paths)
    out += pde::sha256_hex(pde::read_file(p)) + "  " + p + "\n";
  return out;
}

struct ScoreArgs {
  std::string ref_path;
  std::string cand_path;
  std::string registry_path;
  std::string report_path;
  std::string mcs_report_path;
  double delta = 0.1;
  double epsilon0 = 1e-12;
  std::optional<double> gate;
};

int run_score(const ScoreArgs& a) {
  const pde::MappingRegistry reg = load_reg(a.registry_path);
  const pde::PhysicsContract ref = load_reference(a.ref_path, reg);
  pde::EvalOptions opts{a.delta, a.epsilon0};

  const std::string cand_text = pde::read_file(a.cand_path);
  pde::hit::InputTree cand_tree;
  try {
    cand_tree = pde::hit::parse_input(cand_text);
  } catch (const pde::ParseError& e) {
    // Unparseable candidates score 0 by convention.
    std::cout << "IFS " << fixed3(0.0) << "\n";
    if (!a.report_path.empty()) {
      pde::Json report = {{"score", 0.0},
                          {"parse_error", e.what()},
                          {"checkpoints", pde::Json::array()},
                          {"violations", pde::Json::array()},
                          {"unresolved",
                           {{"ref", ref.unresolved},
                            {"cand", pde::Json::array()}}}};
      emit(a.report_path, report.dump(2) + "\n");
    }
    std::cerr << "error: candidate does not parse: " << e.what() << "\n";
    return kExitParse;
  }

  const pde::PhysicsContract cand = pde::reconstruct_contract(cand_tree, reg);
  warn_unresolved(cand);
  const pde::EvalReport report = pde::evaluate(ref, cand, reg, opts);
  std::cout << "IFS " << fixed3(report.ifs) << "\n";

  const pde::McsResult mcs = pde::mcs_score(
      ref.coeff_facts, pde::extract_facts(cand_tree, reg), a.delta, a.epsilon0);
  if (mcs.score) std::cout << "MCS " << fixed3(*mcs.score) << "\n";

  if (!a.report_path.empty())
    emit(a.report_path, pde::report_to_json(report).dump(2) + "\n");
  if (!a.mcs_report_path.empty()) {
    pde::Json mj;
    mj["score"] = mcs.score ? pde::Json(*mcs.score) : pde::Json(nullptr);
    mj["mismatches"] = pde::Json::array();
    for (const pde::McsMismatch& m : mcs.mismatches)
      mj["mismatches"].push_back(
          {{"key", m.key}, {"expected", m.expected}, {"found", m.found}});
    emit(a.mcs_report_path, mj.dump(2) + "\n");
  }

  if (a.gate && report.ifs < *a.gate) {
    std::cerr << "gate: IFS " << fixed3(report.ifs) << " below threshold "
              << fixed3(*a.gate) << "\n";
    return kExitGate;
  }
  return kExitOk;
}

struct BatchArgs {
  std::string cases_path;
  std::string candidates_dir;
  std::string registry_path;
  std::string out_path;
  std::string manifest_path;
  double delta = 0.1;
  double epsilon0 = 1e-12;
  bool summary = false;
};

int run_batch(const BatchArgs& a) {
  const pde::MappingRegistry reg = load_reg(a.registry_path);
  const std::vector<pde::BenchCase> cases =
      pde::load_cases_jsonl(pde::read_file(a.cases_path));

  std::vector<std::string> candidates;
  std::vector<std::string> hashed_inputs = {a.cases_path};
  candidates.reserve(cases.size());
  for (const pde::BenchCase& c : cases) {
    const std::string path = a.candidates_dir + "/" + c.id + ".i";
    if (std::filesystem::exists(path)) {
      candidates.push_back(pde::read_file(path));
      hashed_inputs.push_back(path);
    } else {
      std::cerr << "warning: no candidate file for case '" << c.id << "' ("
                << path << "); recorded as a parse failure\n";
      candidates.push_back("[missing candidate file");
    }
  }

  const std::vector<pde::CaseResult> results =
      pde::score_batch(cases, candidates, reg, {a.delta, a.epsilon0});
  emit(a.out_path, pde::results_to_jsonl(results));
  if (a.summary)
    std::cout << pde::summary_text(pde::summarize(cases, results));

  if (!a.manifest_path.empty()) {
    std::vector<std::string> everything = hashed_inputs;
    if (!a.out_path.empty() && a.out_path != "-") everything.push_back(a.out_path);
    pde::write_file(a.manifest_path, manifest_lines(everything));
  }
  return kExitOk;
}

struct RefineArgs {
  std::string prompt_path;
  std::string endpoint_url;
  std::string model = "default";
  std::string preset = "pde_refine";
  std::string replay; // "record:<path>" or "play:<path>"
  std::string out_path;
  std::string trace_path;
  std::string registry_path;
  std::string data_dir = PDE_DEFAULT_DATA_DIR;
  int n_max = 2;
  double tau = 0.85;
};

int run_refine(const RefineArgs& a) {
  const pde::MappingRegistry reg = load_reg(a.registry_path);
  const std::string description = pde::read_file(a.prompt_path);

  std::optional<pde::Preset> preset = pde::preset_from_string(a.preset);
  if (!preset) {
    std::cerr << "error: unknown preset '" << a.preset << "'\n";
    return kExitEndpoint;
  }
  pde::PipelineOptions options;
  options.preset = *preset;
  options.max_refinements = a.n_max;
  options.tau_ifs = a.tau;
  options.data_dir = a.data_dir;

  std::unique_ptr<pde::GenerationEndpoint> http;
  std::unique_ptr<pde::GenerationEndpoint> endpoint;
  try {
    if (a.replay.rfind("play:", 0) == 0) {
      endpoint = std::make_unique<pde::ReplayEndpoint>(a.replay.substr(5));
    } else if (a.endpoint_url.empty()) {
      std::cerr << "error: no endpoint configured (pass --endpoint-url or "
                   "--replay play:<path>)\n";
      return kExitEndpoint;
    } else {
      http = std::make_unique<pde::HttpEndpoint>(a.endpoint_url, a.model);
      if (a.replay.rfind("record:", 0) == 0)
        endpoint = std::make_unique<pde::RecordingEndpoint>(*http,
                                                            a.replay.substr(7));
      else
        endpoint = std::move(http);
    }
  } catch (const pde::EndpointError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitEndpoint;
  }

  const pde::PipelineTrace trace =
      pde::run_pipeline(description, *endpoint, reg, options);

  if (!a.trace_path.empty())
    emit(a.trace_path, pde::trace_to_json(trace).dump(2) + "\n");
  if (trace.error) {
    std::cerr << "error: " << *trace.error << "\n";
    return kExitEndpoint;
  }
  emit(a.out_path, trace.final_code);
  if (trace.final_ifs)
    std::cerr << "internal IFS " << fixed3(*trace.final_ifs) << " after "
              << trace.steps.size() - 1 << " refinement(s)\n";
  return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Physics-contract reconstruction and fidelity scoring for "
               "MOOSE input files"};
  app.require_subcommand(1);
  const std::string default_registry =
      std::string(PDE_DEFAULT_DATA_DIR) + "/kernel_map.json";

  // reconstruct
  std::string rc_input, rc_out, rc_registry = default_registry;
  CLI::App* rc = app.add_subcommand(
      "reconstruct", "Reconstruct the physics contract an input file encodes");
  rc->add_option("input", rc_input, "MOOSE input file")->required();
  rc->add_option("-o,--out", rc_out, "Write the contract JSON here (default stdout)");
  rc->add_option("--registry", rc_registry, "Mapping registry JSON");

  // score
  ScoreArgs sc;
  sc.registry_path = default_registry;
  double gate_value = -1.0;
  CLI::App* score = app.add_subcommand(
      "score", "Score a candidate input against a reference contract or input");
  score->add_option("reference", sc.ref_path,
                    "Reference contract JSON or MOOSE input file")->required();
  score->add_option("candidate", sc.cand_path, "Candidate MOOSE input file")
      ->required();
  score->add_option("--registry", sc.registry_path, "Mapping registry JSON");
  score->add_option("--delta-coef", sc.delta, "Relative coefficient tolerance");
  score->add_option("--epsilon0", sc.epsilon0, "Near-zero denominator floor");
  score->add_option("--report", sc.report_path, "Write the machine report here");
  score->add_option("--mcs-report", sc.mcs_report_path,
                    "Write the constitutive side-channel report here");
  CLI::Option* gate_opt =
      score->add_option("--gate", gate_value, "Exit 1 when IFS is below this");

  // batch
  BatchArgs ba;
  ba.registry_path = default_registry;
  CLI::App* batch = app.add_subcommand(
      "batch", "Score a directory of candidates against a JSONL case file");
  batch->add_option("cases", ba.cases_path, "Benchmark cases (JSONL)")->required();
  batch->add_option("candidates", ba.candidates_dir,
                    "Directory holding <case-id>.i candidates")->required();
  batch->add_option("--registry", ba.registry_path, "Mapping registry JSON");
  batch->add_option("-o,--out", ba.out_path, "Results JSONL (default stdout)");
  batch->add_option("--delta-coef", ba.delta, "Relative coefficient tolerance");
  batch->add_option("--epsilon0", ba.epsilon0, "Near-zero denominator floor");
  batch->add_flag("--summary", ba.summary, "Print an aggregate summary");
  batch->add_option("--sha256-manifest", ba.manifest_path,
                    "Write a content-hash manifest of inputs and outputs");

  // refine
  RefineArgs ra;
  ra.registry_path = default_registry;
  CLI::App* refine = app.add_subcommand(
      "refine", "Generate and iteratively repair an input from a prompt");
  refine->add_option("prompt", ra.prompt_path, "Natural-language prompt file")
      ->required();
  refine->add_option("--endpoint-url", ra.endpoint_url,
                     "Chat-completions base URL (credential: IFS_LLM_API_KEY)");
  refine->add_option("--model", ra.model, "Model name");
  refine->add_option("--preset", ra.preset, "direct | specgen | pde_refine");
  refine->add_option("--n-max", ra.n_max, "Refinement-iteration budget");
  refine->add_option("--tau", ra.tau, "Internal score threshold");
  refine->add_option("--replay", ra.replay,
                     "record:<path> to capture, play:<path> to replay");
  refine->add_option("-o,--out", ra.out_path, "Write the final code here");
  refine->add_option("--trace", ra.trace_path, "Write the trace JSON here");
  refine->add_option("--registry", ra.registry_path, "Mapping registry JSON");
  refine->add_option("--data-dir", ra.data_dir, "Prompt-template directory root");

  // manifest
  std::vector<std::string> mf_paths;
  std::string mf_out;
  CLI::App* manifest = app.add_subcommand(
      "manifest", "Print SHA-256 content hashes, one '<hex>  <path>' per line");
  manifest->add_option("paths", mf_paths, "Files to hash")->required();
  manifest->add_option("-o,--out", mf_out, "Write the manifest here (default stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (rc->parsed()) {
      const pde::MappingRegistry reg = load_reg(rc_registry);
      const pde::PhysicsContract c =
          pde::reconstruct_contract(pde::hit::parse_input(pde::read_file(rc_input)), reg);
      warn_unresolved(c);
      emit(rc_out, pde::save_contract(c) + "\n");
      return kExitOk;
    }
    if (score->parsed()) {
      if (*gate_opt) sc.gate = gate_value;
      return run_score(sc);
    }
    if (batch->parsed()) return run_batch(ba);
    if (refine->parsed()) return run_refine(ra);
    if (manifest->parsed()) {
      emit(mf_out, manifest_lines(mf_paths));
      return kExitOk;
    }
  } catch (const pde::RegistryError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRegistry;
  } catch (const pde::EndpointError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitEndpoint;
  } catch (const pde::ExtractionError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitEndpoint;
  } catch (const std::exception& e) {
    // ParseError, SchemaError, and IO failures are all input-format problems.
    std::cerr << "error: " << e.what() << "\n";
    return kExitParse;
  }
  return kExitOk;
}
