#pragma once

// The generation pipeline: extract a physics contract from a natural-language
// description, generate an input file against it, score the generated file's
// reconstructed contract, and iterate on the violation report until the
// internal score clears the threshold or the iteration budget runs out. A
// regression guard keeps the best-scoring candidate: a revision replaces it
// only when its internal score strictly improves. The ground-truth contract
// is never an input here — feedback comes solely from the extracted contract.

#include <optional>
#include <string>
#include <vector>

#include "pde/contract.hpp"
#include "pde/endpoint.hpp"
#include "pde/ifs.hpp"
#include "pde/kernel_map.hpp"

namespace pde {

enum class Preset {
  direct,     // one generation straight from the description; nothing scored
  specgen,    // extract a contract, generate once against it, score once
  pde_refine, // specgen + violation-guided refinement loop
};

std::string_view to_string(Preset preset);
std::optional<Preset> preset_from_string(std::string_view name);

struct PipelineOptions {
  Preset preset = Preset::pde_refine;
  int max_refinements = 2;  // refinement-iteration budget
  double tau_ifs = 0.85;    // loop exits once internal score reaches this
  EvalOptions eval;         // coefficient tolerance passthrough
  std::string data_dir = PDE_DEFAULT_DATA_DIR; // templates live in <data_dir>/prompts
};

struct PipelineStep {
  int iteration = 0; // 0 = initial generation, 1.. = refinement rounds
  std::string code;
  // Score of this candidate against the extracted contract; absent for the
  // direct preset (no contract to score against).
  std::optional<double> internal_ifs;
  std::optional<EvalReport> report;       // absent when the candidate didn't parse
  std::optional<std::string> parse_error; // set instead of report on parse failure
  bool accepted = false; // regression guard adopted this step as the new best
};

struct PipelineTrace {
  Preset preset = Preset::pde_refine;
  std::optional<PhysicsContract> extracted; // the contract feedback is scored against
  std::vector<PipelineStep> steps;
  std::vector<int> accepted; // refinement iterations the guard accepted, in order
  std::string final_code;    // best candidate (initial one if nothing improved)
  std::optional<double> final_ifs;
  int endpoint_calls = 0;
  std::optional<std::string> error; // set when the run ended early
};

// Drops everything outside the first ``` fence pair; without fences, returns
// the input trimmed.
std::string strip_code_fences(const std::string& text);

// Reads <data_dir>/prompts/<name>.txt. Throws std::runtime_error if missing.
std::string load_template(const std::string& data_dir, const std::string& name);

// Stage 1: asks for a contract as JSON and parses it; one re-ask with the
// schema error appended is permitted. Throws ExtractionError when the re-ask
// also fails to parse, EndpointError on transport failure.
PhysicsContract extract_contract(const std::string& description,
                                 GenerationEndpoint& endpoint,
                                 const std::string& data_dir = PDE_DEFAULT_DATA_DIR);

// Stage 2: asks for an input file implementing the serialized contract.
std::string generate_code(const PhysicsContract& contract,
                          GenerationEndpoint& endpoint,
                          const std::string& data_dir = PDE_DEFAULT_DATA_DIR);

// Stage 4: feeds the current code and its machine-format violation report
// back for a minimal correction. The report must carry >= 1 violation.
std::string refine_once(const std::string& code, const EvalReport& report,
                        GenerationEndpoint& endpoint,
                        const std::string& data_dir = PDE_DEFAULT_DATA_DIR);

// Per-role endpoint wiring; a single endpoint may serve all three roles.
struct EndpointSet {
  GenerationEndpoint* extractor = nullptr;
  GenerationEndpoint* generator = nullptr;
  GenerationEndpoint* refiner = nullptr;

  EndpointSet(GenerationEndpoint& all) // implicit: one endpoint, all roles
      : extractor(&all), generator(&all), refiner(&all) {}
  EndpointSet(GenerationEndpoint& extract, GenerationEndpoint& generate,
              GenerationEndpoint& refine)
      : extractor(&extract), generator(&generate), refiner(&refine) {}
};

// Runs the configured preset end to end. Never throws: extraction or
// endpoint failures end the run early with `error` set and the best
// candidate so far (possibly none) in the partial trace.
PipelineTrace run_pipeline(const std::string& description, EndpointSet endpoints,
                           const MappingRegistry& reg,
                           const PipelineOptions& options = {});

// Stable JSON rendering of a trace (reports in machine format).
Json trace_to_json(const PipelineTrace& trace);

} // namespace pde
