#pragma once

// Batch evaluation over benchmark cases: each case pairs a prompt with a
// ground-truth contract; a candidate input file is parsed, reconstructed,
// and scored against that contract. Results carry the headline score, the
// constitutive side-channel score, and per-dimension pass fractions taken
// directly from the checkpoint ledger.

#include <optional>
#include <string>
#include <vector>

#include "pde/contract.hpp"
#include "pde/ifs.hpp"
#include "pde/kernel_map.hpp"
#include "pde/stats.hpp"

namespace pde {

struct BenchCase {
  std::string id;
  std::string prompt;
  PhysicsContract gt_contract;
  std::string family; // physics-family token
  std::string tier;   // simple | medium | complex
  Json acceptable_kernel_variants = Json::array(); // passthrough metadata
  std::string reference_input; // optional expert-written input text
};

// Unweighted pass fractions per checkpoint dimension; a dimension with no
// checkpoints scores 1.0. term covers presence both ways (missing + extra),
// bc covers boundary/type/value, ic covers type/value.
struct SubScores {
  double term = 1.0;
  double coeff = 1.0;
  double bc = 1.0;
  double ic = 1.0;
  double time = 1.0;
};

struct CaseResult {
  std::string id;
  double ifs = 0.0;
  std::optional<double> mcs; // nullopt = undefined (reference has no facts)
  bool parse_failed = false;
  SubScores sub_scores;
};

// One JSON object per line; `id` and `gt_contract` are required, everything
// else defaults. Throws SchemaError with a "cases[i].field" path.
std::vector<BenchCase> load_cases_jsonl(const std::string& text);
std::string cases_to_jsonl(const std::vector<BenchCase>& cases);

Json case_to_json(const BenchCase& c);
BenchCase case_from_json(const Json& doc, const std::string& where);

// Parses and reconstructs `candidate_code`, then scores it against the
// case's ground truth. Total: an unparseable candidate yields ifs 0 with
// parse_failed set, zeroed sub-scores, and the side channel judged against
// an empty fact set.
CaseResult score_case(const BenchCase& c, const std::string& candidate_code,
                      const MappingRegistry& reg, const EvalOptions& opts = {});

// Scores cases[i] against candidates[i] (sizes must agree; throws
// LengthMismatch otherwise). Parallel, with results landing at their case's
// index — batch output is order-deterministic.
std::vector<CaseResult> score_batch(const std::vector<BenchCase>& cases,
                                    const std::vector<std::string>& candidates,
                                    const MappingRegistry& reg,
                                    const EvalOptions& opts = {});

Json result_to_json(const CaseResult& r);
std::string results_to_jsonl(const std::vector<CaseResult>& results);

// id -> ifs map for the stats layer.
ScoreMap ifs_scores(const std::vector<CaseResult>& results);

// Aggregate block: case count, parse failures, mean scores (side channel
// averaged over cases where it is defined), a seeded bootstrap CI of the
// mean headline score, and per-family / per-tier breakdowns.
Json summarize(const std::vector<BenchCase>& cases,
               const std::vector<CaseResult>& results,
               int resamples = 2000, std::uint64_t seed = 12345);

// Plain-text rendering of summarize()'s output.
std::string summary_text(const Json& summary);

} // namespace pde
