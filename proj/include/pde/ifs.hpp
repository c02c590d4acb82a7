#pragma once

// Intent-fidelity scoring: a reference contract induces a weighted checkpoint
// set; the candidate contract is audited against it through a variable
// alignment, and the score is one minus the severity-weighted failure
// fraction. Every failed checkpoint becomes a structured violation carrying a
// repair class, so a report is directly actionable.

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pde/contract.hpp"
#include "pde/kernel_map.hpp"

namespace pde {

struct EvalOptions {
  double delta = 0.1;      // relative coefficient tolerance (reference-relative)
  double epsilon0 = 1e-12; // denominator floor for near-zero references
};

// Reference-relative scalar agreement: |ref - cand| / max(|ref|, epsilon0)
// <= delta, boundary inclusive. Asymmetric by construction.
bool coefficient_match(double reference, double candidate, double delta = 0.1,
                       double epsilon0 = 1e-12);

// ---------------------------------------------------------------------------
// Checkpoints.

struct Checkpoint {
  CheckpointKind kind = CheckpointKind::term_missing;
  std::string variable;              // reference-side name ("" for time_scheme)
  std::optional<OperatorType> op;    // term_missing / term_extra / coefficient
  std::vector<std::string> boundary; // bc_* kinds
  double weight = 0.0;
  // Index of the originating term/BC/IC in the reference contract; -1 for
  // time_scheme and term_extra. Set by generate_checkpoints.
  int ref_index = -1;
};

// Stable human identity for a checkpoint: "u/diffusion", "u@left", "u:ic",
// "time".
std::string checkpoint_subject(const Checkpoint& cp);

struct CheckpointResult {
  Checkpoint checkpoint;
  bool passed = false;
  std::string expected; // rendered expectation (empty when structural)
  std::string found;    // rendered candidate state ("absent" if missing)
};

// The checkpoint set induced by a reference contract alone: one term_missing
// per term, coefficient checks for non-symbolic coefficients, type/boundary
// (and value when present) per BC, type (and value when present) per IC, and
// exactly one time_scheme checkpoint. Weights come from the registry tables.
std::vector<Checkpoint> generate_checkpoints(const PhysicsContract& reference,
                                             const MappingRegistry& reg);

// Severity-weighted aggregation over already-judged checkpoints:
// 1 - (sum of failed weights / sum of all weights), clamped to [0, 1].
// An empty list scores 1.
double score_results(const std::vector<CheckpointResult>& results);

// ---------------------------------------------------------------------------
// Variable alignment.

struct VariableAlignment {
  // (reference name, candidate name), in reference declaration order.
  std::vector<std::pair<std::string, std::string>> pairs;
  std::vector<std::string> unmatched_reference;
  std::vector<std::string> unmatched_candidate;

  // Candidate name for a reference variable, if aligned.
  std::optional<std::string> candidate_for(const std::string& ref_name) const;
};

// Pairs reference and candidate variables by term signature; identical
// signatures are disambiguated by BC agreement, then coefficient agreement,
// then name. Leftovers are near-matched by signature overlap. Names never
// decide a pairing before structure does.
VariableAlignment align_variables(const PhysicsContract& reference,
                                  const PhysicsContract& candidate,
                                  const EvalOptions& opts = {});

// ---------------------------------------------------------------------------
// Violations.

enum class FixClass {
  add_kernel,
  remove_kernel,
  change_bc_type,
  set_value,
  change_time_scheme,
};

std::string_view to_string(FixClass);

// The repair class a failed checkpoint calls for.
FixClass fix_class_for(CheckpointKind kind);

struct Violation {
  CheckpointKind kind = CheckpointKind::term_missing;
  std::string variable;
  std::optional<OperatorType> op;
  std::vector<std::string> boundary;
  std::string expected;
  std::string found;
  double weight = 0.0;
  FixClass fix_class = FixClass::set_value;
};

// ---------------------------------------------------------------------------
// Evaluation.

struct EvalReport {
  double ifs = 0.0;
  std::vector<CheckpointResult> checkpoints; // reference-induced + term_extra
  std::vector<Violation> violations;         // the failed subset, in order
  VariableAlignment alignment;
  std::vector<std::string> unresolved_reference;
  std::vector<std::string> unresolved_candidate;
};

// Audits `candidate` against `reference`. Checkpoints are judged through the
// variable alignment; candidate terms with no aligned reference counterpart
// add term_extra checkpoints to both sides of the ratio. The ground truth is
// read, never mutated; unresolved classes are reported, not scored.
EvalReport evaluate(const PhysicsContract& reference,
                    const PhysicsContract& candidate,
                    const MappingRegistry& reg, const EvalOptions& opts = {});

// Machine form: {score, checkpoints: [{kind, subject, weight, passed}],
// violations: [{kind, variable, operator?, boundary?, expected, found,
// weight, fix_class}], unresolved: {ref, cand}}.
Json report_to_json(const EvalReport& report);

// Human form: one line per violation, grouped summary header.
std::string report_to_text(const EvalReport& report);

} // namespace pde
