#pragma once

// Material/constitutive-fidelity side channel. Facts are scalar constitutive
// claims (conductivities, film coefficients, model parameters) that the
// operator-level checkpoints cannot see once a coefficient hides behind a
// material chain. They are compared key-by-key between reference and
// candidate.
//
// Key conventions (normalized lowercase, whitespace collapsed):
//   constant material property        -> "<property>"            e.g. "permeability"
//   non-constant model signature      -> "material_model:<class>"
//   non-constant model scalar param   -> "material:<class>:<param>"
//   BC coefficient param              -> "bc:<boundary>:<param>"  e.g. "bc:right:heat_transfer_coefficient"
//   resolved kernel coefficient       -> "<param>" (inline number) or
//                                        "<property>" (through a constant
//                                        material; deduplicated against the
//                                        material's own fact)

#include <optional>
#include <string>
#include <vector>

#include "pde/contract.hpp"
#include "pde/hit.hpp"
#include "pde/kernel_map.hpp"

namespace pde {

struct McsMismatch {
  std::string key;
  std::string expected;
  std::string found; // "absent" when the candidate lacks the key
};

struct McsResult {
  // nullopt = undefined: the reference carries no facts to check.
  std::optional<double> score;
  std::vector<McsMismatch> mismatches;
};

// Walks Materials/BCs/Kernels blocks and collects the deduplicated fact set
// (first occurrence of a key wins). Total: never throws on well-formed trees.
std::vector<MaterialFact> extract_facts(const hit::InputTree& tree,
                                        const MappingRegistry& reg);

// Fraction of reference facts matched by the candidate. Scalar values match
// within reference-relative tolerance delta (floor epsilon0); categorical
// values by exact normalized equality.
McsResult mcs_score(const std::vector<MaterialFact>& reference,
                    const std::vector<MaterialFact>& candidate,
                    double delta = 0.1, double epsilon0 = 1e-12);

// Relative L2 deviation of a perturbed field sample against a baseline:
// ||perturbed - baseline||_2 / max(||baseline||_2, 1e-15).
// Throws LengthMismatch on unequal lengths.
double field_relative_error(const std::vector<double>& baseline,
                            const std::vector<double>& perturbed);

} // namespace pde
