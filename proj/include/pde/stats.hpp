#pragma once

// Paired, nonparametric comparison utilities for benchmark score sets:
// per-case deltas, the Wilcoxon signed-rank test (exact for small effective
// samples, normal approximation with tie correction beyond), deterministic
// percentile-bootstrap confidence intervals, and hard-subset selection.

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "pde/errors.hpp"

namespace pde {

// One run's scores, keyed by case id.
using ScoreMap = std::map<std::string, double>;

// Per-id differences (b - a), in id order. Throws IdMismatch unless both maps
// carry exactly the same ids.
std::vector<double> paired_differences(const ScoreMap& a, const ScoreMap& b);

// Mean of (b - a) over the shared id set; same id contract as above.
double paired_delta(const ScoreMap& a, const ScoreMap& b);

struct WilcoxonResult {
  double w = 0.0;       // min(W+, W-), averaged ranks
  double p_value = 1.0; // two-sided
  int n_effective = 0;  // deltas remaining after zeros are dropped
  bool exact = true;    // exact distribution (n <= 25) vs normal approximation
};

// Signed-rank test on paired deltas. Zero deltas are dropped; tied magnitudes
// share their average rank. Small samples (n <= 25) get the exact two-sided
// tail probability of the signed-rank distribution; larger ones use the
// normal approximation with tie-corrected variance
//   sigma^2 = n(n+1)(2n+1)/24 - sum(t^3 - t)/48
// and no continuity correction. Throws DegenerateSample when nothing remains.
WilcoxonResult wilcoxon_signed_rank(const std::vector<double>& deltas);

struct BootstrapCi {
  double lower = 0.0;
  double upper = 0.0;
  double mean = 0.0; // sample mean
};

// Percentile bootstrap CI of the mean: `resamples` draws with replacement
// from a seeded mt19937_64 (index = next() mod n), means sorted, bounds taken
// at the nearest ranks ceil(q * B). Fully deterministic for a given seed.
// Throws DegenerateSample on an empty sample.
BootstrapCi bootstrap_ci(const std::vector<double>& sample,
                         double confidence = 0.95, int resamples = 2000,
                         std::uint64_t seed = 12345);

// Ids scoring strictly below the threshold, in id order.
std::vector<std::string> hard_subset(const ScoreMap& scores,
                                     double threshold = 0.7);

} // namespace pde
