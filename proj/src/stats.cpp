#include "pde/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace pde {

namespace {

// Averaged ranks of |deltas| (zeros already removed), in input order.
std::vector<double> averaged_ranks(const std::vector<double>& magnitudes) {
  const size_t n = magnitudes.size();
  std::vector<size_t> order(n);
  std::iota(order.begin(), order.end(), size_t{0});
  std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    return magnitudes[a] < magnitudes[b];
  });
  std::vector<double> rank(n, 0.0);
  size_t i = 0;
  while (i < n) {
    size_t j = i;
    while (j < n && magnitudes[order[j]] == magnitudes[order[i]]) ++j;
    const double avg = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
    for (size_t k = i; k < j; ++k) rank[order[k]] = avg;
    i = j;
  }
  return rank;
}

// Exact two-sided tail of the signed-rank distribution under H0 by dynamic
// programming over doubled rank sums (doubling keeps half-integer averaged
// ranks integral). Counts can reach 2^25 and stay exact in doubles.
double exact_two_sided_p(const std::vector<double>& ranks, double w_plus) {
  const size_t n = ranks.size();
  int scaled_total = 0;
  std::vector<int> scaled(n);
  for (size_t i = 0; i < n; ++i) {
    scaled[i] = static_cast<int>(std::lround(ranks[i] * 2.0));
    scaled_total += scaled[i];
  }
  std::vector<double> count(static_cast<size_t>(scaled_total) + 1, 0.0);
  count[0] = 1.0;
  int reach = 0;
  for (size_t i = 0; i < n; ++i) {
    reach += scaled[i];
    for (int s = reach; s >= scaled[i]; --s)
      count[static_cast<size_t>(s)] += count[static_cast<size_t>(s - scaled[i])];
  }
  const double mid = static_cast<double>(scaled_total) / 2.0;
  const double dev = std::fabs(w_plus * 2.0 - mid);
  double tail = 0.0;
  for (int s = 0; s <= scaled_total; ++s)
    if (std::fabs(static_cast<double>(s) - mid) >= dev - 1e-9)
      tail += count[static_cast<size_t>(s)];
  return std::min(1.0, tail / std::pow(2.0, static_cast<double>(n)));
}

} // namespace

std::vector<double> paired_differences(const ScoreMap& a, const ScoreMap& b) {
  if (a.size() != b.size())
    throw IdMismatch(std::to_string(a.size()) + " vs " + std::to_string(b.size()) +
                     " cases");
  std::vector<double> out;
  out.reserve(a.size());
  auto ib = b.begin();
  for (auto ia = a.begin(); ia != a.end(); ++ia, ++ib) {
    if (ia->first != ib->first)
      throw IdMismatch("'" + ia->first + "' vs '" + ib->first + "'");
    out.push_back(ib->second - ia->second);
  }
  return out;
}

double paired_delta(const ScoreMap& a, const ScoreMap& b) {
  std::vector<double> d = paired_differences(a, b);
  if (d.empty()) return 0.0;
  return std::accumulate(d.begin(), d.end(), 0.0) / static_cast<double>(d.size());
}

WilcoxonResult wilcoxon_signed_rank(const std::vector<double>& deltas) {
  std::vector<double> magnitudes;
  std::vector<bool> positive;
  for (double d : deltas) {
    if (d == 0.0) continue;
    magnitudes.push_back(std::fabs(d));
    positive.push_back(d > 0.0);
  }
  const size_t n = magnitudes.size();
  if (n == 0) throw DegenerateSample("every paired delta is zero");

  const std::vector<double> ranks = averaged_ranks(magnitudes);
  double w_plus = 0.0;
  for (size_t i = 0; i < n; ++i)
    if (positive[i]) w_plus += ranks[i];
  const double total = static_cast<double>(n) * static_cast<double>(n + 1) / 2.0;
  const double w_minus = total - w_plus;

  WilcoxonResult result;
  result.w = std::min(w_plus, w_minus);
  result.n_effective = static_cast<int>(n);
  result.exact = n <= 25;

  if (result.exact) {
    result.p_value = exact_two_sided_p(ranks, w_plus);
    return result;
  }

  // Normal approximation with tie-corrected variance, no continuity term.
  const double dn = static_cast<double>(n);
  double tie_term = 0.0;
  size_t i = 0;
  std::vector<double> sorted = magnitudes;
  std::sort(sorted.begin(), sorted.end());
  while (i < sorted.size()) {
    size_t j = i;
    while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
    const double t = static_cast<double>(j - i);
    tie_term += t * t * t - t;
    i = j;
  }
  const double mean = dn * (dn + 1.0) / 4.0;
  const double variance = dn * (dn + 1.0) * (2.0 * dn + 1.0) / 24.0 - tie_term / 48.0;
  const double z = (result.w - mean) / std::sqrt(variance);
  result.p_value = std::min(1.0, std::erfc(std::fabs(z) / std::sqrt(2.0)));
  return result;
}

BootstrapCi bootstrap_ci(const std::vector<double>& sample, double confidence,
                         int resamples, std::uint64_t seed) {
  if (sample.empty()) throw DegenerateSample("empty bootstrap sample");
  const size_t n = sample.size();
  std::mt19937_64 gen(seed);
  std::vector<double> means;
  means.reserve(static_cast<size_t>(resamples));
  for (int r = 0; r < resamples; ++r) {
    double sum = 0.0;
    for (size_t i = 0; i < n; ++i) sum += sample[gen() % n];
    means.push_back(sum / static_cast<double>(n));
  }
  std::sort(means.begin(), means.end());

  const double alpha = 1.0 - confidence;
  auto nearest_rank = [&](double q) {
    // 1-based rank ceil(q * B), clamped into the sample
    long rank = static_cast<long>(
        std::ceil(q * static_cast<double>(resamples) - 1e-9));
    rank = std::clamp(rank, long{1}, static_cast<long>(resamples));
    return means[static_cast<size_t>(rank - 1)];
  };

  BootstrapCi ci;
  ci.lower = nearest_rank(alpha / 2.0);
  ci.upper = nearest_rank(1.0 - alpha / 2.0);
  ci.mean = std::accumulate(sample.begin(), sample.end(), 0.0) /
            static_cast<double>(n);
  return ci;
}

std::vector<std::string> hard_subset(const ScoreMap& scores, double threshold) {
  std::vector<std::string> out;
  for (const auto& [id, score] : scores)
    if (score < threshold) out.push_back(id);
  return out;
}

} // namespace pde
