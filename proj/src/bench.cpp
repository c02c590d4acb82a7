#include "pde/bench.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <thread>

#include "pde/hit.hpp"
#include "pde/mcs.hpp"
#include "pde/reconstruct.hpp"

namespace pde {

namespace {

std::string opt_str(const Json& doc, const char* key, const std::string& where) {
  if (!doc.contains(key) || doc.at(key).is_null()) return {};
  if (!doc.at(key).is_string())
    throw SchemaError(where + "." + key, "expected a string");
  return doc.at(key).get<std::string>();
}

std::string fixed3(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

} // namespace

BenchCase case_from_json(const Json& doc, const std::string& where) {
  if (!doc.is_object()) throw SchemaError(where, "expected a JSON object");
  BenchCase c;
  if (!doc.contains("id") || !doc.at("id").is_string() ||
      doc.at("id").get<std::string>().empty())
    throw SchemaError(where + ".id", "required non-empty string");
  c.id = doc.at("id").get<std::string>();
  if (!doc.contains("gt_contract"))
    throw SchemaError(where + ".gt_contract", "required field missing");
  try {
    c.gt_contract = load_contract(doc.at("gt_contract").dump());
  } catch (const SchemaError& e) {
    throw SchemaError(where + ".gt_contract", e.what());
  }
  c.prompt = opt_str(doc, "prompt", where);
  c.family = opt_str(doc, "family", where);
  c.tier = opt_str(doc, "tier", where);
  c.reference_input = opt_str(doc, "reference_input", where);
  if (doc.contains("acceptable_kernel_variants")) {
    if (!doc.at("acceptable_kernel_variants").is_array())
      throw SchemaError(where + ".acceptable_kernel_variants", "expected an array");
    c.acceptable_kernel_variants = doc.at("acceptable_kernel_variants");
  }
  return c;
}

Json case_to_json(const BenchCase& c) {
  Json j;
  j["id"] = c.id;
  if (!c.prompt.empty()) j["prompt"] = c.prompt;
  j["gt_contract"] = Json::parse(save_contract(c.gt_contract));
  if (!c.family.empty()) j["family"] = c.family;
  if (!c.tier.empty()) j["tier"] = c.tier;
  if (!c.acceptable_kernel_variants.empty())
    j["acceptable_kernel_variants"] = c.acceptable_kernel_variants;
  if (!c.reference_input.empty()) j["reference_input"] = c.reference_input;
  return j;
}

std::vector<BenchCase> load_cases_jsonl(const std::string& text) {
  std::vector<BenchCase> cases;
  size_t pos = 0;
  size_t index = 0;
  while (pos <= text.size()) {
    const size_t eol = text.find('\n', pos);
    const size_t end = (eol == std::string::npos) ? text.size() : eol;
    std::string line = text.substr(pos, end - pos);
    if (line.find_first_not_of(" \t\r") != std::string::npos) {
      const std::string where = "cases[" + std::to_string(index) + "]";
      Json doc;
      try {
        doc = Json::parse(line);
      } catch (const nlohmann::json::parse_error& e) {
        throw SchemaError(where, std::string("invalid JSON: ") + e.what());
      }
      cases.push_back(case_from_json(doc, where));
      ++index;
    }
    if (eol == std::string::npos) break;
    pos = eol + 1;
  }
  return cases;
}

std::string cases_to_jsonl(const std::vector<BenchCase>& cases) {
  std::string out;
  for (const BenchCase& c : cases) {
    out += case_to_json(c).dump();
    out += '\n';
  }
  return out;
}

CaseResult score_case(const BenchCase& c, const std::string& candidate_code,
                      const MappingRegistry& reg, const EvalOptions& opts) {
  CaseResult r;
  r.id = c.id;

  std::vector<MaterialFact> candidate_facts;
  try {
    hit::InputTree tree = hit::parse_input(candidate_code);
    PhysicsContract cand = reconstruct_contract(tree, reg);
    candidate_facts = extract_facts(tree, reg);

    EvalReport report = evaluate(c.gt_contract, cand, reg, opts);
    r.ifs = report.ifs;

    // Per-dimension unweighted pass fractions, read straight off the ledger.
    int pass[5] = {0, 0, 0, 0, 0};
    int total[5] = {0, 0, 0, 0, 0};
    for (const CheckpointResult& cr : report.checkpoints) {
      int dim = 0;
      switch (cr.checkpoint.kind) {
      case CheckpointKind::term_missing:
      case CheckpointKind::term_extra: dim = 0; break;
      case CheckpointKind::coefficient: dim = 1; break;
      case CheckpointKind::bc_type:
      case CheckpointKind::bc_boundary:
      case CheckpointKind::bc_value: dim = 2; break;
      case CheckpointKind::ic_type:
      case CheckpointKind::ic_value: dim = 3; break;
      case CheckpointKind::time_scheme: dim = 4; break;
      }
      ++total[dim];
      if (cr.passed) ++pass[dim];
    }
    double* slots[5] = {&r.sub_scores.term, &r.sub_scores.coeff, &r.sub_scores.bc,
                        &r.sub_scores.ic, &r.sub_scores.time};
    for (int d = 0; d < 5; ++d)
      if (total[d] > 0) *slots[d] = double(pass[d]) / double(total[d]);
  } catch (const ParseError&) {
    r.parse_failed = true;
    r.ifs = 0.0;
    r.sub_scores = {0.0, 0.0, 0.0, 0.0, 0.0};
    candidate_facts.clear();
  }

  r.mcs = mcs_score(c.gt_contract.coeff_facts, candidate_facts, opts.delta,
                    opts.epsilon0)
              .score;
  return r;
}

std::vector<CaseResult> score_batch(const std::vector<BenchCase>& cases,
                                    const std::vector<std::string>& candidates,
                                    const MappingRegistry& reg,
                                    const EvalOptions& opts) {
  if (cases.size() != candidates.size())
    throw LengthMismatch(cases.size(), candidates.size());
  std::vector<CaseResult> results(cases.size());

  const size_t hw = std::max(1u, std::thread::hardware_concurrency());
  const size_t n_threads = std::min(hw, cases.size());
  if (n_threads <= 1) {
    for (size_t i = 0; i < cases.size(); ++i)
      results[i] = score_case(cases[i], candidates[i], reg, opts);
    return results;
  }

  std::atomic<size_t> next{0};
  auto worker = [&] {
    for (size_t i = next.fetch_add(1); i < cases.size(); i = next.fetch_add(1))
      results[i] = score_case(cases[i], candidates[i], reg, opts);
  };
  std::vector<std::thread> pool;
  pool.reserve(n_threads);
  for (size_t t = 0; t < n_threads; ++t) pool.emplace_back(worker);
  for (std::thread& t : pool) t.join();
  return results;
}

Json result_to_json(const CaseResult& r) {
  Json j;
  j["id"] = r.id;
  j["ifs"] = r.ifs;
  j["mcs"] = r.mcs ? Json(*r.mcs) : Json(nullptr);
  j["parse_failed"] = r.parse_failed;
  j["sub_scores"] = {{"term", r.sub_scores.term},
                     {"coeff", r.sub_scores.coeff},
                     {"bc", r.sub_scores.bc},
                     {"ic", r.sub_scores.ic},
                     {"time", r.sub_scores.time}};
  return j;
}

std::string results_to_jsonl(const std::vector<CaseResult>& results) {
  std::string out;
  for (const CaseResult& r : results) {
    out += result_to_json(r).dump();
    out += '\n';
  }
  return out;
}

ScoreMap ifs_scores(const std::vector<CaseResult>& results) {
  ScoreMap scores;
  for (const CaseResult& r : results) scores[r.id] = r.ifs;
  return scores;
}

Json summarize(const std::vector<BenchCase>& cases,
               const std::vector<CaseResult>& results, int resamples,
               std::uint64_t seed) {
  if (cases.size() != results.size())
    throw LengthMismatch(cases.size(), results.size());

  Json j;
  j["cases"] = results.size();
  int parse_failures = 0;
  std::vector<double> ifs_values;
  double mcs_sum = 0.0;
  int mcs_defined = 0;
  for (const CaseResult& r : results) {
    if (r.parse_failed) ++parse_failures;
    ifs_values.push_back(r.ifs);
    if (r.mcs) {
      mcs_sum += *r.mcs;
      ++mcs_defined;
    }
  }
  j["parse_failures"] = parse_failures;

  if (!ifs_values.empty()) {
    BootstrapCi ci = bootstrap_ci(ifs_values, 0.95, resamples, seed);
    j["mean_ifs"] = ci.mean;
    j["ifs_ci"] = {{"lower", ci.lower}, {"upper", ci.upper}};
  } else {
    j["mean_ifs"] = Json(nullptr);
    j["ifs_ci"] = Json(nullptr);
  }
  j["mean_mcs"] = mcs_defined > 0 ? Json(mcs_sum / mcs_defined) : Json(nullptr);
  j["mcs_defined"] = mcs_defined;

  // Per-family / per-tier means, grouped in first-appearance order.
  auto grouped = [&](bool by_family) {
    std::vector<std::string> order;
    std::map<std::string, std::pair<int, double>> acc;
    for (size_t i = 0; i < cases.size(); ++i) {
      std::string key = by_family ? cases[i].family : cases[i].tier;
      if (key.empty()) key = "unspecified";
      if (!acc.count(key)) order.push_back(key);
      acc[key].first += 1;
      acc[key].second += results[i].ifs;
    }
    Json groups = Json::object();
    for (const std::string& key : order)
      groups[key] = {{"cases", acc[key].first},
                     {"mean_ifs", acc[key].second / acc[key].first}};
    return groups;
  };
  j["families"] = grouped(true);
  j["tiers"] = grouped(false);
  return j;
}

std::string summary_text(const Json& s) {
  std::string out;
  out += "cases: " + s["cases"].dump() +
         "  parse failures: " + s["parse_failures"].dump() + "\n";
  if (!s["mean_ifs"].is_null()) {
    out += "mean IFS: " + fixed3(s["mean_ifs"].get<double>());
    if (!s["ifs_ci"].is_null())
      out += "  (95% CI " + fixed3(s["ifs_ci"]["lower"].get<double>()) + " - " +
             fixed3(s["ifs_ci"]["upper"].get<double>()) + ")";
    out += "\n";
  }
  if (!s["mean_mcs"].is_null())
    out += "mean MCS: " + fixed3(s["mean_mcs"].get<double>()) + "  (over " +
           s["mcs_defined"].dump() + " cases)\n";
  for (const char* section : {"families", "tiers"}) {
    for (const auto& [key, g] : s[section].items())
      out += std::string(section == std::string("families") ? "family" : "tier") +
             " " + key + ": n=" + g["cases"].dump() + "  mean IFS " +
             fixed3(g["mean_ifs"].get<double>()) + "\n";
  }
  return out;
}

} // namespace pde
