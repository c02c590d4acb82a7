#include "pde/ifs.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>
#include <sstream>

#include "input_common.hpp"

namespace pde {

bool coefficient_match(double reference, double candidate, double delta,
                       double epsilon0) {
  const double rel = std::fabs(reference - candidate) /
                     std::max(std::fabs(reference), epsilon0);
  // The boundary is inclusive; the relative slack keeps decimal boundaries
  // like (1.0, 1.10) from failing on representation error.
  return rel <= delta * (1.0 + 1e-9);
}

namespace {

double effective(const Coefficient& c) { return c ? *c : 1.0; }

std::string render_scalar(const ScalarOrExpr& v) {
  switch (v.kind) {
  case ScalarOrExpr::Kind::Absent:
    return "absent";
  case ScalarOrExpr::Kind::Number:
    return detail::render_number(v.number);
  case ScalarOrExpr::Kind::Text:
    return v.text;
  }
  return "absent";
}

std::string join(const std::vector<std::string>& parts, char sep) {
  std::string out;
  for (const std::string& p : parts) {
    if (!out.empty()) out += sep;
    out += p;
  }
  return out;
}

std::string subject_of(CheckpointKind kind, const std::string& variable,
                       const std::optional<OperatorType>& op,
                       const std::vector<std::string>& boundary) {
  switch (kind) {
  case CheckpointKind::term_missing:
  case CheckpointKind::term_extra:
  case CheckpointKind::coefficient:
    return variable + "/" + std::string(op ? to_string(*op) : "?");
  case CheckpointKind::bc_type:
  case CheckpointKind::bc_boundary:
  case CheckpointKind::bc_value:
    return variable + "@" + join(boundary, ',');
  case CheckpointKind::ic_type:
  case CheckpointKind::ic_value:
    return variable + ":ic";
  case CheckpointKind::time_scheme:
    return "time";
  }
  return variable;
}

bool value_match(const ScalarOrExpr& ref, const ScalarOrExpr& cand,
                 const EvalOptions& opts) {
  if (ref.is_absent() || cand.is_absent()) return ref.kind == cand.kind;
  if (ref.is_number() && cand.is_number())
    return coefficient_match(ref.number, cand.number, opts.delta, opts.epsilon0);
  if (!ref.is_number() && !cand.is_number())
    return normalize_expr(ref.text) == normalize_expr(cand.text);
  return false;
}

// Boundary identity: an unordered token set, except that periodic pairs keep
// their (primary, secondary) order.
bool same_boundary(const BoundaryCondition& ref, const BoundaryCondition& cand) {
  if (ref.bc_type == BcType::Periodic || cand.bc_type == BcType::Periodic)
    return ref.boundary == cand.boundary;
  std::vector<std::string> a = ref.boundary;
  std::vector<std::string> b = cand.boundary;
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  return a == b;
}

// ---------------------------------------------------------------------------
// Variable alignment.

struct PairScore {
  int bc = 0;
  int coeff = 0;
};

PairScore pair_score(const PhysicsContract& R, const std::string& r,
                     const PhysicsContract& C, const std::string& c,
                     const EvalOptions& opts) {
  PairScore s;
  for (const BoundaryCondition& rb : R.boundary_conditions) {
    if (rb.variable != r) continue;
    for (const BoundaryCondition& cb : C.boundary_conditions) {
      if (cb.variable != c || !same_boundary(rb, cb)) continue;
      if (rb.bc_type != cb.bc_type) continue;
      if (!value_match(rb.value, cb.value, opts)) continue;
      ++s.bc;
      break;
    }
  }
  for (const BoundTerm& rt : R.terms) {
    if (rt.variable != r || !rt.coefficient) continue;
    const BoundTerm* ct = C.find_term(c, rt.op);
    if (ct && coefficient_match(*rt.coefficient, effective(ct->coefficient),
                                opts.delta, opts.epsilon0))
      ++s.coeff;
  }
  return s;
}

std::string signature_key(const PhysicsContract& P, const std::string& var) {
  std::string key;
  for (OperatorType op : term_signature(P, var)) {
    key += to_string(op);
    key += ',';
  }
  return key;
}

// Best injective assignment inside one equal-signature group: maximize total
// BC agreement, then total coefficient agreement, then take the
// lexicographically smallest candidate-name sequence. Groups larger than 7 on
// either side fall back to sorted-order pairing.
void pair_group(const PhysicsContract& R, const std::vector<std::string>& rvars,
                const PhysicsContract& C, const std::vector<std::string>& cvars,
                const EvalOptions& opts,
                std::map<std::string, std::string>& chosen) {
  const size_t nr = rvars.size();
  const size_t nc = cvars.size();
  if (nr == 1 && nc == 1) {
    chosen[rvars[0]] = cvars[0];
    return;
  }
  if (nr > 7 || nc > 7) {
    std::vector<std::string> rs = rvars;
    std::vector<std::string> cs = cvars;
    std::sort(rs.begin(), rs.end());
    std::sort(cs.begin(), cs.end());
    for (size_t i = 0; i < std::min(nr, nc); ++i) chosen[rs[i]] = cs[i];
    return;
  }

  std::vector<std::vector<PairScore>> score(nr, std::vector<PairScore>(nc));
  for (size_t i = 0; i < nr; ++i)
    for (size_t j = 0; j < nc; ++j)
      score[i][j] = pair_score(R, rvars[i], C, cvars[j], opts);

  // assignment[i] = candidate index for ref i, or -1.
  std::vector<int> assignment(nr, -1);
  std::vector<bool> used(nc, false);
  std::vector<int> best;
  int best_bc = -1;
  int best_coeff = -1;
  std::vector<std::string> best_names;

  auto names_of = [&](const std::vector<int>& a) {
    std::vector<std::string> names;
    names.reserve(nr);
    for (size_t i = 0; i < nr; ++i)
      names.push_back(a[i] >= 0 ? cvars[a[i]] : "\x7f"); // unmatched sorts last
    return names;
  };

  auto consider = [&]() {
    int bc = 0;
    int coeff = 0;
    for (size_t i = 0; i < nr; ++i)
      if (assignment[i] >= 0) {
        bc += score[i][assignment[i]].bc;
        coeff += score[i][assignment[i]].coeff;
      }
    std::vector<std::string> names = names_of(assignment);
    if (bc > best_bc || (bc == best_bc && coeff > best_coeff) ||
        (bc == best_bc && coeff == best_coeff &&
         (best.empty() || names < best_names))) {
      best = assignment;
      best_bc = bc;
      best_coeff = coeff;
      best_names = std::move(names);
    }
  };

  // Depth-first over ref indices; when refs outnumber candidates a ref may
  // stay unmatched, but only as many as the size difference requires.
  const size_t max_unmatched = nr > nc ? nr - nc : 0;
  auto recurse = [&](auto&& self, size_t i, size_t unmatched) -> void {
    if (i == nr) {
      consider();
      return;
    }
    for (size_t j = 0; j < nc; ++j) {
      if (used[j]) continue;
      used[j] = true;
      assignment[i] = static_cast<int>(j);
      self(self, i + 1, unmatched);
      used[j] = false;
      assignment[i] = -1;
    }
    if (unmatched < max_unmatched) self(self, i + 1, unmatched + 1);
  };
  recurse(recurse, 0, 0);

  for (size_t i = 0; i < nr; ++i)
    if (best[i] >= 0) chosen[rvars[i]] = cvars[best[i]];
}

int signature_overlap(const PhysicsContract& R, const std::string& r,
                      const PhysicsContract& C, const std::string& c) {
  std::vector<OperatorType> a = term_signature(R, r);
  std::vector<OperatorType> b = term_signature(C, c);
  // both sorted by operator name already; intersect as multisets
  auto name_less = [](OperatorType x, OperatorType y) {
    return to_string(x) < to_string(y);
  };
  std::vector<OperatorType> common;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(),
                        std::back_inserter(common), name_less);
  return static_cast<int>(common.size());
}

} // namespace

std::optional<std::string>
VariableAlignment::candidate_for(const std::string& ref_name) const {
  for (const auto& [r, c] : pairs)
    if (r == ref_name) return c;
  return std::nullopt;
}

VariableAlignment align_variables(const PhysicsContract& reference,
                                  const PhysicsContract& candidate,
                                  const EvalOptions& opts) {
  std::map<std::string, std::string> chosen;

  // Stage one: exact signature groups.
  std::vector<std::string> group_order;
  std::map<std::string, std::vector<std::string>> ref_groups;
  for (const std::string& v : reference.variables) {
    std::string key = signature_key(reference, v);
    if (ref_groups[key].empty()) group_order.push_back(key);
    ref_groups[key].push_back(v);
  }
  std::map<std::string, std::vector<std::string>> cand_groups;
  for (const std::string& v : candidate.variables)
    cand_groups[signature_key(candidate, v)].push_back(v);

  for (const std::string& key : group_order) {
    auto cit = cand_groups.find(key);
    if (cit == cand_groups.end()) continue;
    pair_group(reference, ref_groups[key], candidate, cit->second, opts, chosen);
  }

  // Stage two: near-match leftovers by signature overlap.
  auto is_used = [&](const std::string& cand_name) {
    for (const auto& [r, c] : chosen)
      if (c == cand_name) return true;
    return false;
  };
  std::vector<std::string> left_ref;
  for (const std::string& v : reference.variables)
    if (!chosen.count(v)) left_ref.push_back(v);
  std::vector<std::string> left_cand;
  for (const std::string& v : candidate.variables)
    if (!is_used(v)) left_cand.push_back(v);

  while (!left_ref.empty() && !left_cand.empty()) {
    int best_ov = 0;
    PairScore best_score;
    size_t best_ri = 0;
    size_t best_ci = 0;
    bool found = false;
    for (size_t ri = 0; ri < left_ref.size(); ++ri)
      for (size_t ci = 0; ci < left_cand.size(); ++ci) {
        const int ov =
            signature_overlap(reference, left_ref[ri], candidate, left_cand[ci]);
        if (ov == 0) continue;
        PairScore s = pair_score(reference, left_ref[ri], candidate,
                                 left_cand[ci], opts);
        const bool better =
            !found || ov > best_ov || (ov == best_ov && s.bc > best_score.bc) ||
            (ov == best_ov && s.bc == best_score.bc && s.coeff > best_score.coeff) ||
            (ov == best_ov && s.bc == best_score.bc &&
             s.coeff == best_score.coeff && left_cand[ci] < left_cand[best_ci]);
        if (better) {
          found = true;
          best_ov = ov;
          best_score = s;
          best_ri = ri;
          best_ci = ci;
        }
      }
    if (!found) break;
    chosen[left_ref[best_ri]] = left_cand[best_ci];
    left_ref.erase(left_ref.begin() + static_cast<long>(best_ri));
    left_cand.erase(left_cand.begin() + static_cast<long>(best_ci));
  }

  VariableAlignment out;
  for (const std::string& v : reference.variables) {
    auto it = chosen.find(v);
    if (it != chosen.end())
      out.pairs.emplace_back(v, it->second);
    else
      out.unmatched_reference.push_back(v);
  }
  for (const std::string& v : candidate.variables)
    if (!is_used(v)) out.unmatched_candidate.push_back(v);
  return out;
}

// ---------------------------------------------------------------------------
// Checkpoints.

std::string checkpoint_subject(const Checkpoint& cp) {
  return subject_of(cp.kind, cp.variable, cp.op, cp.boundary);
}

std::vector<Checkpoint> generate_checkpoints(const PhysicsContract& reference,
                                             const MappingRegistry& reg) {
  std::vector<Checkpoint> out;
  for (size_t i = 0; i < reference.terms.size(); ++i) {
    const BoundTerm& t = reference.terms[i];
    out.push_back({CheckpointKind::term_missing, t.variable, t.op, {},
                   severity_for(reg, CheckpointKind::term_missing, t.op),
                   static_cast<int>(i)});
    if (t.coefficient)
      out.push_back({CheckpointKind::coefficient, t.variable, t.op, {},
                     severity_for(reg, CheckpointKind::coefficient),
                     static_cast<int>(i)});
  }
  for (size_t i = 0; i < reference.boundary_conditions.size(); ++i) {
    const BoundaryCondition& bc = reference.boundary_conditions[i];
    out.push_back({CheckpointKind::bc_type, bc.variable, std::nullopt, bc.boundary,
                   severity_for(reg, CheckpointKind::bc_type),
                   static_cast<int>(i)});
    out.push_back({CheckpointKind::bc_boundary, bc.variable, std::nullopt,
                   bc.boundary, severity_for(reg, CheckpointKind::bc_boundary),
                   static_cast<int>(i)});
    if (!bc.value.is_absent())
      out.push_back({CheckpointKind::bc_value, bc.variable, std::nullopt,
                     bc.boundary, severity_for(reg, CheckpointKind::bc_value),
                     static_cast<int>(i)});
  }
  for (size_t i = 0; i < reference.initial_conditions.size(); ++i) {
    const InitialCondition& ic = reference.initial_conditions[i];
    out.push_back({CheckpointKind::ic_type, ic.variable, std::nullopt, {},
                   severity_for(reg, CheckpointKind::ic_type),
                   static_cast<int>(i)});
    if (!ic.value.is_absent())
      out.push_back({CheckpointKind::ic_value, ic.variable, std::nullopt, {},
                     severity_for(reg, CheckpointKind::ic_value),
                     static_cast<int>(i)});
  }
  out.push_back({CheckpointKind::time_scheme, "", std::nullopt, {},
                 severity_for(reg, CheckpointKind::time_scheme), -1});
  return out;
}

double score_results(const std::vector<CheckpointResult>& results) {
  double total = 0.0;
  double failed = 0.0;
  for (const CheckpointResult& r : results) {
    total += r.checkpoint.weight;
    if (!r.passed) failed += r.checkpoint.weight;
  }
  if (total <= 0.0) return 1.0;
  return std::clamp(1.0 - failed / total, 0.0, 1.0);
}

// ---------------------------------------------------------------------------
// Violations / fix classes.

std::string_view to_string(FixClass f) {
  switch (f) {
  case FixClass::add_kernel:
    return "add_kernel";
  case FixClass::remove_kernel:
    return "remove_kernel";
  case FixClass::change_bc_type:
    return "change_bc_type";
  case FixClass::set_value:
    return "set_value";
  case FixClass::change_time_scheme:
    return "change_time_scheme";
  }
  return "set_value";
}

FixClass fix_class_for(CheckpointKind kind) {
  switch (kind) {
  case CheckpointKind::term_missing:
    return FixClass::add_kernel;
  case CheckpointKind::term_extra:
    return FixClass::remove_kernel;
  case CheckpointKind::bc_type:
  case CheckpointKind::bc_boundary:
    return FixClass::change_bc_type;
  case CheckpointKind::coefficient:
  case CheckpointKind::bc_value:
  case CheckpointKind::ic_type:
  case CheckpointKind::ic_value:
    return FixClass::set_value;
  case CheckpointKind::time_scheme:
    return FixClass::change_time_scheme;
  }
  return FixClass::set_value;
}

// ---------------------------------------------------------------------------
// Evaluation.

EvalReport evaluate(const PhysicsContract& reference,
                    const PhysicsContract& candidate,
                    const MappingRegistry& reg, const EvalOptions& opts) {
  EvalReport report;
  report.alignment = align_variables(reference, candidate, opts);
  report.unresolved_reference = reference.unresolved;
  report.unresolved_candidate = candidate.unresolved;

  std::map<std::string, std::string> cand_to_ref;
  for (const auto& [r, c] : report.alignment.pairs) cand_to_ref[c] = r;

  auto aligned = [&](const std::string& ref_var) {
    return report.alignment.candidate_for(ref_var);
  };

  for (const Checkpoint& cp : generate_checkpoints(reference, reg)) {
    CheckpointResult res;
    res.checkpoint = cp;
    switch (cp.kind) {
    case CheckpointKind::term_missing: {
      res.expected = "present";
      std::optional<std::string> c = aligned(cp.variable);
      const BoundTerm* ct = c ? candidate.find_term(*c, *cp.op) : nullptr;
      res.passed = ct != nullptr;
      res.found = res.passed ? "present" : "absent";
      break;
    }
    case CheckpointKind::coefficient: {
      const BoundTerm& rt = reference.terms[static_cast<size_t>(cp.ref_index)];
      res.expected = detail::render_number(*rt.coefficient);
      std::optional<std::string> c = aligned(cp.variable);
      const BoundTerm* ct = c ? candidate.find_term(*c, rt.op) : nullptr;
      if (!ct) {
        // No counterpart term: the missing structure is already charged by
        // its term_missing checkpoint; the value audit has nothing to judge.
        res.passed = true;
        res.found = "absent";
      } else {
        const double cv = effective(ct->coefficient);
        res.passed =
            coefficient_match(*rt.coefficient, cv, opts.delta, opts.epsilon0);
        res.found = detail::render_number(cv);
      }
      break;
    }
    case CheckpointKind::bc_type:
    case CheckpointKind::bc_boundary:
    case CheckpointKind::bc_value: {
      const BoundaryCondition& rb =
          reference.boundary_conditions[static_cast<size_t>(cp.ref_index)];
      std::optional<std::string> c = aligned(cp.variable);
      std::vector<const BoundaryCondition*> counterparts;
      if (c)
        for (const BoundaryCondition& cb : candidate.boundary_conditions)
          if (cb.variable == *c && same_boundary(rb, cb))
            counterparts.push_back(&cb);
      if (cp.kind == CheckpointKind::bc_boundary) {
        res.expected = join(rb.boundary, ',');
        res.passed = !counterparts.empty();
        res.found = res.passed ? "present" : "absent";
      } else if (cp.kind == CheckpointKind::bc_type) {
        res.expected = to_string(rb.bc_type);
        const BoundaryCondition* shown = nullptr;
        for (const BoundaryCondition* k : counterparts)
          if (k->bc_type == rb.bc_type) {
            shown = k;
            break;
          }
        res.passed = shown != nullptr;
        if (!shown && !counterparts.empty()) shown = counterparts.front();
        res.found = shown ? std::string(to_string(shown->bc_type)) : "absent";
      } else {
        res.expected = render_scalar(rb.value);
        const BoundaryCondition* shown = nullptr;
        for (const BoundaryCondition* k : counterparts)
          if (value_match(rb.value, k->value, opts)) {
            shown = k;
            break;
          }
        res.passed = shown != nullptr;
        if (!shown && !counterparts.empty()) shown = counterparts.front();
        res.found = shown ? render_scalar(shown->value) : "absent";
      }
      break;
    }
    case CheckpointKind::ic_type:
    case CheckpointKind::ic_value: {
      const InitialCondition& ri =
          reference.initial_conditions[static_cast<size_t>(cp.ref_index)];
      std::optional<std::string> c = aligned(cp.variable);
      std::vector<const InitialCondition*> counterparts;
      if (c)
        for (const InitialCondition& ci : candidate.initial_conditions)
          if (ci.variable == *c) counterparts.push_back(&ci);
      if (cp.kind == CheckpointKind::ic_type) {
        res.expected = to_string(ri.ic_type);
        const InitialCondition* shown = nullptr;
        for (const InitialCondition* k : counterparts)
          if (k->ic_type == ri.ic_type) {
            shown = k;
            break;
          }
        res.passed = shown != nullptr;
        if (!shown && !counterparts.empty()) shown = counterparts.front();
        res.found = shown ? std::string(to_string(shown->ic_type)) : "absent";
      } else {
        res.expected = render_scalar(ri.value);
        const InitialCondition* shown = nullptr;
        for (const InitialCondition* k : counterparts)
          if (value_match(ri.value, k->value, opts)) {
            shown = k;
            break;
          }
        res.passed = shown != nullptr;
        if (!shown && !counterparts.empty()) shown = counterparts.front();
        res.found = shown ? render_scalar(shown->value) : "absent";
      }
      break;
    }
    case CheckpointKind::time_scheme:
      res.expected = to_string(reference.time_scheme);
      res.found = to_string(candidate.time_scheme);
      res.passed = reference.time_scheme == candidate.time_scheme;
      break;
    case CheckpointKind::term_extra:
      break; // never generated from the reference
    }
    report.checkpoints.push_back(std::move(res));
  }

  // Candidate terms with no reference counterpart are surplus physics.
  for (const BoundTerm& ct : candidate.terms) {
    auto rit = cand_to_ref.find(ct.variable);
    const bool covered =
        rit != cand_to_ref.end() && reference.find_term(rit->second, ct.op);
    if (covered) continue;
    CheckpointResult res;
    res.checkpoint = {CheckpointKind::term_extra,
                      rit != cand_to_ref.end() ? rit->second : ct.variable,
                      ct.op,
                      {},
                      severity_for(reg, CheckpointKind::term_extra, ct.op),
                      -1};
    res.passed = false;
    res.expected = "absent";
    res.found = "present";
    report.checkpoints.push_back(std::move(res));
  }

  report.ifs = score_results(report.checkpoints);
  for (const CheckpointResult& res : report.checkpoints) {
    if (res.passed) continue;
    Violation v;
    v.kind = res.checkpoint.kind;
    v.variable = res.checkpoint.variable;
    v.op = res.checkpoint.op;
    v.boundary = res.checkpoint.boundary;
    v.expected = res.expected;
    v.found = res.found;
    v.weight = res.checkpoint.weight;
    v.fix_class = fix_class_for(res.checkpoint.kind);
    report.violations.push_back(std::move(v));
  }
  return report;
}

// ---------------------------------------------------------------------------
// Rendering.

Json report_to_json(const EvalReport& report) {
  Json j;
  j["score"] = report.ifs;
  Json cps = Json::array();
  for (const CheckpointResult& res : report.checkpoints) {
    Json c;
    c["kind"] = std::string(to_string(res.checkpoint.kind));
    c["subject"] = checkpoint_subject(res.checkpoint);
    c["weight"] = res.checkpoint.weight;
    c["passed"] = res.passed;
    cps.push_back(std::move(c));
  }
  j["checkpoints"] = std::move(cps);
  Json vs = Json::array();
  for (const Violation& v : report.violations) {
    Json o;
    o["kind"] = std::string(to_string(v.kind));
    o["variable"] = v.variable;
    if (v.op) o["operator"] = std::string(to_string(*v.op));
    if (!v.boundary.empty()) o["boundary"] = v.boundary;
    o["expected"] = v.expected;
    o["found"] = v.found;
    o["weight"] = v.weight;
    o["fix_class"] = std::string(to_string(v.fix_class));
    vs.push_back(std::move(o));
  }
  j["violations"] = std::move(vs);
  j["unresolved"] =
      Json{{"ref", report.unresolved_reference}, {"cand", report.unresolved_candidate}};
  return j;
}

std::string report_to_text(const EvalReport& report) {
  std::ostringstream out;
  char head[160];
  size_t failed = report.violations.size();
  std::snprintf(head, sizeof head, "IFS %.3f: %zu of %zu checkpoints failed\n",
                report.ifs, failed, report.checkpoints.size());
  out << head;
  for (const Violation& v : report.violations) {
    out << "  [" << to_string(v.kind) << "] "
        << subject_of(v.kind, v.variable, v.op, v.boundary) << ": expected "
        << v.expected << ", found " << v.found << " -> " << to_string(v.fix_class)
        << "\n";
  }
  if (!report.unresolved_reference.empty())
    out << "  unresolved (reference): " << join(report.unresolved_reference, ' ')
        << "\n";
  if (!report.unresolved_candidate.empty())
    out << "  unresolved (candidate): " << join(report.unresolved_candidate, ' ')
        << "\n";
  return out.str();
}

} // namespace pde
