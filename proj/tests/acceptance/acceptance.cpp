// Acceptance suite: end-to-end checks of the verifier's headline guarantees,
// one [PASS]/[FAIL] line per criterion. Exit code = number of failures.
//
//  1. Golden-corpus self-validation scores exactly 1.000 with no violations.
//  2. Reconstruction types every registered kernel and tracks unknown classes.
//  3. Every single mutation of a golden contract lowers the score and is
//     named in the violation report (>= 1000 mutations, zero escapes).
//  4. A perfect score implies an all-pass checkpoint ledger (fuzz corpus).
//  5. Coefficient tolerance boundary values and reference-relative asymmetry.
//  6. Bijective renaming and equivalence-class kernel substitution preserve
//     the score across the corpus.
//  7. The coupled-case regression fixture yields exactly the two expected
//     violations and strictly orders the degraded vs repaired candidates.
//  8. The severity-weighted aggregate matches the worked 7/11 hand example.
//  9. Signed-rank p-values match exhaustive sign enumeration for n <= 12.
// 10. The refinement loop converges under a cooperative scripted endpoint and
//     never regresses under an adversarial one; no network in either case.
// 11. The material side channel catches coefficient drift that the headline
//     score is structurally blind to, and repair restores it.
// 12. Unparseable batch candidates score 0 in batch output.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "pde/bench.hpp"
#include "pde/contract.hpp"
#include "pde/endpoint.hpp"
#include "pde/errors.hpp"
#include "pde/hit.hpp"
#include "pde/ifs.hpp"
#include "pde/kernel_map.hpp"
#include "pde/mcs.hpp"
#include "pde/reconstruct.hpp"
#include "pde/refine.hpp"
#include "pde/stats.hpp"
#include "pde/util.hpp"

#include "../unit/gen.hpp"

namespace {

using namespace pde;
using Clock = std::chrono::steady_clock;

const std::string kDataDir = PDE_DEFAULT_DATA_DIR;

std::string num(double v) {
  std::ostringstream os;
  os.precision(12);
  os << v;
  return os.str();
}

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::string join(const std::vector<std::string>& parts) {
  std::string out;
  for (size_t i = 0; i < parts.size(); ++i) {
    if (i) out += ",";
    out += parts[i];
  }
  return out;
}

// A check either passes (nullopt) or fails with a diagnostic string.
using Verdict = std::optional<std::string>;

#define EXPECT(cond, msg)                                                      \
  do {                                                                         \
    if (!(cond)) return std::string(msg);                                      \
  } while (0)

// ---------------------------------------------------------------------------
// Golden corpus.

struct GoldenCase {
  BenchCase bench;
  hit::InputTree tree;          // parsed reference input
  PhysicsContract reconstructed; // freshly reconstructed from the input text
};

std::vector<GoldenCase> load_corpus(const MappingRegistry& reg) {
  std::vector<BenchCase> cases =
      load_cases_jsonl(read_file(kDataDir + "/golden/cases.jsonl"));
  std::vector<GoldenCase> out;
  out.reserve(cases.size());
  for (BenchCase& c : cases) {
    GoldenCase g;
    g.tree = hit::parse_input(c.reference_input);
    g.reconstructed = reconstruct_contract(g.tree, reg);
    g.bench = std::move(c);
    out.push_back(std::move(g));
  }
  return out;
}

const GoldenCase* find_case(const std::vector<GoldenCase>& corpus,
                            const std::string& id) {
  for (const GoldenCase& g : corpus)
    if (g.bench.id == id) return &g;
  return nullptr;
}

PhysicsContract reconstruct_file(const std::string& path,
                                 const MappingRegistry& reg) {
  return reconstruct_contract(hit::parse_input(read_file(path)), reg);
}

// Bijective variable rename applied to every reference a contract holds.
PhysicsContract rename_contract(const PhysicsContract& c,
                                const std::map<std::string, std::string>& m) {
  PhysicsContract r = c;
  for (std::string& v : r.variables) v = m.at(v);
  for (BoundTerm& t : r.terms) t.variable = m.at(t.variable);
  for (BoundaryCondition& b : r.boundary_conditions) b.variable = m.at(b.variable);
  for (InitialCondition& i : r.initial_conditions) i.variable = m.at(i.variable);
  return r;
}

// Reference variables structurally indistinguishable from `v` (identical term
// signature). Under name-free alignment a violation may legitimately be
// reported against such a twin.
std::set<std::string> signature_twins(const PhysicsContract& c,
                                      const std::string& v) {
  std::set<std::string> out;
  std::vector<OperatorType> sig = term_signature(c, v);
  for (const std::string& w : c.variables)
    if (term_signature(c, w) == sig) out.insert(w);
  return out;
}

// ---------------------------------------------------------------------------
// Criterion 1: self-validation identity over the golden corpus.

Verdict criterion_self_validation(const std::vector<GoldenCase>& corpus,
                                  const MappingRegistry& reg) {
  EXPECT(corpus.size() >= 10,
         "golden corpus has only " + std::to_string(corpus.size()) + " cases");
  Clock::time_point t0 = Clock::now();
  for (const GoldenCase& g : corpus) {
    EvalReport r = evaluate(g.reconstructed, g.reconstructed, reg);
    EXPECT(r.ifs == 1.0,
           g.bench.id + ": self-score " + num(r.ifs) + " != 1.0 exactly");
    EXPECT(r.violations.empty(),
           g.bench.id + ": self-evaluation produced violations");
    // The frozen ground-truth contract must agree with a fresh reconstruction
    // of the same reference input.
    EXPECT(g.bench.gt_contract == g.reconstructed,
           g.bench.id + ": stored contract differs from fresh reconstruction");
    EvalReport rx = evaluate(g.bench.gt_contract, g.reconstructed, reg);
    EXPECT(rx.ifs == 1.0,
           g.bench.id + ": stored-vs-reconstructed score " + num(rx.ifs));
  }
  double secs = seconds_since(t0);
  EXPECT(secs < 5.0, "corpus self-validation took " + num(secs) + "s (>= 5s)");
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Criterion 2: reconstruction soundness over generated inputs.

Verdict criterion_reconstruction_soundness(const MappingRegistry& reg) {
  std::vector<std::string> covered;
  for (const auto& [cls, entry] : reg.kernels) covered.push_back(cls);
  EXPECT(!covered.empty(), "registry lists no kernel classes");

  std::mt19937_64 rng(0x5eed2026u);
  int custom_counter = 0;
  for (int trial = 0; trial < 500; ++trial) {
    int nvars = 1 + int(rng() % 3);
    std::vector<std::string> vars;
    for (int i = 0; i < nvars; ++i) vars.push_back("u" + std::to_string(i));

    std::ostringstream in;
    in << "[Mesh]\n  type = GeneratedMesh\n  dim = 2\n[]\n\n[Variables]\n";
    for (const std::string& v : vars) in << "  [./" << v << "]\n  [../]\n";
    in << "[]\n\n[Kernels]\n";

    std::set<std::pair<std::string, OperatorType>> expected;
    std::set<std::string> customs;
    int nk = 1 + int(rng() % 8);
    for (int i = 0; i < nk; ++i) {
      const std::string& v = vars[rng() % vars.size()];
      std::string cls;
      if (rng() % 10 < 7) {
        cls = covered[rng() % covered.size()];
        expected.insert({v, reg.kernels.at(cls).op});
      } else {
        cls = "CustomOperator" + std::to_string(custom_counter++);
        customs.insert(cls);
      }
      in << "  [./k" << i << "]\n    type = " << cls << "\n    variable = " << v
         << "\n  [../]\n";
    }
    in << "[]\n\n[Executioner]\n  type = Steady\n[]\n";

    PhysicsContract c = reconstruct_contract(hit::parse_input(in.str()), reg);
    std::string tag = "trial " + std::to_string(trial);
    EXPECT(c.terms.size() == expected.size(),
           tag + ": " + std::to_string(c.terms.size()) + " terms, expected " +
               std::to_string(expected.size()) + " after (variable, operator) dedup");
    for (const auto& [v, op] : expected)
      EXPECT(c.find_term(v, op) != nullptr,
             tag + ": missing term " + v + "/" + std::string(to_string(op)));
    EXPECT(c.unresolved.size() == customs.size(),
           tag + ": unresolved count " + std::to_string(c.unresolved.size()) +
               ", expected " + std::to_string(customs.size()));
    for (const std::string& cls : customs)
      EXPECT(std::find(c.unresolved.begin(), c.unresolved.end(), cls) !=
                 c.unresolved.end(),
             tag + ": uncovered class " + cls + " not tracked as unresolved");
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Criterion 3: the mutation battery never escapes and is always named.

struct Mutation {
  PhysicsContract candidate;
  CheckpointKind kind = CheckpointKind::term_missing;
  std::string variable; // "" for time_scheme
  std::optional<OperatorType> op;
  std::vector<std::string> boundary; // reference-side boundary for bc_* kinds
  std::string label;
};

void build_mutations(const GoldenCase& g, std::vector<Mutation>& out) {
  const PhysicsContract& gt = g.reconstructed;
  const std::string& id = g.bench.id;

  // Drop each term.
  for (size_t i = 0; i < gt.terms.size(); ++i) {
    Mutation m;
    m.candidate = gt;
    m.candidate.terms.erase(m.candidate.terms.begin() + long(i));
    m.kind = CheckpointKind::term_missing;
    m.variable = gt.terms[i].variable;
    m.op = gt.terms[i].op;
    m.label = id + ": drop term " + m.variable + "/" +
              std::string(to_string(*m.op));
    out.push_back(std::move(m));
  }

  // Swap each term's operator for every operator the variable does not carry.
  for (size_t i = 0; i < gt.terms.size(); ++i) {
    for (OperatorType alt : all_operators()) {
      if (gt.find_term(gt.terms[i].variable, alt)) continue;
      Mutation m;
      m.candidate = gt;
      m.candidate.terms[i].op = alt;
      m.kind = CheckpointKind::term_missing;
      m.variable = gt.terms[i].variable;
      m.op = gt.terms[i].op;
      m.label = id + ": swap " + m.variable + "/" +
                std::string(to_string(*m.op)) + " -> " +
                std::string(to_string(alt));
      out.push_back(std::move(m));
    }
  }

  // Change each BC's type to every other type.
  static const BcType kAllBcTypes[] = {
      BcType::Dirichlet,      BcType::Neumann,          BcType::Robin,
      BcType::Periodic,       BcType::FluxResidual,     BcType::PorousFlowSink,
      BcType::PorousFlowOutflow};
  for (size_t i = 0; i < gt.boundary_conditions.size(); ++i) {
    const BoundaryCondition& bc = gt.boundary_conditions[i];
    for (BcType alt : kAllBcTypes) {
      if (alt == bc.bc_type) continue;
      Mutation m;
      m.candidate = gt;
      m.candidate.boundary_conditions[i].bc_type = alt;
      m.kind = CheckpointKind::bc_type;
      m.variable = bc.variable;
      m.boundary = bc.boundary;
      m.label = id + ": bc_type " + bc.variable + "@" + join(bc.boundary) +
                " -> " + std::string(to_string(alt));
      out.push_back(std::move(m));
    }
  }

  // Change each BC's boundary set (periodic pairs are order-sensitive, so
  // swapping the pair is already a different boundary identity).
  for (size_t i = 0; i < gt.boundary_conditions.size(); ++i) {
    const BoundaryCondition& bc = gt.boundary_conditions[i];
    std::vector<std::vector<std::string>> variants;
    if (bc.bc_type == BcType::Periodic && bc.boundary.size() == 2)
      variants.push_back({bc.boundary[1], bc.boundary[0]});
    else {
      variants.push_back({"mutated_side"});
      std::vector<std::string> widened = bc.boundary;
      widened.push_back("phantom_side");
      variants.push_back(std::move(widened));
    }
    for (std::vector<std::string>& v : variants) {
      Mutation m;
      m.candidate = gt;
      m.candidate.boundary_conditions[i].boundary = v;
      m.kind = CheckpointKind::bc_boundary;
      m.variable = bc.variable;
      m.boundary = bc.boundary;
      m.label = id + ": bc_boundary " + bc.variable + "@" + join(bc.boundary) +
                " -> " + join(v);
      out.push_back(std::move(m));
    }
  }

  // Shift every numeric BC value beyond the relative tolerance.
  static const double kMults[] = {1.2, 0.8, 1.5, 0.5};
  static const double kOffsets[] = {1.0, -1.0, 0.5, -0.5};
  for (size_t i = 0; i < gt.boundary_conditions.size(); ++i) {
    const BoundaryCondition& bc = gt.boundary_conditions[i];
    if (!bc.value.is_number()) continue;
    for (int k = 0; k < 4; ++k) {
      double shifted = bc.value.number != 0.0 ? bc.value.number * kMults[k]
                                              : kOffsets[k];
      Mutation m;
      m.candidate = gt;
      m.candidate.boundary_conditions[i].value = ScalarOrExpr::of(shifted);
      m.kind = CheckpointKind::bc_value;
      m.variable = bc.variable;
      m.boundary = bc.boundary;
      m.label = id + ": bc_value " + bc.variable + "@" + join(bc.boundary) +
                " " + num(bc.value.number) + " -> " + num(shifted);
      out.push_back(std::move(m));
    }
  }

  // Shift every known term coefficient beyond the relative tolerance.
  for (size_t i = 0; i < gt.terms.size(); ++i) {
    const BoundTerm& t = gt.terms[i];
    if (!t.coefficient) continue;
    for (int k = 0; k < 4; ++k) {
      double shifted = *t.coefficient != 0.0 ? *t.coefficient * kMults[k]
                                             : kOffsets[k];
      Mutation m;
      m.candidate = gt;
      m.candidate.terms[i].coefficient = shifted;
      m.kind = CheckpointKind::coefficient;
      m.variable = t.variable;
      m.op = t.op;
      m.label = id + ": coefficient " + t.variable + "/" +
                std::string(to_string(t.op)) + " " + num(*t.coefficient) +
                " -> " + num(shifted);
      out.push_back(std::move(m));
    }
  }

  // Flip the time scheme.
  {
    Mutation m;
    m.candidate = gt;
    m.candidate.time_scheme = gt.time_scheme == TimeScheme::steady
                                  ? TimeScheme::transient
                                  : TimeScheme::steady;
    m.kind = CheckpointKind::time_scheme;
    m.label = id + ": flip time scheme";
    out.push_back(std::move(m));
  }
}

Verdict criterion_mutation_battery(const std::vector<GoldenCase>& corpus,
                                   const MappingRegistry& reg) {
  Clock::time_point t0 = Clock::now();
  int total = 0;
  for (const GoldenCase& g : corpus) {
    std::vector<Mutation> battery;
    build_mutations(g, battery);
    for (const Mutation& m : battery) {
      ++total;
      EvalReport r = evaluate(g.reconstructed, m.candidate, reg);
      EXPECT(r.ifs < 1.0,
             m.label + ": mutation escaped with score " + num(r.ifs));

      std::set<std::string> twins;
      if (!m.variable.empty()) twins = signature_twins(g.reconstructed, m.variable);
      bool named = false;
      for (const Violation& v : r.violations) {
        if (v.kind != m.kind) continue;
        if (m.kind == CheckpointKind::time_scheme) {
          named = true;
          break;
        }
        if (twins.count(v.variable) == 0) continue;
        if (m.op && (!v.op || *v.op != *m.op)) continue;
        if (!m.boundary.empty() && v.boundary != m.boundary) continue;
        named = true;
        break;
      }
      EXPECT(named, m.label + ": report does not name the mutated subject");
    }
  }
  EXPECT(total >= 1000,
         "battery produced only " + std::to_string(total) + " mutations");
  double secs = seconds_since(t0);
  EXPECT(secs < 60.0, "battery took " + num(secs) + "s (>= 60s)");
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Criterion 4: a perfect score implies an all-pass ledger.

Verdict criterion_perfect_score_ledger(const MappingRegistry& reg) {
  gen::ContractGen g(0xf00d2026u);
  int perfect = 0;
  for (int trial = 0; trial < 300; ++trial) {
    PhysicsContract a = g.contract();
    PhysicsContract b = g.contract();

    std::map<std::string, std::string> ren;
    for (const std::string& v : a.variables) ren[v] = "rn_" + v;

    const PhysicsContract* pairs[3][2] = {{&a, &a}, {&a, &b}, {nullptr, nullptr}};
    PhysicsContract renamed = rename_contract(a, ren);
    pairs[2][0] = &a;
    pairs[2][1] = &renamed;

    for (auto& pr : pairs) {
      EvalReport r = evaluate(*pr[0], *pr[1], reg);
      if (r.ifs == 1.0) {
        ++perfect;
        for (const CheckpointResult& cr : r.checkpoints)
          EXPECT(cr.passed, "trial " + std::to_string(trial) +
                                ": score 1.0 with failed checkpoint " +
                                checkpoint_subject(cr.checkpoint));
        EXPECT(r.violations.empty(),
               "trial " + std::to_string(trial) +
                   ": score 1.0 with a non-empty violation list");
      }
    }
  }
  EXPECT(perfect >= 300, "only " + std::to_string(perfect) +
                             " perfect-score pairs observed; fuzz corpus too weak");
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Criterion 5: coefficient tolerance boundary and asymmetry.

Verdict criterion_tolerance_boundary(const MappingRegistry&) {
  EXPECT(EvalOptions{}.delta == 0.1, "default relative tolerance is not 0.1");
  EXPECT(coefficient_match(1.0, 1.10), "(1.0, 1.10) must match at delta 0.1");
  EXPECT(!coefficient_match(1.0, 1.11), "(1.0, 1.11) must fail at delta 0.1");
  EXPECT(coefficient_match(10.0, 10.9), "(10.0, 10.9) must match (rel 0.090)");
  EXPECT(coefficient_match(10.9, 10.0), "(10.9, 10.0) must match (rel 0.083)");
  // Constructed pair where exactly one direction exceeds the tolerance:
  // |1.0 - 0.905| / 1.0 = 0.095 <= 0.1, but |0.905 - 1.0| / 0.905 = 0.105.
  EXPECT(coefficient_match(1.0, 0.905), "(1.0, 0.905) must match (rel 0.095)");
  EXPECT(!coefficient_match(0.905, 1.0),
         "(0.905, 1.0) must fail (rel 0.105) - asymmetry not observed");
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Criterion 6: rename + kernel-variant invariance.

// A registered kernel class may be swapped for an equivalence-class sibling
// when the swap provably reads the same coefficient: either the coefficient
// rules are identical, or both resolve through the same default material
// property and the block overrides neither rule's parameter.
bool substitutable(const KernelMappingEntry& from, const KernelMappingEntry& to,
                   const hit::Block& block) {
  if (from.coefficient == to.coefficient) return true;
  using Kind = CoefficientRule::Kind;
  if (from.coefficient.kind == Kind::FromMaterial &&
      to.coefficient.kind == Kind::FromMaterial &&
      from.coefficient.default_property == to.coefficient.default_property)
    return !block.find_param(from.coefficient.param) &&
           !block.find_param(to.coefficient.param);
  return false;
}

Verdict criterion_invariance(const std::vector<GoldenCase>& corpus,
                             const MappingRegistry& reg) {
  // (a) Bijective, order-scrambling variable rename at the contract level.
  for (const GoldenCase& g : corpus) {
    const PhysicsContract& gt = g.reconstructed;
    std::map<std::string, std::string> ren;
    size_t n = gt.variables.size();
    for (size_t i = 0; i < n; ++i)
      ren[gt.variables[i]] = "w" + std::to_string(n - 1 - i) + "_" + gt.variables[i];
    EvalReport r = evaluate(gt, rename_contract(gt, ren), reg);
    EXPECT(r.ifs == 1.0,
           g.bench.id + ": rename changed the score to " + num(r.ifs));
    EXPECT(r.violations.empty(), g.bench.id + ": rename produced violations");
  }

  // (b) Kernel-variant substitution at the input-file level, one block at a
  // time: mutate the class name in the tree, serialize, reparse, reconstruct.
  int substitutions = 0;
  for (const GoldenCase& g : corpus) {
    for (size_t ri = 0; ri < g.tree.roots.size(); ++ri) {
      if (g.tree.roots[ri].name != "Kernels") continue;
      for (size_t ci = 0; ci < g.tree.roots[ri].children.size(); ++ci) {
        const hit::Block& block = g.tree.roots[ri].children[ci];
        const KernelMappingEntry* from = reg.lookup_kernel(block.block_type);
        if (!from) continue;
        for (const KernelMappingEntry* to :
             reg.equivalence_members(from->equivalence_class)) {
          if (to->kernel_class == from->kernel_class) continue;
          if (!substitutable(*from, *to, block)) continue;

          hit::InputTree mutated = g.tree;
          for (hit::Param& p : mutated.roots[ri].children[ci].params)
            if (p.key == "type") {
              p.value.kind = hit::ParamValue::Kind::Identifier;
              p.value.raw = to->kernel_class;
              p.value.tokens = {hit::ParamToken{to->kernel_class, std::nullopt}};
            }
          mutated.roots[ri].children[ci].block_type = to->kernel_class;

          PhysicsContract sub = reconstruct_contract(
              hit::parse_input(hit::serialize(mutated)), reg);
          EvalReport r = evaluate(g.reconstructed, sub, reg);
          EXPECT(r.ifs == 1.0, g.bench.id + ": substituting " +
                                   from->kernel_class + " -> " + to->kernel_class +
                                   " changed the score to " + num(r.ifs));
          EXPECT(r.violations.empty(),
                 g.bench.id + ": substituting " + from->kernel_class + " -> " +
                     to->kernel_class + " produced violations");
          ++substitutions;
        }
      }
    }
  }
  EXPECT(substitutions >= 8,
         "only " + std::to_string(substitutions) +
             " eligible kernel substitutions found across the corpus");
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Criterion 7: coupled-case regression fixture.

Verdict criterion_regression_fixture(const std::vector<GoldenCase>& corpus,
                                     const MappingRegistry& reg) {
  const GoldenCase* fw = find_case(corpus, "framework_009");
  EXPECT(fw != nullptr, "framework_009 missing from the golden corpus");

  PhysicsContract direct = reconstruct_file(
      kDataDir + "/golden/fixtures/framework_009_direct.i", reg);
  PhysicsContract fixed = reconstruct_file(
      kDataDir + "/golden/fixtures/framework_009_fixed.i", reg);

  EvalReport rd = evaluate(fw->reconstructed, direct, reg);
  EXPECT(rd.violations.size() == 2,
         "expected exactly 2 violations, got " +
             std::to_string(rd.violations.size()));
  bool has_missing_coupling = false;
  bool has_bc_type = false;
  for (const Violation& v : rd.violations) {
    if (v.kind == CheckpointKind::term_missing && v.variable == "u" && v.op &&
        *v.op == OperatorType::coupled_force)
      has_missing_coupling = true;
    else if (v.kind == CheckpointKind::bc_type && v.variable == "u" &&
             v.boundary == std::vector<std::string>{"right"})
      has_bc_type = true;
  }
  EXPECT(has_missing_coupling,
         "missing-coupling violation term_missing(u, coupled_force) not reported");
  EXPECT(has_bc_type, "bc_type(u, right) violation not reported");

  EvalReport rf = evaluate(fw->reconstructed, fixed, reg);
  EXPECT(rd.ifs < rf.ifs, "degraded candidate (" + num(rd.ifs) +
                              ") does not score strictly below the repaired one (" +
                              num(rf.ifs) + ")");
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Criterion 8: worked severity-weighted aggregate.

Verdict criterion_worked_example(const MappingRegistry&) {
  auto mk = [](CheckpointKind k, double w, bool passed) {
    CheckpointResult r;
    r.checkpoint.kind = k;
    r.checkpoint.weight = w;
    r.passed = passed;
    return r;
  };
  std::vector<CheckpointResult> ledger = {
      mk(CheckpointKind::term_missing, 4.0, false),
      mk(CheckpointKind::term_missing, 3.0, true),
      mk(CheckpointKind::bc_type, 2.0, true),
      mk(CheckpointKind::bc_boundary, 2.0, true),
  };
  double s = score_results(ledger);
  EXPECT(std::fabs(s - 7.0 / 11.0) <= 1e-12,
         "weights {4,3,2,2} with the 4.0 failed scored " + num(s) +
             ", expected 7/11");
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Criterion 9: signed-rank test vs exhaustive sign enumeration.

Verdict criterion_wilcoxon_oracle(const MappingRegistry&) {
  std::mt19937_64 rng(0xabcd2026u);
  for (int trial = 0; trial < 100; ++trial) {
    int n = 1 + int(rng() % 12);
    std::vector<double> deltas(static_cast<size_t>(n), 0.0);
    bool all_zero = true;
    do {
      all_zero = true;
      for (double& d : deltas) {
        d = (double(int(rng() % 9)) - 4.0) * 0.25; // lattice incl. zeros/ties
        if (d != 0.0) all_zero = false;
      }
    } while (all_zero);

    WilcoxonResult got = wilcoxon_signed_rank(deltas);

    // Independent oracle: drop zeros, average-rank the magnitudes, then
    // enumerate all 2^m sign assignments of the ranks.
    std::vector<double> nz;
    for (double d : deltas)
      if (d != 0.0) nz.push_back(d);
    size_t m = nz.size();
    std::vector<size_t> order(m);
    for (size_t i = 0; i < m; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
      return std::fabs(nz[a]) < std::fabs(nz[b]);
    });
    std::vector<double> rank(m, 0.0);
    for (size_t i = 0; i < m;) {
      size_t j = i;
      while (j < m && std::fabs(nz[order[j]]) == std::fabs(nz[order[i]])) ++j;
      double avg = (double(i + 1) + double(j)) / 2.0; // 1-based average rank
      for (size_t k = i; k < j; ++k) rank[order[k]] = avg;
      i = j;
    }
    double w_plus = 0.0;
    double total = 0.0;
    for (size_t i = 0; i < m; ++i) {
      total += rank[i];
      if (nz[i] > 0.0) w_plus += rank[i];
    }
    double mid = total / 2.0;
    double dev = std::fabs(w_plus - mid);
    uint64_t masks = uint64_t(1) << m;
    uint64_t tail = 0;
    for (uint64_t mask = 0; mask < masks; ++mask) {
      double wp = 0.0;
      for (size_t i = 0; i < m; ++i)
        if (mask & (uint64_t(1) << i)) wp += rank[i];
      if (std::fabs(wp - mid) >= dev - 1e-9) ++tail;
    }
    double p = std::min(1.0, double(tail) / double(masks));
    double w = std::min(w_plus, total - w_plus);

    std::string tag = "trial " + std::to_string(trial) + " (n_eff " +
                      std::to_string(m) + ")";
    EXPECT(got.exact, tag + ": expected the exact distribution path");
    EXPECT(got.n_effective == int(m),
           tag + ": n_effective " + std::to_string(got.n_effective));
    EXPECT(std::fabs(got.w - w) <= 1e-12,
           tag + ": W " + num(got.w) + " vs oracle " + num(w));
    EXPECT(std::fabs(got.p_value - p) <= 1e-12,
           tag + ": p " + num(got.p_value) + " vs oracle " + num(p));
  }

  try {
    wilcoxon_signed_rank({0.0, 0.0, 0.0});
    return std::string("all-zero sample was not rejected");
  } catch (const DegenerateSample&) {
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Criterion 10: refinement-loop contract (scripted endpoints, no network).

const char* kLoopGood = R"([Mesh]
  type = GeneratedMesh
  dim = 1
[]

[Variables]
  [./u]
  [../]
[]

[Kernels]
  [./diff]
    type = Diffusion
    variable = u
  [../]
  [./dt]
    type = TimeDerivative
    variable = u
  [../]
[]

[BCs]
  [./left]
    type = DirichletBC
    variable = u
    boundary = left
    value = 1.0
  [../]
[]

[Executioner]
  type = Transient
[]
)";

const char* kLoopHalf = R"([Mesh]
  type = GeneratedMesh
  dim = 1
[]

[Variables]
  [./u]
  [../]
[]

[Kernels]
  [./diff]
    type = Diffusion
    variable = u
  [../]
[]

[BCs]
  [./left]
    type = DirichletBC
    variable = u
    boundary = left
    value = 1.0
  [../]
[]

[Executioner]
  type = Steady
[]
)";

const char* kLoopWorse = R"([Mesh]
  type = GeneratedMesh
  dim = 1
[]

[Variables]
  [./u]
  [../]
[]

[Kernels]
  [./diff]
    type = Diffusion
    variable = u
  [../]
[]

[BCs]
  [./left]
    type = DirichletBC
    variable = u
    boundary = left
    value = 2.0
  [../]
[]

[Executioner]
  type = Steady
[]
)";

Verdict criterion_refinement_loop(const MappingRegistry& reg) {
  PhysicsContract spec;
  spec.variables = {"u"};
  BoundTerm diff;
  diff.variable = "u";
  diff.op = OperatorType::diffusion;
  spec.add_term(diff);
  BoundTerm dt;
  dt.variable = "u";
  dt.op = OperatorType::time_derivative;
  spec.add_term(dt);
  BoundaryCondition bc;
  bc.variable = "u";
  bc.boundary = {"left"};
  bc.bc_type = BcType::Dirichlet;
  bc.value = ScalarOrExpr::of(1.0);
  spec.boundary_conditions.push_back(bc);
  spec.time_scheme = TimeScheme::transient;
  std::string contract_json = save_contract(spec);

  PipelineOptions opts;
  opts.preset = Preset::pde_refine;
  opts.max_refinements = 2;
  opts.tau_ifs = 0.85;

  const std::string description =
      "Solve a transient diffusion problem for u on a 1D bar with a fixed "
      "value of 1.0 on the left boundary.";

  // Cooperative endpoint: the first revision repairs both defects.
  {
    ScriptedEndpoint ep({contract_json, kLoopHalf, kLoopGood});
    PipelineTrace tr = run_pipeline(description, ep, reg, opts);
    EXPECT(!tr.error, "cooperative run errored: " + *tr.error);
    EXPECT(tr.final_ifs.has_value(), "cooperative run has no final score");
    EXPECT(*tr.final_ifs >= 0.85,
           "cooperative run stopped below threshold: " + num(*tr.final_ifs));
    EXPECT(int(tr.steps.size()) - 1 <= opts.max_refinements,
           "cooperative run used " + std::to_string(tr.steps.size() - 1) +
               " refinements (budget 2)");
    EXPECT(tr.steps.size() == 2,
           "expected initial + 1 refinement, got " +
               std::to_string(tr.steps.size()) + " steps");
    EXPECT(tr.accepted == std::vector<int>{1},
           "regression guard did not accept exactly iteration 1");
    EXPECT(tr.final_code == trim(kLoopGood),
           "final code is not the repaired candidate");
    EXPECT(tr.endpoint_calls == 3,
           "expected 3 endpoint calls, got " + std::to_string(tr.endpoint_calls));
  }

  // Adversarial endpoint: every revision is worse or unparseable; the guard
  // must hold the initial candidate and accept nothing.
  {
    ScriptedEndpoint ep({contract_json, kLoopHalf, kLoopWorse, "[unterminated"});
    PipelineTrace tr = run_pipeline(description, ep, reg, opts);
    EXPECT(!tr.error, "adversarial run errored: " + *tr.error);
    EXPECT(tr.final_code == trim(kLoopHalf),
           "adversarial run did not return the initial candidate");
    EXPECT(tr.accepted.empty(),
           "adversarial run accepted " + std::to_string(tr.accepted.size()) +
               " revisions");
    EXPECT(tr.final_ifs.has_value() && std::fabs(*tr.final_ifs - 0.5) <= 1e-12,
           "adversarial final score is not the initial candidate's 0.5");
    EXPECT(int(tr.steps.size()) - 1 <= opts.max_refinements,
           "adversarial run exceeded the refinement budget");
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Criterion 11: the material side channel and its repair.

Verdict criterion_material_side_channel(const std::vector<GoldenCase>& corpus,
                                        const MappingRegistry& reg) {
  int defined = 0;
  for (const GoldenCase& g : corpus) {
    std::vector<MaterialFact> facts = extract_facts(g.tree, reg);
    McsResult self = mcs_score(facts, facts);
    if (facts.empty()) {
      EXPECT(!self.score.has_value(),
             g.bench.id + ": fact-free case has a defined side-channel score");
      continue;
    }
    ++defined;
    EXPECT(self.score.has_value() && *self.score == 1.0,
           g.bench.id + ": self side-channel score is not 1.0");
    EXPECT(self.mismatches.empty(), g.bench.id + ": self-comparison mismatches");
  }
  EXPECT(defined >= 10, "only " + std::to_string(defined) +
                            " fact-bearing cases in the corpus");

  const GoldenCase* base = find_case(corpus, "steady_heat_003");
  EXPECT(base != nullptr, "steady_heat_003 missing from the golden corpus");
  PhysicsContract bad = reconstruct_file(
      kDataDir + "/golden/fixtures/steady_heat_003_badk.i", reg);
  PhysicsContract repaired = reconstruct_file(
      kDataDir + "/golden/fixtures/steady_heat_003_repaired.i", reg);

  // The conductivity sits behind a material the operator structure never
  // prices, so a 10x drift must leave the headline score at 1.0...
  EvalReport rb = evaluate(base->reconstructed, bad, reg);
  EXPECT(rb.ifs == 1.0, "headline score moved to " + num(rb.ifs) +
                            " on a material-value drift it cannot see");
  // ...while the side channel flags it.
  McsResult mb = mcs_score(base->reconstructed.coeff_facts, bad.coeff_facts);
  EXPECT(mb.score.has_value() && *mb.score < 1.0,
         "side channel missed the 3.0 -> 0.3 conductivity drift");
  EXPECT(!mb.mismatches.empty(), "side channel reported no mismatching key");

  // Repairing the value restores the side channel with the headline unchanged.
  EvalReport rr = evaluate(base->reconstructed, repaired, reg);
  McsResult mr = mcs_score(base->reconstructed.coeff_facts, repaired.coeff_facts);
  EXPECT(rr.ifs == 1.0, "repair changed the headline score to " + num(rr.ifs));
  EXPECT(mr.score.has_value() && *mr.score == 1.0,
         "repair did not restore the side-channel score to 1.0");
  EXPECT(mr.mismatches.empty(), "repair left side-channel mismatches behind");
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Criterion 12: parse-failure convention in batch output.

Verdict criterion_parse_failure_convention(const std::vector<GoldenCase>& corpus,
                                           const MappingRegistry& reg) {
  EXPECT(corpus.size() >= 2, "need at least two corpus cases");
  std::vector<BenchCase> cases = {corpus[0].bench, corpus[1].bench};
  std::vector<std::string> candidates = {corpus[0].bench.reference_input,
                                         "[Kernels\n  broken = \n"};
  std::vector<CaseResult> rs = score_batch(cases, candidates, reg);
  EXPECT(rs.size() == 2, "batch returned " + std::to_string(rs.size()) + " rows");
  EXPECT(!rs[0].parse_failed && rs[0].ifs == 1.0,
         "faithful candidate did not score 1.0");
  EXPECT(rs[1].parse_failed, "unparseable candidate not flagged");
  EXPECT(rs[1].ifs == 0.0,
         "unparseable candidate scored " + num(rs[1].ifs) + ", expected 0");
  Json row = result_to_json(rs[1]);
  EXPECT(row.at("ifs").get<double>() == 0.0,
         "batch output row carries a nonzero score for a parse failure");
  EXPECT(row.at("parse_failed").get<bool>(),
         "batch output row does not flag the parse failure");
  return std::nullopt;
}

} // namespace

// ---------------------------------------------------------------------------

int main() {
  MappingRegistry reg;
  std::vector<GoldenCase> corpus;
  try {
    reg = load_registry_file(kDataDir + "/kernel_map.json");
    corpus = load_corpus(reg);
  } catch (const std::exception& e) {
    std::cerr << "[FAIL] 0. load registry + golden corpus - " << e.what() << "\n";
    return 12;
  }

  struct Criterion {
    std::string name;
    std::function<Verdict()> check;
  };
  const std::vector<Criterion> criteria = {
      {"golden corpus self-validation scores exactly 1.000 with no violations",
       [&] { return criterion_self_validation(corpus, reg); }},
      {"reconstruction types covered kernels and tracks uncovered classes",
       [&] { return criterion_reconstruction_soundness(reg); }},
      {"every single mutation lowers the score and is named in the report",
       [&] { return criterion_mutation_battery(corpus, reg); }},
      {"a perfect score implies an all-pass checkpoint ledger",
       [&] { return criterion_perfect_score_ledger(reg); }},
      {"coefficient tolerance boundary and reference-relative asymmetry",
       [&] { return criterion_tolerance_boundary(reg); }},
      {"variable renaming and kernel-variant substitution preserve the score",
       [&] { return criterion_invariance(corpus, reg); }},
      {"coupled regression fixture yields exactly the two expected violations",
       [&] { return criterion_regression_fixture(corpus, reg); }},
      {"severity-weighted aggregation matches the worked 7/11 example",
       [&] { return criterion_worked_example(reg); }},
      {"signed-rank p-values match exhaustive sign enumeration (n <= 12)",
       [&] { return criterion_wilcoxon_oracle(reg); }},
      {"refinement loop converges cooperatively, never regresses adversarially",
       [&] { return criterion_refinement_loop(reg); }},
      {"material side channel catches drift the headline score cannot see",
       [&] { return criterion_material_side_channel(corpus, reg); }},
      {"unparseable batch candidates score 0",
       [&] { return criterion_parse_failure_convention(corpus, reg); }},
  };

  int failures = 0;
  for (size_t i = 0; i < criteria.size(); ++i) {
    Verdict verdict;
    try {
      verdict = criteria[i].check();
    } catch (const std::exception& e) {
      verdict = std::string("unexpected exception: ") + e.what();
    }
    if (!verdict) {
      std::cout << "[PASS] " << (i + 1) << ". " << criteria[i].name << "\n";
    } else {
      ++failures;
      std::cerr << "[FAIL] " << (i + 1) << ". " << criteria[i].name << " - "
                << *verdict << "\n";
    }
  }
  if (failures == 0)
    std::cout << "all " << criteria.size() << " acceptance criteria passed\n";
  else
    std::cerr << failures << " of " << criteria.size()
              << " acceptance criteria failed\n";
  return failures;
}
