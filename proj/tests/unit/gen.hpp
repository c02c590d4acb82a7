#pragma once

// Random contract generator used by round-trip and scoring property tests.

#include <random>
#include <string>

#include "pde/contract.hpp"

namespace gen {

struct ContractGen {
  std::mt19937_64 rng;
  explicit ContractGen(uint64_t seed) : rng(seed) {}

  int pick(int lo, int hi) { return int(rng() % uint64_t(hi - lo + 1)) + lo; }
  double num() { return double(pick(-4000, 4000)) / 16.0; }

  pde::PhysicsContract contract() {
    using namespace pde;
    PhysicsContract c;
    int nvars = pick(1, 3);
    for (int i = 0; i < nvars; ++i) c.variables.push_back("var" + std::to_string(i));

    const auto& ops = all_operators();
    for (const std::string& v : c.variables) {
      int nterms = pick(0, 4);
      for (int i = 0; i < nterms; ++i) {
        BoundTerm t;
        t.variable = v;
        t.op = ops[size_t(pick(0, int(ops.size()) - 1))];
        if (pick(0, 1)) t.coefficient = num();
        c.add_term(std::move(t)); // duplicates silently kept-first
      }
      c.diagnostics.clear();
    }

    static const char* sides[] = {"left", "right", "top", "bottom"};
    int nbcs = pick(0, 3);
    for (int i = 0; i < nbcs; ++i) {
      BoundaryCondition bc;
      bc.variable = c.variables[size_t(pick(0, nvars - 1))];
      bc.boundary = {sides[pick(0, 3)]};
      if (pick(0, 3) == 0) bc.boundary.push_back("extra_side");
      bc.bc_type = BcType(pick(0, 2)); // Dirichlet / Neumann / Robin
      switch (pick(0, 2)) {
        case 0: bc.value = ScalarOrExpr::of(num()); break;
        case 1: bc.value = ScalarOrExpr::of(std::string("t*x + 1")); break;
        default: bc.value = ScalarOrExpr::absent(); break;
      }
      c.boundary_conditions.push_back(std::move(bc));
    }

    int nics = pick(0, nvars);
    for (int i = 0; i < nics; ++i) {
      InitialCondition ic;
      ic.variable = c.variables[size_t(i)];
      if (pick(0, 1)) {
        ic.ic_type = IcType::constant;
        ic.value = ScalarOrExpr::of(num());
      } else {
        ic.ic_type = IcType::function;
        ic.value = ScalarOrExpr::of(std::string("sin(x)"));
      }
      c.initial_conditions.push_back(std::move(ic));
    }

    int nfacts = pick(0, 3);
    for (int i = 0; i < nfacts; ++i) {
      MaterialFact f;
      f.key = "prop_" + std::to_string(i);
      f.value = pick(0, 1) ? FactValue::of(num()) : FactValue::of(std::string("steel"));
      f.origin = FactOrigin(pick(0, 3));
      c.coeff_facts.push_back(std::move(f));
    }

    c.time_scheme = pick(0, 1) ? TimeScheme::transient : TimeScheme::steady;
    c.domain.dimensions = pick(1, 3);
    if (pick(0, 1)) c.domain.mesh_summary = "GeneratedMesh dim=" + std::to_string(c.domain.dimensions);
    if (pick(0, 3) == 0) c.unresolved.push_back("MysteryKernel" + std::to_string(pick(0, 9)));
    if (pick(0, 3) == 0) c.extra["note"] = "generated";
    return c;
  }
};

} // namespace gen
