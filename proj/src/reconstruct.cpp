#include "pde/reconstruct.hpp"

#include <algorithm>
#include <string>
#include <vector>

#include "pde/mcs.hpp"

#include "input_common.hpp"

namespace pde {

namespace {

void declare_variable(PhysicsContract& c, const std::string& name) {
  if (!c.has_variable(name)) c.variables.push_back(name);
}

void reference_variable(PhysicsContract& c, const std::string& name,
                        const char* where, int line) {
  if (name.empty() || c.has_variable(name)) return;
  c.variables.push_back(name);
  c.diagnostics.push_back(std::string(where) + " at line " +
                          std::to_string(line) + " references undeclared variable '" +
                          name + "'");
}

Coefficient resolve_coefficient(const hit::InputTree& tree,
                                const hit::Block& block,
                                const CoefficientRule& rule) {
  switch (rule.kind) {
  case CoefficientRule::Kind::None:
    return std::nullopt;
  case CoefficientRule::Kind::FromParam: {
    const hit::Param* p = block.find_param(rule.param);
    if (p && p->value.kind == hit::ParamValue::Kind::Number)
      return p->value.number;
    return std::nullopt;
  }
  case CoefficientRule::Kind::FromMaterial: {
    const hit::Param* p = block.find_param(rule.param);
    if (p && p->value.kind == hit::ParamValue::Kind::Number)
      return p->value.number;
    std::string property = rule.default_property;
    if (p && !p->value.raw.empty()) property = p->value.raw;
    if (property.empty()) return std::nullopt;
    if (std::optional<double> v = detail::lookup_constant_property(tree, property))
      return *v;
    return std::nullopt; // deeper chains stay symbolic
  }
  }
  return std::nullopt;
}

ScalarOrExpr value_from_rule(const hit::Block& block, const ValueRule& rule) {
  if (rule.kind != ValueRule::Kind::FromParam) return ScalarOrExpr::absent();
  const hit::Param* p = block.find_param(rule.param);
  if (!p) return ScalarOrExpr::absent();
  if (p->value.kind == hit::ParamValue::Kind::Number)
    return ScalarOrExpr::of(p->value.number);
  return ScalarOrExpr::of(normalize_expr(p->value.raw));
}

std::vector<std::string> boundary_tokens(const hit::Block& block) {
  std::vector<std::string> out;
  if (const hit::Param* p = block.find_param("boundary"))
    for (const hit::ParamToken& t : p->value.words()) out.push_back(t.text);
  return out;
}

void read_mesh(PhysicsContract& c, const hit::InputTree& tree) {
  const hit::Block* mesh = detail::find_root(tree, "Mesh");
  if (!mesh) return;
  if (std::optional<double> dim = mesh->param_number("dim")) {
    int d = static_cast<int>(*dim);
    if (d < 1 || d > 3) {
      c.diagnostics.push_back("mesh dimension " + std::to_string(d) +
                              " out of range, clamped");
      d = std::clamp(d, 1, 3);
    }
    c.domain.dimensions = d;
  }
  std::string summary = mesh->block_type;
  if (summary.empty() && !mesh->children.empty())
    summary = mesh->children.front().block_type;
  for (const char* key : {"dim", "nx", "ny", "nz"})
    if (std::optional<double> v = mesh->param_number(key)) {
      if (!summary.empty()) summary += ' ';
      summary += std::string(key) + "=" + detail::render_number(*v);
    }
  c.domain.mesh_summary = summary;
}

void read_kernels(PhysicsContract& c, const hit::InputTree& tree,
                  const MappingRegistry& reg) {
  for (const hit::Block* k : detail::active_children(tree, "Kernels")) {
    if (k->block_type.empty()) {
      c.diagnostics.push_back("kernel block '" + k->name + "' has no type");
      continue;
    }
    const KernelMappingEntry* entry = reg.lookup_kernel(k->block_type);
    if (!entry) {
      c.note_unresolved(k->block_type);
      continue;
    }
    BoundTerm term;
    term.variable = k->param_string("variable").value_or("");
    if (term.variable.empty()) {
      c.diagnostics.push_back("kernel block '" + k->name + "' names no variable");
      continue;
    }
    reference_variable(c, term.variable, "kernel", k->span.first_line);
    term.op = entry->op;
    term.coefficient = resolve_coefficient(tree, *k, entry->coefficient);
    term.source_line = k->span.first_line;
    c.add_term(std::move(term)); // duplicate (variable, op) -> diagnostic
  }
}

void read_periodic(PhysicsContract& c, const hit::Block& container) {
  for (const hit::Block& sub : container.children) {
    BoundaryCondition bc;
    bc.variable = sub.param_string("variable").value_or("");
    reference_variable(c, bc.variable, "periodic bc", sub.span.first_line);
    std::optional<std::string> primary = sub.param_string("primary");
    std::optional<std::string> secondary = sub.param_string("secondary");
    if (bc.variable.empty() || !primary || !secondary) {
      c.diagnostics.push_back("periodic block '" + sub.name +
                              "' lacks variable/primary/secondary");
      continue;
    }
    bc.boundary = {*primary, *secondary}; // ordered pair
    bc.bc_type = BcType::Periodic;
    bc.source_line = sub.span.first_line;
    c.boundary_conditions.push_back(std::move(bc));
  }
}

void read_bcs(PhysicsContract& c, const hit::InputTree& tree,
              const MappingRegistry& reg) {
  for (const hit::Block* b : detail::active_children(tree, "BCs")) {
    if (b->name == "Periodic") {
      read_periodic(c, *b);
      continue;
    }
    if (b->block_type.empty()) {
      c.diagnostics.push_back("bc block '" + b->name + "' has no type");
      continue;
    }
    const BcMappingEntry* entry = reg.lookup_bc(b->block_type);
    if (!entry) {
      c.note_unresolved(b->block_type);
      continue;
    }
    BoundaryCondition bc;
    bc.variable = b->param_string("variable").value_or("");
    if (bc.variable.empty()) {
      c.diagnostics.push_back("bc block '" + b->name + "' names no variable");
      continue;
    }
    reference_variable(c, bc.variable, "bc", b->span.first_line);
    bc.boundary = boundary_tokens(*b);
    bc.bc_type = entry->bc_type;
    bc.value = value_from_rule(*b, entry->value);
    bc.source_line = b->span.first_line;
    c.boundary_conditions.push_back(std::move(bc));
  }
}

bool has_ic_for(const PhysicsContract& c, const std::string& variable) {
  for (const InitialCondition& ic : c.initial_conditions)
    if (ic.variable == variable) return true;
  return false;
}

void read_ics(PhysicsContract& c, const hit::InputTree& tree,
              const MappingRegistry& reg) {
  for (const hit::Block* ic : detail::active_children(tree, "ICs")) {
    if (ic->block_type.empty()) {
      c.diagnostics.push_back("ic block '" + ic->name + "' has no type");
      continue;
    }
    const IcMappingEntry* entry = reg.lookup_ic(ic->block_type);
    if (!entry) {
      c.note_unresolved(ic->block_type);
      continue;
    }
    InitialCondition out;
    out.variable = ic->param_string("variable").value_or("");
    if (out.variable.empty()) {
      c.diagnostics.push_back("ic block '" + ic->name + "' names no variable");
      continue;
    }
    reference_variable(c, out.variable, "ic", ic->span.first_line);
    out.ic_type = entry->ic_type;
    out.value = value_from_rule(*ic, entry->value);
    if (out.ic_type == IcType::constant && !out.value.is_absent() &&
        !out.value.is_number()) {
      c.diagnostics.push_back("ic block '" + ic->name +
                              "' has a non-numeric constant value; skipped");
      continue;
    }
    out.source_line = ic->span.first_line;
    c.initial_conditions.push_back(std::move(out));
  }

  // `initial_condition =` shorthand on variable declarations.
  for (const hit::Block* v : detail::active_children(tree, "Variables")) {
    const hit::Param* p = v->find_param("initial_condition");
    if (!p) continue;
    if (has_ic_for(c, v->name)) {
      c.diagnostics.push_back("variable '" + v->name +
                              "' has both an ic block and an initial_condition "
                              "parameter; keeping the block");
      continue;
    }
    if (p->value.kind != hit::ParamValue::Kind::Number) {
      c.diagnostics.push_back("variable '" + v->name +
                              "' has a non-numeric initial_condition; skipped");
      continue;
    }
    InitialCondition out;
    out.variable = v->name;
    out.ic_type = IcType::constant;
    out.value = ScalarOrExpr::of(p->value.number);
    out.source_line = p->line;
    c.initial_conditions.push_back(std::move(out));
  }
}

} // namespace

PhysicsContract reconstruct_contract(const hit::InputTree& tree,
                                     const MappingRegistry& reg) {
  PhysicsContract c;

  if (const hit::Block* ex = detail::find_root(tree, "Executioner"))
    c.time_scheme = ex->block_type == "Transient" ? TimeScheme::transient
                                                  : TimeScheme::steady;

  read_mesh(c, tree);

  for (const hit::Block* v : detail::active_children(tree, "Variables"))
    declare_variable(c, v->name);
  for (const hit::Block* v : detail::active_children(tree, "AuxVariables"))
    declare_variable(c, v->name);

  read_kernels(c, tree, reg);
  read_bcs(c, tree, reg);
  read_ics(c, tree, reg);

  c.coeff_facts = extract_facts(tree, reg);
  return c;
}

} // namespace pde
