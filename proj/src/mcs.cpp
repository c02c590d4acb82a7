#include "pde/mcs.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "pde/ifs.hpp"

#include "input_common.hpp"

namespace pde {

namespace {

std::string render_fact_value(const FactValue& v) {
  return v.kind == FactValue::Kind::Number ? detail::render_number(v.number)
                                           : v.text;
}

// Parameters that steer the solver rather than the physics; never facts.
bool structural_param(std::string_view key) {
  return key == "type" || key == "block" || key == "boundary" ||
         key == "variable" || key == "active" || key == "displacements";
}

void add_fact(std::vector<MaterialFact>& out, MaterialFact fact) {
  for (const MaterialFact& existing : out)
    if (existing.key == fact.key) return; // first occurrence wins
  out.push_back(std::move(fact));
}

std::string boundary_key(const hit::Block& block) {
  const hit::Param* bnd = block.find_param("boundary");
  if (!bnd) return {};
  std::string key;
  for (const hit::ParamToken& t : bnd->value.words()) {
    if (!key.empty()) key += ',';
    key += normalize_token(t.text);
  }
  return key;
}

} // namespace

std::vector<MaterialFact> extract_facts(const hit::InputTree& tree,
                                        const MappingRegistry& reg) {
  std::vector<MaterialFact> out;

  // Materials first: they own the property keys that kernel resolution reuses.
  for (const hit::Block* m : detail::active_children(tree, "Materials")) {
    if (m->block_type.empty()) continue;
    if (detail::is_constant_material(m->block_type)) {
      const hit::Param* names = m->find_param("prop_names");
      const hit::Param* values = m->find_param("prop_values");
      if (!names || !values) continue;
      const auto& nw = names->value.words();
      const auto& vw = values->value.words();
      const size_t n = std::min(nw.size(), vw.size());
      for (size_t i = 0; i < n; ++i)
        if (vw[i].number)
          add_fact(out, {normalize_token(nw[i].text),
                         FactValue::of(*vw[i].number), FactOrigin::material_model});
      continue;
    }
    // Non-constant model: a categorical signature over its scalar parameters
    // plus one numeric fact per parameter.
    const std::string cls = normalize_token(m->block_type);
    std::vector<std::pair<std::string, double>> scalars;
    for (const hit::Param& p : m->params) {
      if (structural_param(p.key)) continue;
      if (p.value.kind == hit::ParamValue::Kind::Number)
        scalars.emplace_back(normalize_token(p.key), p.value.number);
    }
    std::sort(scalars.begin(), scalars.end());
    std::string signature;
    for (const auto& [key, value] : scalars) {
      if (!signature.empty()) signature += ' ';
      signature += key;
      signature += '=';
      signature += detail::render_number(value);
    }
    add_fact(out, {"material_model:" + cls, FactValue::of(std::move(signature)),
                   FactOrigin::material_model});
    for (const auto& [key, value] : scalars)
      add_fact(out, {"material:" + cls + ":" + key, FactValue::of(value),
                     FactOrigin::uncovered_constitutive});
  }

  // Boundary-condition coefficient parameters (film coefficients, ambient
  // temperatures, sink strengths).
  for (const hit::Block* b : detail::active_children(tree, "BCs")) {
    if (b->name == "Periodic") continue; // structural container, no physics params
    const BcMappingEntry* entry = reg.lookup_bc(b->block_type);
    if (!entry || entry->coeff_params.empty()) continue;
    const std::string where = boundary_key(*b);
    for (const std::string& param : entry->coeff_params) {
      const hit::Param* p = b->find_param(param);
      if (!p || p->value.kind != hit::ParamValue::Kind::Number) continue;
      add_fact(out, {"bc:" + where + ":" + normalize_token(param),
                     FactValue::of(p->value.number), FactOrigin::bc_coefficient});
    }
  }

  // Kernel coefficients that resolve to numbers. Property-mediated values
  // reuse the property key, so the material's own fact wins the dedup.
  for (const hit::Block* k : detail::active_children(tree, "Kernels")) {
    const KernelMappingEntry* entry = reg.lookup_kernel(k->block_type);
    if (!entry) continue;
    const CoefficientRule& rule = entry->coefficient;
    if (rule.kind == CoefficientRule::Kind::None) continue;
    const hit::Param* p = k->find_param(rule.param);
    if (rule.kind == CoefficientRule::Kind::FromParam) {
      if (p && p->value.kind == hit::ParamValue::Kind::Number)
        add_fact(out, {normalize_token(rule.param), FactValue::of(p->value.number),
                       FactOrigin::kernel_coefficient});
      continue;
    }
    // FromMaterial: an inline number keys on the parameter; an identifier (or
    // the default property) resolves one hop through constant materials.
    if (p && p->value.kind == hit::ParamValue::Kind::Number) {
      add_fact(out, {normalize_token(rule.param), FactValue::of(p->value.number),
                     FactOrigin::kernel_coefficient});
      continue;
    }
    std::string property = rule.default_property;
    if (p && !p->value.raw.empty()) property = p->value.raw;
    if (property.empty()) continue;
    if (std::optional<double> v = detail::lookup_constant_property(tree, property))
      add_fact(out, {normalize_token(property), FactValue::of(*v),
                     FactOrigin::kernel_coefficient});
  }

  return out;
}

McsResult mcs_score(const std::vector<MaterialFact>& reference,
                    const std::vector<MaterialFact>& candidate, double delta,
                    double epsilon0) {
  McsResult result;
  if (reference.empty()) return result; // undefined: nothing to check

  size_t matched = 0;
  for (const MaterialFact& ref : reference) {
    const MaterialFact* cand = nullptr;
    for (const MaterialFact& c : candidate)
      if (c.key == ref.key) {
        cand = &c;
        break;
      }
    bool ok = false;
    std::string found = "absent";
    if (cand) {
      found = render_fact_value(cand->value);
      if (ref.value.kind == FactValue::Kind::Number &&
          cand->value.kind == FactValue::Kind::Number)
        ok = coefficient_match(ref.value.number, cand->value.number, delta,
                               epsilon0);
      else if (ref.value.kind == FactValue::Kind::Text &&
               cand->value.kind == FactValue::Kind::Text)
        ok = normalize_expr(ref.value.text) == normalize_expr(cand->value.text);
    }
    if (ok)
      ++matched;
    else
      result.mismatches.push_back({ref.key, render_fact_value(ref.value), found});
  }
  result.score = static_cast<double>(matched) / static_cast<double>(reference.size());
  return result;
}

double field_relative_error(const std::vector<double>& baseline,
                            const std::vector<double>& perturbed) {
  if (baseline.size() != perturbed.size())
    throw LengthMismatch(baseline.size(), perturbed.size());
  double diff2 = 0.0;
  double base2 = 0.0;
  for (size_t i = 0; i < baseline.size(); ++i) {
    const double d = perturbed[i] - baseline[i];
    diff2 += d * d;
    base2 += baseline[i] * baseline[i];
  }
  return std::sqrt(diff2) / std::max(std::sqrt(base2), 1e-15);
}

} // namespace pde
