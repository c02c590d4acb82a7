#pragma once

// Internal helpers shared between fact extraction and contract
// reconstruction: active-aware block walking, one-hop constant-material
// property resolution and deterministic number rendering.

#include <algorithm>
#include <cstdio>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pde/hit.hpp"

namespace pde::detail {

inline const hit::Block* find_root(const hit::InputTree& tree,
                                   std::string_view name) {
  for (const hit::Block& b : tree.roots)
    if (b.name == name) return &b;
  return nullptr;
}

// Children of the named top-level block. When the block carries an `active`
// list, only the named children participate.
inline std::vector<const hit::Block*> active_children(const hit::InputTree& tree,
                                                      std::string_view top) {
  std::vector<const hit::Block*> out;
  const hit::Block* root = find_root(tree, top);
  if (!root) return out;
  const hit::Param* active = root->find_param("active");
  for (const hit::Block& child : root->children) {
    if (active) {
      bool keep = false;
      for (const hit::ParamToken& t : active->value.words())
        if (t.text == child.name) {
          keep = true;
          break;
        }
      if (!keep) continue;
    }
    out.push_back(&child);
  }
  return out;
}

inline bool is_constant_material(std::string_view cls) {
  return cls == "GenericConstantMaterial" || cls == "ADGenericConstantMaterial";
}

// Resolves a material property name through constant materials only (one
// hop): the first prop_names/prop_values pair that defines it numerically.
inline std::optional<double> lookup_constant_property(const hit::InputTree& tree,
                                                      std::string_view property) {
  for (const hit::Block* m : active_children(tree, "Materials")) {
    if (!is_constant_material(m->block_type)) continue;
    const hit::Param* names = m->find_param("prop_names");
    const hit::Param* values = m->find_param("prop_values");
    if (!names || !values) continue;
    const auto& nw = names->value.words();
    const auto& vw = values->value.words();
    const size_t n = std::min(nw.size(), vw.size());
    for (size_t i = 0; i < n; ++i)
      if (nw[i].text == property && vw[i].number) return *vw[i].number;
  }
  return std::nullopt;
}

// Short deterministic rendering ("3", "0.5", "1e-12").
inline std::string render_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.15g", v);
  return buf;
}

} // namespace pde::detail
