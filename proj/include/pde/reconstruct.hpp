#pragma once

// Deterministic reconstruction: the physics contract a parsed input file
// actually encodes. Covered kernel classes become typed terms; covered BC/IC
// classes become conditions; constant-material chains are resolved exactly
// one hop; everything the registry does not cover lands in `unresolved` and
// never alters the typed part of the contract.

#include "pde/contract.hpp"
#include "pde/hit.hpp"
#include "pde/kernel_map.hpp"

namespace pde {

PhysicsContract reconstruct_contract(const hit::InputTree& tree,
                                     const MappingRegistry& reg);

} // namespace pde
