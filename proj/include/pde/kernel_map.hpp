#pragma once

// Mapping registry: the declarative table that types MOOSE object classes as
// PDE operators, BC families and IC families, carries their coefficient
// extraction rules, weak-form descriptors and severity weights. The registry
// is data (see data/kernel_map.json); the code only loads, validates and
// queries it. Classes absent from the registry are "unresolved" — never
// guessed at.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pde/contract.hpp"

namespace pde {

// ---------------------------------------------------------------------------
// Checkpoint kinds and severity weights.

enum class CheckpointKind {
  term_missing,
  term_extra,
  coefficient,
  bc_type,
  bc_boundary,
  bc_value,
  ic_type,
  ic_value,
  time_scheme,
};

std::string_view to_string(CheckpointKind);
std::optional<CheckpointKind> checkpoint_kind_from_string(std::string_view);

// The closed set of admissible severity weights.
bool valid_severity(double w);

// ---------------------------------------------------------------------------
// Registry entries.

struct CoefficientRule {
  enum class Kind {
    None,        // coefficient is the symbolic unit
    FromParam,   // numeric object parameter `param`
    FromMaterial // `param` names a material property (fallback `default_property`)
  };
  Kind kind = Kind::None;
  std::string param;
  std::string default_property;

  bool operator==(const CoefficientRule&) const = default;
};

struct KernelMappingEntry {
  std::string kernel_class;
  OperatorType op = OperatorType::diffusion;
  std::optional<WeakFormDescriptor> descriptor;
  CoefficientRule coefficient;
  double severity = 3.0;
  std::string equivalence_class;
};

struct ValueRule {
  enum class Kind { None, FromParam };
  Kind kind = Kind::None;
  std::string param;
};

struct BcMappingEntry {
  std::string bc_class;
  BcType bc_type = BcType::Dirichlet;
  ValueRule value;
  // Parameters that carry physical coefficients (Robin films etc.); extracted
  // as bc_coefficient facts.
  std::vector<std::string> coeff_params;
};

struct IcMappingEntry {
  std::string ic_class;
  IcType ic_type = IcType::constant;
  ValueRule value;
};

struct MappingRegistry {
  std::map<std::string, KernelMappingEntry> kernels;
  std::map<std::string, BcMappingEntry> bcs;
  std::map<std::string, IcMappingEntry> ics;
  std::map<OperatorType, double> term_severities;     // per-operator term weight
  std::map<CheckpointKind, double> checkpoint_severities; // non-term kinds

  const KernelMappingEntry* lookup_kernel(const std::string& cls) const;
  const BcMappingEntry* lookup_bc(const std::string& cls) const;
  const IcMappingEntry* lookup_ic(const std::string& cls) const;
  // All registered classes sharing an equivalence class, sorted.
  std::vector<const KernelMappingEntry*> equivalence_members(const std::string& eq) const;
};

// Parses and validates a registry document. An empty document `{}` is a valid
// registry where every class is unresolved and severities take the built-in
// defaults. Throws RegistryError naming the offending entry/field.
MappingRegistry load_registry(const std::string& json_text);
MappingRegistry load_registry_file(const std::string& path);

// Componentwise equality of weak-form witnesses (audit only, never scored).
bool descriptor_equivalent(const WeakFormDescriptor& a, const WeakFormDescriptor& b);

// Severity of a checkpoint. Term kinds consult the operator's registered
// weight (falling back to built-in defaults for operators without entries);
// other kinds use the registry's checkpoint table.
double severity_for(const MappingRegistry& reg, CheckpointKind kind,
                    std::optional<OperatorType> op = std::nullopt);

} // namespace pde
