#pragma once

// The physics contract: the solver-agnostic description of what a simulation
// input claims to solve. Terms bind a variable to a PDE operator with an
// optional scalar coefficient; boundary/initial conditions, material facts,
// the time scheme and the domain complete the picture. Kernel classes the
// mapping registry does not cover are carried in `unresolved` and never
// silently typed.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "pde/errors.hpp"

namespace pde {

using Json = nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// Operator inventory (closed set).

enum class OperatorType {
  diffusion,
  time_derivative,
  source,
  reaction,
  advection,
  stress_divergence,
  coupled_force,
  curl_curl,
  inertia,
  pf_darcy_flux,
  pf_effective_stress,
  allen_cahn,
  cahn_hilliard,
  ns_continuity,
  ns_pressure,
  ns_viscous,
};

inline constexpr int kOperatorCount = 16;

std::string_view to_string(OperatorType op);
std::optional<OperatorType> operator_from_string(std::string_view name);
const std::vector<OperatorType>& all_operators();

// ---------------------------------------------------------------------------
// Weak-form descriptors (audit metadata; never used in scoring).

enum class TrialOp { identity, grad, div, curl, ddt, ddt2, stress, strain };
enum class TestOp { identity, grad, div, curl };
enum class Contraction { scalar_mult, dot, double_dot };

std::string_view to_string(TrialOp);
std::string_view to_string(TestOp);
std::string_view to_string(Contraction);
std::optional<TrialOp> trial_from_string(std::string_view);
std::optional<TestOp> test_from_string(std::string_view);
std::optional<Contraction> contraction_from_string(std::string_view);

struct WeakFormDescriptor {
  TrialOp trial = TrialOp::identity;
  TestOp test = TestOp::identity;
  Contraction contraction = Contraction::scalar_mult;

  bool operator==(const WeakFormDescriptor&) const = default;
};

// ---------------------------------------------------------------------------
// Contract members.

// A coefficient is either a known real value or the symbolic unit (absent),
// meaning "no scalar was recoverable"; the unit compares as 1.0.
using Coefficient = std::optional<double>;

struct BoundTerm {
  std::string variable;
  OperatorType op = OperatorType::diffusion;
  Coefficient coefficient; // nullopt = symbolic unit
  int source_line = 0;     // provenance only; ignored by equality
};

bool operator==(const BoundTerm& a, const BoundTerm& b);

enum class BcType {
  Dirichlet,
  Neumann,
  Robin,
  Periodic,
  FluxResidual,
  PorousFlowSink,
  PorousFlowOutflow,
};

std::string_view to_string(BcType);
std::optional<BcType> bc_type_from_string(std::string_view);

// A value slot on a BC or IC: numeric, a textual expression, or absent.
struct ScalarOrExpr {
  enum class Kind { Absent, Number, Text };
  Kind kind = Kind::Absent;
  double number = 0.0;
  std::string text;

  static ScalarOrExpr absent() { return {}; }
  static ScalarOrExpr of(double v) { return {Kind::Number, v, {}}; }
  static ScalarOrExpr of(std::string s) { return {Kind::Text, 0.0, std::move(s)}; }
  bool is_absent() const { return kind == Kind::Absent; }
  bool is_number() const { return kind == Kind::Number; }
};

bool operator==(const ScalarOrExpr& a, const ScalarOrExpr& b);

struct BoundaryCondition {
  std::string variable;
  std::vector<std::string> boundary; // token set; ordered pair for Periodic
  BcType bc_type = BcType::Dirichlet;
  ScalarOrExpr value;
  int source_line = 0; // provenance only; ignored by equality
};

bool operator==(const BoundaryCondition& a, const BoundaryCondition& b);

enum class IcType { constant, function };

std::string_view to_string(IcType);
std::optional<IcType> ic_type_from_string(std::string_view);

struct InitialCondition {
  std::string variable;
  IcType ic_type = IcType::constant;
  ScalarOrExpr value;
  int source_line = 0; // provenance only; ignored by equality
};

bool operator==(const InitialCondition& a, const InitialCondition& b);

// ---------------------------------------------------------------------------
// Material facts: constitutive scalars and model signatures that sit outside
// the operator structure (the coefficient-fidelity side channel).

enum class FactOrigin {
  kernel_coefficient,
  bc_coefficient,
  material_model,
  uncovered_constitutive,
};

std::string_view to_string(FactOrigin);
std::optional<FactOrigin> fact_origin_from_string(std::string_view);

struct FactValue {
  enum class Kind { Number, Text };
  Kind kind = Kind::Number;
  double number = 0.0;
  std::string text;

  static FactValue of(double v) { return {Kind::Number, v, {}}; }
  static FactValue of(std::string s) { return {Kind::Text, 0.0, std::move(s)}; }
};

bool operator==(const FactValue& a, const FactValue& b);

struct MaterialFact {
  std::string key; // normalized: lowercased, whitespace-collapsed
  FactValue value;
  FactOrigin origin = FactOrigin::material_model;
};

bool operator==(const MaterialFact& a, const MaterialFact& b);

// Normalization used for fact keys and categorical comparisons.
std::string normalize_token(std::string_view raw);
// Whitespace-collapse only (expressions keep their case).
std::string normalize_expr(std::string_view raw);

// ---------------------------------------------------------------------------

struct Domain {
  int dimensions = 1; // 1..3
  std::string mesh_summary;

  bool operator==(const Domain&) const = default;
};

enum class TimeScheme { steady, transient };

std::string_view to_string(TimeScheme);
std::optional<TimeScheme> time_scheme_from_string(std::string_view);

struct PhysicsContract {
  std::vector<std::string> variables;
  std::vector<BoundTerm> terms; // unique by (variable, op)
  std::vector<BoundaryCondition> boundary_conditions;
  std::vector<InitialCondition> initial_conditions;
  std::vector<MaterialFact> coeff_facts;
  TimeScheme time_scheme = TimeScheme::steady;
  Domain domain;
  std::vector<std::string> unresolved; // object classes outside the registry
  Json extra = Json::object();         // unrecognized document fields, kept on save

  // Construction notes (duplicate terms, undeclared variables, ...). Not part
  // of the document; excluded from equality.
  std::vector<std::string> diagnostics;

  bool has_variable(std::string_view name) const;
  const BoundTerm* find_term(std::string_view variable, OperatorType op) const;
  // Enforces (variable, op) uniqueness: a duplicate records a diagnostic,
  // keeps the first binding and returns false.
  bool add_term(BoundTerm term);
  void note_unresolved(const std::string& class_name); // set semantics
};

bool operator==(const PhysicsContract& a, const PhysicsContract& b);

// The operator multiset bound to a variable, sorted by operator name.
// Throws UnknownVariable if `variable` is not declared.
std::vector<OperatorType> term_signature(const PhysicsContract& c,
                                         const std::string& variable);

// JSON document <-> contract. load_contract throws SchemaError naming the
// offending field; unknown top-level fields land in `extra` and are written
// back by save_contract.
PhysicsContract load_contract(const std::string& json_text);
std::string save_contract(const PhysicsContract& c, int indent = 2);

} // namespace pde
