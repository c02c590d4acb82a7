#include "pde/contract.hpp"

#include <algorithm>
#include <array>
#include <cctype>

namespace pde {

namespace {

struct OpName {
  OperatorType op;
  std::string_view name;
};

constexpr std::array<OpName, kOperatorCount> kOpNames{{
    {OperatorType::diffusion, "diffusion"},
    {OperatorType::time_derivative, "time_derivative"},
    {OperatorType::source, "source"},
    {OperatorType::reaction, "reaction"},
    {OperatorType::advection, "advection"},
    {OperatorType::stress_divergence, "stress_divergence"},
    {OperatorType::coupled_force, "coupled_force"},
    {OperatorType::curl_curl, "curl_curl"},
    {OperatorType::inertia, "inertia"},
    {OperatorType::pf_darcy_flux, "pf_darcy_flux"},
    {OperatorType::pf_effective_stress, "pf_effective_stress"},
    {OperatorType::allen_cahn, "allen_cahn"},
    {OperatorType::cahn_hilliard, "cahn_hilliard"},
    {OperatorType::ns_continuity, "ns_continuity"},
    {OperatorType::ns_pressure, "ns_pressure"},
    {OperatorType::ns_viscous, "ns_viscous"},
}};

} // namespace

std::string_view to_string(OperatorType op) {
  for (const OpName& e : kOpNames)
    if (e.op == op) return e.name;
  return "?";
}

std::optional<OperatorType> operator_from_string(std::string_view name) {
  for (const OpName& e : kOpNames)
    if (e.name == name) return e.op;
  return std::nullopt;
}

const std::vector<OperatorType>& all_operators() {
  static const std::vector<OperatorType> ops = [] {
    std::vector<OperatorType> v;
    for (const OpName& e : kOpNames) v.push_back(e.op);
    return v;
  }();
  return ops;
}

std::string_view to_string(TrialOp t) {
  switch (t) {
    case TrialOp::identity: return "identity";
    case TrialOp::grad: return "grad";
    case TrialOp::div: return "div";
    case TrialOp::curl: return "curl";
    case TrialOp::ddt: return "ddt";
    case TrialOp::ddt2: return "ddt2";
    case TrialOp::stress: return "stress";
    case TrialOp::strain: return "strain";
  }
  return "?";
}

std::string_view to_string(TestOp t) {
  switch (t) {
    case TestOp::identity: return "identity";
    case TestOp::grad: return "grad";
    case TestOp::div: return "div";
    case TestOp::curl: return "curl";
  }
  return "?";
}

std::string_view to_string(Contraction c) {
  switch (c) {
    case Contraction::scalar_mult: return "scalar_mult";
    case Contraction::dot: return "dot";
    case Contraction::double_dot: return "double_dot";
  }
  return "?";
}

std::optional<TrialOp> trial_from_string(std::string_view s) {
  for (TrialOp t : {TrialOp::identity, TrialOp::grad, TrialOp::div, TrialOp::curl,
                    TrialOp::ddt, TrialOp::ddt2, TrialOp::stress, TrialOp::strain})
    if (to_string(t) == s) return t;
  return std::nullopt;
}

std::optional<TestOp> test_from_string(std::string_view s) {
  for (TestOp t : {TestOp::identity, TestOp::grad, TestOp::div, TestOp::curl})
    if (to_string(t) == s) return t;
  return std::nullopt;
}

std::optional<Contraction> contraction_from_string(std::string_view s) {
  for (Contraction c : {Contraction::scalar_mult, Contraction::dot, Contraction::double_dot})
    if (to_string(c) == s) return c;
  return std::nullopt;
}

std::string_view to_string(BcType t) {
  switch (t) {
    case BcType::Dirichlet: return "Dirichlet";
    case BcType::Neumann: return "Neumann";
    case BcType::Robin: return "Robin";
    case BcType::Periodic: return "Periodic";
    case BcType::FluxResidual: return "FluxResidual";
    case BcType::PorousFlowSink: return "PorousFlowSink";
    case BcType::PorousFlowOutflow: return "PorousFlowOutflow";
  }
  return "?";
}

std::optional<BcType> bc_type_from_string(std::string_view s) {
  for (BcType t : {BcType::Dirichlet, BcType::Neumann, BcType::Robin, BcType::Periodic,
                   BcType::FluxResidual, BcType::PorousFlowSink, BcType::PorousFlowOutflow})
    if (to_string(t) == s) return t;
  return std::nullopt;
}

std::string_view to_string(IcType t) {
  return t == IcType::constant ? "constant" : "function";
}

std::optional<IcType> ic_type_from_string(std::string_view s) {
  if (s == "constant") return IcType::constant;
  if (s == "function") return IcType::function;
  return std::nullopt;
}

std::string_view to_string(FactOrigin o) {
  switch (o) {
    case FactOrigin::kernel_coefficient: return "kernel_coefficient";
    case FactOrigin::bc_coefficient: return "bc_coefficient";
    case FactOrigin::material_model: return "material_model";
    case FactOrigin::uncovered_constitutive: return "uncovered_constitutive";
  }
  return "?";
}

std::optional<FactOrigin> fact_origin_from_string(std::string_view s) {
  for (FactOrigin o : {FactOrigin::kernel_coefficient, FactOrigin::bc_coefficient,
                       FactOrigin::material_model, FactOrigin::uncovered_constitutive})
    if (to_string(o) == s) return o;
  return std::nullopt;
}

std::string_view to_string(TimeScheme s) {
  return s == TimeScheme::steady ? "steady" : "transient";
}

std::optional<TimeScheme> time_scheme_from_string(std::string_view s) {
  if (s == "steady") return TimeScheme::steady;
  if (s == "transient") return TimeScheme::transient;
  return std::nullopt;
}

std::string normalize_expr(std::string_view raw) {
  std::string out;
  bool pending_space = false;
  for (char c : raw) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      if (!out.empty()) pending_space = true;
    } else {
      if (pending_space) out += ' ';
      pending_space = false;
      out += c;
    }
  }
  return out;
}

std::string normalize_token(std::string_view raw) {
  std::string out = normalize_expr(raw);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return char(std::tolower(c)); });
  return out;
}

bool operator==(const BoundTerm& a, const BoundTerm& b) {
  return a.variable == b.variable && a.op == b.op && a.coefficient == b.coefficient;
}

bool operator==(const ScalarOrExpr& a, const ScalarOrExpr& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case ScalarOrExpr::Kind::Absent: return true;
    case ScalarOrExpr::Kind::Number: return a.number == b.number;
    case ScalarOrExpr::Kind::Text: return a.text == b.text;
  }
  return false;
}

bool operator==(const BoundaryCondition& a, const BoundaryCondition& b) {
  return a.variable == b.variable && a.boundary == b.boundary &&
         a.bc_type == b.bc_type && a.value == b.value;
}

bool operator==(const InitialCondition& a, const InitialCondition& b) {
  return a.variable == b.variable && a.ic_type == b.ic_type && a.value == b.value;
}

bool operator==(const FactValue& a, const FactValue& b) {
  if (a.kind != b.kind) return false;
  return a.kind == FactValue::Kind::Number ? a.number == b.number : a.text == b.text;
}

bool operator==(const MaterialFact& a, const MaterialFact& b) {
  return a.key == b.key && a.value == b.value && a.origin == b.origin;
}

bool PhysicsContract::has_variable(std::string_view name) const {
  return std::find(variables.begin(), variables.end(), name) != variables.end();
}

const BoundTerm* PhysicsContract::find_term(std::string_view variable,
                                            OperatorType op) const {
  for (const BoundTerm& t : terms)
    if (t.op == op && t.variable == variable) return &t;
  return nullptr;
}

bool PhysicsContract::add_term(BoundTerm term) {
  if (find_term(term.variable, term.op)) {
    diagnostics.push_back("duplicate term (" + term.variable + ", " +
                          std::string(to_string(term.op)) +
                          "); first binding kept");
    return false;
  }
  terms.push_back(std::move(term));
  return true;
}

void PhysicsContract::note_unresolved(const std::string& class_name) {
  if (std::find(unresolved.begin(), unresolved.end(), class_name) == unresolved.end())
    unresolved.push_back(class_name);
}

bool operator==(const PhysicsContract& a, const PhysicsContract& b) {
  return a.variables == b.variables && a.terms == b.terms &&
         a.boundary_conditions == b.boundary_conditions &&
         a.initial_conditions == b.initial_conditions &&
         a.coeff_facts == b.coeff_facts && a.time_scheme == b.time_scheme &&
         a.domain == b.domain && a.unresolved == b.unresolved && a.extra == b.extra;
}

std::vector<OperatorType> term_signature(const PhysicsContract& c,
                                         const std::string& variable) {
  if (!c.has_variable(variable)) throw UnknownVariable(variable);
  std::vector<OperatorType> sig;
  for (const BoundTerm& t : c.terms)
    if (t.variable == variable) sig.push_back(t.op);
  std::sort(sig.begin(), sig.end(), [](OperatorType x, OperatorType y) {
    return to_string(x) < to_string(y);
  });
  return sig;
}

// ---------------------------------------------------------------------------
// JSON document handling.

namespace {

[[noreturn]] void fail(const std::string& field, const std::string& msg) {
  throw SchemaError(field, msg);
}

std::string str_field(const Json& obj, const std::string& field, const std::string& where) {
  if (!obj.contains(field)) fail(where + "." + field, "required field missing");
  const Json& v = obj.at(field);
  if (!v.is_string()) fail(where + "." + field, "expected a string");
  return v.get<std::string>();
}

ScalarOrExpr value_field(const Json& obj, const std::string& where) {
  if (!obj.contains("value") || obj.at("value").is_null()) return ScalarOrExpr::absent();
  const Json& v = obj.at("value");
  if (v.is_number()) return ScalarOrExpr::of(v.get<double>());
  if (v.is_string()) return ScalarOrExpr::of(normalize_expr(v.get<std::string>()));
  fail(where + ".value", "expected a number or expression string");
}

Json render_value(const ScalarOrExpr& v) {
  switch (v.kind) {
    case ScalarOrExpr::Kind::Number: return v.number;
    case ScalarOrExpr::Kind::Text: return v.text;
    case ScalarOrExpr::Kind::Absent: break;
  }
  return nullptr;
}

} // namespace

PhysicsContract load_contract(const std::string& json_text) {
  Json doc;
  try {
    doc = Json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    fail("<document>", e.what());
  }
  if (!doc.is_object()) fail("<document>", "expected a JSON object");

  PhysicsContract c;

  if (doc.contains("variables")) {
    const Json& vars = doc.at("variables");
    if (!vars.is_array()) fail("variables", "expected an array of names");
    for (size_t i = 0; i < vars.size(); ++i) {
      if (!vars[i].is_string()) fail("variables[" + std::to_string(i) + "]", "expected a string");
      std::string name = vars[i].get<std::string>();
      if (name.empty()) fail("variables[" + std::to_string(i) + "]", "empty name");
      if (!c.has_variable(name)) c.variables.push_back(std::move(name));
    }
  }

  if (doc.contains("terms")) {
    const Json& terms = doc.at("terms");
    if (!terms.is_array()) fail("terms", "expected an array");
    for (size_t i = 0; i < terms.size(); ++i) {
      std::string where = "terms[" + std::to_string(i) + "]";
      const Json& t = terms[i];
      if (!t.is_object()) fail(where, "expected an object");
      BoundTerm term;
      term.variable = str_field(t, "variable", where.substr(0, where.size()));
      if (!c.has_variable(term.variable))
        fail(where + ".variable", "'" + term.variable + "' is not a declared variable");
      std::string op = str_field(t, "operator", where);
      auto parsed = operator_from_string(op);
      if (!parsed) fail(where + ".operator", "unknown operator '" + op + "'");
      term.op = *parsed;
      if (t.contains("coefficient") && !t.at("coefficient").is_null()) {
        if (!t.at("coefficient").is_number())
          fail(where + ".coefficient", "expected a number or null");
        term.coefficient = t.at("coefficient").get<double>();
      }
      c.add_term(std::move(term));
    }
  }

  if (doc.contains("boundary_conditions")) {
    const Json& bcs = doc.at("boundary_conditions");
    if (!bcs.is_array()) fail("boundary_conditions", "expected an array");
    for (size_t i = 0; i < bcs.size(); ++i) {
      std::string where = "boundary_conditions[" + std::to_string(i) + "]";
      const Json& b = bcs[i];
      if (!b.is_object()) fail(where, "expected an object");
      BoundaryCondition bc;
      bc.variable = str_field(b, "variable", where);
      if (!c.has_variable(bc.variable))
        fail(where + ".variable", "'" + bc.variable + "' is not a declared variable");
      if (!b.contains("boundary")) fail(where + ".boundary", "required field missing");
      const Json& bd = b.at("boundary");
      if (bd.is_string()) {
        std::string joined = bd.get<std::string>();
        std::string cur;
        for (char ch : joined + " ") {
          if (std::isspace(static_cast<unsigned char>(ch))) {
            if (!cur.empty()) bc.boundary.push_back(cur);
            cur.clear();
          } else {
            cur += ch;
          }
        }
      } else if (bd.is_array()) {
        for (const Json& t : bd) {
          if (!t.is_string()) fail(where + ".boundary", "expected name tokens");
          bc.boundary.push_back(t.get<std::string>());
        }
      } else {
        fail(where + ".boundary", "expected a name or list of names");
      }
      if (bc.boundary.empty()) fail(where + ".boundary", "no boundary tokens");
      std::string ty = str_field(b, "bc_type", where);
      auto parsed = bc_type_from_string(ty);
      if (!parsed) fail(where + ".bc_type", "unknown bc_type '" + ty + "'");
      bc.bc_type = *parsed;
      bc.value = value_field(b, where);
      c.boundary_conditions.push_back(std::move(bc));
    }
  }

  if (doc.contains("initial_conditions")) {
    const Json& ics = doc.at("initial_conditions");
    if (!ics.is_array()) fail("initial_conditions", "expected an array");
    for (size_t i = 0; i < ics.size(); ++i) {
      std::string where = "initial_conditions[" + std::to_string(i) + "]";
      const Json& n = ics[i];
      if (!n.is_object()) fail(where, "expected an object");
      InitialCondition ic;
      ic.variable = str_field(n, "variable", where);
      if (!c.has_variable(ic.variable))
        fail(where + ".variable", "'" + ic.variable + "' is not a declared variable");
      std::string ty = str_field(n, "ic_type", where);
      auto parsed = ic_type_from_string(ty);
      if (!parsed) fail(where + ".ic_type", "unknown ic_type '" + ty + "'");
      ic.ic_type = *parsed;
      ic.value = value_field(n, where);
      if (ic.ic_type == IcType::constant && !ic.value.is_number())
        fail(where + ".value", "constant initial conditions require a numeric value");
      c.initial_conditions.push_back(std::move(ic));
    }
  }

  if (doc.contains("coeff_facts")) {
    const Json& facts = doc.at("coeff_facts");
    if (!facts.is_array()) fail("coeff_facts", "expected an array");
    for (size_t i = 0; i < facts.size(); ++i) {
      std::string where = "coeff_facts[" + std::to_string(i) + "]";
      const Json& f = facts[i];
      if (!f.is_object()) fail(where, "expected an object");
      MaterialFact fact;
      fact.key = normalize_token(str_field(f, "key", where));
      if (fact.key.empty()) fail(where + ".key", "empty key");
      if (!f.contains("value")) fail(where + ".value", "required field missing");
      const Json& v = f.at("value");
      if (v.is_number())
        fact.value = FactValue::of(v.get<double>());
      else if (v.is_string())
        fact.value = FactValue::of(v.get<std::string>());
      else
        fail(where + ".value", "expected a number or token");
      std::string origin = str_field(f, "origin", where);
      auto parsed = fact_origin_from_string(origin);
      if (!parsed) fail(where + ".origin", "unknown origin '" + origin + "'");
      fact.origin = *parsed;
      c.coeff_facts.push_back(std::move(fact));
    }
  }

  if (doc.contains("time_scheme")) {
    const Json& ts = doc.at("time_scheme");
    if (!ts.is_string()) fail("time_scheme", "expected \"steady\" or \"transient\"");
    auto parsed = time_scheme_from_string(ts.get<std::string>());
    if (!parsed) fail("time_scheme", "unknown scheme '" + ts.get<std::string>() + "'");
    c.time_scheme = *parsed;
  }

  if (doc.contains("dimensions")) {
    const Json& d = doc.at("dimensions");
    if (!d.is_number_integer() || d.get<int>() < 1 || d.get<int>() > 3)
      fail("dimensions", "expected an integer in 1..3");
    c.domain.dimensions = d.get<int>();
  }

  if (doc.contains("mesh")) {
    const Json& m = doc.at("mesh");
    if (!m.is_string()) fail("mesh", "expected a string");
    c.domain.mesh_summary = m.get<std::string>();
  }

  if (doc.contains("unresolved")) {
    const Json& u = doc.at("unresolved");
    if (!u.is_array()) fail("unresolved", "expected an array of class names");
    for (size_t i = 0; i < u.size(); ++i) {
      if (!u[i].is_string()) fail("unresolved[" + std::to_string(i) + "]", "expected a string");
      c.note_unresolved(u[i].get<std::string>());
    }
  }

  static const char* kKnown[] = {"variables", "terms", "boundary_conditions",
                                 "initial_conditions", "coeff_facts", "time_scheme",
                                 "dimensions", "mesh", "unresolved"};
  for (auto it = doc.begin(); it != doc.end(); ++it) {
    bool known = false;
    for (const char* k : kKnown)
      if (it.key() == k) { known = true; break; }
    if (!known) c.extra[it.key()] = it.value();
  }

  return c;
}

std::string save_contract(const PhysicsContract& c, int indent) {
  Json doc = Json::object();
  doc["variables"] = c.variables;

  Json terms = Json::array();
  for (const BoundTerm& t : c.terms) {
    Json j = Json::object();
    j["variable"] = t.variable;
    j["operator"] = std::string(to_string(t.op));
    j["coefficient"] = t.coefficient ? Json(*t.coefficient) : Json(nullptr);
    terms.push_back(std::move(j));
  }
  doc["terms"] = std::move(terms);

  Json bcs = Json::array();
  for (const BoundaryCondition& b : c.boundary_conditions) {
    Json j = Json::object();
    j["variable"] = b.variable;
    if (b.boundary.size() == 1)
      j["boundary"] = b.boundary[0];
    else
      j["boundary"] = b.boundary;
    j["bc_type"] = std::string(to_string(b.bc_type));
    if (!b.value.is_absent()) j["value"] = render_value(b.value);
    bcs.push_back(std::move(j));
  }
  doc["boundary_conditions"] = std::move(bcs);

  Json ics = Json::array();
  for (const InitialCondition& n : c.initial_conditions) {
    Json j = Json::object();
    j["variable"] = n.variable;
    j["ic_type"] = std::string(to_string(n.ic_type));
    if (!n.value.is_absent()) j["value"] = render_value(n.value);
    ics.push_back(std::move(j));
  }
  doc["initial_conditions"] = std::move(ics);

  doc["time_scheme"] = std::string(to_string(c.time_scheme));
  doc["dimensions"] = c.domain.dimensions;
  if (!c.domain.mesh_summary.empty()) doc["mesh"] = c.domain.mesh_summary;
  if (!c.unresolved.empty()) doc["unresolved"] = c.unresolved;

  if (!c.coeff_facts.empty()) {
    Json facts = Json::array();
    for (const MaterialFact& f : c.coeff_facts) {
      Json j = Json::object();
      j["key"] = f.key;
      j["value"] = f.value.kind == FactValue::Kind::Number ? Json(f.value.number)
                                                           : Json(f.value.text);
      j["origin"] = std::string(to_string(f.origin));
      facts.push_back(std::move(j));
    }
    doc["coeff_facts"] = std::move(facts);
  }

  for (auto it = c.extra.begin(); it != c.extra.end(); ++it) doc[it.key()] = it.value();

  return doc.dump(indent);
}

} // namespace pde
