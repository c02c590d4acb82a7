#include "pde/kernel_map.hpp"

#include <array>
#include <cmath>
#include <fstream>
#include <sstream>

namespace pde {

namespace {

constexpr std::array<std::pair<CheckpointKind, std::string_view>, 9> kKindNames{{
    {CheckpointKind::term_missing, "term_missing"},
    {CheckpointKind::term_extra, "term_extra"},
    {CheckpointKind::coefficient, "coefficient"},
    {CheckpointKind::bc_type, "bc_type"},
    {CheckpointKind::bc_boundary, "bc_boundary"},
    {CheckpointKind::bc_value, "bc_value"},
    {CheckpointKind::ic_type, "ic_type"},
    {CheckpointKind::ic_value, "ic_value"},
    {CheckpointKind::time_scheme, "time_scheme"},
}};

// Built-in defaults; the bundled registry file declares the same assignment
// so it can be audited and overridden as data.
double default_term_severity(OperatorType op) {
  switch (op) {
    case OperatorType::time_derivative:
    case OperatorType::inertia:
      return 4.0;
    case OperatorType::coupled_force:
    case OperatorType::reaction:
      return 2.0;
    case OperatorType::source:
      return 0.7;
    default:
      return 3.0; // dominant spatial operators
  }
}

double default_checkpoint_severity(CheckpointKind kind) {
  switch (kind) {
    case CheckpointKind::bc_type:
    case CheckpointKind::bc_boundary:
    case CheckpointKind::ic_type:
      return 2.0;
    case CheckpointKind::bc_value:
    case CheckpointKind::ic_value:
    case CheckpointKind::coefficient:
      return 1.0;
    case CheckpointKind::time_scheme:
      return 4.0;
    default:
      return 3.0; // term kinds are resolved per operator, not here
  }
}

[[noreturn]] void fail(const std::string& entry, const std::string& msg) {
  throw RegistryError(entry, msg);
}

std::string str_field(const Json& obj, const char* field, const std::string& entry) {
  if (!obj.contains(field)) fail(entry, std::string("missing field '") + field + "'");
  if (!obj.at(field).is_string()) fail(entry, std::string("field '") + field + "' must be a string");
  return obj.at(field).get<std::string>();
}

ValueRule parse_value_rule(const Json& obj, const std::string& entry) {
  ValueRule rule;
  if (!obj.contains("value")) return rule;
  const Json& v = obj.at("value");
  if (!v.is_object()) fail(entry, "'value' must be an object");
  std::string kind = str_field(v, "rule", entry);
  if (kind == "none") {
    rule.kind = ValueRule::Kind::None;
  } else if (kind == "from_param") {
    rule.kind = ValueRule::Kind::FromParam;
    rule.param = str_field(v, "param", entry);
  } else {
    fail(entry, "unknown value rule '" + kind + "'");
  }
  return rule;
}

} // namespace

std::string_view to_string(CheckpointKind k) {
  for (const auto& [kind, name] : kKindNames)
    if (kind == k) return name;
  return "?";
}

std::optional<CheckpointKind> checkpoint_kind_from_string(std::string_view s) {
  for (const auto& [kind, name] : kKindNames)
    if (name == s) return kind;
  return std::nullopt;
}

bool valid_severity(double w) {
  for (double lvl : {4.0, 3.0, 2.0, 1.0, 0.7, 0.5})
    if (w == lvl) return true;
  return false;
}

const KernelMappingEntry* MappingRegistry::lookup_kernel(const std::string& cls) const {
  auto it = kernels.find(cls);
  return it == kernels.end() ? nullptr : &it->second;
}

const BcMappingEntry* MappingRegistry::lookup_bc(const std::string& cls) const {
  auto it = bcs.find(cls);
  return it == bcs.end() ? nullptr : &it->second;
}

const IcMappingEntry* MappingRegistry::lookup_ic(const std::string& cls) const {
  auto it = ics.find(cls);
  return it == ics.end() ? nullptr : &it->second;
}

std::vector<const KernelMappingEntry*>
MappingRegistry::equivalence_members(const std::string& eq) const {
  std::vector<const KernelMappingEntry*> out;
  for (const auto& [cls, entry] : kernels)
    if (entry.equivalence_class == eq) out.push_back(&entry);
  return out;
}

MappingRegistry load_registry(const std::string& json_text) {
  Json doc;
  try {
    doc = Json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    fail("<document>", e.what());
  }
  if (!doc.is_object()) fail("<document>", "expected a JSON object");

  MappingRegistry reg;

  if (doc.contains("term_severities")) {
    const Json& ts = doc.at("term_severities");
    if (!ts.is_object()) fail("term_severities", "expected an object");
    for (auto it = ts.begin(); it != ts.end(); ++it) {
      auto op = operator_from_string(it.key());
      if (!op) fail("term_severities", "unknown operator '" + it.key() + "'");
      if (!it.value().is_number() || !valid_severity(it.value().get<double>()))
        fail("term_severities", "severity for '" + it.key() + "' outside the admissible set");
      reg.term_severities[*op] = it.value().get<double>();
    }
  }

  if (doc.contains("checkpoint_severities")) {
    const Json& cs = doc.at("checkpoint_severities");
    if (!cs.is_object()) fail("checkpoint_severities", "expected an object");
    for (auto it = cs.begin(); it != cs.end(); ++it) {
      auto kind = checkpoint_kind_from_string(it.key());
      if (!kind) fail("checkpoint_severities", "unknown checkpoint kind '" + it.key() + "'");
      if (*kind == CheckpointKind::term_missing || *kind == CheckpointKind::term_extra)
        fail("checkpoint_severities", "term kinds are weighted per operator");
      if (!it.value().is_number() || !valid_severity(it.value().get<double>()))
        fail("checkpoint_severities", "severity for '" + it.key() + "' outside the admissible set");
      reg.checkpoint_severities[*kind] = it.value().get<double>();
    }
  }

  if (doc.contains("kernels")) {
    const Json& kernels = doc.at("kernels");
    if (!kernels.is_array()) fail("kernels", "expected an array");
    for (const Json& k : kernels) {
      if (!k.is_object()) fail("kernels", "expected entry objects");
      KernelMappingEntry e;
      e.kernel_class = str_field(k, "class", "kernels[]");
      const std::string& entry = e.kernel_class;
      std::string op = str_field(k, "operator", entry);
      auto parsed = operator_from_string(op);
      if (!parsed) fail(entry, "unknown operator '" + op + "'");
      e.op = *parsed;
      e.equivalence_class = str_field(k, "equivalence_class", entry);
      if (e.equivalence_class.empty()) fail(entry, "empty equivalence_class");

      if (k.contains("descriptor")) {
        const Json& d = k.at("descriptor");
        if (!d.is_object()) fail(entry, "'descriptor' must be an object");
        WeakFormDescriptor wf;
        std::string trial = str_field(d, "trial", entry);
        std::string test = str_field(d, "test", entry);
        std::string contraction = str_field(d, "contraction", entry);
        auto tr = trial_from_string(trial);
        auto te = test_from_string(test);
        auto co = contraction_from_string(contraction);
        if (!tr) fail(entry, "unknown trial operation '" + trial + "'");
        if (!te) fail(entry, "unknown test operation '" + test + "'");
        if (!co) fail(entry, "unknown contraction '" + contraction + "'");
        wf.trial = *tr;
        wf.test = *te;
        wf.contraction = *co;
        e.descriptor = wf;
      }

      if (k.contains("coefficient")) {
        const Json& c = k.at("coefficient");
        if (!c.is_object()) fail(entry, "'coefficient' must be an object");
        std::string rule = str_field(c, "rule", entry);
        if (rule == "none") {
          e.coefficient.kind = CoefficientRule::Kind::None;
        } else if (rule == "from_param") {
          e.coefficient.kind = CoefficientRule::Kind::FromParam;
          e.coefficient.param = str_field(c, "param", entry);
        } else if (rule == "from_material") {
          e.coefficient.kind = CoefficientRule::Kind::FromMaterial;
          if (c.contains("param")) e.coefficient.param = str_field(c, "param", entry);
          if (c.contains("default_property"))
            e.coefficient.default_property = str_field(c, "default_property", entry);
          if (e.coefficient.param.empty() && e.coefficient.default_property.empty())
            fail(entry, "from_material rule needs a param or default_property");
        } else {
          fail(entry, "unknown coefficient rule '" + rule + "'");
        }
      }

      if (k.contains("severity")) {
        if (!k.at("severity").is_number() || !valid_severity(k.at("severity").get<double>()))
          fail(entry, "severity outside the admissible set");
        e.severity = k.at("severity").get<double>();
      } else if (auto it = reg.term_severities.find(e.op); it != reg.term_severities.end()) {
        e.severity = it->second;
      } else {
        e.severity = default_term_severity(e.op);
      }

      if (reg.kernels.count(e.kernel_class))
        fail(entry, "duplicate kernel class");
      reg.kernels.emplace(e.kernel_class, std::move(e));
    }
  }

  if (doc.contains("bcs")) {
    const Json& bcs = doc.at("bcs");
    if (!bcs.is_array()) fail("bcs", "expected an array");
    for (const Json& b : bcs) {
      if (!b.is_object()) fail("bcs", "expected entry objects");
      BcMappingEntry e;
      e.bc_class = str_field(b, "class", "bcs[]");
      const std::string& entry = e.bc_class;
      std::string ty = str_field(b, "bc_type", entry);
      auto parsed = bc_type_from_string(ty);
      if (!parsed) fail(entry, "unknown bc_type '" + ty + "'");
      e.bc_type = *parsed;
      e.value = parse_value_rule(b, entry);
      if (b.contains("coeff_params")) {
        const Json& cp = b.at("coeff_params");
        if (!cp.is_array()) fail(entry, "'coeff_params' must be an array");
        for (const Json& p : cp) {
          if (!p.is_string()) fail(entry, "'coeff_params' entries must be strings");
          e.coeff_params.push_back(p.get<std::string>());
        }
      }
      if (reg.bcs.count(e.bc_class)) fail(entry, "duplicate bc class");
      reg.bcs.emplace(e.bc_class, std::move(e));
    }
  }

  if (doc.contains("ics")) {
    const Json& ics = doc.at("ics");
    if (!ics.is_array()) fail("ics", "expected an array");
    for (const Json& n : ics) {
      if (!n.is_object()) fail("ics", "expected entry objects");
      IcMappingEntry e;
      e.ic_class = str_field(n, "class", "ics[]");
      const std::string& entry = e.ic_class;
      std::string ty = str_field(n, "ic_type", entry);
      auto parsed = ic_type_from_string(ty);
      if (!parsed) fail(entry, "unknown ic_type '" + ty + "'");
      e.ic_type = *parsed;
      e.value = parse_value_rule(n, entry);
      if (reg.ics.count(e.ic_class)) fail(entry, "duplicate ic class");
      reg.ics.emplace(e.ic_class, std::move(e));
    }
  }

  // Cross-entry consistency: one equivalence class, one operator; one
  // operator, one severity.
  std::map<std::string, OperatorType> eq_ops;
  std::map<OperatorType, double> op_sev;
  for (const auto& [cls, e] : reg.kernels) {
    if (auto it = eq_ops.find(e.equivalence_class); it != eq_ops.end()) {
      if (it->second != e.op)
        fail(cls, "equivalence class '" + e.equivalence_class + "' mixes operators");
    } else {
      eq_ops.emplace(e.equivalence_class, e.op);
    }
    if (auto it = op_sev.find(e.op); it != op_sev.end()) {
      if (it->second != e.severity)
        fail(cls, "inconsistent severity for operator '" + std::string(to_string(e.op)) + "'");
    } else {
      op_sev.emplace(e.op, e.severity);
    }
  }

  return reg;
}

MappingRegistry load_registry_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(path, "cannot open registry file");
  std::ostringstream buf;
  buf << in.rdbuf();
  return load_registry(buf.str());
}

bool descriptor_equivalent(const WeakFormDescriptor& a, const WeakFormDescriptor& b) {
  return a == b;
}

double severity_for(const MappingRegistry& reg, CheckpointKind kind,
                    std::optional<OperatorType> op) {
  if (kind == CheckpointKind::term_missing || kind == CheckpointKind::term_extra) {
    OperatorType o = op.value_or(OperatorType::diffusion);
    if (auto it = reg.term_severities.find(o); it != reg.term_severities.end())
      return it->second;
    return default_term_severity(o);
  }
  if (auto it = reg.checkpoint_severities.find(kind); it != reg.checkpoint_severities.end())
    return it->second;
  return default_checkpoint_severity(kind);
}

} // namespace pde
