#include "tdpkit/serialize.hpp"

namespace tdp::io {

Json field_json(const Field& f) {
  switch (f.kind()) {
    case FieldKind::rational: return {{"kind", "rational"}};
    case FieldKind::prime: return {{"kind", "prime"}, {"p", f.characteristic()}};
    case FieldKind::quadratic_ext:
      return {{"kind", "quadratic_ext"}, {"base", field_json(f.base())}, {"delta", f.delta().to_string()}};
  }
  return nullptr;
}

Field field_from_json(const Json& j) {
  if (!j.is_object()) fail(ErrorKind::Parse, "field descriptor must be an object");
  auto kind = j.find("kind");
  if (kind == j.end() || !kind->is_string()) fail(ErrorKind::Parse, "field descriptor needs a string \"kind\"");
  const std::string& k = kind->get_ref<const std::string&>();
  if (k == "rational") return Field::rational();
  if (k == "prime") {
    auto p = j.find("p");
    if (p == j.end() || !p->is_number_unsigned()) fail(ErrorKind::Parse, "prime field needs a positive integer \"p\"");
    return Field::prime(p->get<std::uint64_t>());
  }
  if (k == "quadratic_ext") {
    auto base = j.find("base");
    auto delta = j.find("delta");
    if (base == j.end() || delta == j.end() || !delta->is_string())
      fail(ErrorKind::Parse, "quadratic_ext needs \"base\" and a string \"delta\"");
    Field b = field_from_json(*base);
    return Field::quadratic_extension(parse_scalar(delta->get<std::string>(), b));
  }
  fail(ErrorKind::Parse, "unknown field kind \"" + k + "\"");
}

Field field_from_flag(const std::string& text) {
  if (text == "rational" || text == "Q") return Field::rational();
  std::string digits;
  if (text.rfind("gf:", 0) == 0) digits = text.substr(3);
  if (text.rfind("GF(", 0) == 0 && text.back() == ')') digits = text.substr(3, text.size() - 4);
  if (digits.empty() || digits.size() > 18 || digits.find_first_not_of("0123456789") != std::string::npos)
    fail(ErrorKind::Parse, "field must be rational or gf:p, got \"" + text + "\"");
  return Field::prime(std::stoull(digits));
}

Json scalars_json(const std::vector<FieldElement>& xs) {
  Json out = Json::array();
  for (const auto& x : xs) out.push_back(x.to_string());
  return out;
}

Json matrix_json(const ExactMatrix& m) {
  Json out = Json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) out.push_back(scalars_json(m.row(r)));
  return out;
}

namespace {

template <class T>
Json optional_json(const std::optional<T>& x) {
  if (!x) return nullptr;
  return *x;
}

Json optional_scalar(const std::optional<FieldElement>& x) {
  if (!x) return nullptr;
  return x->to_string();
}

Json witness_json(const ConditionResult& c) {
  Json w = Json::object();
  if (!c.witness_indices.empty()) w["eigenvalue_indices"] = c.witness_indices;
  if (c.witness_subspace) {
    Json basis = Json::array();
    for (const auto& v : c.witness_subspace->basis()) basis.push_back(scalars_json(v));
    w["subspace"] = {{"dim", c.witness_subspace->dim()}, {"basis", basis}};
  }
  return w;
}

}  // namespace

Json validation_json(const ValidationReport& r) {
  Json conditions, details, witnesses = Json::object();
  for (auto [c, name] : {std::pair{&r.diagonalizable, "i"}, std::pair{&r.standard_a, "ii"},
                         std::pair{&r.standard_a_star, "iii"}, std::pair{&r.irreducible, "iv"}}) {
    conditions[name] = to_string(c->verdict);
    details[name] = c->detail;
    Json w = witness_json(*c);
    if (!w.empty()) witnesses[name] = w;
  }
  return {{"conditions", conditions},
          {"details", details},
          {"witnesses", witnesses},
          {"diameter", optional_json(r.diameter)},
          {"dual_diameter", optional_json(r.dual_diameter)},
          {"diameters_agree", r.diameters_agree()},
          {"shape", r.shape},
          {"sharp", optional_json(r.sharp)},
          {"eigenvalues", scalars_json(r.eigenvalues)},
          {"dual_eigenvalues", scalars_json(r.dual_eigenvalues)},
          {"passed", r.passed()}};
}

Json parameters_json(const ParameterArray& p) {
  return {{"d", p.d},
          {"theta", scalars_json(p.theta)},
          {"theta_star", scalars_json(p.theta_star)},
          {"zeta", scalars_json(p.zeta)}};
}

Json conditions_json(const ConditionReport& r) {
  Json out;
  for (auto [c, name] : {std::pair{&r.distinct, "i"}, std::pair{&r.ratios, "ii"}, std::pair{&r.split, "iii"}})
    out[name] = {{"verdict", to_string(c->verdict)}, {"detail", c->detail}};
  out["common_ratio"] = optional_scalar(r.common_ratio);
  out["sum"] = r.sum.to_string();
  out["passed"] = r.passed();
  return out;
}

Json qracah_json(const QRacahParameters& p) {
  return {{"d", p.d},
          {"field", field_json(p.field())},
          {"q", p.q.to_string()},
          {"a", p.a.to_string()},
          {"b", p.b.to_string()},
          {"c", p.c.to_string()},
          {"a_star", p.a_star.to_string()},
          {"b_star", p.b_star.to_string()},
          {"c_star", p.c_star.to_string()},
          {"beta", p.beta().to_string()}};
}

Json generated_json(const GeneratedSequences& g) {
  Json out{{"theta", scalars_json(g.theta)}, {"theta_star", scalars_json(g.theta_star)}, {"degenerate", nullptr}};
  if (g.degenerate)
    out["degenerate"] = {{"sequence", g.degenerate->dual ? "theta_star" : "theta"},
                         {"i", g.degenerate->i},
                         {"j", g.degenerate->j}};
  return out;
}

Json fit_json(const FitResult& r) {
  Json sols = Json::array();
  for (const auto& p : r.solutions) sols.push_back(qracah_json(p));
  return {{"status", to_string(r.status)}, {"reason", r.reason},         {"detail", r.detail},
          {"beta", optional_scalar(r.beta)}, {"solutions", sols}, {"free_parameters", r.free_parameters}};
}

Json mu_json(const MuWitnessReport& r) {
  return {{"polynomial", r.polynomial.to_string()},
          {"xi", scalars_json(r.xi)},
          {"commuting", r.commuting},
          {"scalar_action_verified", r.scalar_action_verified},
          {"scalar", r.scalar.to_string()},
          {"g_value", optional_scalar(r.g_value)},
          {"h_value", optional_scalar(r.h_value)}};
}

Json system_json(const TriDiagonalSystem& s) {
  return {{"d", s.d},
          {"theta", scalars_json(s.theta)},
          {"theta_star", scalars_json(s.theta_star)},
          {"shape", s.rho},
          {"sharp", s.sharp()}};
}

Json instance_json(const CorpusInstance& inst) {
  Json out{{"key", inst.key},
           {"field", field_json(inst.field)},
           {"d", inst.d},
           {"origin", inst.origin},
           {"theta", scalars_json(inst.theta)},
           {"theta_star", scalars_json(inst.theta_star)},
           {"phi", scalars_json(inst.phi)},
           {"valid", inst.valid},
           {"sharp", inst.sharp},
           {"qracah_fit_ok", inst.qracah_fit_ok},
           {"reason", inst.reason}};
  if (inst.qracah) out["qracah"] = qracah_json(*inst.qracah);
  if (inst.A) out["A"] = matrix_json(*inst.A);
  if (inst.Astar) out["Astar"] = matrix_json(*inst.Astar);
  if (inst.system) out["system"] = system_json(*inst.system);
  if (inst.parameters) out["parameters"] = parameters_json(*inst.parameters);
  return out;
}

Json manifest_json(const std::vector<CorpusInstance>& instances, std::uint64_t seed) {
  Json list = Json::array();
  for (const auto& inst : instances)
    list.push_back({{"key", inst.key},
                    {"file", "instances/" + inst.key + ".json"},
                    {"valid", inst.valid},
                    {"sharp", inst.sharp},
                    {"qracah_fit_ok", inst.qracah_fit_ok}});
  Json out = envelope("corpus", seed);
  out["instances"] = list;
  return out;
}

Json envelope(const std::string& command, std::uint64_t seed) {
  return {{"tool", "tdpkit"}, {"version", kVersion}, {"command", command}, {"seed", seed}};
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace tdp::io
