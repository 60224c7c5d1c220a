#include "ringlab/json_io.hpp"

#include <cmath>
#include <stdexcept>

namespace ringlab::json_io {
namespace {

json complex_to_json(const Complex& z) { return json::array({z.real(), z.imag()}); }

Complex complex_from_json(const json& j) {
  if (!j.is_array() || j.size() != 2)
    throw std::invalid_argument("expected a complex value as [re, im]");
  return {j[0].get<double>(), j[1].get<double>()};
}

json finite_or_null(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

}  // namespace

json to_json(const profiles::SingularProfile& profile) {
  return std::visit(
      [](const auto& p) -> json {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, profiles::ExplicitList>)
          return {{"kind", "explicit"}, {"values", p.values}};
        else if constexpr (std::is_same_v<T, profiles::Uniform>)
          return {{"kind", "uniform"}, {"lo", p.lo}, {"hi", p.hi}};
        else if constexpr (std::is_same_v<T, profiles::QuarterCircle>)
          return {{"kind", "quarter_circle"}};
        else
          return {{"kind", "point_mass"}, {"c", p.c}};
      },
      profile);
}

profiles::SingularProfile profile_from_json(const json& j) {
  const auto kind = j.at("kind").get<std::string>();
  profiles::SingularProfile profile;
  if (kind == "explicit")
    profile = profiles::ExplicitList{j.at("values").get<std::vector<double>>()};
  else if (kind == "uniform")
    profile = profiles::Uniform{j.at("lo").get<double>(), j.at("hi").get<double>()};
  else if (kind == "quarter_circle")
    profile = profiles::QuarterCircle{};
  else if (kind == "point_mass")
    profile = profiles::PointMass{j.at("c").get<double>()};
  else
    throw std::invalid_argument("unknown profile kind: " + kind);
  profiles::validate(profile);
  return profile;
}

json to_json(const jordan::JordanSpec& spec) {
  json groups = json::array();
  for (const auto& group : spec.groups()) {
    json blocks = json::array();
    for (const auto& cls : group.blocks) blocks.push_back(json::array({cls.p, cls.beta}));
    groups.push_back({{"theta", complex_to_json(group.theta)}, {"blocks", blocks}});
  }
  return {{"groups", groups}};
}

jordan::JordanSpec spec_from_json(const json& j) {
  std::vector<jordan::Group> groups;
  for (const auto& jg : j.at("groups")) {
    jordan::Group group;
    group.theta = complex_from_json(jg.at("theta"));
    for (const auto& jb : jg.at("blocks")) {
      if (!jb.is_array() || jb.size() != 2)
        throw std::invalid_argument("block entries must be [p, beta]");
      group.blocks.push_back({jb[0].get<int>(), jb[1].get<int>()});
    }
    groups.push_back(std::move(group));
  }
  return jordan::JordanSpec(std::move(groups));
}

json basis_to_json(const jordan::BasisSpec& basis) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < basis.q().rows(); ++i) {
    json row = json::array();
    for (Eigen::Index k = 0; k < basis.q().cols(); ++k) row.push_back(complex_to_json(basis.q()(i, k)));
    rows.push_back(std::move(row));
  }
  return rows;
}

jordan::BasisSpec basis_from_json(const json& j, int r) {
  if (j.is_string()) {
    if (j.get<std::string>() == "identity") return jordan::BasisSpec::identity(r);
    throw std::invalid_argument("basis: expected \"identity\" or a matrix");
  }
  if (!j.is_array() || static_cast<int>(j.size()) != r)
    throw std::invalid_argument("basis: row count must match the spec rank");
  ComplexMatrix q(r, r);
  for (int i = 0; i < r; ++i) {
    const auto& row = j[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<int>(row.size()) != r)
      throw std::invalid_argument("basis: matrix must be square");
    for (int k = 0; k < r; ++k) q(i, k) = complex_from_json(row[static_cast<std::size_t>(k)]);
  }
  return jordan::BasisSpec(std::move(q));
}

json to_json(const mc::ExperimentConfig& config) {
  json out;
  if (config.profile)
    out["profile"] = to_json(*config.profile);
  else
    out["ginibre"] = true;
  out["form"] = config.form == randmat::Form::UT ? "ut" : "utv";
  out["spec"] = to_json(config.spec);
  out["q"] = basis_to_json(config.q);
  out["n"] = config.n;
  out["trials"] = config.trials;
  out["base_seed"] = config.base_seed;
  if (config.epsilon) out["epsilon"] = *config.epsilon;
  if (config.delta) out["delta"] = *config.delta;
  json outputs;
  if (config.outputs.summary_json) outputs["summary"] = *config.outputs.summary_json;
  if (config.outputs.trials_csv) outputs["trials_csv"] = *config.outputs.trials_csv;
  if (config.outputs.svg) outputs["svg"] = *config.outputs.svg;
  if (!outputs.empty()) out["outputs"] = outputs;
  if (config.jobs > 0) out["jobs"] = config.jobs;
  return out;
}

mc::ExperimentConfig config_from_json(const json& j) {
  auto spec = spec_from_json(j.at("spec"));
  const int r = spec.r();
  auto basis = j.contains("q") ? basis_from_json(j.at("q"), r) : jordan::BasisSpec::identity(r);

  std::optional<profiles::SingularProfile> profile;
  if (j.contains("profile")) profile = profile_from_json(j.at("profile"));
  if (!profile && !(j.contains("ginibre") && j.at("ginibre").get<bool>()))
    throw std::invalid_argument("config: needs \"profile\" or \"ginibre\": true");

  mc::ExperimentConfig config{
      .profile = std::move(profile),
      .form = randmat::Form::UT,
      .spec = std::move(spec),
      .q = std::move(basis),
      .n = j.at("n").get<int>(),
      .trials = j.at("trials").get<int>(),
      .base_seed = j.value("base_seed", std::uint64_t{0}),
      .epsilon = std::nullopt,
      .delta = std::nullopt,
      .outputs = {},
      .jobs = j.value("jobs", 0),
  };
  if (j.contains("form")) {
    const auto form = j.at("form").get<std::string>();
    if (form == "ut")
      config.form = randmat::Form::UT;
    else if (form == "utv")
      config.form = randmat::Form::UTV;
    else
      throw std::invalid_argument("config: form must be \"ut\" or \"utv\"");
  }
  if (j.contains("epsilon")) config.epsilon = j.at("epsilon").get<double>();
  if (j.contains("delta")) config.delta = j.at("delta").get<double>();
  if (j.contains("outputs")) {
    const auto& outputs = j.at("outputs");
    if (outputs.contains("summary")) config.outputs.summary_json = outputs.at("summary").get<std::string>();
    if (outputs.contains("trials_csv")) config.outputs.trials_csv = outputs.at("trials_csv").get<std::string>();
    if (outputs.contains("svg")) config.outputs.svg = outputs.at("svg").get<std::string>();
  }
  return config;
}

json to_json(const mc::SummaryStats& stats) {
  json groups = json::array();
  for (const auto& g : stats.groups) {
    json jg{{"theta", complex_to_json(g.theta)},
            {"z_eligible", g.z_eligible},
            {"samples", g.samples},
            {"E_abs_Z2", finite_or_null(g.e_abs_z2)},
            {"SE_abs_Z2", finite_or_null(g.se_abs_z2)}};
    jg["sigma2_theory"] = g.sigma2_theory ? json(*g.sigma2_theory) : json(nullptr);
    groups.push_back(std::move(jg));
  }
  json pairs = json::array();
  for (const auto& p : stats.pairs) {
    json jp{{"group_a", p.group_a},
            {"group_b", p.group_b},
            {"samples", p.samples},
            {"cross_conj", complex_to_json(p.cross_conj)},
            {"cross_conj_se", finite_or_null(p.cross_conj_se)},
            {"cross_plain", complex_to_json(p.cross_plain)},
            {"cross_plain_se", finite_or_null(p.cross_plain_se)}};
    jp["cross_theory"] = p.cross_theory ? complex_to_json(*p.cross_theory) : json(nullptr);
    pairs.push_back(std::move(jp));
  }
  return {{"n", stats.n},
          {"trials", stats.trials},
          {"failed", stats.failed},
          {"mismatched", stats.mismatched},
          {"expected_outer", stats.expected_outer},
          {"count_success_rate", stats.count_success_rate},
          {"inner_violation_rate", stats.inner_violation_rate},
          {"epsilon", stats.epsilon},
          {"delta", stats.delta},
          {"ring", {{"a", stats.ring.a}, {"b", stats.ring.b}}},
          {"se_defined", stats.se_defined},
          {"groups", groups},
          {"pairs", pairs}};
}

json to_json(const mc::ScalingResult& result) {
  json classes = json::array();
  for (const auto& c : result.classes) {
    classes.push_back({{"group", c.group},
                       {"rate_class", c.rate_class},
                       {"p", c.p},
                       {"slope", c.slope},
                       {"slope_stderr", finite_or_null(c.slope_stderr)},
                       {"expected_slope", -1.0 / (2.0 * c.p)},
                       {"medians", c.medians}});
  }
  return {{"n_values", result.n_values}, {"classes", classes}};
}

namespace {

bool type_matches(const json& value, const std::string& type) {
  if (type == "object") return value.is_object();
  if (type == "array") return value.is_array();
  if (type == "string") return value.is_string();
  if (type == "number") return value.is_number();
  if (type == "integer") return value.is_number_integer() || value.is_number_unsigned();
  if (type == "boolean") return value.is_boolean();
  if (type == "null") return value.is_null();
  throw std::runtime_error("schema: unsupported type name " + type);
}

}  // namespace

void validate_schema(const json& value, const json& schema, const std::string& path) {
  if (schema.contains("type")) {
    const auto& type = schema.at("type");
    bool ok = false;
    if (type.is_string())
      ok = type_matches(value, type.get<std::string>());
    else
      for (const auto& t : type) ok = ok || type_matches(value, t.get<std::string>());
    if (!ok) throw std::runtime_error("schema: type mismatch at " + path);
  }
  if (schema.contains("enum")) {
    bool ok = false;
    for (const auto& candidate : schema.at("enum")) ok = ok || candidate == value;
    if (!ok) throw std::runtime_error("schema: value not in enum at " + path);
  }
  if (schema.contains("minimum") && value.is_number() &&
      value.get<double>() < schema.at("minimum").get<double>())
    throw std::runtime_error("schema: below minimum at " + path);
  if (schema.contains("required")) {
    for (const auto& key : schema.at("required"))
      if (!value.contains(key.get<std::string>()))
        throw std::runtime_error("schema: missing required key " + key.get<std::string>() + " at " + path);
  }
  if (schema.contains("properties") && value.is_object()) {
    for (const auto& [key, sub] : schema.at("properties").items())
      if (value.contains(key)) validate_schema(value.at(key), sub, path + "." + key);
  }
  if (schema.contains("items") && value.is_array()) {
    for (std::size_t i = 0; i < value.size(); ++i)
      validate_schema(value[i], schema.at("items"), path + "[" + std::to_string(i) + "]");
  }
}

}  // namespace ringlab::json_io
