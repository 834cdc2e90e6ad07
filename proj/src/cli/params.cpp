#include "ssrqec/cli/params.hpp"

#include "ssrqec/hilbert_io.hpp"
#include "ssrqec/klcore.hpp"
#include "ssrqec/toriccode.hpp"

#include <cmath>
#include <set>

namespace ssrqec::cli {

namespace {

ParamSpec integer(std::string name, json def, std::string desc, std::optional<double> lo = std::nullopt,
                  std::optional<double> hi = std::nullopt) {
  return {std::move(name), ParamType::integer, std::move(desc), std::move(def), lo, hi, {}};
}
ParamSpec number(std::string name, json def, std::string desc, std::optional<double> lo = std::nullopt,
                 std::optional<double> hi = std::nullopt) {
  return {std::move(name), ParamType::number, std::move(desc), std::move(def), lo, hi, {}};
}
ParamSpec choice(std::string name, json def, std::string desc, std::vector<std::string> choices) {
  return {std::move(name), ParamType::string, std::move(desc), std::move(def), {}, {}, std::move(choices)};
}
ParamSpec optional_number(std::string name, std::string desc, std::optional<double> lo = std::nullopt) {
  ParamSpec p = number(std::move(name), nullptr, std::move(desc), lo);
  p.optional = true;
  return p;
}

const std::vector<std::string> kConstantNames = {"lambda_qcd", "m_pi", "m_w", "b_scale", "m_u",
                                                 "m_d",        "lambda1", "lambda2", "epsilon", "f_pi"};

std::vector<ExperimentSpec> build_tables() {
  const json empty_object = json::object();
  return {
      {"kl-check",
       "Knill-Laflamme check of a code against an error set given in the matrix interchange format",
       false,
       {{"code", ParamType::array, "codewords, each {dims, re, im}", nullptr, {}, {}, {}},
        {"errors", ParamType::array, "error operators, each {dims, re, im}", nullptr, {}, {}, {}},
        number("tol", 1e-10, "violation tolerance", 0.0),
        choice("mode", "full", "full KL or detection-only matrix elements", {"full", "detection"})}},
      {"rotor",
       "Two-mode rotor code: phase flips, recovery by measuring B over every outcome",
       false,
       {integer("q_max", 6, "charge truncation", 1, 50),
        integer("W", 2, "codeword window", 0),
        choice("profile", "gaussian", "coefficient profile", {"gaussian", "uniform"}),
        number("sigma", 0.0, "gaussian width; <= 0 selects W/3"),
        integer("q1", 0, "first logical charge"),
        integer("q2", 1, "second logical charge"),
        number("a0", 0.6, "logical amplitude on q1"),
        number("b0", 0.8, "logical amplitude on q2"),
        choice("error_register", "B", "register the phase flips act on", {"A", "B"}),
        {"error_charges", ParamType::integer_list, "charges q of the applied flips Z_q", json::array(), {}, {}, {}},
        integer("n_g", 0, "phase samples for the reference-frame simulation; 0 disables it", 0)}},
      {"qcd-rates",
       "Flip-suppression rate models versus temperature and energy",
       false,
       {{"constants", ParamType::object, "overrides of the physical constants", empty_object, {}, {}, {}},
        number("t_min", 1.0, "lowest temperature (MeV)", 0.0),
        number("t_max", 330.0, "highest temperature (MeV)", 0.0),
        number("e_min", 1.0, "lowest energy (MeV)", 0.0),
        number("e_max", 330.0, "highest energy (MeV)", 0.0),
        integer("points", 50, "log-spaced samples per sweep", 2, 100000)}},
      {"qcd-code",
       "Proton/neutron repetition code: scattering branches end to end and Monte Carlo logical rates",
       true,
       {{"n", ParamType::integer_or_list, "odd code lengths", json::array({3, 5}), 1, 15, {}},
        {"p", ParamType::number_or_list, "per-particle flip probabilities", json::array({0.2, 0.1, 0.05}), 0, 1, {}},
        optional_number("temperature", "derive p = exp(-epsilon/T) instead of listing p (MeV)", 0.0),
        integer("trials", 100000, "Monte Carlo trials per (n, p)", 1),
        integer("grid", 2, "momentum grid K", 0, 64),
        number("profile_r", 0.5, "decay ratio of the k' != 0 amplitudes", 0.0, 0.999999),
        number("lambda1", 0.5, "phi1 coupling", -1.0, 1.0),
        number("lambda2", 0.3, "phi2 coupling", -1.0, 1.0),
        {"constants", ParamType::object, "overrides of the physical constants", empty_object, {}, {}, {}}}},
      {"xsec",
       "Total p + phi -> n + pi cross-section over a CM energy range",
       false,
       {number("m_p", 938.3, "proton mass (MeV)", 0.0), number("m_phi", 0.0, "scalar mass (MeV)", 0.0),
        number("m_n", 938.3, "neutron mass (MeV)", 0.0), number("m_pi", 139.6, "pion mass (MeV)", 0.0),
        number("g1", 0.01, "derivative pion coupling (1/MeV)"), number("g2", 1.0, "pseudoscalar coupling"),
        number("lambda", 1.0, "channel coupling"),
        number("e_min", 1000.0, "lowest CM energy (MeV)", 0.0),
        number("e_max", 1400.0, "highest CM energy (MeV)", 0.0),
        integer("points", 41, "evenly spaced energies", 1, 100000),
        integer("n_theta", 64, "Gauss-Legendre nodes in cos(theta)", 2, 4096),
        number("pole_guard", 1.0, "propagator pole guard (MeV^2)", 0.0)}},
      {"toric",
       "Z_N toric code: ground space, Wilson-loop sectors, KL and SSR checks",
       false,
       {integer("N", 2, "qudit dimension", 2, 16), integer("L", 2, "lattice size", 2, 8),
        integer("max_weight", 1, "largest error weight enumerated", 1),
        number("tol", 1e-9, "KL tolerance", 0.0),
        {"detection_only", ParamType::boolean, "run the detection check instead of full KL", false, {}, {}, {}},
        {"wilson_loop_error", ParamType::boolean, "add the electric x-loop to the error set", false, {}, {}, {}},
        integer("max_errors", 10000, "enumeration cap", 1)}},
  };
}

bool is_integer(const json& v) { return v.is_number_integer() || v.is_number_unsigned(); }

std::string type_name(ParamType t) {
  switch (t) {
    case ParamType::integer: return "integer";
    case ParamType::number: return "number";
    case ParamType::string: return "string";
    case ParamType::boolean: return "boolean";
    case ParamType::integer_or_list: return "integer or non-empty integer array";
    case ParamType::number_or_list: return "number or non-empty number array";
    case ParamType::integer_list: return "integer array";
    case ParamType::array: return "array";
    case ParamType::object: return "object";
  }
  return "unknown";
}

bool type_ok(ParamType t, const json& v) {
  auto all = [&](auto pred) {
    return v.is_array() && !v.empty() && std::all_of(v.begin(), v.end(), pred);
  };
  switch (t) {
    case ParamType::integer: return is_integer(v);
    case ParamType::number: return v.is_number();
    case ParamType::string: return v.is_string();
    case ParamType::boolean: return v.is_boolean();
    case ParamType::integer_or_list: return is_integer(v) || all([](const json& e) { return is_integer(e); });
    case ParamType::number_or_list: return v.is_number() || all([](const json& e) { return e.is_number(); });
    case ParamType::integer_list:
      return v.is_array() && std::all_of(v.begin(), v.end(), [](const json& e) { return is_integer(e); });
    case ParamType::array: return v.is_array();
    case ParamType::object: return v.is_object();
  }
  return false;
}

json scalar_schema(const ParamSpec& p, bool element) {
  json s;
  const bool integral = p.type == ParamType::integer || p.type == ParamType::integer_or_list ||
                        p.type == ParamType::integer_list;
  s["type"] = integral ? "integer" : "number";
  if (p.minimum && element) s["minimum"] = *p.minimum;
  if (p.maximum && element) s["maximum"] = *p.maximum;
  return s;
}

json param_schema(const ParamSpec& p) {
  json s;
  switch (p.type) {
    case ParamType::integer:
    case ParamType::number: s = scalar_schema(p, true); break;
    case ParamType::string:
      s["type"] = "string";
      if (!p.choices.empty()) s["enum"] = p.choices;
      break;
    case ParamType::boolean: s["type"] = "boolean"; break;
    case ParamType::integer_or_list:
    case ParamType::number_or_list:
      s["oneOf"] = json::array(
          {scalar_schema(p, true), {{"type", "array"}, {"minItems", 1}, {"items", scalar_schema(p, true)}}});
      break;
    case ParamType::integer_list: s = {{"type", "array"}, {"items", {{"type", "integer"}}}}; break;
    case ParamType::array: s["type"] = "array"; break;
    case ParamType::object: s["type"] = "object"; break;
  }
  s["description"] = p.description;
  if (!p.default_value.is_null()) s["default"] = p.default_value;
  return s;
}

void check_range(const ParamSpec& p, const json& v, const std::string& path, std::vector<Diagnostic>& out) {
  auto check = [&](double x) {
    if ((p.minimum && x < *p.minimum) || (p.maximum && x > *p.maximum))
      out.push_back({DiagnosticKind::schema, path,
                     "value " + json(x).dump() + " outside [" + (p.minimum ? json(*p.minimum).dump() : "-inf") +
                         ", " + (p.maximum ? json(*p.maximum).dump() : "inf") + "]"});
  };
  if (v.is_number()) check(v.get<double>());
  if (v.is_array() && p.type != ParamType::array)
    for (const auto& e : v)
      if (e.is_number()) check(e.get<double>());
  if (v.is_string() && !p.choices.empty() &&
      std::find(p.choices.begin(), p.choices.end(), v.get<std::string>()) == p.choices.end())
    out.push_back({DiagnosticKind::schema, path, "value must be one of the listed choices"});
}

std::vector<long long> as_int_list(const json& v) {
  std::vector<long long> out;
  if (v.is_array())
    for (const auto& e : v) out.push_back(e.get<long long>());
  else
    out.push_back(v.get<long long>());
  return out;
}

void check_constants(const json& c, const std::string& path, std::vector<Diagnostic>& out) {
  for (const auto& [key, value] : c.items()) {
    if (std::find(kConstantNames.begin(), kConstantNames.end(), key) == kConstantNames.end())
      out.push_back({DiagnosticKind::schema, path + "." + key, "unknown physical constant"});
    else if (!value.is_number())
      out.push_back({DiagnosticKind::schema, path + "." + key, "must be a number"});
    else if (key != "lambda1" && key != "lambda2" && !(value.get<double>() > 0.0))
      out.push_back({DiagnosticKind::schema, path + "." + key, "energy scales must be positive"});
  }
}

void semantic_checks(const std::string& name, const json& p, const json& raw_params, std::vector<Diagnostic>& out) {
  const auto schema = [&](std::string path, std::string msg) {
    out.push_back({DiagnosticKind::schema, "params." + path, std::move(msg)});
  };
  const auto guard = [&](std::string path, std::string msg) {
    out.push_back({DiagnosticKind::guard, "params." + path, std::move(msg)});
  };

  if (name == "kl-check") {
    try {
      std::vector<StateVector> code;
      for (const auto& c : p["code"]) code.push_back(state_from_json(c));
      std::vector<Operator> ops;
      for (const auto& e : p["errors"]) {
        const json& dims = e.at("dims");
        Index d = 1;
        for (const auto& x : dims) d *= x.get<Index>();
        if (d > 4096) {
          guard("errors", "operator dimension above 4096 exceeds the dense interchange guard");
          return;
        }
        ops.push_back(operator_from_json(e));
      }
      const CodeSpace cs(std::move(code));
      const ErrorSet es(std::move(ops));
      if (!(cs.space() == es.space())) schema("errors", "code and error dimensions differ");
    } catch (const std::exception& ex) {
      schema("code", ex.what());
    }
  } else if (name == "rotor") {
    const int q_max = p["q_max"], w = p["W"], q1 = p["q1"], q2 = p["q2"], n_g = p["n_g"];
    if (q1 == q2) schema("q2", "logical charges must differ");
    for (int q : {q1, q2})
      if (std::abs(q) + w > q_max) schema("W", "window leaves the charge truncation: need |q| + W <= q_max");
    const double a0 = p["a0"], b0 = p["b0"];
    if (std::abs(a0 * a0 + b0 * b0 - 1.0) > 1e-9) schema("a0", "a0^2 + b0^2 must equal 1");
    for (const auto& q : p["error_charges"])
      if (std::abs(q.get<long long>()) > q_max) schema("error_charges", "charge outside the truncation");
    if (n_g != 0 && n_g < 2 * q_max + 1) schema("n_g", "n_g must be 0 or at least the rotor dimension");
  } else if (name == "qcd-rates") {
    check_constants(p["constants"], "params.constants", out);
    if (p["t_min"].get<double>() > p["t_max"].get<double>()) schema("t_min", "t_min exceeds t_max");
    if (p["e_min"].get<double>() > p["e_max"].get<double>()) schema("e_min", "e_min exceeds e_max");
  } else if (name == "qcd-code") {
    check_constants(p["constants"], "params.constants", out);
    for (long long n : as_int_list(p["n"]))
      if (n % 2 == 0)
        schema("n", "n must be odd: even-length repetition codes are rejected at encode time since majority "
                    "votes could tie");
    if (p.contains("temperature") && raw_params.contains("p"))
      schema("temperature", "give either p or temperature, not both");
  } else if (name == "xsec") {
    if (!(p["e_min"].get<double>() > p["m_p"].get<double>() + p["m_phi"].get<double>()))
      schema("e_min", "e_min must exceed m_p + m_phi (valid initial state)");
    if (p["e_min"].get<double>() > p["e_max"].get<double>()) schema("e_min", "e_min exceeds e_max");
  } else if (name == "toric") {
    const toric::TorusLattice lat(p["L"].get<int>(), p["N"].get<int>());
    const std::uint64_t dim = lat.hilbert_dim();
    if (dim == 0 || dim > toric::kGroundSpaceDimGuard) {
      guard("L", "N^(2 L^2) exceeds the 2^20 ground-space guard");
      return;
    }
    const std::uint64_t count =
        toric::count_paulis(lat, p["max_weight"].get<int>()) + (p["wilson_loop_error"].get<bool>() ? 1 : 0);
    if (count > p["max_errors"].get<std::uint64_t>())
      guard("max_weight", "error enumeration exceeds max_errors");
    else if (count > toric::ToricKLOptions{}.max_entries / dim)
      guard("max_weight", "error operators exceed the sparse storage guard");
  }
}

}  // namespace

const std::vector<ExperimentSpec>& experiments() {
  static const std::vector<ExperimentSpec> tables = build_tables();
  return tables;
}

const ExperimentSpec* find_experiment(const std::string& name) {
  for (const auto& e : experiments())
    if (e.name == name) return &e;
  return nullptr;
}

std::string to_string(DiagnosticKind k) { return k == DiagnosticKind::schema ? "schema" : "guard"; }

json ResolvedConfig::to_json() const {
  json j{{"experiment", experiment}, {"output_dir", output_dir}, {"params", params}};
  if (seed) j["seed"] = *seed;
  return j;
}

bool Validation::has_schema_error() const {
  return std::any_of(diagnostics.begin(), diagnostics.end(),
                     [](const Diagnostic& d) { return d.kind == DiagnosticKind::schema; });
}

json config_schema() {
  json variants = json::array();
  for (const auto& e : experiments()) {
    json props = json::object();
    json required = json::array();
    for (const auto& p : e.params) {
      props[p.name] = param_schema(p);
      if (p.required()) required.push_back(p.name);
    }
    json base = {{"experiment", {{"const", e.name}}},
                 {"seed", {{"type", "integer"}, {"minimum", 0}, {"maximum", 18446744073709551615ULL}}},
                 {"output_dir", {{"type", "string"}, {"default", "."}}}};
    json top_required = json::array({"experiment"});
    if (e.seed_required) top_required.push_back("seed");

    json nested = {{"type", "object"}, {"additionalProperties", false}, {"properties", base}};
    nested["properties"]["params"] = {{"type", "object"}, {"additionalProperties", false}, {"properties", props}};
    if (!required.empty()) nested["properties"]["params"]["required"] = required;
    nested["required"] = top_required;
    nested["required"].push_back("params");

    json flat = {{"type", "object"}, {"additionalProperties", false}, {"properties", base}};
    for (const auto& [k, v] : props.items()) flat["properties"][k] = v;
    flat["required"] = top_required;
    for (const auto& r : required) flat["required"].push_back(r);

    variants.push_back({{"title", e.name}, {"description", e.description}, {"oneOf", json::array({nested, flat})}});
  }
  return {{"$schema", "https://json-schema.org/draft/2020-12/schema"},
          {"title", "ssrqec experiment config"},
          {"oneOf", variants}};
}

Validation validate_config(const json& config) {
  Validation v;
  auto& out = v.diagnostics;
  if (!config.is_object()) {
    out.push_back({DiagnosticKind::schema, "", "config must be a JSON object"});
    return v;
  }
  if (!config.contains("experiment") || !config["experiment"].is_string()) {
    out.push_back({DiagnosticKind::schema, "experiment", "missing or non-string experiment"});
    return v;
  }
  const ExperimentSpec* spec = find_experiment(config["experiment"]);
  if (!spec) {
    out.push_back({DiagnosticKind::schema, "experiment", "unknown experiment"});
    return v;
  }

  ResolvedConfig rc;
  rc.experiment = spec->name;
  rc.output_dir = ".";
  const std::set<std::string> top = {"experiment", "seed", "output_dir", "params"};
  const bool nested = config.contains("params");
  json raw = json::object();
  for (const auto& [key, value] : config.items()) {
    if (key == "seed") {
      if (!value.is_number_unsigned() && !(value.is_number_integer() && value.get<long long>() >= 0))
        out.push_back({DiagnosticKind::schema, "seed", "seed must be a non-negative 64-bit integer"});
      else
        rc.seed = value.get<std::uint64_t>();
    } else if (key == "output_dir") {
      if (!value.is_string())
        out.push_back({DiagnosticKind::schema, "output_dir", "must be a string"});
      else
        rc.output_dir = value.get<std::string>();
    } else if (key == "params") {
      if (!value.is_object())
        out.push_back({DiagnosticKind::schema, "params", "must be an object"});
      else
        raw = value;
    } else if (!top.contains(key)) {
      if (nested)
        out.push_back({DiagnosticKind::schema, key, "unknown key"});
      else
        raw[key] = value;
    }
  }
  if (spec->seed_required && !config.contains("seed"))
    out.push_back({DiagnosticKind::schema, "seed", "seed is required for this stochastic experiment"});

  json resolved = json::object();
  for (const auto& [key, value] : raw.items()) {
    const auto it = std::find_if(spec->params.begin(), spec->params.end(),
                                 [&](const ParamSpec& p) { return p.name == key; });
    const std::string path = "params." + key;
    if (it == spec->params.end()) {
      out.push_back({DiagnosticKind::schema, path, "unknown key"});
      continue;
    }
    if (!type_ok(it->type, value)) {
      out.push_back({DiagnosticKind::schema, path, "expected " + type_name(it->type)});
      continue;
    }
    check_range(*it, value, path, out);
    resolved[key] = value;
  }
  for (const auto& p : spec->params) {
    if (resolved.contains(p.name)) continue;
    if (p.required())
      out.push_back({DiagnosticKind::schema, "params." + p.name, "required parameter missing"});
    else if (!p.default_value.is_null())
      resolved[p.name] = p.default_value;
  }
  if (!out.empty()) return v;

  semantic_checks(spec->name, resolved, raw, out);
  if (!out.empty()) return v;
  rc.params = std::move(resolved);
  v.config = std::move(rc);
  return v;
}

}  // namespace ssrqec::cli
