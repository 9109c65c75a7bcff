#include "fpsz/config.hpp"

#include <fstream>
#include <set>

#include "fpsz/errors.hpp"

namespace fpsz {

namespace {

using nlohmann::json;

void require_object(const json& j, const std::string& what) {
  if (!j.is_object()) throw ConfigError(what + " must be a JSON object");
}

void check_keys(const json& j, const std::set<std::string>& allowed, const std::string& what) {
  for (const auto& [key, value] : j.items()) {
    if (!allowed.contains(key)) throw ConfigError("unknown key '" + key + "' in " + what);
  }
}

std::string get_string(const json& j, const std::string& key, const std::string& what) {
  if (!j.contains(key)) throw ConfigError(what + " is missing '" + key + "'");
  if (!j[key].is_string()) throw ConfigError("'" + key + "' in " + what + " must be a string");
  return j[key].get<std::string>();
}

Param param_or(const json& params, const std::string& key, Param fallback) {
  if (!params.contains(key)) return fallback;
  try {
    return parse_param(params[key]);
  } catch (const ConfigError& e) {
    throw ConfigError("parameter '" + key + "': " + e.what());
  }
}

Param param_required(const json& params, const std::string& key, const std::string& law) {
  if (!params.contains(key)) throw ConfigError("law '" + law + "' needs parameter '" + key + "'");
  return param_or(params, key, Param(0L));
}

ComplexParam parse_complex(const json& j) {
  if (j.is_array()) {
    if (j.size() != 2) throw ConfigError("complex moment must be [re, im]");
    return {parse_param(j[0]), parse_param(j[1])};
  }
  if (j.is_object() && (j.contains("re") || j.contains("im"))) {
    check_keys(j, {"re", "im"}, "complex moment");
    return {j.contains("re") ? parse_param(j["re"]) : Param(0L), j.contains("im") ? parse_param(j["im"]) : Param(0L)};
  }
  return {parse_param(j), Param(0L)};
}

VariableKind parse_kind(const std::string& text) {
  if (text == "selfadjoint" || text == "self-adjoint" || text == "self_adjoint") return VariableKind::SelfAdjoint;
  if (text == "unitary") return VariableKind::Unitary;
  throw ConfigError("unknown variable kind '" + text + "'");
}

}  // namespace

Backend parse_backend(const std::string& text) {
  if (text == "rational" || text == "exact") return Backend::Rational;
  if (text == "float") return Backend::Float;
  throw ConfigError("unknown backend '" + text + "' (expected rational or float)");
}

Param parse_param(const json& j) {
  if (j.is_number_integer()) return Param(Rational(j.dump()));
  if (j.is_number_float()) {
    double v = j.get<double>();
    if (!std::isfinite(v)) throw ConfigError("parameter must be finite");
    // The shortest round-trip decimal is taken as the intended value.
    return Param(parse_rational(j.dump()));
  }
  if (j.is_string()) return Param(parse_rational(j.get<std::string>()));
  if (j.is_object() && j.size() == 1 && j.contains("float") && j["float"].is_number())
    return Param::inexact(j["float"].get<double>());
  throw ConfigError("parameter must be a number, a \"p/q\" string, or {\"float\": x}");
}

MarginalLaw parse_law(const json& variable) {
  require_object(variable, "variable");
  check_keys(variable, {"kind", "law", "params", "moments", "tail", "name"}, "variable");
  const std::string law = get_string(variable, "law", "variable");
  json params = variable.value("params", json::object());
  require_object(params, "params");
  std::optional<VariableKind> kind;
  if (variable.contains("kind")) kind = parse_kind(get_string(variable, "kind", "variable"));

  auto expect_kind = [&](VariableKind wanted) {
    if (kind && *kind != wanted)
      throw InvalidLaw("law '" + law + "' is " + (wanted == VariableKind::Unitary ? "unitary" : "self-adjoint"));
  };
  auto no_table = [&] {
    if (variable.contains("moments") || variable.contains("tail"))
      throw ConfigError("'moments' and 'tail' only apply to law 'moments'");
  };

  if (law == "semicircle" || law == "arcsine") {
    expect_kind(VariableKind::SelfAdjoint);
    no_table();
    check_keys(params, {"scale", "shift"}, law + " params");
    Param scale = param_or(params, "scale", Param(1L));
    Param shift = param_or(params, "shift", Param(0L));
    return law == "semicircle" ? MarginalLaw::semicircle(scale, shift) : MarginalLaw::arcsine(scale, shift);
  }
  if (law == "free_poisson") {
    expect_kind(VariableKind::SelfAdjoint);
    no_table();
    check_keys(params, {"rate", "jump", "shift"}, law + " params");
    return MarginalLaw::free_poisson(param_required(params, "rate", law), param_or(params, "jump", Param(1L)),
                                     param_or(params, "shift", Param(0L)));
  }
  if (law == "two_point") {
    expect_kind(VariableKind::SelfAdjoint);
    no_table();
    check_keys(params, {"left", "right", "weight"}, law + " params");
    return MarginalLaw::two_point(param_or(params, "left", Param(-1L)), param_or(params, "right", Param(1L)),
                                  param_or(params, "weight", Param(Rational(1, 2))));
  }
  if (law == "haar") {
    expect_kind(VariableKind::Unitary);
    no_table();
    check_keys(params, {}, law + " params");
    return MarginalLaw::haar();
  }
  if (law == "moments") {
    check_keys(params, {}, law + " params");
    if (!kind) throw ConfigError("law 'moments' needs an explicit 'kind'");
    if (!variable.contains("moments") || !variable["moments"].is_array())
      throw ConfigError("law 'moments' needs a 'moments' array");
    std::vector<ComplexParam> table;
    for (const json& m : variable["moments"]) table.push_back(parse_complex(m));
    TableTail tail = TableTail::Unsupported;
    if (variable.contains("tail")) {
      std::string t = get_string(variable, "tail", "variable");
      if (t == "zero") {
        tail = TableTail::Zero;
      } else if (t != "unsupported") {
        throw ConfigError("unknown tail '" + t + "' (expected zero or unsupported)");
      }
    }
    std::string name = variable.contains("name") ? get_string(variable, "name", "variable") : "moments";
    return MarginalLaw::from_moments(*kind, std::move(table), tail, name);
  }
  throw ConfigError("unknown law '" + law + "'");
}

FreeFamily parse_family(const json& j, std::optional<Backend> override_backend) {
  require_object(j, "family");
  check_keys(j, {"backend", "n", "variables"}, "family");
  Backend backend = Backend::Rational;
  if (j.contains("backend")) backend = parse_backend(get_string(j, "backend", "family"));
  if (override_backend) backend = *override_backend;
  if (!j.contains("variables") || !j["variables"].is_array() || j["variables"].empty())
    throw ConfigError("family needs a non-empty 'variables' array");
  std::vector<MarginalLaw> laws;
  for (const json& v : j["variables"]) laws.push_back(parse_law(v));
  if (j.contains("n")) {
    if (!j["n"].is_number_integer() || j["n"].get<long>() < 1) throw ConfigError("'n' must be a positive integer");
    auto n = static_cast<std::size_t>(j["n"].get<long>());
    if (laws.size() == 1) {
      laws.assign(n, laws.front());
    } else if (laws.size() != n) {
      throw ConfigError("'n' does not match the number of variables");
    }
  }
  return FreeFamily(std::move(laws), backend);
}

DensitySpec parse_density(const json& j) {
  require_object(j, "density config");
  check_keys(j, {"density", "params", "node_levels"}, "density config");
  const std::string name = get_string(j, "density", "density config");
  json params = j.value("params", json::object());
  require_object(params, "params");
  auto number = [&](const std::string& key) {
    if (!params.contains(key) || !params[key].is_number())
      throw ConfigError("density '" + name + "' needs numeric parameter '" + key + "'");
    return params[key].get<double>();
  };
  DensitySpec d = DensitySpec::zero();
  if (name == "jacobi") {
    check_keys(params, {"alpha", "beta"}, "jacobi params");
    d = DensitySpec::jacobi(number("alpha"), number("beta"));
  } else {
    check_keys(params, {}, name + " params");
    if (name == "arcsine") {
      d = DensitySpec::arcsine();
    } else if (name == "uniform") {
      d = DensitySpec::uniform();
    } else if (name == "semicircle") {
      d = DensitySpec::semicircle();
    } else if (name != "zero") {
      throw ConfigError("unknown density '" + name + "'");
    }
  }
  if (j.contains("node_levels")) {
    if (!j["node_levels"].is_number_integer()) throw ConfigError("'node_levels' must be an integer");
    d.set_node_levels(j["node_levels"].get<int>());
  }
  return d;
}

json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path.string() + "'");
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError("invalid JSON in '" + path.string() + "': " + e.what());
  }
}

MarginalLaw load_law(const std::filesystem::path& path) {
  json j = read_json(path);
  if (j.is_object() && j.contains("variables")) {
    FreeFamily family = parse_family(j);
    return family.marginal(1);
  }
  return parse_law(j);
}

FreeFamily load_family(const std::filesystem::path& path, std::optional<Backend> override_backend) {
  return parse_family(read_json(path), override_backend);
}

DensitySpec load_density(const std::filesystem::path& path) { return parse_density(read_json(path)); }

}  // namespace fpsz
