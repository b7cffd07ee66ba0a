#include "cli/config.hpp"

#include <cmath>
#include <numbers>
#include <regex>
#include <set>

#include "tidg/errors.hpp"
#include "tidg/io.hpp"

namespace tidg::cli {

using nlohmann::json;

namespace {

[[noreturn]] void config_error(const std::string& msg) { throw Error(ErrorCode::ConfigError, msg); }

double number(const json& j, const std::string& key) {
  if (!j.is_number()) config_error("'" + key + "' must be a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) config_error("'" + key + "' must be finite");
  return v;
}

std::vector<double> number_list(const json& j, const std::string& key) {
  std::vector<double> out;
  if (j.is_number()) return {number(j, key)};
  if (!j.is_array()) config_error("'" + key + "' must be a number or a list of numbers");
  for (const auto& v : j) out.push_back(number(v, key));
  return out;
}

double angle_value(const json& j) {
  if (j.is_string()) return parse_angle(j.get<std::string>());
  return number(j, "angles");
}

}  // namespace

double parse_angle(const std::string& text) {
  static const std::regex pi_form(R"(^\s*([+-]?(?:\d+(?:\.\d*)?|\.\d+)?)\s*\*?\s*pi\s*(?:/\s*(\d+(?:\.\d*)?))?\s*$)",
                                  std::regex::icase);
  std::smatch m;
  if (std::regex_match(text, m, pi_form)) {
    double coef = 1.0;
    const std::string c = m[1].str();
    if (c == "-") {
      coef = -1.0;
    } else if (!c.empty() && c != "+") {
      coef = std::stod(c);
    }
    double den = 1.0;
    if (m[2].matched) den = std::stod(m[2].str());
    if (den == 0.0) config_error("angle '" + text + "' divides by zero");
    return coef * std::numbers::pi / den;
  }
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used == text.size() && std::isfinite(v)) return v;
  } catch (const std::exception&) {
  }
  config_error("cannot parse angle '" + text + "'");
}

RunConfig parse_config(const json& j) {
  if (!j.is_object()) config_error("config must be a JSON object");
  static const std::set<std::string> known{"schema_version", "benchmark", "methods",   "p",     "angles",
                                           "nu",             "q",         "E_t",       "t",     "levels",
                                           "stabilization",  "underintegrate", "out", "serial", "tol",
                                           "dump_field",     "ui_extra_mu"};
  for (const auto& [key, value] : j.items()) {
    if (!known.count(key)) config_error("unknown key '" + key + "'");
  }
  for (const char* key : {"methods", "p", "angles", "levels"}) {
    if (j.contains(key) && j[key].is_array() && j[key].empty()) {
      config_error(std::string("empty sweep grid: '") + key + "' has no entries");
    }
  }
  RunConfig c;
  if (j.contains("schema_version")) {
    if (!j["schema_version"].is_number_integer() || j["schema_version"].get<int>() != kSchemaVersion) {
      config_error("schema_version must be " + std::to_string(kSchemaVersion));
    }
  }
  if (j.contains("benchmark")) {
    if (!j["benchmark"].is_string()) config_error("'benchmark' must be a string");
    c.benchmark = j["benchmark"].get<std::string>();
    if (c.benchmark != "cook" && c.benchmark != "beam") {
      config_error("benchmark must be \"cook\" or \"beam\", got \"" + c.benchmark + "\"");
    }
  }
  if (j.contains("methods")) {
    const json& m = j["methods"];
    if (m.is_string()) {
      c.methods.push_back(m.get<std::string>());
    } else if (m.is_array()) {
      for (const auto& v : m) {
        if (!v.is_string()) config_error("'methods' entries must be strings");
        c.methods.push_back(v.get<std::string>());
      }
    } else {
      config_error("'methods' must be a string or a list of strings");
    }
  }
  if (j.contains("p")) c.p = number_list(j["p"], "p");
  if (j.contains("angles")) {
    const json& a = j["angles"];
    if (a.is_array()) {
      for (const auto& v : a) c.angles.push_back(angle_value(v));
    } else {
      c.angles.push_back(angle_value(a));
    }
  }
  if (j.contains("nu")) c.nu = number(j["nu"], "nu");
  if (j.contains("q")) c.q = number(j["q"], "q");
  if (j.contains("E_t")) c.E_t = number(j["E_t"], "E_t");
  if (j.contains("t")) c.t = number(j["t"], "t");
  if (j.contains("levels")) {
    const json& l = j["levels"];
    auto one = [](const json& v) {
      if (!v.is_number_integer()) config_error("'levels' entries must be integers");
      return v.get<int>();
    };
    if (l.is_array()) {
      for (const auto& v : l) c.levels.push_back(one(v));
    } else {
      c.levels.push_back(one(l));
    }
  }
  if (j.contains("stabilization")) {
    const json& s = j["stabilization"];
    if (!s.is_object()) config_error("'stabilization' must be an object");
    for (const auto& [key, value] : s.items()) {
      const double v = number(value, "stabilization." + key);
      if (key == "k_mu") c.stab.k_mu = v;
      else if (key == "k_lambda") c.stab.k_lambda = v;
      else if (key == "k_alpha") c.stab.k_alpha = v;
      else if (key == "k_beta") c.stab.k_beta = v;
      else if (key == "k_gamma") c.stab.k_gamma = v;
      else config_error("unknown key 'stabilization." + key + "'");
    }
  }
  auto boolean = [&](const char* key, bool& dst) {
    if (!j.contains(key)) return;
    if (!j[key].is_boolean()) config_error(std::string("'") + key + "' must be true or false");
    dst = j[key].get<bool>();
  };
  boolean("underintegrate", c.underintegrate);
  boolean("ui_extra_mu", c.ui_extra_mu);
  boolean("serial", c.serial);
  boolean("dump_field", c.dump_field);
  if (j.contains("out")) {
    if (!j["out"].is_string() || j["out"].get<std::string>().empty()) config_error("'out' must be a path");
    c.out = j["out"].get<std::string>();
  }
  if (j.contains("tol")) c.tol = number(j["tol"], "tol");

  // Value checks against the module preconditions.
  if (!(c.tol > 0.0)) config_error("tol must be positive");
  for (double p : c.p) {
    if (!(p > 0.0)) config_error("p must be positive");
  }
  if (!(c.q > 0.0)) config_error("q must be positive");
  if (c.E_t < 0.0) config_error("E_t must be positive");
  for (int l : c.levels) {
    if (c.benchmark == "cook" && l < 1) config_error("Cook grid size must be >= 1");
    if (c.benchmark == "beam" && (l < 0 || l > 8)) config_error("beam level must be in 0..8");
  }
  c.stab.validate();  // surfaces as InvalidStabilization
  for (const auto& m : c.methods) parse_method(m);
  return c;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::string text;
  try {
    text = read_file(path);
  } catch (const std::exception& e) {
    config_error(e.what());
  }
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    config_error(path.string() + ": " + e.what());
  }
  return parse_config(j);
}

json to_json(const RunConfig& c) {
  json j;
  j["schema_version"] = c.schema_version;
  j["benchmark"] = c.benchmark;
  j["methods"] = c.methods;
  j["p"] = c.p;
  j["angles"] = c.angles;
  j["nu"] = c.nu;
  j["q"] = c.q;
  j["E_t"] = c.E_t;
  j["t"] = c.t;
  j["levels"] = c.levels;
  j["stabilization"] = {{"k_mu", c.stab.k_mu},
                        {"k_lambda", c.stab.k_lambda},
                        {"k_alpha", c.stab.k_alpha},
                        {"k_beta", c.stab.k_beta},
                        {"k_gamma", c.stab.k_gamma}};
  j["underintegrate"] = c.underintegrate;
  j["ui_extra_mu"] = c.ui_extra_mu;
  j["out"] = c.out;
  j["serial"] = c.serial;
  j["tol"] = c.tol;
  j["dump_field"] = c.dump_field;
  return j;
}

std::vector<MethodConfig> resolve_methods(const RunConfig& c) {
  std::vector<MethodConfig> out;
  if (c.methods.empty()) {
    out = all_method_variants(c.stab);
  } else {
    for (const auto& name : c.methods) out.push_back(parse_method(name, c.stab));
  }
  for (auto& m : out) m.ui_extra_mu_penalty = c.ui_extra_mu;
  if (c.underintegrate) {
    for (auto& m : out) {
      if (is_dg(m.method)) m.under_integrate_beta = true;
    }
    // Drop duplicates created by the flag, keeping the first occurrence.
    std::vector<MethodConfig> unique;
    std::set<std::string> seen;
    for (const auto& m : out) {
      if (seen.insert(m.name()).second) unique.push_back(m);
    }
    out = unique;
  }
  return out;
}

SweepConfig to_sweep(const RunConfig& c) {
  SweepConfig s = c.benchmark == "beam" ? beam_defaults() : cook_defaults();
  s.methods = resolve_methods(c);
  if (!c.p.empty()) s.p = c.p;
  if (!c.angles.empty()) s.angles = c.angles;
  if (!c.levels.empty()) s.levels = c.levels;
  s.nu = c.nu;
  s.q = c.q;
  s.E_t = c.E_t;
  s.t = c.t;
  s.tol = c.tol;
  s.serial = c.serial;
  return s;
}

}  // namespace tidg::cli
