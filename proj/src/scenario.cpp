#include "ghostspinor/scenario.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <ostream>
#include <random>

namespace ghostspinor {

namespace {

[[noreturn]] void fail(const std::string& msg) { throw ScenarioError(msg); }

const json& require_key(const json& obj, const char* key, const std::string& what) {
  if (!obj.is_object() || !obj.contains(key)) {
    fail(what + " must contain \"" + key + "\"");
  }
  return obj.at(key);
}

double as_number(const json& v, const std::string& what) {
  if (!v.is_number()) fail(what + " must be a number");
  return v.get<double>();
}

std::string as_string(const json& v, const std::string& what) {
  if (!v.is_string()) fail(what + " must be a string");
  return v.get<std::string>();
}

std::uint64_t as_seed(const json& v, const std::string& what) {
  if (!v.is_number_integer() ||
      (!v.is_number_unsigned() && v.get<std::int64_t>() < 0)) {
    fail(what + " must be a non-negative integer");
  }
  return v.get<std::uint64_t>();
}

ScalarExpr parse_expr(const json& v, const std::string& what) {
  try {
    return parse(as_string(v, what));
  } catch (const ParseError& e) {
    fail(what + ": " + e.what());
  }
}

complexd complex_from_json(const json& v, const std::string& what) {
  if (v.is_number()) return complexd(v.get<double>(), 0.0);
  if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number()) {
    return complexd(v[0].get<double>(), v[1].get<double>());
  }
  fail(what + " must be a number or an [re, im] pair");
}

ComplexScalarField profile_from_spec(const json& spec, const std::string& what) {
  std::string form = as_string(require_key(spec, "form", what), what + ".form");
  if (form == "cartesian") {
    return ComplexScalarField::cartesian(
        parse_expr(require_key(spec, "re", what), what + ".re"),
        parse_expr(require_key(spec, "im", what), what + ".im"));
  }
  if (form == "exponential") {
    return ComplexScalarField::exponential(
        parse_expr(require_key(spec, "log_amp", what), what + ".log_amp"),
        parse_expr(require_key(spec, "phase", what), what + ".phase"));
  }
  fail(what + ".form must be \"cartesian\" or \"exponential\"");
}

// Accepts either the long role name or its terse alias.
const json* find_key(const json& obj, std::initializer_list<const char*> names) {
  for (const char* name : names) {
    if (obj.contains(name)) return &obj.at(name);
  }
  return nullptr;
}

std::array<double, 4> axis_values(const json& v, const std::string& what) {
  if (v.is_number()) {
    double x = v.get<double>();
    return {x, x, x, x};
  }
  if (v.is_array() && v.size() == 4) {
    std::array<double, 4> out{};
    for (int i = 0; i < 4; ++i) out[i] = as_number(v[i], what);
    return out;
  }
  fail(what + " must be a number or an array of 4 numbers");
}

}  // namespace

SpinorField field_from_json(const json& spec, std::optional<double> kappa) {
  std::string type = as_string(require_key(spec, "type", "field"), "field.type");
  if (type == "separable") {
    const json& uj = require_key(spec, "u", "separable field");
    if (!uj.is_array() || uj.size() != 4) fail("field.u must be an array of 4 entries");
    Bispinor u;
    for (int i = 0; i < 4; ++i) u[i] = complex_from_json(uj[i], "field.u entry");
    return SpinorField::separable(
        u, profile_from_spec(require_key(spec, "profile", "separable field"),
                             "field.profile"));
  }
  if (type == "componentwise") {
    const json& cj = require_key(spec, "components", "componentwise field");
    if (!cj.is_array() || cj.size() != 4) {
      fail("field.components must be an array of 4 profiles");
    }
    return SpinorField::componentwise(
        {profile_from_spec(cj[0], "field.components[0]"),
         profile_from_spec(cj[1], "field.components[1]"),
         profile_from_spec(cj[2], "field.components[2]"),
         profile_from_spec(cj[3], "field.components[3]")});
  }
  if (type == "lightlike") {
    if (!kappa) fail("lightlike field requires a \"kappa\" section");
    ScalarExpr f = spec.contains("f") ? parse_expr(spec.at("f"), "field.f") : lit(0.0);
    ScalarExpr g = spec.contains("g") ? parse_expr(spec.at("g"), "field.g") : lit(0.0);
    try {
      return SpinorField::lightlike(*kappa, f, g);
    } catch (const std::invalid_argument& e) {
      fail(std::string("lightlike field: ") + e.what());
    }
  }
  if (type == "superposition") {
    const json& terms = require_key(spec, "terms", "superposition field");
    if (!terms.is_array() || terms.empty()) {
      fail("field.terms must be a non-empty array");
    }
    std::vector<SpinorField> parts;
    for (const json& t : terms) parts.push_back(field_from_json(t, kappa));
    return superpose(std::move(parts));
  }
  fail("field.type must be separable, componentwise, lightlike or superposition");
}

SampleGrid grid_from_json(const json& spec) {
  SampleGrid grid;
  if (!spec.is_object()) fail("grid must be an object");
  if (spec.contains("lo")) grid.lo = axis_values(spec.at("lo"), "grid.lo");
  if (spec.contains("hi")) grid.hi = axis_values(spec.at("hi"), "grid.hi");
  if (spec.contains("samples")) {
    std::array<double, 4> s = axis_values(spec.at("samples"), "grid.samples");
    for (int i = 0; i < 4; ++i) {
      if (s[i] != std::floor(s[i])) fail("grid.samples must be integers");
      grid.samples[i] = int(s[i]);
    }
  }
  try {
    grid.validate();
  } catch (const std::invalid_argument& e) {
    fail(std::string("grid: ") + e.what());
  }
  return grid;
}

TwoSlitSection twoslit_from_json(const json& spec) {
  if (!spec.is_object()) fail("twoslit must be an object");
  TwoSlitSection section;
  TwoSlitConfig& cfg = section.config;
  if (const json* v = find_key(spec, {"gaussian_coefficient", "A"})) {
    cfg.gaussian_coefficient = as_number(*v, "twoslit.gaussian_coefficient");
  }
  if (const json* v = find_key(spec, {"half_separation", "d"})) {
    cfg.half_separation = as_number(*v, "twoslit.half_separation");
  }
  if (const json* v = find_key(spec, {"fringe_wavenumber", "q"})) {
    cfg.fringe_wavenumber = as_number(*v, "twoslit.fringe_wavenumber");
  }
  if (spec.contains("norm")) cfg.norm = as_number(spec.at("norm"), "twoslit.norm");
  if (spec.contains("alpha")) cfg.alpha_override = parse_expr(spec.at("alpha"), "twoslit.alpha");
  if (spec.contains("beta")) cfg.beta_override = parse_expr(spec.at("beta"), "twoslit.beta");

  if (spec.contains("shadow_phases")) {
    const json& ph = spec.at("shadow_phases");
    if (!ph.is_array()) fail("twoslit.shadow_phases must be an array of [c1, c2] pairs");
    for (const json& pair : ph) {
      if (!pair.is_array() || pair.size() != 2) {
        fail("twoslit.shadow_phases entries must be [c1, c2] pairs");
      }
      cfg.shadow_phases.push_back({as_number(pair[0], "twoslit shadow phase"),
                                   as_number(pair[1], "twoslit shadow phase")});
    }
  } else if (const json* v = find_key(spec, {"shadow_count", "n"})) {
    double n = as_number(*v, "twoslit.shadow_count");
    if (n < 0 || n != std::floor(n)) fail("twoslit.shadow_count must be an integer >= 0");
    std::uint64_t seed = 0;
    if (spec.contains("shadow_seed")) {
      seed = as_seed(spec.at("shadow_seed"), "twoslit.shadow_seed");
    }
    section.shadow_seed = seed;
    cfg.shadow_phases = generate_shadow_phases(seed, std::size_t(n));
  }

  if (spec.contains("window")) {
    const json& w = spec.at("window");
    if (!w.is_array() || w.size() != 2) fail("twoslit.window must be [lo, hi]");
    section.window_lo = as_number(w[0], "twoslit.window");
    section.window_hi = as_number(w[1], "twoslit.window");
    if (!(section.window_lo < section.window_hi)) {
      fail("twoslit.window must satisfy lo < hi");
    }
  }
  if (spec.contains("samples")) {
    double s = as_number(spec.at("samples"), "twoslit.samples");
    if (s < 2 || s != std::floor(s)) fail("twoslit.samples must be an integer >= 2");
    section.samples = std::size_t(s);
  }
  if (spec.contains("normalize_factors")) {
    if (!spec.at("normalize_factors").is_boolean()) {
      fail("twoslit.normalize_factors must be a boolean");
    }
    section.normalize_factors = spec.at("normalize_factors").get<bool>();
  }
  if (spec.contains("mode")) {
    section.mode = as_string(spec.at("mode"), "twoslit.mode");
    if (section.mode != "twoslit" && section.mode != "ghostreal") {
      fail("twoslit.mode must be \"twoslit\" or \"ghostreal\"");
    }
  }
  try {
    cfg.validate();
  } catch (const std::invalid_argument& e) {
    fail(std::string("twoslit: ") + e.what());
  }
  return section;
}

std::vector<ShadowPhases> generate_shadow_phases(std::uint64_t seed, std::size_t count) {
  std::mt19937_64 rng(seed);
  auto draw = [&rng] {
    double u = double(rng() >> 11) * 0x1p-53;  // 53-bit uniform in [0, 1)
    return -std::numbers::pi + 2.0 * std::numbers::pi * u;
  };
  std::vector<ShadowPhases> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    double c1 = draw();
    double c2 = draw();
    out.push_back({c1, c2});
  }
  return out;
}

json load_document(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail("cannot open config file: " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    fail("invalid JSON in " + path + ": " + e.what());
  }
}

ScenarioConfig load_scenario(const std::string& path) {
  return parse_scenario(load_document(path));
}

ScenarioConfig parse_scenario(const json& doc) {
  if (!doc.is_object()) fail("config document must be a JSON object");
  ScenarioConfig cfg;
  cfg.raw = doc;
  if (doc.contains("kappa")) {
    double k = as_number(doc.at("kappa"), "kappa");
    if (!(k > 0.0) || !std::isfinite(k)) fail("kappa must be finite and > 0");
    cfg.kappa = k;
  }
  if (doc.contains("field")) cfg.field = field_from_json(doc.at("field"), cfg.kappa);
  if (doc.contains("grid")) cfg.grid = grid_from_json(doc.at("grid"));
  if (doc.contains("twoslit")) cfg.twoslit = twoslit_from_json(doc.at("twoslit"));
  if (doc.contains("sweep")) {
    const json& s = doc.at("sweep");
    SweepSpec sweep;
    const json& nv = require_key(s, "n_values", "sweep");
    if (!nv.is_array() || nv.empty()) fail("sweep.n_values must be a non-empty array");
    for (const json& v : nv) {
      double n = as_number(v, "sweep.n_values entry");
      if (n < 0 || n != std::floor(n)) fail("sweep.n_values must be integers >= 0");
      sweep.n_values.push_back(std::size_t(n));
    }
    if (s.contains("seed")) sweep.seed = as_seed(s.at("seed"), "sweep.seed");
    cfg.sweep = sweep;
  }
  if (doc.contains("output")) {
    const json& o = doc.at("output");
    OutputSpec out;
    out.path = as_string(require_key(o, "path", "output"), "output.path");
    if (out.path.empty()) fail("output.path must be non-empty");
    if (o.contains("format")) {
      out.format = as_string(o.at("format"), "output.format");
      if (out.format != "csv" && out.format != "json") {
        fail("output.format must be \"csv\" or \"json\"");
      }
    }
    cfg.output = out;
  }
  return cfg;
}

std::string format_number(double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

void write_profile_csv(std::ostream& out, const IntensityProfile& profile) {
  out << "x,value\n";
  for (std::size_t i = 0; i < profile.xs.size(); ++i) {
    out << format_number(profile.xs[i]) << ',' << format_number(profile.values[i])
        << '\n';
  }
}

void write_table_csv(std::ostream& out, const std::vector<std::string>& columns,
                     const std::vector<std::vector<double>>& rows) {
  for (std::size_t c = 0; c < columns.size(); ++c) {
    if (c) out << ',';
    out << columns[c];
  }
  out << '\n';
  for (const std::vector<double>& row : rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) out << ',';
      out << format_number(row[c]);
    }
    out << '\n';
  }
}

json profile_to_json(const IntensityProfile& profile, const json& config_echo) {
  return json{{"label", profile.label},
              {"xs", profile.xs},
              {"values", profile.values},
              {"config", config_echo}};
}

IntensityProfile profile_from_json(const json& doc) {
  IntensityProfile profile;
  profile.label = as_string(require_key(doc, "label", "profile"), "profile.label");
  const json& xs = require_key(doc, "xs", "profile");
  const json& values = require_key(doc, "values", "profile");
  if (!xs.is_array() || !values.is_array() || xs.size() != values.size()) {
    fail("profile xs and values must be arrays of equal length");
  }
  for (const json& v : xs) profile.xs.push_back(as_number(v, "profile.xs entry"));
  for (const json& v : values) {
    profile.values.push_back(as_number(v, "profile.values entry"));
  }
  return profile;
}

json table_to_json(const std::vector<std::string>& columns,
                   const std::vector<std::vector<double>>& rows,
                   const json& config_echo) {
  return json{{"columns", columns}, {"rows", rows}, {"config", config_echo}};
}

}  // namespace ghostspinor
