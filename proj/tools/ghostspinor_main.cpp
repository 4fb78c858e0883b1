// Command-line driver. Loads a JSON scenario config, runs one command, writes
// CSV/JSON data files named <output.path>_<role>.<format>, and prints a JSON
// run report to stdout. Natural units throughout: hbar = c = 1, the single
// mass parameter is kappa = m c / hbar.
//
// Exit codes: 0 success, 1 check failed, 2 usage or config error.
// Data files are byte-identical across reruns; only the report's wall_time_ms
// varies.

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "ghostspinor/ghost_classifier.hpp"
#include "ghostspinor/interference.hpp"
#include "ghostspinor/scenario.hpp"
#include "ghostspinor/spinor_field.hpp"

namespace gs = ghostspinor;
using gs::json;

namespace {

constexpr double kResidualGate = 1e-8;

[[noreturn]] void config_fail(const std::string& msg) { throw gs::ScenarioError(msg); }

const gs::SpinorField& need_field(const gs::ScenarioConfig& cfg) {
  if (!cfg.field) config_fail("this command requires a \"field\" section");
  return *cfg.field;
}

double need_kappa(const gs::ScenarioConfig& cfg) {
  if (!cfg.kappa) config_fail("this command requires a \"kappa\" section");
  return *cfg.kappa;
}

const gs::SampleGrid& need_grid(const gs::ScenarioConfig& cfg) {
  if (!cfg.grid) config_fail("this command requires a \"grid\" section");
  return *cfg.grid;
}

const gs::TwoSlitSection& need_twoslit(const gs::ScenarioConfig& cfg) {
  if (!cfg.twoslit) config_fail("this command requires a \"twoslit\" section");
  return *cfg.twoslit;
}

const gs::OutputSpec& need_output(const gs::ScenarioConfig& cfg) {
  if (!cfg.output) config_fail("this command requires an \"output\" section (or --out)");
  return *cfg.output;
}

// Field expressions may reference the mass parameter by name.
gs::ParamBindings kappa_bindings(const gs::ScenarioConfig& cfg) {
  gs::ParamBindings b;
  if (cfg.kappa) b["kappa"] = *cfg.kappa;
  return b;
}

void write_text_file(const std::string& path, const std::string& text) {
  std::filesystem::path p(path);
  if (p.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(p.parent_path(), ec);
  }
  std::ofstream out(p, std::ios::binary);
  out << text;
  out.flush();
  if (!out) config_fail("cannot write output file: " + path);
}

std::string emit_profile(const gs::OutputSpec& out, const std::string& role,
                         const gs::IntensityProfile& profile, const json& echo) {
  std::string path = out.path + "_" + role + "." + out.format;
  std::ostringstream text;
  if (out.format == "csv") {
    gs::write_profile_csv(text, profile);
  } else {
    text << gs::profile_to_json(profile, echo).dump(2) << '\n';
  }
  write_text_file(path, text.str());
  return path;
}

std::string emit_table(const gs::OutputSpec& out, const std::string& role,
                       const std::vector<std::string>& columns,
                       const std::vector<std::vector<double>>& rows, const json& echo) {
  std::string path = out.path + "_" + role + "." + out.format;
  std::ostringstream text;
  if (out.format == "csv") {
    gs::write_table_csv(text, columns, rows);
  } else {
    text << gs::table_to_json(columns, rows, echo).dump(2) << '\n';
  }
  write_text_file(path, text.str());
  return path;
}

json verdict_json(const gs::GhostVerdict& v) {
  json j{{"verdict", gs::to_string(v.verdict)}, {"method", gs::to_string(v.method)}};
  if (v.fitted_ratio) j["fitted_ratio"] = *v.fitted_ratio;
  if (v.proportionality_residual) {
    j["proportionality_residual"] = *v.proportionality_residual;
  }
  if (v.max_abs_tensor) j["max_abs_tensor"] = *v.max_abs_tensor;
  if (v.min_j0) j["min_j0"] = *v.min_j0;
  if (v.max_residual) j["max_residual"] = *v.max_residual;
  return j;
}

json extrema_json(const gs::IntensityProfile& profile) {
  gs::Extrema e = gs::locate_extrema(profile);
  return json{{"minima_x", e.minima},
              {"maxima_x", e.maxima},
              {"minima_count", e.minima.size()},
              {"maxima_count", e.maxima.size()}};
}

// Index of x in the sorted sample positions (exact: x was copied from xs).
std::size_t sample_index(const std::vector<double>& xs, double x) {
  auto it = std::lower_bound(xs.begin(), xs.end(), x);
  return std::size_t(it - xs.begin());
}

// ---- commands -------------------------------------------------------------

int cmd_check_dirac(const gs::ScenarioConfig& cfg, json& report) {
  const gs::SpinorField& field = need_field(cfg);
  double kappa = need_kappa(cfg);
  const gs::SampleGrid& grid = need_grid(cfg);
  gs::ParamBindings b = kappa_bindings(cfg);
  double max_residual = 0.0;
  grid.for_each_point([&](const gs::SpacetimePoint& p) {
    max_residual =
        std::max(max_residual, gs::dirac_residual(field, p, kappa, b).max_abs());
  });
  bool pass = max_residual <= kResidualGate;
  report["kappa"] = kappa;
  report["max_residual"] = max_residual;
  report["threshold"] = kResidualGate;
  report["pass"] = pass;
  return pass ? 0 : 1;
}

int cmd_classify(const gs::ScenarioConfig& cfg, json& report) {
  const gs::SpinorField& field = need_field(cfg);
  double kappa = need_kappa(cfg);
  const gs::SampleGrid& grid = need_grid(cfg);
  gs::ParamBindings b = kappa_bindings(cfg);
  if (const auto* sep = field.as_separable()) {
    report["structural"] = verdict_json(gs::classify_separable(sep->u, sep->profile, grid, b));
  } else if (field.as_componentwise()) {
    report["structural"] = verdict_json(gs::classify_componentwise(field, kappa, grid, b));
  } else {
    report["structural"] = nullptr;  // superpositions carry no structural form
  }
  report["numeric"] = verdict_json(gs::classify_numeric(field, kappa, grid, b));
  return 0;
}

const std::vector<std::string> kTensorColumns = {
    "x0",  "x1",  "x2",  "x3",  "T00", "T01", "T02",
    "T03", "T11", "T12", "T13", "T22", "T23", "T33"};

int cmd_tensor(const gs::ScenarioConfig& cfg, json& report) {
  const gs::SpinorField& field = need_field(cfg);
  need_kappa(cfg);  // contract: expressions may bind it even though T does not
  const gs::SampleGrid& grid = need_grid(cfg);
  const gs::OutputSpec& out = need_output(cfg);
  gs::ParamBindings b = kappa_bindings(cfg);
  std::vector<std::vector<double>> rows;
  double max_abs = 0.0;
  grid.for_each_point([&](const gs::SpacetimePoint& p) {
    gs::EnergyMomentumTensor t = gs::energy_momentum(field, p, b);
    std::vector<double> row{p.x0, p.x1, p.x2, p.x3};
    for (int i = 0; i < 4; ++i) {
      for (int k = i; k < 4; ++k) row.push_back(t(i, k));
    }
    max_abs = std::max(max_abs, t.max_abs());
    rows.push_back(std::move(row));
  });
  report["file"] = emit_table(out, "tensor", kTensorColumns, rows, cfg.raw);
  report["rows"] = rows.size();
  report["max_abs_tensor"] = max_abs;
  return 0;
}

const std::vector<std::string> kCurrentColumns = {"x0", "x1", "x2", "x3",
                                                  "j0", "j1", "j2", "j3"};

int cmd_current(const gs::ScenarioConfig& cfg, json& report) {
  const gs::SpinorField& field = need_field(cfg);
  need_kappa(cfg);
  const gs::SampleGrid& grid = need_grid(cfg);
  const gs::OutputSpec& out = need_output(cfg);
  gs::ParamBindings b = kappa_bindings(cfg);
  std::vector<std::vector<double>> rows;
  double min_j0 = std::numeric_limits<double>::infinity();
  double max_j0 = -min_j0;
  grid.for_each_point([&](const gs::SpacetimePoint& p) {
    gs::FourCurrent j = gs::current(field, p, b);
    rows.push_back({p.x0, p.x1, p.x2, p.x3, j.j0, j.j1, j.j2, j.j3});
    min_j0 = std::min(min_j0, j.j0);
    max_j0 = std::max(max_j0, j.j0);
  });
  report["file"] = emit_table(out, "current", kCurrentColumns, rows, cfg.raw);
  report["rows"] = rows.size();
  report["min_j0"] = min_j0;
  report["max_j0"] = max_j0;
  return 0;
}

int interfere_ghostreal(const gs::ScenarioConfig& cfg, const gs::TwoSlitSection& section,
                        const gs::OutputSpec& out, json& report) {
  double kappa = need_kappa(cfg);
  double lo = section.window_lo, hi = section.window_hi;
  bool window_given =
      cfg.raw.contains("twoslit") && cfg.raw.at("twoslit").contains("window");
  if (!window_given) {  // one fringe period of the x0 + x3 phase, twice
    lo = 0.0;
    hi = 4.0 * std::numbers::pi;
  }
  // Anchor the slice so the 8 e^{2 kappa x2} prefactor is exactly 1.
  double x2 = -std::log(8.0) / (2.0 * kappa);
  gs::IntensityProfile profile;
  profile.label = "ghostreal";
  profile.xs.resize(section.samples);
  profile.values.resize(section.samples);
  for (std::size_t i = 0; i < section.samples; ++i) {
    double x3 = lo + (hi - lo) * double(i) / double(section.samples - 1);
    if (i + 1 == section.samples) x3 = hi;
    profile.xs[i] = x3;
    profile.values[i] =
        gs::ghost_real_intensity(kappa, gs::SpacetimePoint{0.0, 0.0, x2, x3});
  }
  report["anchor"] = json{{"x0", 0.0}, {"x2", x2}};
  report["files"] = json::array({emit_profile(out, "ghostreal", profile, cfg.raw)});
  report["extrema"] = json{{profile.label, extrema_json(profile)}};
  return 0;
}

int cmd_interfere(const gs::ScenarioConfig& cfg, json& report) {
  const gs::TwoSlitSection& section = need_twoslit(cfg);
  const gs::OutputSpec& out = need_output(cfg);
  if (section.mode == "ghostreal") {
    return interfere_ghostreal(cfg, section, out, report);
  }

  const gs::TwoSlitConfig& slit = section.config;
  json files = json::array();
  json extrema = json::object();
  auto emit = [&](const std::string& role, const gs::IntensityProfile& profile) {
    files.push_back(emit_profile(out, role, profile, cfg.raw));
    extrema[profile.label] = extrema_json(profile);
  };

  emit("real", gs::sample_profile(slit, gs::Formula::real_pair(), section.window_lo,
                                  section.window_hi, section.samples));
  for (std::size_t m = 0; m < slit.shadow_count(); ++m) {
    emit("shadow" + std::to_string(m),
         gs::sample_profile(slit, gs::Formula::shadow_pair(m), section.window_lo,
                            section.window_hi, section.samples));
  }
  emit("combined",
       gs::sample_profile(slit, gs::Formula::combined(), section.window_lo,
                          section.window_hi, section.samples,
                          section.normalize_factors));
  emit("whichway",
       gs::sample_profile(slit, gs::Formula::which_way(), section.window_lo,
                          section.window_hi, section.samples,
                          section.normalize_factors));
  report["files"] = files;
  report["extrema"] = extrema;

  // Factorized product vs the 2^(n+1)-term expansion, on a thinned grid.
  std::size_t n = slit.shadow_count();
  if (n <= 20) {
    std::size_t stride = std::max<std::size_t>(1, (section.samples - 1) / 32);
    double max_rel = 0.0;
    std::size_t points = 0;
    for (std::size_t i = 0; i < section.samples; i += stride) {
      double x = section.window_lo +
                 (section.window_hi - section.window_lo) * double(i) /
                     double(section.samples - 1);
      double reference = gs::expand_bruteforce(slit, x);
      double direct = gs::combined_intensity(slit, x);
      max_rel = std::max(max_rel, std::abs(direct - reference) /
                                      std::max(1.0, std::abs(reference)));
      ++points;
    }
    report["bruteforce_check"] =
        json{{"points", points}, {"max_relative_residual", max_rel}};
  } else {
    std::fprintf(stderr, "warning: brute-force cross-check skipped (%zu shadows > 20)\n",
                 n);
    report["bruteforce_check"] = "skipped: shadow count exceeds 20";
  }
  return 0;
}

int cmd_sweep_shadows(const gs::ScenarioConfig& cfg, json& report) {
  const gs::TwoSlitSection& section = need_twoslit(cfg);
  const gs::OutputSpec& out = need_output(cfg);
  if (!cfg.sweep) config_fail("sweep-shadows requires a \"sweep\" section (or --n-list)");
  const gs::SweepSpec& sweep = *cfg.sweep;

  json files = json::array();
  json profiles = json::object();
  std::vector<std::vector<double>> summary;
  for (std::size_t n : sweep.n_values) {
    gs::TwoSlitConfig slit = section.config;
    slit.shadow_phases = gs::generate_shadow_phases(sweep.seed, n);
    gs::IntensityProfile profile = gs::sample_profile(
        slit, gs::Formula::combined(), section.window_lo, section.window_hi,
        section.samples, section.normalize_factors);
    profile.label = "combined[n=" + std::to_string(n) + "]";
    files.push_back(emit_profile(out, "n" + std::to_string(n) + "_combined", profile,
                                 cfg.raw));
    gs::Extrema e = gs::locate_extrema(profile);
    // One row per maximum: dv_k compares adjacent maxima of the same profile,
    // the observable proposed for counting unseen shadow particles.
    double prev = 0.0;
    for (std::size_t k = 0; k < e.maxima.size(); ++k) {
      double x = e.maxima[k];
      double v = profile.values[sample_index(profile.xs, x)];
      double dv = k == 0 ? std::numeric_limits<double>::quiet_NaN() : v - prev;
      summary.push_back({double(n), double(k), x, v, dv});
      prev = v;
    }
    profiles[std::to_string(n)] = json{{"maxima_count", e.maxima.size()},
                                       {"minima_count", e.minima.size()}};
  }
  files.push_back(emit_table(out, "sweep_summary", {"n", "k", "x_k", "v_k", "dv_k"},
                             summary, cfg.raw));
  report["generator"] = gs::kShadowPhaseGenerator;
  report["seed"] = sweep.seed;
  report["n_values"] = sweep.n_values;
  report["files"] = files;
  report["profiles"] = profiles;
  return 0;
}

// ---- option plumbing ------------------------------------------------------

struct Overrides {
  std::optional<double> kappa;
  std::optional<int> shadow_count;
  std::optional<std::string> out;
  std::optional<std::string> format;
  std::vector<int> n_list;
};

json apply_overrides(json doc, const Overrides& ov) {
  if (!doc.is_object()) config_fail("config document must be a JSON object");
  if (ov.kappa) doc["kappa"] = *ov.kappa;
  if (ov.shadow_count) {
    json& twoslit = doc["twoslit"];
    if (!twoslit.is_object()) twoslit = json::object();
    twoslit.erase("shadow_phases");  // the count override regenerates phases
    twoslit.erase("n");
    twoslit["shadow_count"] = *ov.shadow_count;
  }
  if (ov.out) {
    json& output = doc["output"];
    if (!output.is_object()) output = json::object();
    output["path"] = *ov.out;
  }
  if (ov.format) {
    if (!doc.contains("output")) config_fail("--format requires an output section or --out");
    doc["output"]["format"] = *ov.format;
  }
  if (!ov.n_list.empty()) {
    json& sweep = doc["sweep"];
    if (!sweep.is_object()) sweep = json::object();
    sweep["n_values"] = ov.n_list;
  }
  return doc;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "ghostspinor: Dirac-equation residual checks, ghost classification, and\n"
      "two-slit interference profiles with shadow particles.\n"
      "Natural units (hbar = c = 1); the mass parameter is kappa = m c / hbar.\n"
      "Data files are written as <output.path>_<role>.<format> and are\n"
      "byte-identical across reruns; a JSON run report goes to stdout.\n"
      "Exit codes: 0 success, 1 check failed, 2 usage or config error."};
  app.require_subcommand(1);

  std::string config_path;
  Overrides ov;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "scenario config file (JSON)")
        ->required();
    sub->add_option("--out", ov.out, "override output.path (file stem)");
    sub->add_option("--format", ov.format, "override output.format")
        ->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--kappa", ov.kappa, "override the mass parameter kappa");
    return sub;
  };

  CLI::App* check = add_common(app.add_subcommand(
      "check-dirac",
      "scan the grid for the free-equation residual max |i g^k d_k psi - kappa psi|;\n"
      "exit 1 if it exceeds 1e-8"));
  CLI::App* classify = add_common(app.add_subcommand(
      "classify",
      "run the structural ghost test matching the field variant, then the\n"
      "lattice criterion; report both verdicts"));
  CLI::App* tensor = add_common(app.add_subcommand(
      "tensor",
      "dump the symmetrized energy-momentum tensor on the grid to\n"
      "<stem>_tensor.<fmt>; columns x0,x1,x2,x3,T00,T01,T02,T03,T11,T12,T13,"
      "T22,T23,T33"));
  CLI::App* current = add_common(app.add_subcommand(
      "current",
      "dump the Dirac current on the grid to <stem>_current.<fmt>; columns\n"
      "x0,x1,x2,x3,j0,j1,j2,j3"));
  CLI::App* interfere = add_common(app.add_subcommand(
      "interfere",
      "two-slit profiles over the window to <stem>_real/_shadow<m>/_combined/\n"
      "_whichway.<fmt> (columns x,value), with extrema and a brute-force\n"
      "cross-check in the report; mode \"ghostreal\" instead writes\n"
      "<stem>_ghostreal.<fmt>, the ghost+real collision intensity vs x3"));
  CLI::App* sweep = add_common(app.add_subcommand(
      "sweep-shadows",
      "combined profile per shadow count n to <stem>_n<n>_combined.<fmt>, plus\n"
      "<stem>_sweep_summary.<fmt> with columns n,k,x_k,v_k,dv_k (adjacent-maxima\n"
      "value differences; dv_0 is nan)"));
  interfere->add_option("--n", ov.shadow_count,
                        "override twoslit.shadow_count (drops explicit phases)")
      ->check(CLI::NonNegativeNumber);
  sweep->add_option("--n-list", ov.n_list, "override sweep.n_values")
      ->check(CLI::NonNegativeNumber);
  (void)check;
  (void)classify;
  (void)tensor;
  (void)current;

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  CLI::App* sub = app.get_subcommands().front();
  try {
    auto start = std::chrono::steady_clock::now();
    gs::ScenarioConfig cfg =
        gs::parse_scenario(apply_overrides(gs::load_document(config_path), ov));
    json report;
    report["command"] = sub->get_name();
    report["config"] = cfg.raw;

    int code = 0;
    const std::string& name = sub->get_name();
    if (name == "check-dirac") {
      code = cmd_check_dirac(cfg, report);
    } else if (name == "classify") {
      code = cmd_classify(cfg, report);
    } else if (name == "tensor") {
      code = cmd_tensor(cfg, report);
    } else if (name == "current") {
      code = cmd_current(cfg, report);
    } else if (name == "interfere") {
      code = cmd_interfere(cfg, report);
    } else {
      code = cmd_sweep_shadows(cfg, report);
    }

    std::chrono::duration<double, std::milli> elapsed =
        std::chrono::steady_clock::now() - start;
    report["wall_time_ms"] = elapsed.count();
    std::cout << report.dump(2) << '\n';
    return code;
  } catch (const gs::ScenarioError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
