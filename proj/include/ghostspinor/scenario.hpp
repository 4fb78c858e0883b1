#ifndef GHOSTSPINOR_SCENARIO_HPP
#define GHOSTSPINOR_SCENARIO_HPP

// JSON scenario documents and data-file emission for the command-line driver.
// A scenario holds up to five sections:
//   kappa    — mass parameter (number)
//   field    — spinor field: {"type": "separable" | "componentwise" |
//              "lightlike" | "superposition", ...} with expression strings
//   grid     — {"lo": [...], "hi": [...], "samples": [...]}, scalars broadcast
//   twoslit  — TwoSlitConfig fields plus sampling keys (window, samples,
//              mode, normalize_factors) and either explicit "shadow_phases"
//              or "shadow_count" (+ "shadow_seed") for generated phases
//   output   — {"path": stem, "format": "csv" | "json"}
// plus an optional "sweep" section ({"n_values": [...], "seed": ...}).
//
// Field expressions may reference the parameter `kappa`; commands bind it to
// the scenario's mass before evaluation. CSV numbers use the shortest decimal
// form that round-trips to the same binary double.

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "ghostspinor/interference.hpp"
#include "ghostspinor/spinor_field.hpp"

namespace ghostspinor {

using json = nlohmann::json;

// Configuration problems (unparseable document, missing or malformed
// sections, invalid expressions). The CLI maps these to exit code 2.
class ScenarioError : public std::runtime_error {
 public:
  explicit ScenarioError(const std::string& what) : std::runtime_error(what) {}
};

struct OutputSpec {
  std::string path;            // file stem; commands append role suffixes
  std::string format = "csv";  // "csv" or "json"
};

struct TwoSlitSection {
  TwoSlitConfig config;             // phases already resolved
  std::string mode = "twoslit";     // "twoslit" or "ghostreal"
  double window_lo = -2.0;
  double window_hi = 2.0;
  std::size_t samples = 2001;
  bool normalize_factors = false;
  // Set when the phases came from the named generator instead of the config.
  std::optional<std::uint64_t> shadow_seed;
};

struct SweepSpec {
  std::vector<std::size_t> n_values;
  std::uint64_t seed = 0;
};

struct ScenarioConfig {
  json raw;  // parsed document, echoed into reports
  std::optional<double> kappa;
  std::optional<SpinorField> field;
  std::optional<SampleGrid> grid;
  std::optional<TwoSlitSection> twoslit;
  std::optional<SweepSpec> sweep;
  std::optional<OutputSpec> output;
};

// Loads and parses a scenario file. Throws ScenarioError on unreadable files,
// invalid JSON, or malformed sections. load_document stops after the JSON
// parse, so callers can rewrite fields (CLI overrides) before parse_scenario.
json load_document(const std::string& path);
ScenarioConfig load_scenario(const std::string& path);
ScenarioConfig parse_scenario(const json& doc);

// Section parsers, exposed for reuse and tests.
SpinorField field_from_json(const json& spec, std::optional<double> kappa);
SampleGrid grid_from_json(const json& spec);
TwoSlitSection twoslit_from_json(const json& spec);

// Named deterministic phase generator recorded in reports: a mt19937_64
// stream seeded as given, each phase c = -pi + 2 pi u with u the standard
// 53-bit uniform draw.
inline constexpr const char* kShadowPhaseGenerator = "mt19937_64-u53";
std::vector<ShadowPhases> generate_shadow_phases(std::uint64_t seed, std::size_t count);

// Shortest decimal form of v that parses back to the same double.
std::string format_number(double v);

// CSV: header row then one row per sample, all numbers round-trip exact.
void write_profile_csv(std::ostream& out, const IntensityProfile& profile);
void write_table_csv(std::ostream& out, const std::vector<std::string>& columns,
                     const std::vector<std::vector<double>>& rows);

// JSON profile: {"label", "xs", "values", "config"} with the scenario echo.
json profile_to_json(const IntensityProfile& profile, const json& config_echo);
IntensityProfile profile_from_json(const json& doc);
json table_to_json(const std::vector<std::string>& columns,
                   const std::vector<std::vector<double>>& rows, const json& config_echo);

}  // namespace ghostspinor

#endif  // GHOSTSPINOR_SCENARIO_HPP
