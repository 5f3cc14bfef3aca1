#pragma once

// Configuration-driven runs over a time grid, and their file outputs.

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "cavity_field.hpp"
#include "dephasing_interaction.hpp"
#include "dissipative_interaction.hpp"
#include "entropy_landauer.hpp"
#include "errors.hpp"
#include "fock_oracle.hpp"
#include "thermal_env.hpp"
#include "version.hpp"

namespace landauer {

enum class Case { dissipative, dephasing, both };

struct TimeGrid {
  double start = 0.0;
  double stop = 1.0;
  int steps = 0;

  /// `steps` equally spaced points in (start, stop]; empty when steps == 0.
  std::vector<double> points() const {
    std::vector<double> out(static_cast<std::size_t>(std::max(steps, 0)));
    for (int k = 0; k < steps; ++k) out[k] = start + (stop - start) * (k + 1) / steps;
    return out;
  }

  friend bool operator==(const TimeGrid&, const TimeGrid&) = default;
};

struct OracleSettings {
  bool enabled = false;
  int cutoff = 15;
  friend bool operator==(const OracleSettings&, const OracleSettings&) = default;
};

struct ScenarioConfig {
  std::string name = "scenario";
  Case interaction = Case::dissipative;
  double length = 1.234;
  double position = 0.52345;
  int modes = 20;
  double p = 0.2;
  double temperature = 1.0;
  double coupling = 0.01;
  /// Qubit gap is ω_{gap_mode} when set, else gap_value.
  std::optional<int> gap_mode = 20;
  double gap_value = 0.0;
  /// σx runs keep only the resonant mode gap_mode.
  bool single_mode = true;
  TimeGrid time;
  OracleSettings oracle;
  std::string output_directory = "out";

  CavitySpec cavity() const { return {length, position, modes}; }
  double qubit_gap() const { return gap_mode ? mode_frequency(*gap_mode, length) : gap_value; }

  friend bool operator==(const ScenarioConfig&, const ScenarioConfig&) = default;
};

inline std::string to_string(Case c) {
  switch (c) {
    case Case::dissipative: return "dissipative";
    case Case::dephasing: return "dephasing";
    case Case::both: return "both";
  }
  return "unknown";
}

inline Case case_from_string(const std::string& s) {
  if (s == "dissipative" || s == "sigma_x" || s == "x") return Case::dissipative;
  if (s == "dephasing" || s == "sigma_z" || s == "z") return Case::dephasing;
  if (s == "both") return Case::both;
  throw std::domain_error("unknown interaction case '" + s + "'");
}

inline void to_json(nlohmann::ordered_json& j, const ScenarioConfig& c) {
  j = nlohmann::ordered_json{
      {"name", c.name},
      {"case", to_string(c.interaction)},
      {"cavity", {{"length", c.length}, {"qubit_position", c.position}, {"modes", c.modes}}},
      {"p", c.p},
      {"temperature", c.temperature},
      {"coupling", c.coupling},
      {"gap", c.gap_mode ? nlohmann::ordered_json{{"mode", *c.gap_mode}} : nlohmann::ordered_json{{"value", c.gap_value}}},
      {"single_mode", c.single_mode},
      {"time", {{"start", c.time.start}, {"stop", c.time.stop}, {"steps", c.time.steps}}},
      {"oracle", {{"enabled", c.oracle.enabled}, {"cutoff", c.oracle.cutoff}}},
      {"output", {{"directory", c.output_directory}}},
  };
}

/// Checks every value against the module domains. Throws std::domain_error.
inline void validate(const ScenarioConfig& c) {
  (void)c.cavity();
  if (!(c.p >= 0.0 && c.p <= 1.0)) throw std::domain_error("p must lie in [0, 1]");
  if (!(c.temperature > 0.0)) throw std::domain_error("temperature must be positive");
  if (!std::isfinite(c.coupling)) throw std::domain_error("coupling must be finite");
  if (c.gap_mode && (*c.gap_mode < 1)) throw std::domain_error("gap mode must be >= 1");
  if (!c.gap_mode && !(c.gap_value >= 0.0)) throw std::domain_error("qubit gap must be non-negative");
  if (c.interaction != Case::dephasing && c.single_mode) {
    if (!c.gap_mode) throw std::domain_error("single-mode runs need gap.mode");
    if (*c.gap_mode > c.modes) throw std::domain_error("resonant mode exceeds cavity.modes");
  }
  if (c.time.steps < 0) throw std::domain_error("time.steps must be non-negative");
  if (c.time.steps > 0 && !(c.time.stop > c.time.start)) throw std::domain_error("time grid must be increasing");
  if (c.time.start < 0.0) throw std::domain_error("time grid must start at T >= 0");
  if (c.oracle.cutoff < 0) throw std::domain_error("oracle cutoff must be non-negative");
}

inline ScenarioConfig config_from_json(const nlohmann::ordered_json& j) {
  ScenarioConfig c;
  c.name = j.value("name", c.name);
  c.interaction = case_from_string(j.value("case", to_string(c.interaction)));
  if (j.contains("cavity")) {
    const auto& cav = j.at("cavity");
    c.length = cav.value("length", c.length);
    c.position = cav.value("qubit_position", c.position);
    c.modes = cav.value("modes", c.modes);
  }
  c.p = j.value("p", c.p);
  c.temperature = j.value("temperature", c.temperature);
  c.coupling = j.value("coupling", c.coupling);
  if (j.contains("gap")) {
    const auto& g = j.at("gap");
    if (g.contains("mode") && !g.at("mode").is_null()) {
      c.gap_mode = g.at("mode").get<int>();
    } else if (g.contains("value")) {
      c.gap_mode.reset();
      c.gap_value = g.at("value").get<double>();
    }
  }
  c.single_mode = j.value("single_mode", c.single_mode);
  if (j.contains("time")) {
    const auto& t = j.at("time");
    c.time.start = t.value("start", c.time.start);
    c.time.stop = t.value("stop", c.time.stop);
    c.time.steps = t.value("steps", c.time.steps);
  }
  if (j.contains("oracle")) {
    c.oracle.enabled = j.at("oracle").value("enabled", c.oracle.enabled);
    c.oracle.cutoff = j.at("oracle").value("cutoff", c.oracle.cutoff);
  }
  if (j.contains("output")) c.output_directory = j.at("output").value("directory", c.output_directory);
  validate(c);
  return c;
}

inline ScenarioConfig parse_config(const std::string& text) {
  return config_from_json(nlohmann::ordered_json::parse(text));
}

inline std::string serialize_config(const ScenarioConfig& c) {
  nlohmann::ordered_json j = c;
  return j.dump(2) + "\n";
}

/// Sets a dotted key ("time.steps") from "key=value". The value is read as JSON
/// when it parses, otherwise as a string.
inline void apply_override(nlohmann::ordered_json& j, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) throw std::domain_error("override must look like key=value");
  const std::string key = assignment.substr(0, eq);
  const std::string raw = assignment.substr(eq + 1);
  nlohmann::ordered_json value = nlohmann::ordered_json::parse(raw, nullptr, false);
  if (value.is_discarded()) value = raw;

  nlohmann::ordered_json* node = &j;
  std::size_t pos = 0;
  while (true) {
    const auto dot = key.find('.', pos);
    const std::string part = key.substr(pos, dot - pos);
    if (dot == std::string::npos) {
      (*node)[part] = value;
      break;
    }
    node = &(*node)[part];
    pos = dot + 1;
  }
  // A new gap selector replaces the other one.
  if (key == "gap.value" && j["gap"].contains("mode")) j["gap"].erase("mode");
  if (key == "gap.mode" && j["gap"].contains("value")) j["gap"].erase("value");
}

/// Built-in presets: two single-mode σx runs and the 200-mode σz recurrence run.
inline std::map<std::string, ScenarioConfig> presets() {
  std::map<std::string, ScenarioConfig> out;

  ScenarioConfig fig1;
  fig1.interaction = Case::dissipative;
  fig1.modes = 20;
  fig1.gap_mode = 20;
  fig1.single_mode = true;
  fig1.coupling = 0.01;
  fig1.time = {0.0, 50.0, 500};

  fig1.name = "fig1-te1";
  fig1.temperature = 1.0;
  out[fig1.name] = fig1;

  fig1.name = "fig1-te100";
  fig1.temperature = 100.0;
  out[fig1.name] = fig1;

  ScenarioConfig fig2;
  fig2.interaction = Case::dephasing;
  fig2.modes = 200;
  fig2.gap_mode = 20;
  fig2.single_mode = false;
  fig2.coupling = 1.0;
  fig2.temperature = 1.0;
  fig2.time = {0.0, 4.0 * 1.234, 400};

  fig2.name = "fig2";
  out[fig2.name] = fig2;
  fig2.name = "fig3";
  out[fig2.name] = fig2;
  return out;
}

inline ScenarioConfig preset(const std::string& name) {
  auto all = presets();
  auto it = all.find(name);
  if (it == all.end()) throw std::domain_error("unknown preset '" + name + "'");
  return it->second;
}

struct ScenarioRow {
  double duration = 0.0;
  double delta_p = 0.0;
  double coherence = 0.0;  // δd (σx) or χ (σz)
  double heat = 0.0;
  double heat_over_temperature = 0.0;
  double entropy_coherent = 0.0;
  double entropy_mixed = 0.0;
  double gap = 0.0;
  bool bound_holds = true;
  // Oracle columns; filled when the config enables the oracle.
  double oracle_delta_p = 0.0;
  double oracle_coherence = 0.0;
  double oracle_heat = 0.0;
};

struct ResultTable {
  Case interaction = Case::dissipative;
  bool has_oracle = false;
  std::vector<ScenarioRow> rows;

  std::vector<std::string> columns() const {
    std::vector<std::string> c{"T", "delta_p", interaction == Case::dephasing ? "chi" : "delta_d", "heat",
                               "heat_over_te", "dS_coherent", "dS_mixed", "gap", "bound_holds"};
    if (has_oracle) {
      c.push_back("oracle_delta_p");
      c.push_back(interaction == Case::dephasing ? "oracle_chi" : "oracle_delta_d");
      c.push_back("oracle_heat");
    }
    return c;
  }

  bool all_bounds_hold() const {
    return std::all_of(rows.begin(), rows.end(), [](const ScenarioRow& r) { return r.bound_holds; });
  }
};

namespace detail {

template <class F>
void parallel_for(std::size_t count, F&& body) {
  const std::size_t workers = std::min<std::size_t>(std::max(1u, std::thread::hardware_concurrency()), count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::vector<std::exception_ptr> errors(workers);
  {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w)
      pool.emplace_back([&, w] {
        try {
          for (std::size_t i = w; i < count; i += workers) body(i);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

template <class E>
[[noreturn]] void rethrow_at(const E& e, double duration) {
  std::ostringstream msg;
  msg.precision(17);
  msg << "at T=" << duration << ": " << e.what();
  throw E(msg.str());
}

inline ScenarioRow dissipative_row(const ScenarioConfig& c, const ThermalEnvironment& env, double duration) {
  const CavitySpec& spec = env.cavity();
  const double gap = c.qubit_gap();
  std::vector<ModeOverlap> overlaps;
  if (c.single_mode) {
    overlaps.push_back(mode_overlap(*c.gap_mode, gap, duration, spec));
  } else {
    overlaps = mode_overlaps(gap, duration, spec);
  }
  const auto outcome = perturbative_outcome(c.p, env, overlaps, c.coupling);
  (void)evolved_qubit_state(QubitDensityMatrix::pure(c.p), outcome.delta_p, outcome.delta_d);

  ScenarioRow r;
  r.duration = duration;
  r.delta_p = outcome.delta_p;
  r.coherence = outcome.delta_d;
  r.heat = outcome.heat;
  r.heat_over_temperature = outcome.heat / c.temperature;
  r.entropy_coherent = entropy_change_coherent(c.p, outcome.delta_p, outcome.delta_d);
  r.entropy_mixed = entropy_change_mixed(c.p, outcome.delta_p);
  const auto report = landauer_check(r.heat, r.entropy_coherent, c.temperature);
  r.gap = report.gap;
  r.bound_holds = report.holds;
  return r;
}

inline ScenarioRow dephasing_row(const ScenarioConfig& c, const ThermalEnvironment& env, double duration) {
  const double chi = suppression_factor(duration, env, c.coupling);
  const auto rho = dephased_qubit_state(QubitDensityMatrix::pure(c.p), chi);
  ScenarioRow r;
  r.duration = duration;
  r.coherence = chi;
  r.heat = heat_dephasing(duration, env.cavity(), c.coupling);
  r.heat_over_temperature = r.heat / c.temperature;
  r.entropy_coherent = -von_neumann_entropy(rho);
  r.entropy_mixed = 0.0;  // σz leaves a diagonal state untouched
  const auto report = landauer_check(r.heat, r.entropy_coherent, c.temperature);
  r.gap = report.gap;
  r.bound_holds = report.holds;
  return r;
}

/// Oracle columns for the σx single-mode case: one joint evolution per point.
inline void fill_dissipative_oracle(const ScenarioConfig& c, const ThermalEnvironment& env,
                                    std::vector<ScenarioRow>& rows) {
  using namespace oracle;
  if (!c.single_mode) throw std::domain_error("the σx oracle supports single-mode runs only");
  const std::vector<FockMode> modes{{*c.gap_mode, c.oracle.cutoff}};
  const auto initial = build_joint_initial(c.p, InitialQubit::coherent, env, modes);
  const Propagator prop(build_hamiltonian(Coupling::sigma_x, c.coupling, c.qubit_gap(), env.cavity(), modes));
  const double e0 = environment_energy(initial, env.cavity());
  const double c0 = std::sqrt(c.p * (1.0 - c.p));
  parallel_for(rows.size(), [&](std::size_t i) {
    const double t = rows[i].duration;
    try {
      const auto state = prop.evolve(initial, t);
      const auto rho = reduce_system(state);
      rows[i].oracle_delta_p = rho.excited_population() - c.p;
      rows[i].oracle_coherence = c0 - std::abs(rho.coherence());
      rows[i].oracle_heat = environment_energy(state, env.cavity()) - e0;
    } catch (const TruncationError& e) {
      rethrow_at(e, t);
    }
  });
}

/// Oracle columns for σz: modes are uncoupled, so χ and ΔQ are assembled from
/// independent single-mode evolutions.
inline void fill_dephasing_oracle(const ScenarioConfig& c, const ThermalEnvironment& env,
                                  std::vector<ScenarioRow>& rows) {
  using namespace oracle;
  const auto& spec = env.cavity();
  const double c0 = std::sqrt(c.p * (1.0 - c.p));
  for (auto& r : rows) {
    r.oracle_coherence = 1.0;
    r.oracle_heat = 0.0;
  }
  for (int j = 1; j <= spec.mode_count(); ++j) {
    const std::vector<FockMode> modes{{j, c.oracle.cutoff}};
    const auto initial = build_joint_initial(c.p, InitialQubit::coherent, env, modes);
    const Propagator prop(build_hamiltonian(Coupling::sigma_z, c.coupling, c.qubit_gap(), spec, modes));
    const double e0 = environment_energy(initial, spec);
    std::vector<double> ratio(rows.size()), heat(rows.size());
    parallel_for(rows.size(), [&](std::size_t i) {
      try {
        const auto state = prop.evolve(initial, rows[i].duration);
        ratio[i] = c0 > 0.0 ? std::abs(reduce_system(state).coherence()) / c0 : 1.0;
        heat[i] = environment_energy(state, spec) - e0;
      } catch (const TruncationError& e) {
        rethrow_at(e, rows[i].duration);
      }
    });
    for (std::size_t i = 0; i < rows.size(); ++i) {
      rows[i].oracle_coherence *= ratio[i];
      rows[i].oracle_heat += heat[i];
    }
  }
}

inline ResultTable run_single(const ScenarioConfig& c, Case which) {
  const ThermalEnvironment env(c.cavity(), c.temperature);
  const auto grid = c.time.points();
  ResultTable table;
  table.interaction = which;
  table.has_oracle = c.oracle.enabled;
  table.rows.resize(grid.size());
  parallel_for(grid.size(), [&](std::size_t i) {
    try {
      table.rows[i] = which == Case::dephasing ? dephasing_row(c, env, grid[i]) : dissipative_row(c, env, grid[i]);
    } catch (const PerturbationBreakdown& e) {
      rethrow_at(e, grid[i]);
    }
  });
  if (c.oracle.enabled) {
    if (which == Case::dephasing) {
      fill_dephasing_oracle(c, env, table.rows);
    } else {
      fill_dissipative_oracle(c, env, table.rows);
    }
  }
  return table;
}

}  // namespace detail

/// One table per interaction case (two for Case::both: σx first).
inline std::vector<ResultTable> run_scenario(const ScenarioConfig& config) {
  validate(config);
  std::vector<ResultTable> out;
  if (config.interaction != Case::dephasing) out.push_back(detail::run_single(config, Case::dissipative));
  if (config.interaction != Case::dissipative) out.push_back(detail::run_single(config, Case::dephasing));
  return out;
}

/// %.17g formatting, locale independent.
inline std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string to_csv(const ResultTable& table) {
  std::string out;
  const auto cols = table.columns();
  for (std::size_t i = 0; i < cols.size(); ++i) out += (i ? "," : "") + cols[i];
  out += "\n";
  for (const auto& r : table.rows) {
    std::vector<double> v{r.duration, r.delta_p, r.coherence, r.heat, r.heat_over_temperature,
                          r.entropy_coherent, r.entropy_mixed, r.gap};
    for (double x : v) out += format_number(x) + ",";
    out += r.bound_holds ? "1" : "0";
    if (table.has_oracle)
      for (double x : {r.oracle_delta_p, r.oracle_coherence, r.oracle_heat}) out += "," + format_number(x);
    out += "\n";
  }
  return out;
}

/// Largest |χ_J - χ_2J| over the grid, used to report mode-count convergence.
inline double mode_doubling_change(const ScenarioConfig& c) {
  ScenarioConfig doubled = c;
  doubled.modes = 2 * c.modes;
  const ThermalEnvironment env(c.cavity(), c.temperature);
  const ThermalEnvironment env2(doubled.cavity(), c.temperature);
  double worst = 0.0;
  for (double t : c.time.points())
    worst = std::max(worst, std::abs(suppression_factor(t, env, c.coupling) - suppression_factor(t, env2, c.coupling)));
  return worst;
}

inline std::string summary_text(const ScenarioConfig& c, const std::vector<ResultTable>& tables) {
  std::ostringstream s;
  s << "scenario " << c.name << " (" << to_string(c.interaction) << ")\n";
  for (const auto& t : tables) {
    s << "[" << to_string(t.interaction) << "]\n";
    s << "rows " << t.rows.size() << "\n";
    if (!t.rows.empty()) {
      const auto [lo, hi] = std::minmax_element(t.rows.begin(), t.rows.end(),
                                                [](const auto& a, const auto& b) { return a.gap < b.gap; });
      s << "min_gap " << format_number(lo->gap) << "\n";
      s << "max_gap " << format_number(hi->gap) << "\n";
    }
    s << "bounds_hold " << (t.all_bounds_hold() ? "yes" : "no") << "\n";
    if (t.interaction == Case::dephasing && !t.rows.empty())
      s << "chi_change_on_mode_doubling " << format_number(mode_doubling_change(c)) << "\n";
  }
  return s.str();
}

struct EmittedFiles {
  std::vector<std::filesystem::path> data;
  std::filesystem::path manifest;
  std::filesystem::path summary;
};

inline void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw std::runtime_error("cannot write " + path.string());
  f << content;
  if (!f) throw std::runtime_error("failed writing " + path.string());
}

/// Writes <name>_<case>.csv per table, <name>_manifest.json and
/// <name>_summary.txt into `directory`. Contents depend only on the config.
inline EmittedFiles emit_outputs(const std::vector<ResultTable>& tables, const ScenarioConfig& c,
                                 const std::filesystem::path& directory) {
  std::error_code ec;
  std::filesystem::create_directories(directory, ec);
  if (ec || !std::filesystem::is_directory(directory))
    throw std::runtime_error("cannot create output directory " + directory.string());
  EmittedFiles out;
  for (const auto& t : tables) {
    auto path = directory / (c.name + "_" + to_string(t.interaction) + ".csv");
    write_file(path, to_csv(t));
    out.data.push_back(path);
  }
  nlohmann::ordered_json manifest{{"library", "landauer"}, {"version", version}, {"config", c}};
  out.manifest = directory / (c.name + "_manifest.json");
  write_file(out.manifest, manifest.dump(2) + "\n");
  out.summary = directory / (c.name + "_summary.txt");
  write_file(out.summary, summary_text(c, tables));
  return out;
}

}  // namespace landauer
