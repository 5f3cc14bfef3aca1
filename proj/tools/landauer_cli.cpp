// Command-line front end: preset runs, property suites and oracle comparisons.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "landauer/landauer.hpp"
#include "landauer/verification.hpp"

namespace {

using namespace landauer;

int run_command(const std::string& config_path, const std::string& preset_name,
                const std::vector<std::string>& overrides, const std::string& out_dir) {
  nlohmann::ordered_json j = preset_name.empty() ? nlohmann::ordered_json(ScenarioConfig{})
                                                 : nlohmann::ordered_json(preset(preset_name));
  if (!config_path.empty()) {
    std::ifstream f(config_path);
    if (!f) throw std::runtime_error("cannot read " + config_path);
    const auto file = nlohmann::ordered_json::parse(f);
    // File keys refine the preset (or the defaults).
    j.merge_patch(file);
  }
  for (const auto& o : overrides) apply_override(j, o);
  ScenarioConfig config = config_from_json(j);
  if (!out_dir.empty()) config.output_directory = out_dir;

  const auto tables = run_scenario(config);
  const auto files = emit_outputs(tables, config, config.output_directory);
  bool ok = true;
  for (const auto& t : tables) ok = ok && t.all_bounds_hold();
  for (const auto& p : files.data) std::cout << "wrote " << p.string() << "\n";
  std::cout << "wrote " << files.manifest.string() << "\n" << "wrote " << files.summary.string() << "\n";
  std::cout << summary_text(config, tables);
  return ok ? 0 : 1;
}

int verify_command(const std::string& scratch) {
  const auto dir = scratch.empty() ? std::filesystem::temp_directory_path() / "landauer_verify" : std::filesystem::path(scratch);
  bool ok = true;
  for (const auto& r : verify::run_all(dir)) {
    std::cout << verify::format_result(r) << "\n";
    ok = ok && r.passed;
  }
  return ok ? 0 : 1;
}

int oracle_command(const std::string& which, double lambda, double temperature, int cutoff) {
  std::cout.precision(10);
  const Case c = case_from_string(which);
  if (c == Case::dissipative) {
    const CavitySpec spec(verify::fig_length, verify::fig_position, verify::fig_resonant_mode);
    const double t = verify::comparison_duration(lambda, 0.01, spec, verify::fig_resonant_mode);
    const auto r = verify::compare_dissipative(lambda, t, temperature, cutoff);
    std::cout << "sigma_x single resonant mode j=" << verify::fig_resonant_mode << ", lambda=" << lambda << ", T=" << t
              << ", T_E=" << temperature << ", n_max=" << cutoff << "\n";
    std::printf("%-8s %18s %18s\n", "", "perturbative", "oracle");
    std::printf("%-8s %18.10g %18.10g\n", "delta_p", r.pert_delta_p, r.oracle_delta_p);
    std::printf("%-8s %18.10g %18.10g\n", "delta_d", r.pert_delta_d, r.oracle_delta_d);
    std::printf("%-8s %18.10g %18.10g\n", "heat", r.pert_heat, r.oracle_heat);
    std::fflush(stdout);
    std::cout << "mixed initial state: delta_p " << r.mixed_delta_p << ", heat " << r.mixed_heat << "\n";
    const auto cgap = landauer_check(r.oracle_heat, -binary_entropy(eigenvalues_exact(verify::fig_population,
                                                                                     r.oracle_delta_p, r.oracle_delta_d).minus),
                                     temperature);
    std::cout << "oracle Landauer gap " << cgap.gap << (cgap.holds ? " (holds)" : " (VIOLATED)") << "\n";
    return cgap.holds ? 0 : 1;
  }
  std::vector<double> durations;
  for (int k = 1; k <= 12; ++k) durations.push_back(verify::fig_length * k / 6.0);
  const double occupation = 1.0;
  bool ok = true;
  std::cout << "sigma_z single mode j=1, lambda=" << lambda << ", nbar=" << occupation << ", n_max=" << cutoff << "\n"
            << std::flush;
  std::printf("%12s %14s %14s %14s %14s\n", "T", "chi", "population_err", "coherence_err", "heat_err");
  for (const auto& r : verify::compare_dephasing(lambda, occupation, cutoff, durations)) {
    std::printf("%12.6g %14.8g %14.3e %14.3e %14.3e\n", r.duration, r.chi, r.population_error, r.coherence_error,
                r.heat_error);
    ok = ok && r.population_error <= 1e-10;
  }
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Qubit-cavity decoherence and Landauer bound simulator"};
  app.set_version_flag("--version", std::string(landauer::version));
  app.require_subcommand(1);

  std::string config_path, preset_name, out_dir;
  std::vector<std::string> overrides;
  auto* run = app.add_subcommand("run", "Run a scenario and write CSV, manifest and summary files");
  run->add_option("--config", config_path, "JSON scenario file")->check(CLI::ExistingFile);
  run->add_option("--preset", preset_name, "Built-in preset: fig1-te1, fig1-te100, fig2, fig3");
  run->add_option("--set", overrides, "Override a config key, e.g. --set time.steps=100");
  run->add_option("--out", out_dir, "Output directory")->required();

  std::string scratch;
  auto* verify = app.add_subcommand("verify", "Run the property and acceptance suites");
  verify->add_option("--scratch", scratch, "Directory for determinism reruns");

  std::string which = "sigma_x";
  double lambda = 0.02, temperature = 1.0;
  int cutoff = 15;
  auto* oracle = app.add_subcommand("oracle", "Compare closed forms with the truncated-Fock oracle");
  oracle->add_option("--case", which, "sigma_x | sigma_z (also x, z, σx, σz)");
  oracle->add_option("--lambda", lambda, "Coupling constant")->required();
  oracle->add_option("--temperature", temperature, "Environment temperature (sigma_x only)");
  oracle->add_option("--cutoff", cutoff, "Fock cutoff n_max");

  CLI11_PARSE(app, argc, argv);
  if (which == "σx") which = "sigma_x";
  if (which == "σz") which = "sigma_z";
  // Displaced thermal states need more levels than the σx comparison.
  if (oracle->parsed() && oracle->count("--cutoff") == 0 && (which == "sigma_z" || which == "z")) cutoff = 30;

  try {
    if (run->parsed()) return run_command(config_path, preset_name, overrides, out_dir);
    if (verify->parsed()) return verify_command(scratch);
    if (oracle->parsed()) return oracle_command(which, lambda, temperature, cutoff);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
