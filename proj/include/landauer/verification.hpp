#pragma once

// Property and acceptance suites shared by the `verify` subcommand and the
// acceptance test binary. Each check returns a CriterionResult; none throws
// on a failed property.

#include <Eigen/Dense>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "cavity_field.hpp"
#include "dephasing_interaction.hpp"
#include "dissipative_interaction.hpp"
#include "entropy_landauer.hpp"
#include "fock_oracle.hpp"
#include "scenario.hpp"
#include "thermal_env.hpp"

namespace landauer::verify {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
  double time_limit = 0.0;
};

inline constexpr double fig_length = 1.234;
inline constexpr double fig_position = 0.52345;
inline constexpr double fig_population = 0.2;
inline constexpr int fig_resonant_mode = 20;

namespace detail {

template <class F>
CriterionResult timed(int id, std::string name, double limit, F&& body) {
  CriterionResult r;
  r.id = id;
  r.name = std::move(name);
  r.time_limit = limit;
  const auto t0 = std::chrono::steady_clock::now();
  std::ostringstream detail;
  detail.precision(6);
  bool ok = false;
  try {
    ok = body(detail);
  } catch (const std::exception& e) {
    detail << " exception: " << e.what();
    ok = false;
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (r.seconds > limit) {
    detail << " runtime " << r.seconds << " s exceeds " << limit << " s";
    ok = false;
  }
  r.passed = ok;
  r.detail = detail.str();
  return r;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Randomized σx sample shared by the bound, positivity and ordering sweeps.

struct DissipativeSample {
  double p = 0.0;
  double temperature = 1.0;
  double occupation = 0.0;
  double frequency = 1.0;
  double weight = 0.0;  // λ²|I-|²
  PerturbativeOutcome outcome;
};

/// Single-mode σx configurations: p ∈ [0,1] (endpoints included), T_E
/// log-uniform in [0.1, 100], random cavity/mode/gap/duration, and λ chosen so
/// that λ²|I-|² is uniform in (0, min(0.05, 0.1/(n̄+1))].
inline std::vector<DissipativeSample> dissipative_sweep(int count, std::uint64_t seed = 20240611) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<DissipativeSample> out;
  out.reserve(count);
  while (static_cast<int>(out.size()) < count) {
    const double length = 0.5 + 2.5 * unit(rng);
    const double position = length * (0.01 + 0.98 * unit(rng));
    const int j = 1 + static_cast<int>(40 * unit(rng));
    const CavitySpec spec(length, position, j);
    const double omega = mode_frequency(j, spec);
    const double gap = unit(rng) < 0.5 ? omega : omega * (0.5 + unit(rng));
    const double duration = 50.0 * (1.0 - unit(rng));
    const double temperature = 0.1 * std::pow(1000.0, unit(rng));
    const double pick = unit(rng);
    const double p = pick < 0.01 ? 0.0 : pick < 0.02 ? 1.0 : unit(rng);

    const ThermalEnvironment env(spec, temperature);
    const auto overlap = mode_overlap(j, gap, duration, spec);
    const double norm = std::norm(overlap.minus);
    if (!(norm > 1e-30)) continue;
    const double nbar = env.occupation(j);
    const double weight_max = std::min(0.05, perturbative_guard / (nbar + 1.0));
    const double weight = weight_max * (1.0 - unit(rng));
    const double lambda = std::sqrt(weight / norm);

    DissipativeSample s;
    s.p = p;
    s.temperature = temperature;
    s.occupation = nbar;
    s.frequency = omega;
    s.weight = weight;
    s.outcome = perturbative_outcome(p, env, {overlap}, lambda);
    out.push_back(std::move(s));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Criteria 1 and 2.

inline CriterionResult fig1_qualitative(int id, const std::string& preset_name) {
  const bool cold = preset_name == "fig1-te1";
  return detail::timed(id, "sigma_x curve signs and ordering (" + preset_name + ")", 5.0, [&](std::ostream& d) {
    const auto config = preset(preset_name);
    const auto tables = run_scenario(config);
    int checked = 0, bad = 0;
    for (const auto& r : tables.front().rows) {
      if (!(r.duration > 0.0)) continue;
      ++checked;
      const double q = r.heat_over_temperature, sm = r.entropy_mixed, sc = r.entropy_coherent;
      const bool signs = cold ? (q > 0.0 && sm > 0.0 && sc < 0.0) : (q <= 0.0 && sm <= 0.0 && sc <= 0.0);
      const bool order = q >= sm && sm >= sc;
      if (!(signs && order)) ++bad;
    }
    const auto& last = tables.front().rows.back();
    d << checked << " points, " << bad << " violations; at T=" << last.duration << ": dQ/T_E=" << last.heat_over_temperature
      << " dS_mixed=" << last.entropy_mixed << " dS_coherent=" << last.entropy_coherent;
    return checked > 0 && bad == 0;
  });
}

// ---------------------------------------------------------------------------
// Criterion 3.

inline CriterionResult landauer_bound(int id, int samples = 10000) {
  return detail::timed(id, "Landauer bound on presets and randomized sweeps", 60.0, [&](std::ostream& d) {
    int bad = 0;
    double worst = std::numeric_limits<double>::infinity();
    auto record = [&](double heat, double entropy, double temperature) {
      const auto r = landauer_check(heat, entropy, temperature);
      worst = std::min(worst, r.gap / bound_tolerance(heat));
      if (!r.holds) ++bad;
    };
    // (a) presets
    for (const char* name : {"fig1-te1", "fig1-te100"}) {
      const auto config = preset(name);
      const auto tables = run_scenario(config);
      for (const auto& row : tables.front().rows) {
        record(row.heat, row.entropy_coherent, config.temperature);
        record(row.heat, row.entropy_mixed, config.temperature);
      }
    }
    const int preset_bad = bad;
    // (b) σx, coherent and mixed initial states
    for (const auto& s : dissipative_sweep(samples)) {
      record(s.outcome.heat, entropy_change_coherent(s.p, s.outcome.delta_p, s.outcome.delta_d), s.temperature);
      record(s.outcome.heat, entropy_change_mixed(s.p, s.outcome.delta_p), s.temperature);
    }
    const int sx_bad = bad - preset_bad;
    // (c) σz
    std::mt19937_64 rng(777);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    int negative_heat = 0;
    for (int k = 0; k < samples; ++k) {
      const double length = 0.5 + 2.5 * unit(rng);
      const CavitySpec spec(length, length * (0.01 + 0.98 * unit(rng)), 1 + static_cast<int>(50 * unit(rng)));
      const ThermalEnvironment env(spec, 0.1 * std::pow(1000.0, unit(rng)));
      const double lambda = 2.0 * unit(rng);
      const double duration = 4.0 * length * unit(rng);
      const double p = unit(rng);
      const double chi = suppression_factor(duration, env, lambda);
      const double heat = heat_dephasing(duration, spec, lambda);
      if (heat < 0.0) ++negative_heat;
      const double entropy = -von_neumann_entropy(dephased_qubit_state(QubitDensityMatrix::pure(p), chi));
      record(heat, entropy, env.temperature());
    }
    const int sz_bad = bad - preset_bad - sx_bad;
    d << "violations: presets " << preset_bad << ", sigma_x " << sx_bad << ", sigma_z " << sz_bad
      << "; negative dephasing heat " << negative_heat << "; min gap/tolerance " << worst;
    return bad == 0 && negative_heat == 0;
  });
}

// ---------------------------------------------------------------------------
// Criterion 4.

inline CriterionResult positivity(int id, int samples = 10000) {
  return detail::timed(id, "p- and delta_d non-negativity on the sigma_x sweep", 60.0, [&](std::ostream& d) {
    int bad_minus = 0, bad_dd = 0;
    double min_minus = std::numeric_limits<double>::infinity();
    for (const auto& s : dissipative_sweep(samples)) {
      const double minus = eigenvalues_first_order(s.p, s.outcome.delta_p, s.outcome.delta_d).minus;
      min_minus = std::min(min_minus, minus);
      if (minus < -1e-14) ++bad_minus;
      if (s.outcome.delta_d < -1e-14) ++bad_dd;
      for (const auto& m : s.outcome.modes)
        if (m.delta_d < -1e-14) ++bad_dd;
    }
    d << "p- violations " << bad_minus << " (min " << min_minus << "), delta_d violations " << bad_dd;
    return bad_minus == 0 && bad_dd == 0;
  });
}

// ---------------------------------------------------------------------------
// Criterion 5.

struct DissipativeComparison {
  double lambda = 0.0;
  double duration = 0.0;
  double pert_delta_p = 0.0, oracle_delta_p = 0.0;
  double pert_delta_d = 0.0, oracle_delta_d = 0.0;
  double pert_heat = 0.0, oracle_heat = 0.0;
  double mixed_delta_p = 0.0, mixed_heat = 0.0;  // oracle with diagonal initial qubit
};

/// Duration for the single-mode σx comparison: the multiple of π/ω closest to
/// the point where λ_ref²T²u² = target. At such T, e^{2iωT} = 1 and I+ = 0, so
/// the counter-rotating terms drop out at order λ².
inline double comparison_duration(double lambda_ref, double target, const CavitySpec& spec, int mode) {
  const double omega = mode_frequency(mode, spec);
  const double u = std::abs(mode_function(mode, spec));
  const double raw = std::sqrt(target) / (lambda_ref * u);
  return std::max(1.0, std::round(raw * omega / std::numbers::pi)) * std::numbers::pi / omega;
}

inline DissipativeComparison compare_dissipative(double lambda, double duration, double temperature, int cutoff,
                                                 double p = fig_population) {
  using namespace oracle;
  const CavitySpec spec(fig_length, fig_position, fig_resonant_mode);
  const ThermalEnvironment env(spec, temperature);
  const double gap = mode_frequency(fig_resonant_mode, spec);
  DissipativeComparison c;
  c.lambda = lambda;
  c.duration = duration;
  const auto outcome = perturbative_outcome(p, env, {mode_overlap(fig_resonant_mode, gap, duration, spec)}, lambda);
  c.pert_delta_p = outcome.delta_p;
  c.pert_delta_d = outcome.delta_d;
  c.pert_heat = outcome.heat;

  const std::vector<FockMode> modes{{fig_resonant_mode, cutoff}};
  const Propagator prop(build_hamiltonian(Coupling::sigma_x, lambda, gap, spec, modes));
  for (auto kind : {InitialQubit::coherent, InitialQubit::mixed}) {
    const auto initial = build_joint_initial(p, kind, env, modes);
    const auto final_state = prop.evolve(initial, duration);
    const auto rho = to_interaction_picture(reduce_system(final_state), gap, duration);
    const double dq = environment_energy(final_state, spec) - environment_energy(initial, spec);
    if (kind == InitialQubit::coherent) {
      c.oracle_delta_p = rho.excited_population() - p;
      c.oracle_delta_d = std::sqrt(p * (1.0 - p)) - std::abs(rho.coherence());
      c.oracle_heat = dq;
    } else {
      c.mixed_delta_p = rho.excited_population() - p;
      c.mixed_heat = dq;
    }
  }
  return c;
}

inline CriterionResult oracle_convergence(int id) {
  return detail::timed(id, "sigma_x perturbative results converge to the Fock oracle", 120.0, [&](std::ostream& d) {
    const CavitySpec spec(fig_length, fig_position, fig_resonant_mode);
    const double duration = comparison_duration(0.02, 0.01, spec, fig_resonant_mode);
    bool ok = true;
    for (double temperature : {1.0, 20.0}) {
      std::vector<DissipativeComparison> ladder;
      for (double lambda : {0.02, 0.01, 0.005}) ladder.push_back(compare_dissipative(lambda, duration, temperature, 15));
      auto err = [](double a, double b) { return std::abs(a - b); };
      const auto& first = ladder.front();
      const double rel_p = err(first.pert_delta_p, first.oracle_delta_p) / std::abs(first.oracle_delta_p);
      const double rel_d = err(first.pert_delta_d, first.oracle_delta_d) / std::abs(first.oracle_delta_d);
      const double rel_q = err(first.pert_heat, first.oracle_heat) / std::abs(first.oracle_heat);
      d << "T_E=" << temperature << " T=" << duration << " rel err @0.02: dp " << rel_p << " dd " << rel_d << " dQ " << rel_q
        << "; shrink factors";
      ok = ok && rel_p < 0.05 && rel_d < 0.05 && rel_q < 0.05;
      for (std::size_t k = 0; k + 1 < ladder.size(); ++k) {
        const auto& a = ladder[k];
        const auto& b = ladder[k + 1];
        const double fp = err(a.pert_delta_p, a.oracle_delta_p) / err(b.pert_delta_p, b.oracle_delta_p);
        const double fd = err(a.pert_delta_d, a.oracle_delta_d) / err(b.pert_delta_d, b.oracle_delta_d);
        const double fq = err(a.pert_heat, a.oracle_heat) / err(b.pert_heat, b.oracle_heat);
        d << " [" << fp << ", " << fd << ", " << fq << "]";
        ok = ok && fp >= 8.0 && fd >= 8.0 && fq >= 8.0;
      }
      d << "; ";
    }
    return ok;
  });
}

// ---------------------------------------------------------------------------
// Criterion 6.

struct DephasingComparison {
  double duration = 0.0;
  double population_error = 0.0;
  double coherence_error = 0.0;
  double heat_error = 0.0;
  double chi = 1.0;
};

/// Single-mode σz run against the exact closed forms. T_E is set so that
/// n̄ = `occupation` for the chosen mode.
inline std::vector<DephasingComparison> compare_dephasing(double lambda, double occupation, int cutoff,
                                                          const std::vector<double>& durations, int mode = 1,
                                                          double p = fig_population) {
  using namespace oracle;
  const CavitySpec spec(fig_length, fig_position, mode);
  const double omega = mode_frequency(mode, spec);
  const ThermalEnvironment env(spec, omega / std::log1p(1.0 / occupation));
  const double gap = mode_frequency(fig_resonant_mode, fig_length);
  const std::vector<FockMode> modes{{mode, cutoff}};
  const auto initial = build_joint_initial(p, InitialQubit::coherent, env, modes);
  const Propagator prop(build_hamiltonian(Coupling::sigma_z, lambda, gap, spec, modes));
  const double e0 = environment_energy(initial, spec);
  std::vector<DephasingComparison> out;
  for (double t : durations) {
    const auto state = prop.evolve(initial, t);
    const auto rho = reduce_system(state);
    DephasingComparison c;
    c.duration = t;
    c.chi = suppression_factor(t, env, lambda);
    c.population_error = std::max(std::abs(rho.excited_population() - p), std::abs(rho.ground_population() - (1.0 - p)));
    c.coherence_error = std::abs(std::abs(rho.coherence()) - std::sqrt(p * (1.0 - p)) * c.chi);
    const double expected_heat = 0.25 * alpha_norm(mode, t, spec, lambda) * omega;
    c.heat_error = std::abs((environment_energy(state, spec) - e0) - expected_heat);
    out.push_back(c);
  }
  return out;
}

inline CriterionResult dephasing_exactness(int id) {
  return detail::timed(id, "sigma_z oracle reproduces the exact dephasing solution", 60.0, [&](std::ostream& d) {
    std::vector<double> durations;
    for (int k = 1; k <= 12; ++k) durations.push_back(fig_length * k / 6.0);
    const auto rows = compare_dephasing(0.5, 1.0, 30, durations);
    double pop = 0.0, coh = 0.0, heat = 0.0, chi_min = 1.0;
    for (const auto& r : rows) {
      pop = std::max(pop, r.population_error);
      coh = std::max(coh, r.coherence_error);
      heat = std::max(heat, r.heat_error);
      chi_min = std::min(chi_min, r.chi);
    }
    d << "max errors: populations " << pop << ", |coherence| " << coh << ", heat " << heat << " (min chi " << chi_min << ")";
    return pop <= 1e-10 && coh <= 1e-6 && heat <= 1e-6;
  });
}

// ---------------------------------------------------------------------------
// Criterion 7.

inline CriterionResult poincare_recurrence(int id) {
  return detail::timed(id, "Poincare recurrence with J = 200 modes", 10.0, [&](std::ostream& d) {
    const CavitySpec spec(fig_length, fig_position, 200);
    const ThermalEnvironment env(spec, 1.0);
    const double period = 2.0 * fig_length;
    double heat_max = 0.0, chi_min = 1.0, shift = 0.0;
    for (int k = 0; k < 100; ++k) {
      const double t = period * k / 100.0;
      const double chi = suppression_factor(t, env);
      heat_max = std::max(heat_max, heat_dephasing(t, spec));
      chi_min = std::min(chi_min, chi);
      shift = std::max(shift, std::abs(suppression_factor(t + period, env) - chi));
    }
    const double chi_rec = suppression_factor(period, env);
    const double heat_rec = heat_dephasing(period, spec);
    d << "chi(2L) = 1 - " << (1.0 - chi_rec) << ", dQ(2L)/dQmax " << heat_rec / heat_max
      << ", max |chi(T+2L) - chi(T)| " << shift << ", min chi " << chi_min;
    return chi_rec >= 1.0 - 1e-9 && heat_rec <= 1e-9 * heat_max && shift <= 1e-9 && chi_min < 1.0;
  });
}

// ---------------------------------------------------------------------------
// Criterion 8.

inline CriterionResult entropy_machinery(int id, int samples = 10000) {
  return detail::timed(id, "entropy machinery: exact and first-order eigenvalues", 60.0, [&](std::ostream& d) {
    std::mt19937_64 rng(4242);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    double worst_eig = 0.0;
    double worst_shrink = std::numeric_limits<double>::infinity();
    for (int k = 0; k < samples; ++k) {
      const double p = unit(rng);
      const double dp = 0.1 * (unit(rng) - 0.5);
      const double dd = 0.05 * unit(rng);
      const double c = std::sqrt(p * (1.0 - p));
      Eigen::Matrix2cd m;
      m << p + dp, c - dd, c - dd, 1.0 - p - dp;
      const Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> solver(m);
      const auto exact = eigenvalues_exact(p, dp, dd);
      worst_eig = std::max({worst_eig, std::abs(exact.minus - solver.eigenvalues()(0)),
                            std::abs(exact.plus - solver.eigenvalues()(1))});
      if (k < 1000) {
        double gaps[3];
        for (int s = 0; s < 3; ++s) {
          const double scale = std::pow(0.25, s);
          gaps[s] = std::abs(eigenvalues_exact(p, dp * scale, dd * scale).minus -
                             eigenvalues_first_order(p, dp * scale, dd * scale).minus);
        }
        if (gaps[0] > 1e-9) worst_shrink = std::min({worst_shrink, gaps[0] / gaps[1], gaps[1] / gaps[2]});
      }
    }
    const double s_mixed = von_neumann_entropy(QubitDensityMatrix::mixed(0.5));
    double s_pure = 0.0;
    for (double p : {0.0, 0.2, 0.5, 0.77, 1.0}) s_pure = std::max(s_pure, von_neumann_entropy(QubitDensityMatrix::pure(p)));
    d << "max eigenvalue error " << worst_eig << ", min shrink per quartering " << worst_shrink
      << ", |S(mixed) - ln 2| " << std::abs(s_mixed - std::log(2.0)) << ", max S(pure) " << s_pure;
    return worst_eig <= 1e-12 && worst_shrink >= 8.0 && std::abs(s_mixed - std::log(2.0)) <= 1e-14 && s_pure <= 1e-14;
  });
}

// ---------------------------------------------------------------------------
// Criterion 9.

inline CriterionResult mixed_vs_coherent(int id, int samples = 10000) {
  return detail::timed(id, "coherent initial state never beats the mixed one", 60.0, [&](std::ostream& d) {
    int bad = 0, compared = 0;
    for (const auto& s : dissipative_sweep(samples)) {
      if (!(s.outcome.delta_d > 0.0)) continue;
      ++compared;
      const double coherent = entropy_change_coherent(s.p, s.outcome.delta_p, s.outcome.delta_d);
      const double mixed = entropy_change_mixed(s.p, s.outcome.delta_p);
      if (coherent > mixed) ++bad;
    }
    // p -> 0: the two processes coincide.
    double worst_small_p = 0.0;
    const CavitySpec spec(fig_length, fig_position, fig_resonant_mode);
    for (double temperature : {1.0, 20.0, 100.0}) {
      const ThermalEnvironment env(spec, temperature);
      const auto overlap = mode_overlap(fig_resonant_mode, mode_frequency(fig_resonant_mode, spec), 20.0, spec);
      const double lambda = std::sqrt(0.01 / std::norm(overlap.minus));
      const double p = 1e-8;
      const auto o = perturbative_outcome(p, env, {overlap}, lambda);
      const double g = entropy_change_mixed(p, o.delta_p) - entropy_change_coherent(p, o.delta_p, o.delta_d);
      if (g < 0.0) ++bad;
      worst_small_p = std::max(worst_small_p, g);
    }
    d << compared << " sweep samples, " << bad << " violations; max mixed-coherent gap at p=1e-8: " << worst_small_p;
    return bad == 0 && compared > 0 && worst_small_p < 1e-6;
  });
}

// ---------------------------------------------------------------------------
// Criterion 10.

inline std::string read_bytes(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

inline CriterionResult determinism(int id, const std::filesystem::path& scratch) {
  return detail::timed(id, "preset reruns produce byte-identical files", 60.0, [&](std::ostream& d) {
    int files = 0, differing = 0;
    for (const auto& [name, config] : presets()) {
      const auto a = emit_outputs(run_scenario(config), config, scratch / "run_a");
      const auto b = emit_outputs(run_scenario(config), config, scratch / "run_b");
      std::vector<std::pair<std::filesystem::path, std::filesystem::path>> pairs{{a.manifest, b.manifest},
                                                                                 {a.summary, b.summary}};
      for (std::size_t k = 0; k < a.data.size(); ++k) pairs.emplace_back(a.data[k], b.data[k]);
      for (const auto& [x, y] : pairs) {
        ++files;
        if (read_bytes(x) != read_bytes(y) || read_bytes(x).empty()) ++differing;
      }
    }
    d << files << " files compared, " << differing << " differ";
    return differing == 0;
  });
}

inline std::vector<CriterionResult> run_all(const std::filesystem::path& scratch) {
  std::vector<CriterionResult> out;
  out.push_back(fig1_qualitative(1, "fig1-te1"));
  out.push_back(fig1_qualitative(2, "fig1-te100"));
  out.push_back(landauer_bound(3));
  out.push_back(positivity(4));
  out.push_back(oracle_convergence(5));
  out.push_back(dephasing_exactness(6));
  out.push_back(poincare_recurrence(7));
  out.push_back(entropy_machinery(8));
  out.push_back(mixed_vs_coherent(9));
  out.push_back(determinism(10, scratch));
  return out;
}

inline std::string format_result(const CriterionResult& r) {
  std::ostringstream s;
  s.precision(3);
  s << (r.passed ? "PASS" : "FAIL") << "  [" << r.id << "] " << r.name << " (" << std::fixed << r.seconds << " s)  "
    << r.detail;
  return s.str();
}

}  // namespace landauer::verify
