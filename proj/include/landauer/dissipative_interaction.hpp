#pragma once

// σx coupling: second-order (λ²) evolution keeping only the resonant |I-,j|²
// terms.

#include <cmath>
#include <complex>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "cavity_field.hpp"
#include "errors.hpp"
#include "numeric.hpp"
#include "qubit_state.hpp"
#include "thermal_env.hpp"

namespace landauer {

/// λ²(n̄+1)|I-|² above this value marks the outcome as outside the perturbative
/// regime.
inline constexpr double perturbative_guard = 0.1;

/// Evolved eigenvalues below this value raise PerturbationBreakdown.
inline constexpr double breakdown_eigenvalue = -1e-9;

struct ModeContribution {
  int mode = 0;
  double frequency = 0.0;
  double occupation = 0.0;
  double weight = 0.0;  // λ²|I-,j|²
  double delta_p = 0.0;
  double delta_d = 0.0;
  double heat = 0.0;
};

struct PerturbativeOutcome {
  double delta_p = 0.0;
  double delta_d = 0.0;
  double heat = 0.0;
  double coupling = 0.0;
  double duration = 0.0;
  std::vector<ModeContribution> modes;
  /// Set when some mode has λ²(n̄+1)|I-|² > perturbative_guard.
  bool outside_perturbative_regime = false;
};

namespace detail {

inline void check_population(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::domain_error("excited population must lie in [0, 1]");
}

}  // namespace detail

/// Per-mode δp, δd and heat for the pure initial state with excited population p.
///
/// For each overlap (mode j, weight w = λ²|I-,j|²):
///   δp_j = w [n̄_j(1-p) - (n̄_j+1)p]
///   δd_j = w sqrt(p(1-p)) (n̄_j + 1/2)
///   ΔQ_j = -ω_j δp_j
/// Totals are pairwise sums in ascending input order.
inline PerturbativeOutcome perturbative_outcome(double p, const ThermalEnvironment& env,
                                                const std::vector<ModeOverlap>& overlaps,
                                                double coupling) {
  detail::check_population(p);
  PerturbativeOutcome out;
  out.coupling = coupling;
  out.duration = overlaps.empty() ? 0.0 : overlaps.front().duration;
  out.modes.reserve(overlaps.size());

  const double coherence = std::sqrt(p * (1.0 - p));
  std::vector<double> dp, dd, dq;
  for (const auto& ov : overlaps) {
    ModeContribution m;
    m.mode = ov.mode;
    m.frequency = mode_frequency(ov.mode, env.cavity());
    m.occupation = env.occupation(ov.mode);
    m.weight = coupling * coupling * std::norm(ov.minus);
    m.delta_p = m.weight * (m.occupation * (1.0 - p) - (m.occupation + 1.0) * p);
    m.delta_d = m.weight * coherence * (m.occupation + 0.5);
    m.heat = -m.frequency * m.delta_p;
    if (m.weight * (m.occupation + 1.0) > perturbative_guard) out.outside_perturbative_regime = true;
    dp.push_back(m.delta_p);
    dd.push_back(m.delta_d);
    dq.push_back(m.heat);
    out.modes.push_back(m);
  }
  out.delta_p = detail::pairwise_sum(dp);
  out.delta_d = detail::pairwise_sum(dd);
  out.heat = detail::pairwise_sum(dq);
  return out;
}

inline double delta_p(double p, const ThermalEnvironment& env, const std::vector<ModeOverlap>& overlaps,
                      double coupling) {
  return perturbative_outcome(p, env, overlaps, coupling).delta_p;
}

inline double delta_d(double p, const ThermalEnvironment& env, const std::vector<ModeOverlap>& overlaps,
                      double coupling) {
  return perturbative_outcome(p, env, overlaps, coupling).delta_d;
}

/// ΔQ = Σ_j λ² ω_j |I-,j|² [p(n̄_j+1) - (1-p)n̄_j].
inline double heat(double p, const ThermalEnvironment& env, const std::vector<ModeOverlap>& overlaps,
                   double coupling) {
  return perturbative_outcome(p, env, overlaps, coupling).heat;
}

/// rho_S + [[δp, -δd], [-δd, -δp]]. Throws PerturbationBreakdown when the
/// result has an eigenvalue below breakdown_eigenvalue.
inline QubitDensityMatrix evolved_qubit_state(const QubitDensityMatrix& initial, double dp, double dd) {
  QubitDensityMatrix out = initial;
  out(0, 0) += dp;
  out(1, 1) -= dp;
  out(0, 1) -= dd;
  out(1, 0) -= dd;
  const auto [hi, lo] = out.eigenvalues();
  if (lo < breakdown_eigenvalue) {
    std::ostringstream msg;
    msg << "second-order qubit state has eigenvalue " << lo << " (delta_p=" << dp << ", delta_d=" << dd
        << "); coupling or duration too large";
    throw PerturbationBreakdown(msg.str());
  }
  return out;
}

/// Second-order change of one mode's diagonal, indexed by Fock level.
struct ModeDiagonalUpdate {
  int mode = 0;
  int cutoff = 0;               // highest initial level included
  std::vector<double> raising;   // weight gained on |n><n| from |n-1>
  std::vector<double> lowering;  // weight gained on |n><n| from |n+1>
  std::vector<double> depletion; // U(2) loss on |n><n|

  double net(int n) const { return raising[n] + lowering[n] + depletion[n]; }

  /// Total added probability; zero up to rounding.
  double probability_balance() const {
    std::vector<double> terms(raising.size());
    for (std::size_t n = 0; n < terms.size(); ++n) terms[n] = net(static_cast<int>(n));
    return detail::pairwise_sum(terms);
  }

  /// Change of <a†a> implied by the update.
  double occupation_change() const {
    std::vector<double> terms(raising.size());
    for (std::size_t n = 0; n < terms.size(); ++n) terms[n] = static_cast<double>(n) * net(static_cast<int>(n));
    return detail::pairwise_sum(terms);
  }
};

/// Diagonal environment update from tracing out the qubit at order λ²:
///   λ²p|I-|² Q(n)(n+1)       onto |n+1><n+1|
///   λ²(1-p)|I-|² Q(n) n      onto |n-1><n-1|
///   -λ²[n(1-p) + (n+1)p]|I-|² Q(n) on |n><n|
/// Initial levels run up to truncation_cutoff(n̄_j, tail_tol).
inline std::vector<ModeDiagonalUpdate> environment_diagonal_update(double p, const ThermalEnvironment& env,
                                                                   const std::vector<ModeOverlap>& overlaps,
                                                                   double coupling,
                                                                   double tail_tol = 1e-16) {
  detail::check_population(p);
  std::vector<ModeDiagonalUpdate> out;
  out.reserve(overlaps.size());
  for (const auto& ov : overlaps) {
    const double nbar = env.occupation(ov.mode);
    const double w = coupling * coupling * std::norm(ov.minus);
    ModeDiagonalUpdate u;
    u.mode = ov.mode;
    u.cutoff = truncation_cutoff(nbar, tail_tol);
    const std::size_t size = static_cast<std::size_t>(u.cutoff) + 2;
    u.raising.assign(size, 0.0);
    u.lowering.assign(size, 0.0);
    u.depletion.assign(size, 0.0);
    for (int n = 0; n <= u.cutoff; ++n) {
      const double q = thermal_weight(n, nbar);
      u.raising[n + 1] += w * p * q * (n + 1.0);
      if (n > 0) u.lowering[n - 1] += w * (1.0 - p) * q * n;
      u.depletion[n] -= w * (n * (1.0 - p) + (n + 1.0) * p) * q;
    }
    out.push_back(std::move(u));
  }
  return out;
}

}  // namespace landauer
