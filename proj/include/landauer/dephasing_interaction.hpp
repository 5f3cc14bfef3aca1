#pragma once

// σz coupling. [H_S, H_int] = 0 and the interaction-picture commutator is a
// c-number, so the evolution is exact: each qubit branch displaces every mode.
// The coupling λ multiplies every mode function, u_j -> λu_j.

#include <cmath>
#include <complex>
#include <vector>

#include "cavity_field.hpp"
#include "numeric.hpp"
#include "qubit_state.hpp"
#include "thermal_env.hpp"

namespace landauer {

/// α_j(T) = 2λu_j(1 - e^{iω_jT})/ω_j, the same window integral as I±,j with
/// the qubit gap removed.
inline std::complex<double> alpha(int j, double duration, const CavitySpec& spec, double coupling = 1.0) {
  const double omega = mode_frequency(j, spec);
  const std::complex<double> window = window_integral(omega, duration, omega);
  return std::complex<double>(0.0, -2.0 * coupling * mode_function(j, spec)) * window;
}

/// |α_j(T)|² = 8λ²u_j²(1 - cos ω_jT)/ω_j², evaluated as 16λ²u_j² sin²(ω_jT/2)/ω_j².
inline double alpha_norm(int j, double duration, const CavitySpec& spec, double coupling = 1.0) {
  const double omega = mode_frequency(j, spec);
  const double s = std::sin(0.5 * omega * duration);
  const double amp = 4.0 * coupling * mode_function(j, spec) * s / omega;
  return amp * amp;
}

/// χ(T) = Π_j exp(-|α_j|²(2n̄_j+1)/2), summed in the exponent.
inline double suppression_factor(double duration, const ThermalEnvironment& env, double coupling = 1.0) {
  if (!(duration >= 0.0)) throw std::domain_error("duration must be non-negative");
  const auto& spec = env.cavity();
  std::vector<double> exponents(spec.mode_count());
  for (int j = 1; j <= spec.mode_count(); ++j)
    exponents[j - 1] = 0.5 * alpha_norm(j, duration, spec, coupling) * (2.0 * env.occupation(j) + 1.0);
  return std::exp(-detail::pairwise_sum(exponents));
}

/// Global phase from time ordering,
///   φ(T) = λ² Σ_j u_j² (ω_jT - sin ω_jT)/ω_j².
/// It never enters a density matrix.
inline double dynamical_phase(double duration, const CavitySpec& spec, double coupling = 1.0) {
  if (!(duration >= 0.0)) throw std::domain_error("duration must be non-negative");
  std::vector<double> terms(spec.mode_count());
  for (int j = 1; j <= spec.mode_count(); ++j) {
    const double omega = mode_frequency(j, spec);
    const double u = coupling * mode_function(j, spec);
    const double x = omega * duration;
    // x - sin x loses everything to cancellation for small x; use the series.
    const double x_minus_sin =
        x < 1e-2 ? x * x * x / 6.0 * (1.0 - x * x / 20.0 * (1.0 - x * x / 42.0)) : x - std::sin(x);
    terms[j - 1] = u * u * x_minus_sin / (omega * omega);
  }
  return detail::pairwise_sum(terms);
}

/// Coherences scaled by χ; populations untouched.
inline QubitDensityMatrix dephased_qubit_state(const QubitDensityMatrix& initial, double chi) {
  if (!(chi > 0.0 && chi <= 1.0)) throw std::domain_error("suppression factor must lie in (0, 1]");
  QubitDensityMatrix out = initial;
  out(0, 1) *= chi;
  out(1, 0) *= chi;
  return out;
}

/// Tr(a†a D(±α_j/2) ρ_E D†(±α_j/2)) = n̄_j + |α_j|²/4, the same for both branches.
inline double environment_branch_energy(int j, Sign /*branch*/, double duration, const ThermalEnvironment& env,
                                        double coupling = 1.0) {
  return env.occupation(j) + 0.25 * alpha_norm(j, duration, env.cavity(), coupling);
}

/// ΔQ = Σ_j |α_j|² ω_j / 4. Independent of p and T_E.
inline double heat_dephasing(double duration, const CavitySpec& spec, double coupling = 1.0) {
  if (!(duration >= 0.0)) throw std::domain_error("duration must be non-negative");
  std::vector<double> terms(spec.mode_count());
  for (int j = 1; j <= spec.mode_count(); ++j)
    terms[j - 1] = 0.25 * alpha_norm(j, duration, spec, coupling) * mode_frequency(j, spec);
  return detail::pairwise_sum(terms);
}

struct DephasingOutcome {
  double chi = 1.0;
  double phase = 0.0;
  std::vector<std::complex<double>> alphas;
  double heat = 0.0;
  double duration = 0.0;
};

inline DephasingOutcome dephasing_outcome(double duration, const ThermalEnvironment& env, double coupling = 1.0) {
  const auto& spec = env.cavity();
  DephasingOutcome out;
  out.duration = duration;
  out.chi = suppression_factor(duration, env, coupling);
  out.phase = dynamical_phase(duration, spec, coupling);
  out.heat = heat_dephasing(duration, spec, coupling);
  out.alphas.reserve(spec.mode_count());
  for (int j = 1; j <= spec.mode_count(); ++j) out.alphas.push_back(alpha(j, duration, spec, coupling));
  return out;
}

}  // namespace landauer
