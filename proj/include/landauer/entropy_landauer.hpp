#pragma once

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "errors.hpp"
#include "qubit_state.hpp"

namespace landauer {

/// Validity tolerance for density-matrix inputs.
inline constexpr double state_tolerance = 1e-12;

/// -x ln x with 0 ln 0 = 0.
inline double entropy_term(double x) { return x > 0.0 ? -x * std::log(x) : 0.0; }

/// Shannon entropy of (q, 1-q) in nats.
inline double binary_entropy(double q) { return entropy_term(q) + entropy_term(1.0 - q); }

/// S(ρ) = -Tr ρ ln ρ in nats.
inline double von_neumann_entropy(const QubitDensityMatrix& rho) {
  if (rho.hermiticity_defect() > state_tolerance) throw std::domain_error("density matrix is not Hermitian");
  if (std::abs(rho.trace() - 1.0) > state_tolerance) throw std::domain_error("density matrix trace differs from 1");
  const auto [hi, lo] = rho.eigenvalues();
  if (lo < -state_tolerance) throw std::domain_error("density matrix has a negative eigenvalue");
  return entropy_term(std::max(hi, 0.0)) + entropy_term(std::max(lo, 0.0));
}

struct EigenPair {
  double plus;
  double minus;
};

/// Eigenvalues of [[p+δp, c-δd], [c-δd, 1-p-δp]] with c = sqrt(p(1-p)):
/// 1/2 ± 1/2 sqrt(1 + (8p-4)δp - 8cδd + 4δd² + 4δp²).
inline EigenPair eigenvalues_exact(double p, double dp, double dd) {
  const double c = std::sqrt(p * (1.0 - p));
  const double disc = 1.0 + (8.0 * p - 4.0) * dp - 8.0 * c * dd + 4.0 * dd * dd + 4.0 * dp * dp;
  if (disc < 0.0) throw PerturbationBreakdown("negative discriminant in qubit eigenvalues");
  const double root = std::sqrt(disc);
  const double plus = 0.5 + 0.5 * root;
  // det / p+ avoids cancellation in 1/2 - root/2.
  const double det = (p + dp) * (1.0 - p - dp) - (c - dd) * (c - dd);
  return {plus, det / plus};
}

/// Linearized eigenvalues: p- = (1-2p)δp + 2 sqrt(p(1-p)) δd, p+ = 1 - p-.
inline EigenPair eigenvalues_first_order(double p, double dp, double dd) {
  const double minus = (1.0 - 2.0 * p) * dp + 2.0 * std::sqrt(p * (1.0 - p)) * dd;
  return {1.0 - minus, minus};
}

/// First-order entropy change of diag(p, 1-p) -> diag(p+δp, 1-p-δp):
/// ΔS = -ln((1-p)/p) δp. At p = 0 or 1 the log diverges and the leading
/// term δ ln δ - δ (δ = |δp|) is returned instead.
inline double delta_S_mixed(double p, double dp) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::domain_error("excited population must lie in [0, 1]");
  if (p == 0.0 || p == 1.0) {
    const double moved = std::abs(dp);
    return moved > 0.0 ? moved * std::log(moved) - moved : 0.0;
  }
  return -std::log((1.0 - p) / p) * dp;
}

/// S(diag(p, 1-p)) - S(diag(p+δp, 1-p-δp)) without linearization.
inline double entropy_change_mixed(double p, double dp) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::domain_error("excited population must lie in [0, 1]");
  const double q = p + dp;
  if (q < -state_tolerance || q > 1.0 + state_tolerance)
    throw PerturbationBreakdown("population shift leaves [0, 1]");
  return binary_entropy(p) - binary_entropy(std::clamp(q, 0.0, 1.0));
}

/// S(ρ_S) - S(ρ'_S) for the pure initial state (S(ρ_S) = 0), with ρ'_S
/// entropy taken from the first-order eigenvalues p±.
inline double entropy_change_coherent(double p, double dp, double dd) {
  const auto [plus, minus] = eigenvalues_first_order(p, dp, dd);
  if (minus < -state_tolerance || minus > 1.0 + state_tolerance)
    throw PerturbationBreakdown("first-order eigenvalue outside [0, 1]");
  return -(entropy_term(plus) + entropy_term(minus));
}

struct LandauerReport {
  double heat = 0.0;
  double entropy_change = 0.0;
  double temperature = 0.0;
  double gap = 0.0;  // ΔQ - T_E ΔS
  bool holds = true;
};

/// Slack for ΔQ >= T_E ΔS: 1e-10 max(1, |ΔQ|).
inline double bound_tolerance(double heat) { return 1e-10 * std::max(1.0, std::abs(heat)); }

inline LandauerReport landauer_check(double heat, double entropy_change, double temperature) {
  if (!(temperature > 0.0)) throw std::domain_error("temperature must be positive");
  LandauerReport r{heat, entropy_change, temperature, heat - temperature * entropy_change, true};
  r.holds = r.gap >= -bound_tolerance(heat);
  return r;
}

/// Throws BoundViolation with every input when the bound fails.
inline void require_bound(const LandauerReport& r, const std::string& context = {}) {
  if (r.holds) return;
  std::ostringstream msg;
  msg.precision(17);
  msg << "Landauer bound violated";
  if (!context.empty()) msg << " (" << context << ")";
  msg << ": heat=" << r.heat << " entropy_change=" << r.entropy_change << " temperature=" << r.temperature
      << " gap=" << r.gap;
  throw BoundViolation(msg.str());
}

}  // namespace landauer
