#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "cavity_field.hpp"

namespace landauer {

/// Bose-Einstein occupation 1/(e^{ω/T_E} - 1).
inline double mean_occupation(double omega, double temperature) {
  if (!(omega > 0.0)) throw std::domain_error("mode frequency must be positive");
  if (!(temperature > 0.0)) throw std::domain_error("temperature must be positive");
  return 1.0 / std::expm1(omega / temperature);
}

/// Geometric law Q(n) = n̄^n / (1+n̄)^{1+n}.
inline double thermal_weight(int n, double nbar) {
  if (n < 0) throw std::domain_error("occupation number must be non-negative");
  if (!(nbar >= 0.0)) throw std::domain_error("mean occupation must be non-negative");
  const double ratio = nbar / (1.0 + nbar);
  return std::pow(ratio, n) / (1.0 + nbar);
}

/// Probability carried by levels above n_max: (n̄/(1+n̄))^{n_max+1}.
inline double thermal_tail(double nbar, int n_max) {
  return std::pow(nbar / (1.0 + nbar), n_max + 1);
}

struct OccupationMoments {
  double first;   // <n>
  double second;  // <n^2>
};

inline OccupationMoments occupation_moments(double nbar) {
  if (!(nbar >= 0.0)) throw std::domain_error("mean occupation must be non-negative");
  return {nbar, 2.0 * nbar * nbar + nbar};
}

/// Smallest n_max whose thermal tail is at most `tail_tol`.
inline int truncation_cutoff(double nbar, double tail_tol) {
  if (!(tail_tol > 0.0 && tail_tol < 1.0)) throw std::domain_error("tail tolerance must lie in (0, 1)");
  if (!(nbar >= 0.0)) throw std::domain_error("mean occupation must be non-negative");
  if (nbar == 0.0) return 0;
  const double log_ratio = std::log(nbar / (1.0 + nbar));
  int n = std::max(0, static_cast<int>(std::ceil(std::log(tail_tol) / log_ratio)) - 2);
  // The log estimate is only a starting point; settle the boundary exactly.
  while (n > 0 && thermal_tail(nbar, n - 1) <= tail_tol) --n;
  while (thermal_tail(nbar, n) > tail_tol) ++n;
  return n;
}

/// Thermal state of the first J cavity modes at temperature T_E.
class ThermalEnvironment {
 public:
  ThermalEnvironment(CavitySpec cavity, double temperature)
      : cavity_(cavity), temperature_(temperature) {
    if (!(temperature > 0.0)) throw std::domain_error("temperature must be positive");
    occupations_.reserve(cavity_.mode_count());
    for (int j = 1; j <= cavity_.mode_count(); ++j)
      occupations_.push_back(mean_occupation(mode_frequency(j, cavity_), temperature_));
  }

  const CavitySpec& cavity() const { return cavity_; }
  double temperature() const { return temperature_; }
  const std::vector<double>& occupations() const { return occupations_; }

  /// n̄_j for 1-based mode index j.
  double occupation(int j) const {
    if (j < 1 || j > cavity_.mode_count()) throw std::domain_error("mode index outside the environment");
    return occupations_[j - 1];
  }

 private:
  CavitySpec cavity_;
  double temperature_;
  std::vector<double> occupations_;
};

}  // namespace landauer
