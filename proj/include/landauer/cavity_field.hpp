#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace landauer {

enum class Boundary { dirichlet };

/// 1D cavity holding a massless scalar field, with a static qubit at x.
class CavitySpec {
 public:
  CavitySpec(double length, double qubit_position, int mode_count,
             Boundary boundary = Boundary::dirichlet)
      : length_(length), position_(qubit_position), modes_(mode_count), boundary_(boundary) {
    if (!(length > 0.0)) throw std::domain_error("cavity length must be positive");
    if (!(qubit_position > 0.0 && qubit_position < length))
      throw std::domain_error("qubit position must lie strictly inside the cavity");
    if (mode_count < 1) throw std::domain_error("mode count must be at least 1");
  }

  double length() const { return length_; }
  double qubit_position() const { return position_; }
  int mode_count() const { return modes_; }
  Boundary boundary() const { return boundary_; }

  friend bool operator==(const CavitySpec&, const CavitySpec&) = default;

 private:
  double length_;
  double position_;
  int modes_;
  Boundary boundary_;
};

/// ω_j = jπ/L.
inline double mode_frequency(int j, double length) {
  if (j < 1) throw std::domain_error("mode index must be >= 1");
  if (!(length > 0.0)) throw std::domain_error("cavity length must be positive");
  return j * std::numbers::pi / length;
}

inline double mode_frequency(int j, const CavitySpec& spec) {
  return mode_frequency(j, spec.length());
}

/// Dirichlet mode amplitude sin(jπx/L)/sqrt(jπ), i.e. sin(k_j x)/sqrt(ω_j L).
inline double mode_function(int j, double x, const CavitySpec& spec) {
  if (j < 1) throw std::domain_error("mode index must be >= 1");
  if (!(x > 0.0 && x < spec.length()))
    throw std::domain_error("field point must lie strictly inside the cavity");
  const double k = j * std::numbers::pi / spec.length();
  return std::sin(k * x) / std::sqrt(j * std::numbers::pi);
}

inline double mode_function(int j, const CavitySpec& spec) {
  return mode_function(j, spec.qubit_position(), spec);
}

/// Detunings below this fraction of the larger frequency are treated as exact
/// resonance.
inline constexpr double resonance_threshold = 1e-12;

/// ∫_0^T e^{iΔτ} dτ for the sharp switching window.
///
/// Written as e^{iΔT/2}·2sin(ΔT/2)/Δ, which has no cancellation away from
/// resonance. `scale` sets the resonance threshold; below it the first two
/// terms of the series, T + iΔT²/2, are used.
inline std::complex<double> window_integral(double detuning, double duration, double scale) {
  if (!(duration >= 0.0)) throw std::domain_error("duration must be non-negative");
  if (std::abs(detuning) < resonance_threshold * scale) {
    return {duration, 0.5 * detuning * duration * duration};
  }
  const double half = 0.5 * detuning * duration;
  return std::polar(2.0 * std::sin(half) / detuning, half);
}

enum class Sign { minus = -1, plus = 1 };

/// I±,j = ∫_0^T e^{i(±Ω + ω_j)τ} u_j(x) dτ for a static qubit.
inline std::complex<double> overlap_integral(Sign sign, int j, double qubit_gap, double duration,
                                             const CavitySpec& spec) {
  if (!(duration >= 0.0)) throw std::domain_error("duration must be non-negative");
  const double omega = mode_frequency(j, spec);
  const double detuning = static_cast<int>(sign) * qubit_gap + omega;
  const double scale = std::max(std::abs(qubit_gap), omega);
  return mode_function(j, spec) * window_integral(detuning, duration, scale);
}

struct ModeOverlap {
  int mode = 0;
  std::complex<double> minus;  // I-,j
  std::complex<double> plus;   // I+,j
  double duration = 0.0;
};

inline ModeOverlap mode_overlap(int j, double qubit_gap, double duration, const CavitySpec& spec) {
  return {j, overlap_integral(Sign::minus, j, qubit_gap, duration, spec),
          overlap_integral(Sign::plus, j, qubit_gap, duration, spec), duration};
}

/// Overlaps for modes 1..J of the cavity.
inline std::vector<ModeOverlap> mode_overlaps(double qubit_gap, double duration,
                                              const CavitySpec& spec) {
  std::vector<ModeOverlap> out;
  out.reserve(spec.mode_count());
  for (int j = 1; j <= spec.mode_count(); ++j) out.push_back(mode_overlap(j, qubit_gap, duration, spec));
  return out;
}

}  // namespace landauer
