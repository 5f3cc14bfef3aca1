#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>

namespace landauer {

/// 2x2 qubit density matrix. Row/column 0 is the excited state |1>, row/column 1
/// the ground state |0>, so the top-left entry is the excited population p.
class QubitDensityMatrix {
 public:
  using complex = std::complex<double>;

  QubitDensityMatrix() = default;
  QubitDensityMatrix(complex e00, complex e01, complex e10, complex e11)
      : m_{{e00, e01}, {e10, e11}} {}

  /// Pure state sqrt(1-p)|0> + sqrt(p)|1> with real amplitudes.
  static QubitDensityMatrix pure(double p) {
    check_population(p);
    const double c = std::sqrt(p * (1.0 - p));
    return {p, c, c, 1.0 - p};
  }

  /// Incoherent mixture (1-p)|0><0| + p|1><1|.
  static QubitDensityMatrix mixed(double p) {
    check_population(p);
    return {p, 0.0, 0.0, 1.0 - p};
  }

  complex operator()(int r, int c) const { return m_[r][c]; }
  complex& operator()(int r, int c) { return m_[r][c]; }

  double excited_population() const { return m_[0][0].real(); }
  double ground_population() const { return m_[1][1].real(); }
  /// <1|rho|0>
  complex coherence() const { return m_[0][1]; }
  complex trace() const { return m_[0][0] + m_[1][1]; }

  double hermiticity_defect() const {
    return std::max({std::abs(m_[0][1] - std::conj(m_[1][0])), std::abs(m_[0][0].imag()),
                     std::abs(m_[1][1].imag())});
  }

  /// Eigenvalues (larger first) of the Hermitian part.
  std::pair<double, double> eigenvalues() const {
    const double a = m_[0][0].real();
    const double d = m_[1][1].real();
    const double half_tr = 0.5 * (a + d);
    const double radius = std::hypot(0.5 * (a - d), std::abs(m_[0][1]));
    const double hi = half_tr + radius;
    // det / hi keeps the small eigenvalue accurate when it is near zero.
    const double det = a * d - std::norm(m_[0][1]);
    const double lo = hi > 0.0 ? det / hi : half_tr - radius;
    return {hi, lo};
  }

  friend bool operator==(const QubitDensityMatrix&, const QubitDensityMatrix&) = default;

 private:
  static void check_population(double p) {
    if (!(p >= 0.0 && p <= 1.0)) throw std::domain_error("excited population must lie in [0, 1]");
  }

  complex m_[2][2]{};
};

}  // namespace landauer
