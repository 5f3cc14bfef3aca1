#pragma once

// Brute-force reference: the joint qubit ⊗ truncated-Fock state evolved under
// the full Schrödinger-picture Hamiltonian
//   H = (Ω/2)σz + Σ_j ω_j a_j†a_j + λ m Σ_j u_j(x)(a_j + a_j†),   m ∈ {σx, σz}.
// Propagation is by exact eigendecomposition of H, so the only error sources
// are Fock truncation and linear-algebra roundoff.
//
// Basis ordering: qubit index slowest (0 = |1>, 1 = |0>), then modes in list
// order, first mode slowest.

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "cavity_field.hpp"
#include "errors.hpp"
#include "qubit_state.hpp"
#include "thermal_env.hpp"

namespace landauer::oracle {

using Matrix = Eigen::MatrixXcd;

enum class Coupling { sigma_x, sigma_z };

struct FockMode {
  int index = 1;   // cavity mode j
  int cutoff = 0;  // n_max; levels 0..n_max are kept
};

enum class InitialQubit { coherent, mixed };

struct OracleLimits {
  Eigen::Index max_dimension = 4096;
  /// Largest tolerated population in any mode's top Fock level after evolving.
  double leakage_tolerance = 1e-6;
  /// Largest tolerated thermal tail dropped when building the initial state.
  double max_initial_tail = 1e-3;
};

class JointFockState {
 public:
  JointFockState(std::vector<FockMode> modes, Matrix rho) : modes_(std::move(modes)), rho_(std::move(rho)) {}

  const std::vector<FockMode>& modes() const { return modes_; }
  const Matrix& density() const { return rho_; }
  Eigen::Index dimension() const { return rho_.rows(); }
  Eigen::Index environment_dimension() const { return rho_.rows() / 2; }

  double trace() const { return rho_.trace().real(); }
  double purity() const { return (rho_ * rho_).trace().real(); }

 private:
  std::vector<FockMode> modes_;
  Matrix rho_;
};

namespace detail {

inline Eigen::Index environment_dimension(const std::vector<FockMode>& modes) {
  Eigen::Index d = 1;
  for (const auto& m : modes) {
    if (m.cutoff < 0) throw std::domain_error("Fock cutoff must be non-negative");
    d *= m.cutoff + 1;
  }
  return d;
}

/// Stride of mode k inside the environment index.
inline Eigen::Index stride(const std::vector<FockMode>& modes, std::size_t k) {
  Eigen::Index s = 1;
  for (std::size_t i = k + 1; i < modes.size(); ++i) s *= modes[i].cutoff + 1;
  return s;
}

inline int level(const std::vector<FockMode>& modes, std::size_t k, Eigen::Index env_index) {
  return static_cast<int>((env_index / stride(modes, k)) % (modes[k].cutoff + 1));
}

inline Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

/// Annihilation operator on n_max+1 levels.
inline Matrix annihilation(int cutoff) {
  Matrix a = Matrix::Zero(cutoff + 1, cutoff + 1);
  for (int n = 1; n <= cutoff; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
  return a;
}

/// Single-mode operator embedded in the environment space.
inline Matrix embed(const std::vector<FockMode>& modes, std::size_t k, const Matrix& op) {
  Matrix out = Matrix::Identity(1, 1);
  for (std::size_t i = 0; i < modes.size(); ++i)
    out = kron(out, i == k ? op : Matrix::Identity(modes[i].cutoff + 1, modes[i].cutoff + 1));
  return out;
}

}  // namespace detail

/// ρ_S ⊗ Π_j ρ_thermal,j truncated to each mode's cutoff and renormalized.
inline JointFockState build_joint_initial(double p, InitialQubit kind, const ThermalEnvironment& env,
                                          std::vector<FockMode> modes, const OracleLimits& limits = {}) {
  const QubitDensityMatrix qubit =
      kind == InitialQubit::coherent ? QubitDensityMatrix::pure(p) : QubitDensityMatrix::mixed(p);
  const Eigen::Index env_dim = detail::environment_dimension(modes);
  if (2 * env_dim > limits.max_dimension) throw ResourceError("joint Fock space exceeds the dimension cap");

  Eigen::VectorXd weights = Eigen::VectorXd::Ones(env_dim);
  for (std::size_t k = 0; k < modes.size(); ++k) {
    const double nbar = env.occupation(modes[k].index);
    const double tail = thermal_tail(nbar, modes[k].cutoff);
    if (tail > limits.max_initial_tail) {
      std::ostringstream msg;
      msg << "cutoff " << modes[k].cutoff << " for mode " << modes[k].index << " drops thermal weight " << tail;
      throw TruncationError(msg.str());
    }
    for (Eigen::Index e = 0; e < env_dim; ++e) weights(e) *= thermal_weight(detail::level(modes, k, e), nbar);
  }
  weights /= weights.sum();

  Matrix rho = Matrix::Zero(2 * env_dim, 2 * env_dim);
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (Eigen::Index e = 0; e < env_dim; ++e) rho(a * env_dim + e, b * env_dim + e) = qubit(a, b) * weights(e);
  return {std::move(modes), std::move(rho)};
}

/// Dense Schrödinger-picture H_total on the truncated space.
inline Matrix build_hamiltonian(Coupling coupling, double lambda, double qubit_gap, const CavitySpec& spec,
                                const std::vector<FockMode>& modes) {
  const Eigen::Index env_dim = detail::environment_dimension(modes);
  Matrix h_env = Matrix::Zero(env_dim, env_dim);
  Matrix field = Matrix::Zero(env_dim, env_dim);
  for (std::size_t k = 0; k < modes.size(); ++k) {
    const Matrix a = detail::annihilation(modes[k].cutoff);
    const Matrix number = a.adjoint() * a;
    const Matrix quadrature = a + a.adjoint();
    h_env += mode_frequency(modes[k].index, spec) * detail::embed(modes, k, number);
    field += mode_function(modes[k].index, spec) * detail::embed(modes, k, quadrature);
  }

  Matrix sigma_z = Matrix::Zero(2, 2);
  sigma_z(0, 0) = 1.0;
  sigma_z(1, 1) = -1.0;
  Matrix sigma_x = Matrix::Zero(2, 2);
  sigma_x(0, 1) = 1.0;
  sigma_x(1, 0) = 1.0;
  const Matrix& monopole = coupling == Coupling::sigma_x ? sigma_x : sigma_z;

  const Matrix id_env = Matrix::Identity(env_dim, env_dim);
  const Matrix id_qubit = Matrix::Identity(2, 2);
  return detail::kron(0.5 * qubit_gap * sigma_z, id_env) + detail::kron(id_qubit, h_env) +
         lambda * detail::kron(monopole, field);
}

/// Eigendecomposition of H, reusable across durations.
class Propagator {
 public:
  explicit Propagator(const Matrix& hamiltonian, const OracleLimits& limits = {}) : limits_(limits) {
    if (hamiltonian.rows() > limits.max_dimension) throw ResourceError("Hamiltonian exceeds the dimension cap");
    Eigen::SelfAdjointEigenSolver<Matrix> solver(hamiltonian);
    if (solver.info() != Eigen::Success) throw std::runtime_error("Hamiltonian eigendecomposition failed");
    vectors_ = solver.eigenvectors();
    energies_ = solver.eigenvalues();
  }

  /// e^{-iHT}
  Matrix unitary(double duration) const {
    Eigen::VectorXcd phases(energies_.size());
    for (Eigen::Index k = 0; k < energies_.size(); ++k) phases(k) = std::polar(1.0, -energies_(k) * duration);
    return vectors_ * phases.asDiagonal() * vectors_.adjoint();
  }

  JointFockState evolve(const JointFockState& state, double duration) const;

  const OracleLimits& limits() const { return limits_; }

 private:
  Matrix vectors_;
  Eigen::VectorXd energies_;
  OracleLimits limits_;
};

/// Largest population found in any mode's top Fock level.
inline double top_level_population(const JointFockState& state) {
  const auto& modes = state.modes();
  const Eigen::Index env_dim = state.environment_dimension();
  double worst = 0.0;
  for (std::size_t k = 0; k < modes.size(); ++k) {
    double pop = 0.0;
    for (int a = 0; a < 2; ++a)
      for (Eigen::Index e = 0; e < env_dim; ++e)
        if (detail::level(modes, k, e) == modes[k].cutoff) pop += state.density()(a * env_dim + e, a * env_dim + e).real();
    worst = std::max(worst, pop);
  }
  return worst;
}

inline JointFockState Propagator::evolve(const JointFockState& state, double duration) const {
  if (state.dimension() != vectors_.rows()) throw std::domain_error("state and Hamiltonian dimensions differ");
  const Matrix u = unitary(duration);
  JointFockState out(state.modes(), u * state.density() * u.adjoint());
  const double leak = top_level_population(out);
  if (leak > limits_.leakage_tolerance) {
    std::ostringstream msg;
    msg << "top Fock level holds population " << leak << " after evolving to T=" << duration
        << "; enlarge the cutoff";
    throw TruncationError(msg.str());
  }
  return out;
}

/// ρ(T) = e^{-iHT} ρ(0) e^{iHT}.
inline JointFockState evolve(const JointFockState& state, const Matrix& hamiltonian, double duration,
                             const OracleLimits& limits = {}) {
  if (hamiltonian.rows() != hamiltonian.cols() || !hamiltonian.isApprox(hamiltonian.adjoint(), 1e-12))
    throw std::domain_error("Hamiltonian must be Hermitian");
  return Propagator(hamiltonian, limits).evolve(state, duration);
}

/// Tr_E ρ.
inline QubitDensityMatrix reduce_system(const JointFockState& state) {
  const Eigen::Index env_dim = state.environment_dimension();
  QubitDensityMatrix out;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) out(a, b) = state.density().block(a * env_dim, b * env_dim, env_dim, env_dim).trace();
  return out;
}

/// Per-mode reduced density matrices, in the order of state.modes().
inline std::vector<Matrix> reduce_environment(const JointFockState& state) {
  const auto& modes = state.modes();
  const Eigen::Index env_dim = state.environment_dimension();
  const Matrix& rho = state.density();
  std::vector<Matrix> out;
  for (std::size_t k = 0; k < modes.size(); ++k) {
    const Eigen::Index s = detail::stride(modes, k);
    const int levels = modes[k].cutoff + 1;
    Matrix local = Matrix::Zero(levels, levels);
    for (int a = 0; a < 2; ++a)
      for (Eigen::Index e = 0; e < env_dim; ++e)
        for (int m = 0; m < levels; ++m) {
          // Partner index differs from e only in mode k's digit.
          const int n = detail::level(modes, k, e);
          const Eigen::Index f = e + (m - n) * s;
          local(n, m) += rho(a * env_dim + e, a * env_dim + f);
        }
    out.push_back(std::move(local));
  }
  return out;
}

/// Tr(H_E ρ) = Σ_j ω_j <a_j†a_j>.
inline double environment_energy(const JointFockState& state, const CavitySpec& spec) {
  const auto locals = reduce_environment(state);
  double energy = 0.0;
  for (std::size_t k = 0; k < locals.size(); ++k) {
    double occ = 0.0;
    for (Eigen::Index n = 0; n < locals[k].rows(); ++n) occ += static_cast<double>(n) * locals[k](n, n).real();
    energy += mode_frequency(state.modes()[k].index, spec) * occ;
  }
  return energy;
}

/// Removes the free qubit rotation: ρ_I = e^{iH_S T} ρ e^{-iH_S T}, so
/// <1|ρ_I|0> = e^{iΩT} <1|ρ|0>.
inline QubitDensityMatrix to_interaction_picture(const QubitDensityMatrix& rho, double qubit_gap, double duration) {
  QubitDensityMatrix out = rho;
  const std::complex<double> phase = std::polar(1.0, qubit_gap * duration);
  out(0, 1) *= phase;
  out(1, 0) *= std::conj(phase);
  return out;
}

}  // namespace landauer::oracle
