#pragma once

#include <stdexcept>
#include <string>

namespace landauer {

// Domain violations (bad parameters) are reported with std::domain_error.
// The types below cover the failure modes specific to this library.

/// The second-order state is no longer a valid density matrix: coupling or
/// duration is outside the perturbative regime.
class PerturbationBreakdown : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A truncated Fock space is too small for the requested state or evolution.
class TruncationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A dense oracle problem exceeds the configured dimension cap.
class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// ΔQ < T_E ΔS beyond floating-point noise. Carries a dump of the inputs.
class BoundViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace landauer
