#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "landauer/dissipative_interaction.hpp"
#include "landauer/fock_oracle.hpp"

using namespace landauer;

namespace {

constexpr double length = 1.234;
constexpr double position = 0.52345;

// Single resonant mode j = 20, as in the fig1 presets.
struct Resonant {
  CavitySpec spec;
  ThermalEnvironment env;
  double gap;
  std::vector<ModeOverlap> overlaps;

  Resonant(double temperature, double duration)
      : spec(length, position, 20),
        env(spec, temperature),
        gap(mode_frequency(20, spec)),
        overlaps{mode_overlap(20, gap, duration, spec)} {}

  double weight(double lambda) const { return lambda * lambda * std::norm(overlaps.front().minus); }
};

// |I-|² from the closed form, independent of the library's window integral.
double overlap_norm(int j, double gap, double duration, const CavitySpec& spec) {
  const double detuning = mode_frequency(j, spec) - gap;
  const double u = std::sin(j * M_PI * spec.qubit_position() / spec.length()) / std::sqrt(j * M_PI);
  if (detuning == 0.0) return u * u * duration * duration;
  return u * u * 4.0 * std::pow(std::sin(0.5 * detuning * duration), 2) / (detuning * detuning);
}

}  // namespace

TEST(DeltaP, VacuumExamples) {
  const Resonant cold(0.01, 3.0);  // n̄ underflows to exactly 0
  ASSERT_EQ(cold.env.occupation(20), 0.0);
  const double lambda = 0.05;
  EXPECT_EQ(delta_p(0.0, cold.env, cold.overlaps, lambda), 0.0);
  EXPECT_DOUBLE_EQ(delta_p(1.0, cold.env, cold.overlaps, lambda),
                   -lambda * lambda * overlap_norm(20, cold.gap, 3.0, cold.spec));
}

TEST(DeltaP, RejectsPopulationOutsideUnitInterval) {
  const Resonant r(1.0, 1.0);
  EXPECT_THROW(delta_p(-0.1, r.env, r.overlaps, 0.01), std::domain_error);
  EXPECT_THROW(delta_p(1.1, r.env, r.overlaps, 0.01), std::domain_error);
}

TEST(DeltaP, ColdPresetSetupIsNegative) {
  const double lambda = 0.01, duration = 20.0;
  const Resonant r(1.0, duration);
  EXPECT_LT(r.env.occupation(20), 1e-21);
  const double u = mode_function(20, r.spec);
  const double dp = delta_p(0.2, r.env, r.overlaps, lambda);
  EXPECT_LT(dp, 0.0);
  EXPECT_NEAR(dp, -0.2 * lambda * lambda * duration * duration * u * u, 1e-15);
}

TEST(DeltaP, SignFollowsOccupationThreshold) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const CavitySpec spec(length, position, 1);
  for (int k = 0; k < 1000; ++k) {
    const double temperature = 0.5 + 20.0 * unit(rng);
    const ThermalEnvironment env(spec, temperature);
    const double nbar = env.occupation(1);
    const double p = unit(rng);
    const std::vector<ModeOverlap> ov{mode_overlap(1, 1.7, 0.8, spec)};
    const double dp = delta_p(p, env, ov, 0.01);
    const double threshold = nbar / (2 * nbar + 1);
    if (std::abs(p - threshold) > 1e-9) {
      EXPECT_EQ(dp > 0.0, p < threshold) << p << " " << nbar;
    }
  }
}

TEST(DeltaD, Examples) {
  const Resonant cold(0.01, 2.0);
  const double lambda = 0.03;
  EXPECT_EQ(delta_d(0.0, cold.env, cold.overlaps, lambda), 0.0);
  EXPECT_DOUBLE_EQ(delta_d(0.5, cold.env, cold.overlaps, lambda), cold.weight(lambda) / 4.0);
}

TEST(DeltaD, HotPresetSetupIsPositiveAndIncreasing) {
  double last = 0.0;
  for (int k = 1; k <= 50; ++k) {
    const Resonant r(100.0, 0.1 * k);
    const double dd = delta_d(0.2, r.env, r.overlaps, 0.01);
    EXPECT_GT(dd, last);
    last = dd;
  }
}

TEST(DeltaD, NonNegativeOnRandomSamples) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int k = 0; k < 1000; ++k) {
    const CavitySpec spec(0.5 + 2 * unit(rng), 0.2, 8);
    const CavitySpec placed(spec.length(), spec.length() * (0.01 + 0.98 * unit(rng)), 8);
    const ThermalEnvironment env(placed, 0.1 + 50 * unit(rng));
    const auto ov = mode_overlaps(30 * unit(rng), 5 * unit(rng), placed);
    EXPECT_GE(delta_d(unit(rng), env, ov, unit(rng) * 0.05), 0.0);
  }
}

TEST(PerturbativeOutcome, MatchesIndependentSumOverModes) {
  const CavitySpec spec(length, position, 40);
  const ThermalEnvironment env(spec, 30.0);
  const double gap = 25.0, duration = 1.3, lambda = 0.02, p = 0.35;
  const auto out = perturbative_outcome(p, env, mode_overlaps(gap, duration, spec), lambda);
  double dp = 0, dd = 0, dq = 0;
  for (int j = 1; j <= 40; ++j) {
    const double n = 1.0 / std::expm1(mode_frequency(j, spec) / 30.0);
    const double w = lambda * lambda * overlap_norm(j, gap, duration, spec);
    const double dpj = w * (n * (1 - p) - (n + 1) * p);
    dp += dpj;
    dd += w * std::sqrt(p * (1 - p)) * (n + 0.5);
    dq -= mode_frequency(j, spec) * dpj;
  }
  EXPECT_NEAR(out.delta_p, dp, 1e-13 * std::abs(dp));
  EXPECT_NEAR(out.delta_d, dd, 1e-13 * std::abs(dd));
  EXPECT_NEAR(out.heat, dq, 1e-12 * std::abs(dq));
  ASSERT_EQ(out.modes.size(), 40u);
  for (const auto& m : out.modes) EXPECT_DOUBLE_EQ(m.heat, -m.frequency * m.delta_p);
  EXPECT_FALSE(out.outside_perturbative_regime);
}

TEST(PerturbativeOutcome, FlagsLargeCoupling) {
  const Resonant r(1.0, 10.0);
  EXPECT_FALSE(perturbative_outcome(0.2, r.env, r.overlaps, 0.01).outside_perturbative_regime);
  EXPECT_TRUE(perturbative_outcome(0.2, r.env, r.overlaps, 0.5).outside_perturbative_regime);
}

TEST(Heat, Examples) {
  const Resonant cold(0.01, 4.0);
  const double lambda = 0.02;
  EXPECT_EQ(heat(0.0, cold.env, cold.overlaps, lambda), 0.0);
  EXPECT_DOUBLE_EQ(heat(1.0, cold.env, cold.overlaps, lambda), cold.weight(lambda) * cold.gap);
  const Resonant hot(100.0, 4.0);
  EXPECT_LT(heat(0.2, hot.env, hot.overlaps, lambda), 0.0);
}

TEST(EvolvedQubitState, Examples) {
  const auto rho = QubitDensityMatrix::pure(0.2);
  EXPECT_EQ(evolved_qubit_state(rho, 0.0, 0.0), rho);
  const auto out = evolved_qubit_state(rho, -0.01, 0.01);
  EXPECT_DOUBLE_EQ(out(0, 0).real(), 0.19);
  EXPECT_DOUBLE_EQ(out(0, 1).real(), 0.39);
  EXPECT_DOUBLE_EQ(out(1, 0).real(), 0.39);
  EXPECT_DOUBLE_EQ(out(1, 1).real(), 0.81);
  EXPECT_EQ(out.trace(), std::complex<double>(1.0, 0.0));
}

TEST(EvolvedQubitState, BreakdownWhenEigenvalueGoesNegative) {
  // Pure state with shrinking population but no loss of coherence has det < 0.
  EXPECT_THROW(evolved_qubit_state(QubitDensityMatrix::pure(0.2), -0.01, 0.0), PerturbationBreakdown);
  EXPECT_NO_THROW(evolved_qubit_state(QubitDensityMatrix::pure(0.2), -1e-12, 0.0));
}

TEST(EnvironmentDiagonalUpdate, VacuumExamples) {
  const Resonant cold(0.01, 2.0);
  const double lambda = 0.04;
  const auto ground = environment_diagonal_update(0.0, cold.env, cold.overlaps, lambda);
  ASSERT_EQ(ground.size(), 1u);
  for (std::size_t n = 0; n < ground[0].raising.size(); ++n) EXPECT_EQ(ground[0].net(static_cast<int>(n)), 0.0);

  const auto excited = environment_diagonal_update(1.0, cold.env, cold.overlaps, lambda);
  const double w = cold.weight(lambda);
  EXPECT_DOUBLE_EQ(excited[0].net(1), w);
  EXPECT_DOUBLE_EQ(excited[0].net(0), -w);
  for (std::size_t n = 2; n < excited[0].raising.size(); ++n) EXPECT_EQ(excited[0].net(static_cast<int>(n)), 0.0);
}

TEST(EnvironmentDiagonalUpdate, ConservesProbabilityAndCarriesTheHeat) {
  const CavitySpec spec(length, position, 12);
  for (double temperature : {1.0, 20.0, 100.0}) {
    const ThermalEnvironment env(spec, temperature);
    const auto ov = mode_overlaps(18.0, 0.9, spec);
    const double lambda = 0.01, p = 0.3;
    const auto updates = environment_diagonal_update(p, env, ov, lambda);
    const auto out = perturbative_outcome(p, env, ov, lambda);
    double energy = 0.0;
    for (std::size_t k = 0; k < updates.size(); ++k) {
      const double scale = out.modes[k].weight * (env.occupation(updates[k].mode) + 1.0);
      EXPECT_NEAR(updates[k].probability_balance(), 0.0, 1e-12 * std::max(scale, 1e-300));
      energy += mode_frequency(updates[k].mode, spec) * updates[k].occupation_change();
    }
    EXPECT_NEAR(energy, out.heat, 1e-10 * std::abs(out.heat));
  }
}

TEST(FockOracle, MixedAndCoherentStartsShareTheDiagonalUpdate) {
  using namespace landauer::oracle;
  const CavitySpec spec(length, position, 20);
  const ThermalEnvironment env(spec, 1.0);
  const double gap = mode_frequency(20, spec);
  const double duration = 11 * M_PI / gap;
  const double lambda = 0.01, p = 0.2;
  const std::vector<FockMode> modes{{20, 6}};
  const Propagator prop(build_hamiltonian(Coupling::sigma_x, lambda, gap, spec, modes));
  const auto coherent = reduce_system(prop.evolve(build_joint_initial(p, InitialQubit::coherent, env, modes), duration));
  const auto mixed = reduce_system(prop.evolve(build_joint_initial(p, InitialQubit::mixed, env, modes), duration));
  const double expected = delta_p(p, env, {mode_overlap(20, gap, duration, spec)}, lambda);
  EXPECT_NEAR(coherent.excited_population() - p, expected, 0.02 * std::abs(expected));
  EXPECT_NEAR(mixed.excited_population() - p, expected, 0.02 * std::abs(expected));
}
