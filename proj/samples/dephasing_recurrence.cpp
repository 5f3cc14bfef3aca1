// Prints χ(T) and ΔQ(T) for the σz coupling over two recurrence periods.

#include <cstdio>

#include "landauer/landauer.hpp"

int main() {
  using namespace landauer;
  const CavitySpec cavity(1.234, 0.52345, 200);
  const ThermalEnvironment env(cavity, 1.0);
  std::printf("# T chi heat\n");
  for (int k = 0; k <= 40; ++k) {
    const double t = 4.0 * cavity.length() * k / 40.0;
    std::printf("%8.4f %.10f %.10f\n", t, suppression_factor(t, env), heat_dephasing(t, cavity));
  }
}
