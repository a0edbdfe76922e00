// Polya urn from one ball each: the number of draws from urn 0 is uniform.
#include <cstdio>
#include <vector>

#include <string>

#include "cgp/engine/ballsbins.hpp"
#include "cgp/families/feedback.hpp"
#include "cgp/harness/seeds.hpp"
#include "cgp/harness/stats.hpp"

int main() {
  const cgp::AffineFeedback polya(1.0, 0.0);
  const std::vector<std::uint64_t> init{1, 1};
  constexpr std::uint64_t n = 20;
  constexpr std::uint64_t reps = 20000;
  std::vector<std::uint64_t> counts(n + 1, 0);
  for (std::uint64_t r = 0; r < reps; ++r) {
    counts[cgp::simulate_ballsbins(polya, init, n, cgp::derive_seed(5, 0, r)).final_values[0] - 1] += 1;
  }
  for (std::uint64_t k = 0; k <= n; ++k) {
    std::printf("%3llu %6.4f %s\n", static_cast<unsigned long long>(k), static_cast<double>(counts[k]) / reps,
                std::string(counts[k] / 40, '#').c_str());
  }
  const auto gof = cgp::chi_square_gof(counts, std::vector<double>(n + 1, 1.0 / (n + 1)));
  std::printf("chi2 = %.2f on %d dof, p = %.3f\n", gof.stat, gof.dof, gof.p_value);
}
