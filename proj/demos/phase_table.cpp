// Verdicts of the power family f(j) = (j+1)^p across the phase boundaries.
#include <cstdio>

#include "cgp/harness/sweep.hpp"

int main() {
  std::printf("%6s  %-10s %-10s %-10s\n", "p", "leader", "strict", "monopoly");
  for (double p : {0.0, 0.25, 0.4, 0.5, 0.6, 0.75, 1.0, 1.25, 1.5, 2.0}) {
    const auto v = cgp::power_verdicts(p);
    std::printf("%6.2f  %-10s %-10s %-10s\n", p, cgp::short_name(v.leadership), cgp::short_name(v.strict),
                cgp::short_name(v.monopoly));
  }
}
