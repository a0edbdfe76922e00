#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "cgp/errors.hpp"
#include "cgp/families/law.hpp"
#include "cgp/harness/parallel.hpp"
#include "cgp/harness/seeds.hpp"
#include "cgp/series/fluctuation.hpp"

namespace cgp {

struct FluctuationSummary {
  std::vector<FluctuationStats> runs;
  double median_crossings = 0.0;
  double max_abs_partial = 0.0;
  std::uint64_t max_last_sign_change = 0;
};

/// Partial sums S_1..S_n of independent draws Y_j, one scan per replication.
inline FluctuationSummary fluctuate(const IndexedLaw& law, std::uint64_t n, std::uint64_t reps, std::uint64_t seed,
                                    unsigned workers = 1) {
  if (n == 0 || reps == 0) throw PreconditionError("fluctuate: n and reps must be positive");
  FluctuationSummary out;
  out.runs.resize(reps);
  parallel_for(reps, workers, [&](std::size_t r) {
    Rng rng(derive_seed(seed, 0, r));
    FluctuationScanner sc;
    double s = 0.0;
    for (std::uint64_t j = 1; j <= n; ++j) {
      s += law.sample(j, rng);
      sc.push(s);
    }
    out.runs[r] = sc.stats();
  });
  std::vector<std::uint64_t> crossings;
  for (const auto& st : out.runs) {
    crossings.push_back(st.zero_crossings);
    out.max_abs_partial = std::max({out.max_abs_partial, std::fabs(st.running_max), std::fabs(st.running_min)});
    out.max_last_sign_change = std::max(out.max_last_sign_change, st.last_sign_change);
  }
  std::sort(crossings.begin(), crossings.end());
  const std::size_t m = crossings.size() / 2;
  out.median_crossings = crossings.size() % 2 ? static_cast<double>(crossings[m])
                                              : 0.5 * static_cast<double>(crossings[m - 1] + crossings[m]);
  return out;
}

}  // namespace cgp
