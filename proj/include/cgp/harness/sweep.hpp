#pragma once

#include <algorithm>
#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "cgp/classify/classify.hpp"
#include "cgp/families/embedding.hpp"
#include "cgp/families/feedback.hpp"
#include "cgp/harness/mc.hpp"

namespace cgp {

struct SweepSpec {
  std::vector<double> p_grid;
  std::vector<std::uint64_t> horizons;
  std::uint64_t replications = 100;
  std::uint64_t seed = 0;
  std::vector<std::uint64_t> initial{1, 1};
  double beta = 0.5;
  unsigned workers = 1;
};

struct SweepRow {
  double p = 0.0;
  std::uint64_t horizon = 0;
  MCEstimate leadership;
  MCEstimate strict;
  MCEstimate monopoly;
  Outcome verdict_leadership = Outcome::Undetermined;
  Outcome verdict_strict = Outcome::Undetermined;
  Outcome verdict_monopoly = Outcome::Undetermined;
};

/// Analytic verdicts for the power family f(j) = (j+1)^p.
struct PowerVerdicts {
  Outcome leadership;
  Outcome strict;
  Outcome monopoly;
};

inline PowerVerdicts power_verdicts(double p) {
  const auto fb = std::make_shared<PowerFeedback>(p);
  const auto bb = classify_ballsbins(*fb);
  const auto lead = classify_leadership(EmbeddedFamily(fb));
  return {lead.outcome, bb.strict.outcome, bb.monopoly.outcome};
}

/// Rows sorted by (p, horizon). Replication seeds are keyed by the grid index
/// as well, so every p uses independent streams.
inline std::vector<SweepRow> sweep(const SweepSpec& spec) {
  if (spec.p_grid.empty()) throw PreconditionError("empty p grid");
  if (spec.horizons.empty()) throw PreconditionError("empty horizon list");
  std::vector<double> grid = spec.p_grid;
  std::sort(grid.begin(), grid.end());
  std::vector<SweepRow> rows;
  for (std::size_t gi = 0; gi < grid.size(); ++gi) {
    const double p = grid[gi];
    const auto v = power_verdicts(p);
    ExperimentSpec es;
    es.family = "power_exponential{p=" + format_number(p) + "}";
    es.initial = spec.initial;
    es.horizons = spec.horizons;
    es.replications = spec.replications;
    es.beta = spec.beta;
    es.master_seed = derive_seed(spec.seed, gi, 0x5eed);
    es.events = {"leadership", "strict_leadership", "monopoly"};
    es.workers = spec.workers;
    const auto est = run_mc(es, nullptr);
    for (std::size_t h = 0; h < spec.horizons.size(); ++h) {
      SweepRow r;
      r.p = p;
      r.horizon = spec.horizons[h];
      r.leadership = est[3 * h];
      r.strict = est[3 * h + 1];
      r.monopoly = est[3 * h + 2];
      r.verdict_leadership = v.leadership;
      r.verdict_strict = v.strict;
      r.verdict_monopoly = v.monopoly;
      rows.push_back(std::move(r));
    }
  }
  return rows;
}

inline void write_sweep_csv(const std::vector<SweepRow>& rows, std::ostream& os) {
  os << "p,horizon,replications,leadership,leadership_lo,leadership_hi,strict_leadership,strict_lo,strict_hi,"
        "monopoly,monopoly_lo,monopoly_hi,verdict_leadership,verdict_strict,verdict_monopoly\n";
  auto est = [&](const MCEstimate& e) {
    os << ',' << format_number(e.estimate) << ',' << format_number(e.ci.lower) << ',' << format_number(e.ci.upper);
  };
  for (const auto& r : rows) {
    os << format_number(r.p) << ',' << r.horizon << ',' << r.leadership.trials;
    est(r.leadership);
    est(r.strict);
    est(r.monopoly);
    os << ',' << short_name(r.verdict_leadership) << ',' << short_name(r.verdict_strict) << ','
       << short_name(r.verdict_monopoly) << '\n';
  }
}

}  // namespace cgp
