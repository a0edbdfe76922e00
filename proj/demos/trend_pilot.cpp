// Regenerates the pilot estimates recorded in tests/fixtures/trend_thresholds.json.
#include <iostream>
#include <thread>

#include "cgp/harness/mc.hpp"
#include "json.hpp"

int main() {
  const std::vector<std::string> events{"leadership", "strict_leadership", "monopoly"};
  nlohmann::json out;
  for (double p : {0.25, 0.75, 1.5}) {
    cgp::ExperimentSpec spec;
    spec.family = "power_exponential{p=" + cgp::format_number(p) + "}";
    spec.horizons = {1000, 10000, 100000};
    spec.replications = 500;
    spec.master_seed = 990001;
    spec.events = events;
    spec.workers = std::max(1u, std::thread::hardware_concurrency());
    const auto est = cgp::run_mc(spec, nullptr);
    for (std::size_t h = 0; h < spec.horizons.size(); ++h) {
      for (std::size_t e = 0; e < events.size(); ++e) {
        out[cgp::format_number(p)][events[e]].push_back(est[h * events.size() + e].estimate);
      }
    }
  }
  std::cout << out.dump(2) << "\n";
}
