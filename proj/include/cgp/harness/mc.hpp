#pragma once

#include <chrono>
#include <cstdint>
#include <ctime>
#include <fstream>
#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"

#include "cgp/engine/proxies.hpp"
#include "cgp/engine/simulate.hpp"
#include "cgp/errors.hpp"
#include "cgp/families/dsl.hpp"
#include "cgp/harness/parallel.hpp"
#include "cgp/harness/seeds.hpp"
#include "cgp/harness/stats.hpp"

namespace cgp {

/// Proxy events understood by the runner.
inline const std::vector<std::string>& known_events() {
  static const std::vector<std::string> names{"leadership", "strict_leadership", "monopoly", "tie_in_window"};
  return names;
}

inline bool event_value(const EventProxies& p, const std::string& event) {
  if (event == "leadership") return p.leader_stable;
  if (event == "strict_leadership") return p.strict_leader_stable;
  if (event == "monopoly") return p.monopoly_proxy;
  if (event == "tie_in_window") return p.tie_in_window;
  throw PreconditionError("unknown event '" + event + "'");
}

struct ExperimentSpec {
  std::string family;  // waiting-time or feedback text; feedback is embedded
  std::vector<std::uint64_t> initial{1, 1};
  std::vector<std::uint64_t> horizons;
  std::uint64_t replications = 1;
  double beta = 0.5;
  std::uint64_t master_seed = 0;
  std::vector<std::string> events{"leadership", "strict_leadership", "monopoly"};
  std::string output_path;
  unsigned workers = 1;
  bool timestamp = true;
};

struct MCEstimate {
  std::string event;
  std::uint64_t horizon = 0;
  std::uint64_t successes = 0;
  std::uint64_t trials = 0;
  double estimate = 0.0;
  Interval ci;
  std::uint64_t master_seed = 0;
  std::string seed_rule = kSeedRule;
};

inline MCEstimate make_estimate(std::string event, std::uint64_t horizon, std::uint64_t k, std::uint64_t n,
                                std::uint64_t master_seed) {
  MCEstimate e;
  e.event = std::move(event);
  e.horizon = horizon;
  e.successes = k;
  e.trials = n;
  e.estimate = static_cast<double>(k) / static_cast<double>(n);
  e.ci = wilson_ci(k, n);
  e.master_seed = master_seed;
  return e;
}

inline nlohmann::json to_json(const MCEstimate& e) {
  return {{"type", "estimate"},   {"event", e.event},         {"horizon", e.horizon},
          {"successes", e.successes}, {"trials", e.trials},   {"estimate", e.estimate},
          {"ci_lower", e.ci.lower}, {"ci_upper", e.ci.upper}, {"master_seed", e.master_seed},
          {"seed_rule", e.seed_rule}};
}

inline void validate(const ExperimentSpec& spec) {
  if (spec.horizons.empty()) throw PreconditionError("empty horizon list");
  for (std::size_t i = 1; i < spec.horizons.size(); ++i) {
    if (spec.horizons[i] <= spec.horizons[i - 1]) throw PreconditionError("horizons must be strictly increasing");
  }
  if (spec.horizons.front() == 0) throw PreconditionError("horizons must be positive");
  if (spec.replications < 1) throw PreconditionError("need at least one replication");
  if (spec.events.empty()) throw PreconditionError("no events requested");
  for (const auto& e : spec.events) (void)event_value(EventProxies{}, e);
}

/// Waiting family for a process run; feedback text is embedded.
inline WaitingFamilyPtr process_family(std::string_view text) {
  const Family f = parse_family(text);
  if (const auto* fb = std::get_if<FeedbackFamilyPtr>(&f)) return embed_feedback(*fb);
  return as_waiting(f);
}

/// Float clock for atomless families, exact dyadic clock otherwise.
inline NumericMode default_mode(const WaitingFamily& fam) {
  return fam.support_kind() == SupportKind::atomless ? NumericMode::float_mode : NumericMode::exact_dyadic;
}

struct Replication {
  EventProxies proxies;
  bool absorbed = false;
};

inline Replication run_replication(const ProcessConfig& cfg, double beta) {
  EventProxyTracker tracker(cfg.initial, cfg.horizon, beta);
  Replication r;
  r.absorbed = simulate_embedded_stream(cfg, [&](const GroupEvent& e) {
    tracker.observe(e.n, e.jump_set, e.values);
    return true;
  });
  r.proxies = tracker.result();
  return r;
}

namespace detail {

inline std::string utc_timestamp() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace detail

/// One estimate per (horizon, event), horizons outermost. When `jsonl` is set
/// it receives a header line, one line per replication and one per estimate.
inline std::vector<MCEstimate> run_mc(const ExperimentSpec& spec, std::ostream* jsonl) {
  validate(spec);
  const WaitingFamilyPtr fam = process_family(spec.family);
  const NumericMode mode = default_mode(*fam);

  if (jsonl) {
    nlohmann::json h{{"type", "header"},
                     {"family", fam->canonical()},
                     {"initial", spec.initial},
                     {"horizons", spec.horizons},
                     {"replications", spec.replications},
                     {"beta", spec.beta},
                     {"master_seed", spec.master_seed},
                     {"events", spec.events},
                     {"mode", to_string(mode)},
                     {"seed_rule", kSeedRule}};
    if (spec.timestamp) h["timestamp"] = detail::utc_timestamp();
    *jsonl << h.dump() << '\n';
  }

  std::vector<MCEstimate> out;
  std::vector<Replication> reps(spec.replications);
  for (std::size_t hi = 0; hi < spec.horizons.size(); ++hi) {
    const std::uint64_t N = spec.horizons[hi];
    parallel_for(reps.size(), spec.workers, [&](std::size_t i) {
      ProcessConfig cfg;
      cfg.initial = spec.initial;
      cfg.family = fam;
      cfg.horizon = N;
      cfg.mode = mode;
      cfg.seed = derive_seed(spec.master_seed, hi, i);
      try {
        reps[i] = run_replication(cfg, spec.beta);
      } catch (...) {
        rethrow_with_context("horizon " + std::to_string(N) + ", replication " + std::to_string(i));
      }
    });

    std::vector<std::uint64_t> hits(spec.events.size(), 0);
    for (std::size_t i = 0; i < reps.size(); ++i) {
      const auto& p = reps[i].proxies;
      for (std::size_t e = 0; e < spec.events.size(); ++e) hits[e] += event_value(p, spec.events[e]) ? 1 : 0;
      if (jsonl) {
        nlohmann::json r{{"type", "replication"},
                         {"horizon", N},
                         {"horizon_index", hi},
                         {"replication", i},
                         {"seed", derive_seed(spec.master_seed, hi, i)},
                         {"leader_stable", p.leader_stable},
                         {"strict_leader_stable", p.strict_leader_stable},
                         {"monopoly_proxy", p.monopoly_proxy},
                         {"tie_in_window", p.tie_in_window},
                         {"last_tie_step", p.last_tie_step},
                         {"last_lead_change_step", p.last_lead_change_step},
                         {"last_loser_jump_step", p.last_loser_jump_step},
                         {"absorbed", reps[i].absorbed}};
        *jsonl << r.dump() << '\n';
      }
    }
    for (std::size_t e = 0; e < spec.events.size(); ++e) {
      out.push_back(make_estimate(spec.events[e], N, hits[e], spec.replications, spec.master_seed));
      if (jsonl) *jsonl << to_json(out.back()).dump() << '\n';
    }
  }
  return out;
}

/// Writes to spec.output_path when set.
inline std::vector<MCEstimate> run_mc(const ExperimentSpec& spec) {
  if (spec.output_path.empty()) return run_mc(spec, nullptr);
  std::ofstream os(spec.output_path);
  if (!os) throw std::runtime_error("cannot open " + spec.output_path);
  return run_mc(spec, &os);
}

}  // namespace cgp
