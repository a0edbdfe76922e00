#pragma once

#include <string>
#include <vector>

#include "json.hpp"

#include "cgp/numerics/series_eval.hpp"
#include "cgp/series/three_series.hpp"

namespace cgp {

enum class Event { Leadership, StrictLeadership, Monopoly };
enum class Outcome { AlmostSurely, AlmostNever, PositiveNondegenerate, Undetermined };

inline const char* to_string(Event e) {
  switch (e) {
    case Event::Leadership: return "Leadership";
    case Event::StrictLeadership: return "StrictLeadership";
    case Event::Monopoly: return "Monopoly";
  }
  return "?";
}

inline const char* to_string(Outcome o) {
  switch (o) {
    case Outcome::AlmostSurely: return "AlmostSurely";
    case Outcome::AlmostNever: return "AlmostNever";
    case Outcome::PositiveNondegenerate: return "PositiveNondegenerate";
    case Outcome::Undetermined: return "Undetermined";
  }
  return "?";
}

/// Two-letter form used in tables: AS, AN, PN, U.
inline const char* short_name(Outcome o) {
  switch (o) {
    case Outcome::AlmostSurely: return "AS";
    case Outcome::AlmostNever: return "AN";
    case Outcome::PositiveNondegenerate: return "PN";
    case Outcome::Undetermined: return "U";
  }
  return "?";
}

struct Verdict {
  Event event = Event::Leadership;
  Outcome outcome = Outcome::Undetermined;
  std::string basis;
  std::vector<NamedReport> evidence;
  std::vector<double> epsilon_grid;
  std::vector<double> eta_grid;
  std::vector<std::string> warnings;
};

inline nlohmann::json to_json(const ConvergenceReport& r) {
  nlohmann::json j;
  j["status"] = to_string(r.status);
  j["partial_value"] = r.partial_value;
  j["truncation_index"] = r.truncation_index;
  if (std::isfinite(r.tail_bound)) {
    j["tail_bound"] = r.tail_bound;
  } else {
    j["tail_bound"] = nullptr;
  }
  j["witness"] = r.witness;
  return j;
}

inline nlohmann::json to_json(const Verdict& v) {
  nlohmann::json j;
  j["event"] = to_string(v.event);
  j["outcome"] = to_string(v.outcome);
  j["basis"] = v.basis;
  j["evidence"] = nlohmann::json::array();
  for (const auto& e : v.evidence) {
    auto r = to_json(e.report);
    r["series"] = e.name;
    j["evidence"].push_back(std::move(r));
  }
  if (!v.epsilon_grid.empty()) j["epsilon_grid"] = v.epsilon_grid;
  if (!v.eta_grid.empty()) j["eta_grid"] = v.eta_grid;
  if (!v.warnings.empty()) j["warnings"] = v.warnings;
  return j;
}

}  // namespace cgp
