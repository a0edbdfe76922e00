// Command-line front end: simulate, classify, run, sweep, equivalence, atom, fluctuate.

#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "cgp/classify/classify.hpp"
#include "cgp/engine/simulate.hpp"
#include "cgp/errors.hpp"
#include "cgp/families/dsl.hpp"
#include "cgp/harness/equivalence.hpp"
#include "cgp/harness/fluctuate.hpp"
#include "cgp/harness/mc.hpp"
#include "cgp/harness/sweep.hpp"
#include "cgp/series/atoms.hpp"

namespace {

using nlohmann::json;

/// "lo:hi:step", inclusive of hi up to rounding.
std::vector<double> parse_range(const std::string& text) {
  std::vector<double> parts;
  std::size_t start = 0;
  for (;;) {
    const auto colon = text.find(':', start);
    const auto piece = text.substr(start, colon == std::string::npos ? std::string::npos : colon - start);
    double v = 0.0;
    const auto res = std::from_chars(piece.data(), piece.data() + piece.size(), v);
    if (res.ec != std::errc{} || res.ptr != piece.data() + piece.size() || piece.empty()) {
      throw cgp::ParseError(start, "expected a number in range '" + text + "'");
    }
    parts.push_back(v);
    if (colon == std::string::npos) break;
    start = colon + 1;
  }
  if (parts.size() == 1) return parts;
  if (parts.size() != 3) throw cgp::ParseError(0, "range must be lo:hi:step");
  const double lo = parts[0], hi = parts[1], step = parts[2];
  if (!(step > 0.0) || hi < lo) throw cgp::PreconditionError("range needs lo <= hi and step > 0");
  std::vector<double> out;
  const auto count = static_cast<std::uint64_t>(std::floor((hi - lo) / step + 1e-9));
  for (std::uint64_t i = 0; i <= count; ++i) out.push_back(lo + static_cast<double>(i) * step);
  return out;
}

json verdict_block(const cgp::Verdict& v) { return cgp::to_json(v); }

std::ostream& open_out(const std::string& path, std::ofstream& file) {
  if (path.empty() || path == "-") return std::cout;
  file.open(path);
  if (!file) throw std::runtime_error("cannot open " + path);
  return file;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Competing growth processes: simulation, classification and Monte Carlo checks"};
  app.require_subcommand(1);

  std::string family, out, mode = "auto", source = "embedded", p_range, events_text;
  std::vector<std::uint64_t> init{1, 1}, horizons;
  std::uint64_t horizon = 1000, seed = 0, reps = 100, prefix = 4, samples = 100000, depth = 20, n = 10000;
  double beta = 0.5, C = 1.0;
  unsigned workers = 1;
  bool feedback = false;

  auto* sim = app.add_subcommand("simulate", "run one trajectory and write it as JSONL");
  sim->add_option("--family", family, "waiting-time or feedback family")->required();
  sim->add_option("--init", init, "initial values a,b,...")->delimiter(',');
  sim->add_option("--horizon", horizon, "number of increments");
  sim->add_option("--mode", mode, "float | exact | exact_integer | auto");
  sim->add_option("--seed", seed);
  sim->add_option("--beta", beta, "proxy window fraction");
  sim->add_option("--out", out, "trajectory file (default stdout)");

  auto* cls = app.add_subcommand("classify", "analytic verdicts for a family");
  cls->add_option("--family", family)->required();
  cls->add_flag("--feedback", feedback, "treat the family as urn feedback");
  cls->add_option("--init", init)->delimiter(',');
  cls->add_option("--C", C, "three-series truncation level");

  auto* run = app.add_subcommand("run", "Monte Carlo proxy estimates over a horizon ladder");
  run->add_option("--family", family)->required();
  run->add_option("--init", init)->delimiter(',');
  run->add_option("--horizons", horizons)->delimiter(',')->required();
  run->add_option("--reps", reps);
  run->add_option("--beta", beta);
  run->add_option("--seed", seed);
  run->add_option("--events", events_text, "comma-separated events");
  run->add_option("--workers", workers);
  run->add_option("--out", out, "JSONL file (default stdout)");

  auto* swp = app.add_subcommand("sweep", "phase table for power feedback (j+1)^p");
  swp->add_option("--p", p_range, "lo:hi:step")->required();
  swp->add_option("--horizons", horizons)->delimiter(',')->required();
  swp->add_option("--reps", reps);
  swp->add_option("--seed", seed);
  swp->add_option("--workers", workers);
  swp->add_option("--out", out, "CSV file (default stdout)");

  auto* eqv = app.add_subcommand("equivalence", "embedded prefixes against exact chain probabilities");
  eqv->add_option("--feedback", family)->required();
  eqv->add_option("--init", init)->delimiter(',');
  eqv->add_option("--prefix", prefix);
  eqv->add_option("--samples", samples);
  eqv->add_option("--seed", seed);
  eqv->add_option("--source", source, "embedded | ballsbins | corrupted");
  eqv->add_option("--workers", workers);

  auto* atm = app.add_subcommand("atom", "atom criterion and brute-force convolution");
  atm->add_option("--family", family)->required();
  atm->add_option("--depth", depth);

  auto* flc = app.add_subcommand("fluctuate", "zero crossings of partial sums");
  flc->add_option("--family", family)->required();
  flc->add_option("--n", n);
  flc->add_option("--reps", reps);
  flc->add_option("--seed", seed);
  flc->add_option("--workers", workers);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*sim) {
      cgp::ProcessConfig cfg;
      cfg.family = cgp::process_family(family);
      cfg.initial = init;
      cfg.horizon = horizon;
      cfg.seed = seed;
      if (mode == "auto") {
        cfg.mode = cgp::default_mode(*cfg.family);
      } else if (mode == "float") {
        cfg.mode = cgp::NumericMode::float_mode;
      } else if (mode == "exact") {
        cfg.mode = cgp::NumericMode::exact_dyadic;
      } else if (mode == "exact_integer") {
        cfg.mode = cgp::NumericMode::exact_integer;
      } else {
        throw cgp::PreconditionError("unknown mode '" + mode + "'");
      }
      const auto traj = cgp::simulate_embedded(cfg);
      std::ofstream file;
      cgp::export_trajectory(traj, open_out(out, file));
      if (!out.empty() && out != "-") {
        const auto p = cgp::detect_events(traj, beta);
        json s{{"family", cfg.family->canonical()},      {"mode", cgp::to_string(cfg.mode)},
               {"final_values", traj.final_values},     {"tie_groups", traj.tie_count},
               {"explosion_flag", traj.explosion_flag}, {"leader_stable", p.leader_stable},
               {"strict_leader_stable", p.strict_leader_stable}, {"monopoly_proxy", p.monopoly_proxy}};
        std::cout << s.dump() << '\n';
      }
    } else if (*cls) {
      const cgp::Family f = cgp::parse_family(family);
      cgp::ClassifyOptions opts;
      opts.C = C;
      json j;
      if (feedback) {
        const auto v = cgp::classify_ballsbins(*cgp::as_feedback(f));
        j = {{"family", cgp::render(f)}, {"model", "balls_in_bins"},
             {"monopoly", verdict_block(v.monopoly)}, {"strict_leadership", verdict_block(v.strict)}};
      } else {
        const auto w = cgp::process_family(family);
        j = {{"family", w->canonical()},
             {"model", "growth_process"},
             {"leadership", verdict_block(cgp::classify_leadership(*w, opts))},
             {"strict_leadership", verdict_block(cgp::classify_strict(*w, init, {0.01, 0.1, 1.0}, opts))},
             {"monopoly", verdict_block(cgp::classify_monopoly(*w, init, opts))}};
      }
      std::cout << j.dump(2) << '\n';
    } else if (*run) {
      cgp::ExperimentSpec spec;
      spec.family = family;
      spec.initial = init;
      spec.horizons = horizons;
      spec.replications = reps;
      spec.beta = beta;
      spec.master_seed = seed;
      spec.workers = workers;
      if (!events_text.empty()) {
        spec.events.clear();
        std::size_t start = 0;
        for (;;) {
          const auto comma = events_text.find(',', start);
          spec.events.push_back(events_text.substr(start, comma - start));
          if (comma == std::string::npos) break;
          start = comma + 1;
        }
      }
      std::ofstream file;
      cgp::run_mc(spec, &open_out(out, file));
    } else if (*swp) {
      cgp::SweepSpec spec;
      spec.p_grid = parse_range(p_range);
      spec.horizons = horizons;
      spec.replications = reps;
      spec.seed = seed;
      spec.workers = workers;
      std::ofstream file;
      cgp::write_sweep_csv(cgp::sweep(spec), open_out(out, file));
    } else if (*eqv) {
      cgp::PrefixSource src = cgp::PrefixSource::embedded;
      if (source == "ballsbins") {
        src = cgp::PrefixSource::ballsbins;
      } else if (source == "corrupted") {
        src = cgp::PrefixSource::corrupted;
      } else if (source != "embedded") {
        throw cgp::PreconditionError("unknown source '" + source + "'");
      }
      const auto fb = cgp::parse_feedback(family);
      const auto r = cgp::equivalence_test(fb, init, prefix, samples, seed, src, workers);
      std::cout << json{{"feedback", fb->canonical()}, {"source", source}, {"chi_square", r.stat},
                        {"dof", r.dof}, {"p_value", r.p_value}, {"cells", r.cells}}
                       .dump()
                << '\n';
    } else if (*atm) {
      const auto law = cgp::as_law(cgp::parse_family(family));
      const auto v = cgp::atom_criterion(*law);
      json j{{"family", law->canonical()}, {"has_atom", cgp::to_string(v.has_atom)}, {"reason", v.reason}};
      if (v.neq_series) j["neq_series"] = cgp::to_json(*v.neq_series);
      if (law->support_kind() != cgp::SupportKind::atomless) {
        const auto rep = cgp::atom_bruteforce(*law, depth);
        json atoms = json::array();
        for (const auto& a : rep.atoms) {
          atoms.push_back({{"location", a.location.str()}, {"mass_lower", a.mass_lower}, {"mass_upper", a.mass_upper}});
        }
        j["bruteforce"] = {{"depth", rep.depth},          {"atoms", rep.atoms.size()},
                           {"tail_mass", rep.tail_mass},  {"pruned_mass", rep.pruned_mass},
                           {"max_atom_upper", rep.max_atom_upper}};
        if (rep.atoms.size() <= 64) j["bruteforce"]["listing"] = std::move(atoms);
      }
      std::cout << j.dump(2) << '\n';
    } else if (*flc) {
      const auto law = cgp::as_law(cgp::parse_family(family));
      const auto s = cgp::fluctuate(*law, n, reps, seed, workers);
      std::cout << json{{"family", law->canonical()},
                        {"n", n},
                        {"reps", reps},
                        {"median_crossings", s.median_crossings},
                        {"max_abs_partial", s.max_abs_partial},
                        {"max_last_sign_change", s.max_last_sign_change}}
                       .dump()
                << '\n';
    }
  } catch (const cgp::ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const cgp::ResourceError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 4;
  } catch (const std::invalid_argument& e) {
    // PreconditionError and constructor argument checks.
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
