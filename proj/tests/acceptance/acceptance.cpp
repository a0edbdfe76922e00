// Acceptance checks. Prints one [PASS]/[FAIL] line per criterion and exits
// nonzero when any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "cgp/classify/classify.hpp"
#include "cgp/engine/ballsbins.hpp"
#include "cgp/families/dsl.hpp"
#include "cgp/families/feedback.hpp"
#include "cgp/harness/equivalence.hpp"
#include "cgp/harness/fluctuate.hpp"
#include "cgp/harness/mc.hpp"
#include "cgp/harness/prop4.hpp"
#include "cgp/harness/stats.hpp"
#include "cgp/harness/sweep.hpp"
#include "cgp/numerics/product.hpp"
#include "cgp/series/atoms.hpp"
#include "cgp/series/exp_diff.hpp"
#include "json.hpp"

#ifndef CGP_FIXTURE_DIR
#define CGP_FIXTURE_DIR "tests/fixtures"
#endif

using namespace cgp;

namespace {

unsigned workers() { return std::max(1u, std::thread::hardware_concurrency()); }

/// Collects failure reasons for one criterion.
struct Check {
  std::vector<std::string> failures;
  std::vector<std::string> notes;

  void require(bool ok, const std::string& what) {
    if (!ok) failures.push_back(what);
  }
  void note(const std::string& s) { notes.push_back(s); }
};

std::string fmt(double x, int prec = 6) {
  std::ostringstream os;
  os << std::setprecision(prec) << x;
  return os.str();
}

struct Criterion {
  std::string id;
  std::string title;
  double budget_seconds;
  std::function<void(Check&)> body;
};

// ---------------------------------------------------------------------------

void ac1(Check& c) {
  for (double p : {0.25, 0.4, 0.5, 0.6, 0.75, 1.0, 1.5, 2.0}) {
    const auto v = classify_ballsbins(PowerFeedback(p));
    const Outcome mono = p > 1.0 ? Outcome::AlmostSurely : Outcome::AlmostNever;
    const Outcome strict = p > 0.5 ? Outcome::AlmostSurely : Outcome::AlmostNever;
    c.require(v.monopoly.outcome == mono, "monopoly at p=" + fmt(p) + " is " + to_string(v.monopoly.outcome));
    c.require(v.strict.outcome == strict, "strict at p=" + fmt(p) + " is " + to_string(v.strict.outcome));
    c.note("p=" + fmt(p) + " monopoly " + short_name(v.monopoly.outcome) + " strict " + short_name(v.strict.outcome));
  }
}

void ac2(Check& c) {
  const auto fb = std::make_shared<AffineFeedback>(1.0, 1.0);
  const std::vector<std::uint64_t> init{1, 2, 1};
  const auto ok = equivalence_test(fb, init, 4, 100000, 20240901, PrefixSource::embedded, workers());
  const auto bad = equivalence_test(fb, init, 4, 100000, 20240902, PrefixSource::corrupted, workers());
  c.note("embedded: chi2=" + fmt(ok.stat) + " dof=" + std::to_string(ok.dof) + " p=" + fmt(ok.p_value));
  c.note("off-by-one: chi2=" + fmt(bad.stat) + " dof=" + std::to_string(bad.dof) + " p=" + fmt(bad.p_value));
  c.require(ok.p_value > 1e-3, "embedded prefixes rejected, p=" + fmt(ok.p_value));
  c.require(bad.p_value < 1e-6, "off-by-one prefixes not rejected, p=" + fmt(bad.p_value));
}

void ac3(Check& c) {
  ExperimentSpec spec;
  spec.family = "power_feedback{p=0}";
  spec.initial = {1, 1};
  spec.horizons = {10000};
  spec.replications = 2000;
  spec.master_seed = 31337;
  spec.events = {"tie_in_window"};
  spec.workers = workers();
  const auto est = run_mc(spec, nullptr).at(0);
  const double width = est.ci.upper - est.ci.lower;
  c.note("tie in second half: " + fmt(est.estimate) + " CI [" + fmt(est.ci.lower) + ", " + fmt(est.ci.upper) +
         "] width " + fmt(width));
  c.require(est.ci.lower <= 0.5 && 0.5 <= est.ci.upper, "CI does not contain 1/2");
  c.require(width < 0.05, "CI width " + fmt(width) + " >= 0.05");
}

void ac4(Check& c) {
  const AffineFeedback polya(1.0, 0.0);
  const std::vector<std::uint64_t> init{1, 1};
  // n = 3: P(urn 0 drawn k times) = 1/4 for k = 0..3, summed over all orders.
  std::vector<BigRational> by_k(4, BigRational(0));
  for (std::uint32_t code = 0; code < 8; ++code) {
    std::vector<std::uint32_t> picks;
    int k = 0;
    for (int i = 0; i < 3; ++i) {
      const std::uint32_t a = (code >> i) & 1u;
      picks.push_back(a);
      k += a == 0;
    }
    by_k[k] += chain_prefix_prob(polya, init, picks);
  }
  for (int k = 0; k <= 3; ++k) {
    c.require(by_k[k] == BigRational(1, 4), "exact P(k=" + std::to_string(k) + ") != 1/4");
  }
  c.note("n=3 exact: all four counts have probability 1/4");

  const std::uint64_t n = 200;
  const std::uint64_t R = 5000;
  std::vector<std::uint64_t> counts(n + 1, 0);
  for (std::uint64_t r = 0; r < R; ++r) {
    const auto traj = simulate_ballsbins(polya, init, n, derive_seed(777, 0, r));
    counts[traj.final_values[0] - 1] += 1;
  }
  const std::vector<double> probs(n + 1, 1.0 / static_cast<double>(n + 1));
  const auto gof = chi_square_gof(counts, probs);
  c.note("n=200 chi2=" + fmt(gof.stat) + " dof=" + std::to_string(gof.dof) + " p=" + fmt(gof.p_value));
  c.require(gof.p_value > 1e-3, "uniform law rejected, p=" + fmt(gof.p_value));
}

void ac5(Check& c) {
  const std::vector<std::pair<double, double>> rates{{1, 1}, {2, 3}, {0.5, 4}};
  const std::vector<double> Cs{0.25, 0.5, 1.0};
  const std::uint64_t S = 1000000;
  std::mt19937_64 rng(5150);
  std::exponential_distribution<double> e(1.0);
  double worst = 0.0;
  for (const auto& [r, r2] : rates) {
    std::vector<double> z(S);
    for (auto& x : z) x = e(rng) / r - e(rng) / r2;
    for (double C : Cs) {
      double tail = 0.0;
      double m2 = 0.0;
      double m2sq = 0.0;
      for (double x : z) {
        if (std::fabs(x) > C) {
          tail += 1.0;
        } else {
          m2 += x * x;
          m2sq += x * x * x * x;
        }
      }
      const double n = static_cast<double>(S);
      const double pt = tail / n;
      const double mm = m2 / n;
      const double se_t = std::sqrt(pt * (1 - pt) / n);
      const double se_m = std::sqrt(std::max(m2sq / n - mm * mm, 0.0) / n);
      const double ct = exp_diff_tail(r, r2, C);
      const double cm = exp_diff_m2(r, r2, C);
      const double dt = std::fabs(pt - ct) / se_t;
      const double dm = std::fabs(mm - cm) / se_m;
      worst = std::max({worst, dt, dm});
      const std::string tag = "(" + fmt(r) + "," + fmt(r2) + ") C=" + fmt(C);
      c.require(dt <= 4.0, tag + " tail off by " + fmt(dt) + " SE");
      c.require(dm <= 4.0, tag + " truncated second moment off by " + fmt(dm) + " SE");
    }
  }
  c.note("largest deviation " + fmt(worst, 3) + " SE over 18 comparisons");
  c.require(std::fabs(exp_diff_tail(1, 1, 1) - std::exp(-1.0)) < 1e-15, "P(|X-X'|>1) at unit rates != e^-1");
  c.require(std::fabs(exp_diff_m2(2, 3, INFINITY) - 7.0 / 18.0) < 1e-15, "E(X-X')^2 at rates (2,3) != 7/18");
}

void ac6(Check& c) {
  struct Case {
    std::string text;
    AtomAnswer expected;
  };
  const std::vector<Case> corpus{
      {"two_point_counter{}", AtomAnswer::Yes},
      {"geometric_counter{}", AtomAnswer::Yes},
      {"four_adic{}", AtomAnswer::Yes},
      {"const_table{x1=1,x2=0.5,scale=1,ratio=0.5}", AtomAnswer::Yes},
      {"uniform_first{}", AtomAnswer::No},
      {"binomial_blocks{}", AtomAnswer::No},
  };
  BruteforceOptions bo;
  bo.prune_below = 1e-12;
  for (const auto& cs : corpus) {
    const auto law = as_law(parse_family(cs.text));
    const auto v = atom_criterion(*law);
    c.require(v.has_atom == cs.expected,
              cs.text + ": criterion says " + to_string(v.has_atom) + ", expected " + to_string(cs.expected));
    std::vector<double> max_upper;
    std::vector<double> best_lower;
    for (std::uint64_t J : {10, 20, 30}) {
      const auto rep = atom_bruteforce(*law, J, bo);
      double lo = 0.0;
      for (const auto& a : rep.atoms) lo = std::max(lo, a.mass_lower);
      max_upper.push_back(rep.max_atom_upper);
      best_lower.push_back(lo);
    }
    c.note(cs.text + ": " + to_string(v.has_atom) + ", heaviest atom lower " + fmt(best_lower[0], 4) + "/" +
           fmt(best_lower[1], 4) + "/" + fmt(best_lower[2], 4) + ", upper " + fmt(max_upper[0], 4) + "/" +
           fmt(max_upper[1], 4) + "/" + fmt(max_upper[2], 4));
    if (v.has_atom == AtomAnswer::Yes) {
      for (std::size_t i = 0; i < 3; ++i) {
        c.require(best_lower[i] > 0.0, cs.text + ": no atom with positive lower mass at depth " + std::to_string(10 * (i + 1)));
      }
    } else if (v.has_atom == AtomAnswer::No) {
      const bool nonincreasing = max_upper[1] <= max_upper[0] && max_upper[2] <= max_upper[1];
      const bool shrinking = max_upper[2] < max_upper[0] || max_upper[0] == 0.0;
      c.require(nonincreasing && shrinking, cs.text + ": atom bound does not shrink with depth");
    }
  }
}

void ac7(Check& c) {
  const auto half = infinite_product([](std::uint64_t j) { return TwoPointCounter::q(j); },
                                     [](std::uint64_t J) { return 1.0 / (static_cast<double>(J) + 1.0); },
                                     {.target_width = 1e-9});
  c.note("prod (1 - 1/(j+1)^2) in [" + fmt(half.lower, 15) + ", " + fmt(half.upper, 15) + "]");
  c.require(half.lower >= 0.5 - 1e-9 && half.upper <= 0.5 + 1e-9 && half.lower <= 0.5 && 0.5 <= half.upper,
            "product bounds miss 1/2 +- 1e-9");

  const auto b = prop4_bounds();
  Prop4Options o;
  o.replications = 10000;
  o.seed = 4444;
  o.workers = workers();
  const auto est = prop4_monte_carlo(o);
  const double mon_hi = 1.0 - b.monopoly_complement_lower;
  const double sl_hi = 1.0 - b.slead_complement_lower;
  c.note("monopoly (two-point) " + fmt(est.monopoly.estimate) + " in envelope [" + fmt(b.mon_lower) + ", " +
         fmt(mon_hi) + "], unresolved races " + std::to_string(est.unresolved_races));
  c.note("strict leadership (geometric) " + fmt(est.strict.estimate) + " in envelope [" + fmt(b.slead_lower) + ", " +
         fmt(sl_hi) + "]");
  for (const auto* e : {&est.monopoly, &est.strict}) {
    c.require(e->estimate > 0.02 && e->estimate < 0.98, e->event + " estimate " + fmt(e->estimate) + " is degenerate");
  }
  c.require(est.monopoly.estimate >= b.mon_lower && est.monopoly.estimate <= mon_hi, "monopoly outside envelope");
  c.require(est.strict.estimate >= b.slead_lower && est.strict.estimate <= sl_hi, "strict leadership outside envelope");
}

void ac8(Check& c) {
  std::ifstream in(std::string(CGP_FIXTURE_DIR) + "/trend_thresholds.json");
  if (!in) {
    c.require(false, "cannot open trend_thresholds.json");
    return;
  }
  const auto fx = nlohmann::json::parse(in);
  const auto& run = fx.at("run");
  const auto horizons = run.at("horizons").get<std::vector<std::uint64_t>>();
  const auto events = std::vector<std::string>{"leadership", "strict_leadership", "monopoly"};

  std::map<std::pair<double, std::string>, std::vector<MCEstimate>> table;
  for (double p : run.at("p").get<std::vector<double>>()) {
    ExperimentSpec spec;
    spec.family = "power_exponential{p=" + format_number(p) + "}";
    spec.initial = run.at("initial").get<std::vector<std::uint64_t>>();
    spec.horizons = horizons;
    spec.replications = run.at("replications").get<std::uint64_t>();
    spec.beta = run.at("beta").get<double>();
    spec.master_seed = run.at("master_seed").get<std::uint64_t>();
    spec.events = events;
    spec.workers = workers();
    const auto est = run_mc(spec, nullptr);
    for (std::size_t h = 0; h < horizons.size(); ++h) {
      for (std::size_t e = 0; e < events.size(); ++e) table[{p, events[e]}].push_back(est[h * events.size() + e]);
    }

    // Estimates must drift toward the classifier's limit, within sampling noise.
    const auto v = power_verdicts(p);
    const std::map<std::string, Outcome> verdict{
        {"leadership", v.leadership}, {"strict_leadership", v.strict}, {"monopoly", v.monopoly}};
    std::string line = "p=" + fmt(p) + ":";
    for (const auto& ev : events) {
      const auto& row = table[{p, ev}];
      line += " " + ev + "(" + short_name(verdict.at(ev)) + ")";
      for (const auto& m : row) line += " " + fmt(m.estimate, 3);
      for (std::size_t h = 1; h < row.size(); ++h) {
        const auto& prev = row[h - 1].ci;
        const auto& next = row[h].ci;
        if (verdict.at(ev) == Outcome::AlmostSurely) {
          c.require(next.upper >= prev.lower, "p=" + fmt(p) + " " + ev + " drifts away from 1 at N=" +
                                                  std::to_string(horizons[h]));
        } else if (verdict.at(ev) == Outcome::AlmostNever) {
          c.require(next.lower <= prev.upper, "p=" + fmt(p) + " " + ev + " drifts away from 0 at N=" +
                                                  std::to_string(horizons[h]));
        }
      }
    }
    c.note(line);
  }

  for (const auto& t : fx.at("thresholds")) {
    const double p = t.at("p").get<double>();
    const std::string ev = t.at("event").get<std::string>();
    const auto N = t.at("horizon").get<std::uint64_t>();
    const std::string op = t.at("op").get<std::string>();
    const double target = t.at("value").get<double>();
    const auto& row = table.at({p, ev});
    const auto it = std::find(horizons.begin(), horizons.end(), N);
    if (it == horizons.end()) {
      c.require(false, "threshold names a horizon that was not run");
      continue;
    }
    const double est = row[static_cast<std::size_t>(it - horizons.begin())].estimate;
    const bool ok = op == ">=" ? est >= target : est <= target;
    c.require(ok, "p=" + fmt(p) + " " + ev + " at N=" + std::to_string(N) + ": " + fmt(est, 4) + " not " + op + " " +
                      fmt(target) + " (" + t.at("source").get<std::string>() + ")");
  }
}

void ac9(Check& c) {
  const Rademacher unit(1.0, 1.0);
  const auto small = fluctuate(unit, 10000, 200, 9001, workers());
  const auto large = fluctuate(unit, 1000000, 200, 9002, workers());
  c.note("+-1 steps: median crossings " + fmt(small.median_crossings) + " (n=1e4), " + fmt(large.median_crossings) +
         " (n=1e6)");
  c.require(small.median_crossings > 0.0, "no crossings at n=1e4");
  c.require(large.median_crossings > small.median_crossings, "median crossings do not grow with n");

  const Rademacher control(1.0, 0.5);
  const auto ctl = fluctuate(control, 1000000, 200, 9003, workers());
  c.note("+-2^-j steps: max |S_n| " + fmt(ctl.max_abs_partial) + ", last sign change " +
         std::to_string(ctl.max_last_sign_change));
  c.require(ctl.max_abs_partial <= 1.0, "control partial sums unbounded");
  c.require(ctl.max_last_sign_change <= 64, "control keeps changing sign");
}

void ac10(Check& c) {
  auto render_run = [](const std::string& family, unsigned w) {
    ExperimentSpec spec;
    spec.family = family;
    spec.initial = {1, 1};
    spec.horizons = {1000, 5000};
    spec.replications = 200;
    spec.master_seed = 271828;
    spec.events = known_events();
    spec.workers = w;
    spec.timestamp = false;
    std::ostringstream os;
    run_mc(spec, &os);
    return os.str();
  };
  for (const std::string fam : {"power_exponential{p=0.75}", "two_point_counter{}", "geometric_counter{}"}) {
    const auto a = render_run(fam, 1);
    const auto b = render_run(fam, 1);
    const auto d = render_run(fam, 8);
    c.require(!a.empty(), fam + ": empty output");
    c.require(a == b, fam + ": repeated single-worker runs differ");
    c.require(a == d, fam + ": 1 and 8 workers differ");
    c.note(fam + ": " + std::to_string(a.size()) + " bytes identical across runs and worker counts");
  }

  // The timestamp is the only field allowed to vary.
  ExperimentSpec spec;
  spec.family = "power_exponential{p=1.5}";
  spec.horizons = {500};
  spec.replications = 20;
  spec.master_seed = 1;
  std::ostringstream with;
  run_mc(spec, &with);
  auto header = nlohmann::json::parse(with.str().substr(0, with.str().find('\n')));
  c.require(header.contains("timestamp"), "header has no timestamp");
  header.erase("timestamp");
  spec.timestamp = false;
  std::ostringstream without;
  run_mc(spec, &without);
  const auto plain = nlohmann::json::parse(without.str().substr(0, without.str().find('\n')));
  c.require(header == plain, "header differs beyond the timestamp");
  c.require(with.str().substr(with.str().find('\n')) == without.str().substr(without.str().find('\n')),
            "records differ when the timestamp is on");
}

}  // namespace

int main() {
  const std::vector<Criterion> all{
      {"AC1", "phase table of the classifier", 1.0, ac1},
      {"AC2", "embedding equivalence by chi-square", 60.0, ac2},
      {"AC3", "arcsine control: late ties at rate 1/2", 300.0, ac3},
      {"AC4", "Polya urn count is uniform", 60.0, ac4},
      {"AC5", "exponential-difference closed forms", 60.0, ac5},
      {"AC6", "atom criterion against brute force", 120.0, ac6},
      {"AC7", "counterexample bounds and Monte Carlo", 600.0, ac7},
      {"AC8", "finite-horizon trends", 900.0, ac8},
      {"AC9", "fluctuation control", 300.0, ac9},
      {"AC10", "reproducible JSONL", 60.0, ac10},
  };
  int failed = 0;
  for (const auto& cr : all) {
    Check c;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      cr.body(c);
    } catch (const std::exception& e) {
      c.require(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    c.require(secs <= cr.budget_seconds, "took " + fmt(secs, 3) + " s, budget " + fmt(cr.budget_seconds) + " s");
    const bool ok = c.failures.empty();
    failed += !ok;
    std::cout << (ok ? "[PASS] " : "[FAIL] ") << cr.id << " " << cr.title << " (" << fmt(secs, 3) << " s)\n";
    for (const auto& n : c.notes) std::cout << "       " << n << "\n";
    for (const auto& f : c.failures) std::cout << "       failed: " << f << "\n";
    std::cout.flush();
  }
  std::cout << (all.size() - static_cast<std::size_t>(failed)) << "/" << all.size() << " criteria passed\n";
  return failed == 0 ? 0 : 1;
}
