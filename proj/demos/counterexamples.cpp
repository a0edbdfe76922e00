// Two agents started at (0, 0) whose laws have atoms. The classifier leaves
// these cases undetermined (the geometric counter has no monopoly), and
// simulation shows the open events are nondegenerate.
#include <cstdio>

#include "cgp/classify/classify.hpp"
#include "cgp/families/dsl.hpp"
#include "cgp/harness/prop4.hpp"

int main() {
  const std::vector<std::uint64_t> start{0, 0};
  for (const char* text : {"two_point_counter{}", "geometric_counter{}"}) {
    const auto fam = cgp::parse_waiting(text);
    std::printf("%-22s monopoly %s, strict %s\n", text, cgp::short_name(cgp::classify_monopoly(*fam, start).outcome),
                cgp::short_name(cgp::classify_strict(*fam, start).outcome));
  }
  const auto b = cgp::prop4_bounds();
  cgp::Prop4Options o;
  o.replications = 4000;
  o.seed = 11;
  const auto est = cgp::prop4_monte_carlo(o);
  std::printf("monopoly (two-point):  %.4f  bounds [%.4f, %.4f]\n", est.monopoly.estimate, b.mon_lower,
              1.0 - b.monopoly_complement_lower);
  std::printf("strict (geometric):    %.4f  bounds [%.4f, %.4f]\n", est.strict.estimate, b.slead_lower,
              1.0 - b.slead_complement_lower);
}
