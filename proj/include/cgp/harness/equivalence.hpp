#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "cgp/engine/ballsbins.hpp"
#include "cgp/engine/simulate.hpp"
#include "cgp/errors.hpp"
#include "cgp/families/embedding.hpp"
#include "cgp/harness/parallel.hpp"
#include "cgp/harness/seeds.hpp"
#include "cgp/harness/stats.hpp"

namespace cgp {

enum class PrefixSource {
  embedded,   // exponential embedding, X_j ~ Exp(F(j-1))
  ballsbins,  // the urn chain itself (self-test)
  corrupted,  // off-by-one feedback index, X_j ~ Exp(F(j)); negative control
};

namespace detail {

/// Embedding with the feedback index shifted by one. Only used as a wrong null.
class OffByOneEmbedded final : public WaitingFamily {
 public:
  explicit OffByOneEmbedded(FeedbackFamilyPtr fb) : fb_(std::move(fb)) {}
  [[nodiscard]] std::string canonical() const override { return "off_by_one(" + fb_->canonical() + ")"; }
  [[nodiscard]] SupportKind support_kind() const override { return SupportKind::atomless; }
  [[nodiscard]] double sample(std::uint64_t j, Rng& rng) const override {
    return std::exponential_distribution<double>(fb_->sample_F(j, rng))(rng);
  }

 private:
  FeedbackFamilyPtr fb_;
};

}  // namespace detail

struct EquivalenceResult {
  double stat = 0.0;
  int dof = 0;
  double p_value = 1.0;
  std::size_t cells = 0;
};

/// First `m` picks of one run, encoded base A with the earliest pick most significant.
inline std::uint64_t prefix_cell(const FeedbackFamilyPtr& fb, std::span<const std::uint64_t> initial, std::uint64_t m,
                                 std::uint64_t seed, PrefixSource source) {
  const std::uint64_t A = initial.size();
  std::uint64_t code = 0;
  std::uint64_t taken = 0;
  auto record = [&](const GroupEvent& e) {
    for (auto a : e.jump_set) {
      if (taken == m) break;
      code = code * A + a;
      ++taken;
    }
    return taken < m;
  };
  if (source == PrefixSource::ballsbins) {
    simulate_ballsbins_stream(*fb, initial, m, seed, record);
  } else {
    ProcessConfig cfg;
    cfg.initial.assign(initial.begin(), initial.end());
    cfg.family = source == PrefixSource::embedded ? embed_feedback(fb)
                                                  : std::make_shared<detail::OffByOneEmbedded>(fb);
    cfg.horizon = m;
    cfg.mode = NumericMode::float_mode;
    cfg.seed = seed;
    simulate_embedded_stream(cfg, record);
  }
  return code;
}

/// Chi-square goodness of fit of simulated m-step prefixes against the exact
/// chain probabilities.
inline EquivalenceResult equivalence_test(const FeedbackFamilyPtr& fb, std::span<const std::uint64_t> initial,
                                          std::uint64_t m, std::uint64_t samples, std::uint64_t seed,
                                          PrefixSource source = PrefixSource::embedded, unsigned workers = 1) {
  if (!fb->deterministic()) throw PreconditionError("equivalence test needs deterministic feedback");
  if (initial.size() < 2) throw PreconditionError("need at least two urns");
  if (samples == 0) throw PreconditionError("need at least one sample");
  if (m == 0) return {0.0, 0, 1.0, 1};

  const std::uint64_t A = initial.size();
  std::uint64_t cells = 1;
  for (std::uint64_t i = 0; i < m; ++i) {
    if (cells > (std::uint64_t{1} << 22) / A) throw ResourceError("too many prefix cells (A^m > 2^22)");
    cells *= A;
  }

  std::vector<double> probs(cells);
  std::vector<std::uint32_t> picks(m);
  for (std::uint64_t c = 0; c < cells; ++c) {
    std::uint64_t code = c;
    for (std::uint64_t i = m; i-- > 0;) {
      picks[i] = static_cast<std::uint32_t>(code % A);
      code /= A;
    }
    probs[c] = chain_prefix_prob(*fb, initial, picks).convert_to<double>();
  }

  std::vector<std::uint64_t> drawn(samples);
  parallel_for(samples, workers, [&](std::size_t s) {
    drawn[s] = prefix_cell(fb, initial, m, derive_seed(seed, 0, s), source);
  });
  std::vector<std::uint64_t> counts(cells, 0);
  for (auto c : drawn) ++counts[c];

  // Exact probabilities sum to 1; the doubles only up to rounding, so renormalise.
  double total = 0.0;
  for (double p : probs) total += p;
  for (double& p : probs) p /= total;

  const auto gof = chi_square_gof(counts, probs);
  return {gof.stat, gof.dof, gof.p_value, gof.cells};
}

}  // namespace cgp
