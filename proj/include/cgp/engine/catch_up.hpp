#pragma once

#include <algorithm>
#include <cstdint>
#include <vector>

#include "cgp/families/law.hpp"
#include "cgp/numerics/dyadic.hpp"

namespace cgp {

/// Counts of the catch-up event
///   0 <= S_b(k) - S_a(k) < X^(a)_{k+1},   S_c(k) = sum_{v_c(0) < j <= k} X^(c)_j,
/// along one sampled pair of waiting-time sequences. A finite expected count
/// is the hypothesis under which strict leadership holds almost surely; the
/// tally is an empirical probe of it, not a decision procedure.
struct CatchUpTally {
  std::uint64_t events = 0;
  std::uint64_t last_k = 0;
  std::uint64_t checked = 0;
};

namespace detail {

template <class T, class Draw>
CatchUpTally tally_catch_up(std::uint64_t v_a0, std::uint64_t v_b0, std::uint64_t K, Draw&& draw) {
  std::vector<T> xa(K + 2), xb(K + 2);
  for (std::uint64_t j = 1; j <= K + 1; ++j) {
    xa[j] = draw(j);
    xb[j] = draw(j);
  }
  CatchUpTally out;
  const std::uint64_t start = std::max(v_a0, v_b0);
  T sa{}, sb{};
  for (std::uint64_t j = v_a0 + 1; j <= start; ++j) sa += xa[j];
  for (std::uint64_t j = v_b0 + 1; j <= start; ++j) sb += xb[j];
  for (std::uint64_t k = start; k <= K; ++k) {
    if (k > start) {
      sa += xa[k];
      sb += xb[k];
    }
    const T gap = sb - sa;
    ++out.checked;
    if (!(gap < T{}) && gap < xa[k + 1]) {
      ++out.events;
      out.last_k = k;
    }
  }
  return out;
}

}  // namespace detail

inline CatchUpTally catch_up_tally(const WaitingFamily& fam, std::uint64_t v_a0, std::uint64_t v_b0, std::uint64_t K,
                                   std::uint64_t seed) {
  Rng rng(seed);
  if (fam.support_kind() == SupportKind::atomless) {
    return detail::tally_catch_up<double>(v_a0, v_b0, K, [&](std::uint64_t j) { return fam.sample(j, rng); });
  }
  return detail::tally_catch_up<Dyadic>(v_a0, v_b0, K, [&](std::uint64_t j) { return fam.sample_exact(j, rng); });
}

}  // namespace cgp
