#pragma once

#include <cstdint>
#include <limits>
#include <span>

namespace cgp {

struct FluctuationStats {
  double running_max = -std::numeric_limits<double>::infinity();
  double running_min = std::numeric_limits<double>::infinity();
  /// Strict sign flips of the partial sums; visits to zero alone do not count.
  std::uint64_t zero_crossings = 0;
  /// 1-based index of the latest flip, 0 when there was none.
  std::uint64_t last_sign_change = 0;
  std::uint64_t zero_hits = 0;
  std::uint64_t count = 0;
};

class FluctuationScanner {
 public:
  void push(double s) {
    ++st_.count;
    if (s > st_.running_max) st_.running_max = s;
    if (s < st_.running_min) st_.running_min = s;
    const int sign = (s > 0.0) - (s < 0.0);
    if (sign == 0) {
      ++st_.zero_hits;
      return;
    }
    if (last_sign_ != 0 && sign != last_sign_) {
      ++st_.zero_crossings;
      st_.last_sign_change = st_.count;
    }
    last_sign_ = sign;
  }
  [[nodiscard]] const FluctuationStats& stats() const noexcept { return st_; }

 private:
  FluctuationStats st_;
  int last_sign_ = 0;
};

inline FluctuationStats fluctuation_scan(std::span<const double> partial_sums) {
  FluctuationScanner sc;
  for (double s : partial_sums) sc.push(s);
  return sc.stats();
}

}  // namespace cgp
