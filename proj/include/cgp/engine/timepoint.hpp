#pragma once

#include <string>
#include <variant>

#include "cgp/families/law.hpp"
#include "cgp/numerics/dyadic.hpp"

namespace cgp {

enum class NumericMode { float_mode, exact_dyadic, exact_integer };

inline const char* to_string(NumericMode m) {
  switch (m) {
    case NumericMode::float_mode: return "float";
    case NumericMode::exact_dyadic: return "exact_dyadic";
    case NumericMode::exact_integer: return "exact_integer";
  }
  return "?";
}

/// Event time, either a double or an exact dyadic rational.
class TimePoint {
 public:
  TimePoint() = default;
  explicit TimePoint(double t) : v_(t) {}
  explicit TimePoint(Dyadic t) : v_(std::move(t)) {}

  [[nodiscard]] bool exact() const noexcept { return std::holds_alternative<Dyadic>(v_); }
  [[nodiscard]] double to_double() const {
    return exact() ? std::get<Dyadic>(v_).to_double() : std::get<double>(v_);
  }
  [[nodiscard]] const Dyadic& dyadic() const { return std::get<Dyadic>(v_); }
  /// "num/2^exp" for exact values, shortest round-trip decimal otherwise.
  [[nodiscard]] std::string str() const {
    return exact() ? std::get<Dyadic>(v_).str() : format_number(std::get<double>(v_));
  }

  friend bool operator==(const TimePoint&, const TimePoint&) = default;

 private:
  std::variant<double, Dyadic> v_{0.0};
};

}  // namespace cgp
