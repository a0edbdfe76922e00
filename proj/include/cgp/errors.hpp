#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace cgp {

/// Malformed family text; position is a 0-based byte offset into the input.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t position, const std::string& what)
      : std::runtime_error("parse error at offset " + std::to_string(position) + ": " + what), position_(position) {}
  [[nodiscard]] std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

/// A documented precondition does not hold (wrong family kind, divergent series, ...).
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A configured state or step budget was exceeded.
class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Rethrows the active exception with `context` prepended, keeping its kind.
[[noreturn]] inline void rethrow_with_context(const std::string& context) {
  try {
    throw;
  } catch (const ParseError&) {
    throw;
  } catch (const PreconditionError& e) {
    throw PreconditionError(context + ": " + e.what());
  } catch (const ResourceError& e) {
    throw ResourceError(context + ": " + e.what());
  } catch (const std::invalid_argument& e) {
    throw std::invalid_argument(context + ": " + e.what());
  } catch (const std::exception& e) {
    throw std::runtime_error(context + ": " + e.what());
  }
}

}  // namespace cgp
