#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace evosort {

/// Element identifiers and ranks are both 0-based. Rank 0 is the largest
/// element of the current order.
using ElementId = std::uint32_t;
using Rank = std::uint32_t;

/// Outcome of comparing the first element of a pair against the second.
enum class Ordering : std::uint8_t { FirstLarger, SecondLarger };

constexpr Ordering flip(Ordering o) noexcept {
  return o == Ordering::FirstLarger ? Ordering::SecondLarger : Ordering::FirstLarger;
}

struct ComparisonRequest {
  ElementId a;
  ElementId b;
  friend bool operator==(const ComparisonRequest&, const ComparisonRequest&) = default;
};

enum class ModelKind : std::uint8_t { Consecutive, Gaussian };

std::string to_string(ModelKind kind);
ModelKind parse_model_kind(const std::string& text);

/// Raised for invalid experiment or algorithm configuration.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when results cannot be read or written.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace evosort
