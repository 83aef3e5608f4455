#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace fpp {

inline constexpr int kMaxDim = 8;

enum class VertexId : std::uint32_t {};
enum class EdgeId : std::uint32_t {};

constexpr std::uint32_t index(VertexId v) noexcept { return static_cast<std::uint32_t>(v); }
constexpr std::uint32_t index(EdgeId e) noexcept { return static_cast<std::uint32_t>(e); }

using VertexSet = std::vector<VertexId>;
using EdgeSet = std::vector<EdgeId>;  // kept sorted by id

// Scaled capacity of a single edge. Flow values and cut capacities are FlowValue.
using Capacity = std::int32_t;
using FlowValue = std::int64_t;

// Precondition violations on user-visible operations.
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Instance too large for the index types in use.
class CapacityError : public std::length_error {
 public:
  using std::length_error::length_error;
};

// Enumeration refused because the instance exceeds a configured cap.
class GuardError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Non-negative exact rational with 64-bit parts, used for probabilities and noise levels.
struct Ratio {
  std::int64_t num = 0;
  std::int64_t den = 1;

  static Ratio of(std::int64_t num, std::int64_t den);
  // Accepts "p/q", integers and plain decimals ("0.25").
  static Ratio parse(std::string_view text);

  double to_double() const noexcept { return static_cast<double>(num) / static_cast<double>(den); }
  bool is_zero() const noexcept { return num == 0; }
  bool is_one() const noexcept { return num == den; }
  std::string str() const;

  friend bool operator==(const Ratio& x, const Ratio& y) noexcept {
    return x.num == y.num && x.den == y.den;
  }
  friend bool operator<(const Ratio& x, const Ratio& y) noexcept {
    return static_cast<__int128>(x.num) * y.den < static_cast<__int128>(y.num) * x.den;
  }
  friend bool operator<=(const Ratio& x, const Ratio& y) noexcept { return !(y < x); }
};

}  // namespace fpp
