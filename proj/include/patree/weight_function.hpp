#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <variant>
#include <vector>

namespace patree {

/// omega(k) = c for every k at or beyond the prefix.
struct ConstantTail {
  double c;
};

/// omega(k) = a*k + b for every k at or beyond the prefix (k counted from 0).
struct LinearTail {
  double a;
  double b;
};

/// Values supplied lazily; each queried value must satisfy omega(k) <= a*k + b.
struct DominatedLinearTail {
  std::function<double(std::size_t)> value;
  double a;
  double b;
};

/// Values supplied lazily with no growth guarantee. Only usable for
/// diagnostics (condition checks, simulation); series evaluation refuses it.
struct OpaqueTail {
  std::function<double(std::size_t)> value;
};

using Tail = std::variant<ConstantTail, LinearTail, DominatedLinearTail, OpaqueTail>;

/// Linear upper envelope omega(k) <= slope*k + intercept valid for k >= start.
/// `exact` means equality holds there, so series remainders are known in
/// closed form rather than only bounded.
struct LinearEnvelope {
  double slope;
  double intercept;
  std::size_t start;
  bool exact;

  double at(std::size_t k) const { return slope * static_cast<double>(k) + intercept; }
};

/// Attachment weight as a function of a vertex's child count: a finite table
/// omega(0..N0-1) followed by a tail rule for k >= N0.
class WeightFunction {
 public:
  WeightFunction(std::vector<double> prefix, Tail tail);

  static WeightFunction constant(double c);
  static WeightFunction linear(double a, double b);

  /// Throws Errc::invalid_weight if the value is not strictly positive or
  /// breaks a declared envelope.
  double operator()(std::size_t k) const;

  std::span<const double> prefix() const { return prefix_; }
  std::size_t tail_start() const { return prefix_.size(); }
  const Tail& tail() const { return tail_; }

  /// nullopt for opaque tails.
  std::optional<LinearEnvelope> envelope() const;

  /// True when every value is given by the table or a closed-form tail.
  bool closed_form() const;

  /// The weight function c*omega (a time rescaling of the growth process).
  WeightFunction scaled(double factor) const;

 private:
  std::vector<double> prefix_;
  Tail tail_;
};

}  // namespace patree
