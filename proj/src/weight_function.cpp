#include "patree/weight_function.hpp"

#include <cmath>
#include <string>

#include "patree/error.hpp"

namespace patree {

namespace {

bool positive_finite(double x) { return std::isfinite(x) && x > 0.0; }

void check_tail(const Tail& tail) {
  if (const auto* c = std::get_if<ConstantTail>(&tail)) {
    if (!positive_finite(c->c)) throw Error(Errc::invalid_weight, "constant tail needs c > 0");
  } else if (const auto* l = std::get_if<LinearTail>(&tail)) {
    if (!positive_finite(l->a) || !positive_finite(l->b))
      throw Error(Errc::invalid_weight, "linear tail needs a > 0 and b > 0");
  } else if (const auto* d = std::get_if<DominatedLinearTail>(&tail)) {
    if (!d->value) throw Error(Errc::invalid_weight, "dominated tail without a value function");
    if (!(std::isfinite(d->a) && d->a >= 0.0) || !positive_finite(d->b))
      throw Error(Errc::invalid_weight, "dominated tail needs a >= 0 and b > 0");
  } else if (const auto* o = std::get_if<OpaqueTail>(&tail)) {
    if (!o->value) throw Error(Errc::invalid_weight, "opaque tail without a value function");
  }
}

}  // namespace

WeightFunction::WeightFunction(std::vector<double> prefix, Tail tail)
    : prefix_(std::move(prefix)), tail_(std::move(tail)) {
  for (std::size_t k = 0; k < prefix_.size(); ++k) {
    if (!positive_finite(prefix_[k]))
      throw Error(Errc::invalid_weight, "omega(" + std::to_string(k) + ") must be > 0");
  }
  check_tail(tail_);
}

WeightFunction WeightFunction::constant(double c) { return {{}, ConstantTail{c}}; }

WeightFunction WeightFunction::linear(double a, double b) { return {{}, LinearTail{a, b}}; }

double WeightFunction::operator()(std::size_t k) const {
  if (k < prefix_.size()) return prefix_[k];
  const double kd = static_cast<double>(k);
  return std::visit(
      [&](const auto& t) -> double {
        using T = std::decay_t<decltype(t)>;
        if constexpr (std::is_same_v<T, ConstantTail>) {
          return t.c;
        } else if constexpr (std::is_same_v<T, LinearTail>) {
          return t.a * kd + t.b;
        } else {
          const double v = t.value(k);
          if (!(v > 0.0))
            throw Error(Errc::invalid_weight, "omega(" + std::to_string(k) + ") must be > 0");
          if constexpr (std::is_same_v<T, DominatedLinearTail>) {
            if (v > t.a * kd + t.b)
              throw Error(Errc::invalid_weight,
                          "omega(" + std::to_string(k) + ") exceeds the declared linear bound");
          }
          return v;
        }
      },
      tail_);
}

std::optional<LinearEnvelope> WeightFunction::envelope() const {
  const std::size_t start = prefix_.size();
  if (const auto* c = std::get_if<ConstantTail>(&tail_)) return LinearEnvelope{0.0, c->c, start, true};
  if (const auto* l = std::get_if<LinearTail>(&tail_)) return LinearEnvelope{l->a, l->b, start, true};
  if (const auto* d = std::get_if<DominatedLinearTail>(&tail_))
    return LinearEnvelope{d->a, d->b, start, false};
  return std::nullopt;
}

bool WeightFunction::closed_form() const {
  return std::holds_alternative<ConstantTail>(tail_) || std::holds_alternative<LinearTail>(tail_);
}

WeightFunction WeightFunction::scaled(double factor) const {
  if (!positive_finite(factor)) throw Error(Errc::invalid_weight, "scale factor must be > 0");
  std::vector<double> prefix = prefix_;
  for (double& v : prefix) v *= factor;
  Tail tail = std::visit(
      [factor](const auto& t) -> Tail {
        using T = std::decay_t<decltype(t)>;
        if constexpr (std::is_same_v<T, ConstantTail>) {
          return ConstantTail{t.c * factor};
        } else if constexpr (std::is_same_v<T, LinearTail>) {
          return LinearTail{t.a * factor, t.b * factor};
        } else if constexpr (std::is_same_v<T, DominatedLinearTail>) {
          auto inner = t.value;
          return DominatedLinearTail{[inner, factor](std::size_t k) { return factor * inner(k); },
                                     t.a * factor, t.b * factor};
        } else {
          auto inner = t.value;
          return OpaqueTail{[inner, factor](std::size_t k) { return factor * inner(k); }};
        }
      },
      tail_);
  return {std::move(prefix), std::move(tail)};
}

}  // namespace patree
