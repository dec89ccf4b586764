#include "patree/malthus.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <sstream>
#include <stdexcept>

#include "patree/error.hpp"
#include "patree/io.hpp"

namespace patree {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr std::size_t kMaxTerms = 100'000'000;

// Neumaier-compensated sum of positive terms together with a first-order
// bound on the rounding error carried by the terms themselves: the i-th term of
// every series here is built from at most 8(i+1) rounded operations.
class SeriesSum {
 public:
  void add(double term, std::size_t index) {
    const double next = sum_ + term;
    comp_ += std::abs(sum_) >= std::abs(term) ? (sum_ - next) + term : (term - next) + sum_;
    sum_ = next;
    carried_ += std::abs(term) * op_count(index) * kEps;
  }
  double value() const { return sum_ + comp_; }
  /// Rounding bound for value() + extra, where extra is derived from index-th quantities.
  double rounding(double extra, std::size_t index) const {
    return carried_ + std::abs(extra) * op_count(index) * kEps + 4.0 * kEps * std::abs(value() + extra);
  }

 private:
  static double op_count(std::size_t index) { return 8.0 * static_cast<double>(index + 1); }
  double sum_ = 0.0;
  double comp_ = 0.0;
  double carried_ = 0.0;
};

LinearEnvelope require_envelope(const WeightFunction& w) {
  const auto env = w.envelope();
  if (!env) throw Error(Errc::non_convergent, "weight function has no certified growth bound");
  return *env;
}

void require_tol(double tol) {
  if (!(tol > 0.0)) throw std::invalid_argument("tolerance must be positive");
}

void require_above(const LinearEnvelope& env, double lambda) {
  if (!(lambda > env.slope)) {
    throw Error(Errc::non_convergent, "lambda=" + format_real(lambda) +
                                          " is not above the finiteness threshold " +
                                          format_real(env.slope));
  }
}

}  // namespace

namespace {

// rho_hat summed until the remainder bound drops below tol or, with a pivot,
// until the partial sums place it more than tol away from the pivot.
SeriesValue sum_rho_hat(const WeightFunction& w, const LinearEnvelope& env, double lambda, double tol,
                        std::optional<double> pivot) {
  double t = 1.0;
  SeriesSum sum;
  std::size_t n = 0;
  for (; n < env.start; ++n) {
    const double wn = w(n);
    t *= wn / (lambda + wn);
    sum.add(t, n);
  }
  // t == t_n; the remainder sum_{m>n} t_m is at most t_n * env(n) / (lambda - a),
  // with equality for closed-form tails.
  while (true) {
    const double remainder = t * env.at(n) / (lambda - env.slope);
    if (env.exact) return {sum.value() + remainder, sum.rounding(remainder, n)};
    const double lower = sum.value();
    const bool settled = pivot && (lower - *pivot > tol || lower + remainder - *pivot < -tol);
    if (remainder <= tol || settled) {
      const double value = lower + 0.5 * remainder;
      return {value, 0.5 * remainder + sum.rounding(0.5 * remainder, n)};
    }
    if (n >= kMaxTerms) throw Error(Errc::non_convergent, "rho_hat tail bound did not reach tolerance");
    const double wn = w(n);
    t *= wn / (lambda + wn);
    sum.add(t, n);
    ++n;
  }
}

}  // namespace

SeriesValue eval_rho_hat(const WeightFunction& w, double lambda, double tol) {
  require_tol(tol);
  const LinearEnvelope env = require_envelope(w);
  require_above(env, lambda);
  return sum_rho_hat(w, env, lambda, tol, std::nullopt);
}

SeriesValue eval_kappa(const WeightFunction& w, double lambda, double tol) {
  require_tol(tol);
  const LinearEnvelope env = require_envelope(w);
  require_above(env, lambda);

  // kappa = sum_{n>=1} t_n H_n with H_n = sum_{i<n} 1/(lambda + omega(i)).
  double t = 1.0;
  SeriesSum harmonic;
  SeriesSum sum;
  std::size_t n = 0;
  for (; n < env.start; ++n) {
    const double wn = w(n);
    harmonic.add(1.0 / (lambda + wn), n);
    t *= wn / (lambda + wn);
    sum.add(t * harmonic.value(), n);
  }
  const double gap = lambda - env.slope;
  if (env.exact) {
    // Differentiate the closed-form remainder t_N c / (lambda - a).
    const double c = env.at(n);
    const double remainder = t * c * harmonic.value() / gap + t * c / (gap * gap);
    return {sum.value() + remainder, sum.rounding(remainder, n)};
  }
  const double gap2 = lambda - 2.0 * env.slope;
  if (!(gap2 > 0.0)) {
    throw Error(Errc::non_convergent,
                "kappa tail cannot be certified for a dominated tail unless lambda > 2a");
  }
  while (true) {
    // With 1/(lambda+omega) <= 1/lambda, the remainder is bounded by
    // t_N [H_N c/(lambda-a) + S/lambda], S = sum_m m t'_m for the envelope.
    const double c = env.at(n);
    const double s = c * (gap + c) / (gap * gap2);
    const double remainder = t * (harmonic.value() * c / gap + s / lambda);
    if (remainder <= tol) {
      const double value = sum.value() + 0.5 * remainder;
      return {value, 0.5 * remainder + sum.rounding(0.5 * remainder, n)};
    }
    if (n >= kMaxTerms) throw Error(Errc::non_convergent, "kappa tail bound did not reach tolerance");
    const double wn = w(n);
    harmonic.add(1.0 / (lambda + wn), n);
    t *= wn / (lambda + wn);
    sum.add(t * harmonic.value(), n);
    ++n;
  }
}

Threshold lambda_underline(const WeightFunction& w) {
  const LinearEnvelope env = require_envelope(w);
  return {env.slope, !env.exact};
}

ConditionM check_condition_m(const WeightFunction& w, double probe_eps) {
  if (!(probe_eps > 0.0)) throw std::invalid_argument("probe_eps must be positive");
  const auto env = w.envelope();
  std::ostringstream diag;

  if (!env) {
    // No envelope: look for terms t_n bounded away from zero, which makes
    // rho_hat infinite for every lambda (a single vertex ends up dominating).
    constexpr std::size_t kProbe = 4096;
    const double lambda = 1.0;
    double late_decrement = 0.0;
    for (std::size_t i = 0; i < kProbe; ++i) {
      const double wi = w(i);
      const double log_factor = std::isinf(wi) ? 0.0 : -std::log1p(lambda / wi);
      if (i >= kProbe / 2) late_decrement -= log_factor;
    }
    if (late_decrement < 1e-3) {
      diag << "terms do not vanish: prod omega(i)/(lambda+omega(i)) stays bounded away from 0, "
              "so rho_hat is infinite for every lambda (dominant-vertex regime)";
      return {false, diag.str()};
    }
    diag << "no certified growth bound; rho_hat cannot be evaluated";
    return {false, diag.str()};
  }

  const double lambda = env->slope + probe_eps;
  const SeriesValue probe = sum_rho_hat(w, *env, lambda, std::min(1e-9, probe_eps), 1.0);
  if (env->exact) {
    // The closed-form remainder t_N c/(lambda - a) blows up as lambda -> a.
    diag << "rho_hat diverges as lambda decreases to " << format_real(env->slope)
         << "; rho_hat(" << format_real(lambda) << ") = " << format_real(probe.value);
    return {true, diag.str()};
  }
  if (probe.value - probe.error_bound > 1.0) {
    diag << "rho_hat(" << format_real(lambda) << ") = " << format_real(probe.value) << " > 1";
    return {true, diag.str()};
  }
  diag << "rho_hat(" << format_real(lambda) << ") = " << format_real(probe.value)
       << " <= 1 at the certified threshold " << format_real(env->slope)
       << " (an upper bound for lambda_under); condition cannot be verified";
  return {false, diag.str()};
}

MalthusResult solve_malthus(const WeightFunction& w, double tol) {
  require_tol(tol);
  const Threshold under = lambda_underline(w);
  const double eval_tol = std::max(0.25 * tol, 1e-15);
  const LinearEnvelope env = require_envelope(w);
  // Only the sign of rho_hat - 1 matters away from the root.
  auto excess = [&](double lambda) {
    const SeriesValue v = sum_rho_hat(w, env, lambda, eval_tol, 1.0);
    return std::pair{v.value - 1.0, v.error_bound};
  };

  const double delta = std::max(tol, 1e-6 * (1.0 + under.value));
  double lo = under.value + delta;
  auto [f_lo, err_lo] = excess(lo);
  if (!(f_lo > 0.0)) {
    throw Error(Errc::bracketing_failed,
                "rho_hat(" + format_real(lo) + ") <= 1: condition (M) fails or cannot be verified");
  }
  double hi = std::max(2.0 * lo, lo + 1.0);
  auto [f_hi, err_hi] = excess(hi);
  for (int doubling = 0; f_hi >= 0.0; ++doubling) {
    if (doubling > 2000) throw Error(Errc::bracketing_failed, "no upper bracket for lambda*");
    lo = hi;
    f_lo = f_hi;
    hi *= 2.0;
    std::tie(f_hi, err_hi) = excess(hi);
  }

  int iterations = 0;
  for (; iterations < 60; ++iterations) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const auto [f_mid, err_mid] = excess(mid);
    if (f_mid > 0.0) {
      lo = mid;
      f_lo = f_mid;
    } else {
      hi = mid;
      f_hi = f_mid;
    }
  }

  double best = std::abs(f_lo) < std::abs(f_hi) ? lo : hi;
  auto [f_best, err_best] = excess(best);
  for (int polish = 0; polish < 3 && f_lo != f_hi; ++polish, ++iterations) {
    const double x = lo - f_lo * (hi - lo) / (f_hi - f_lo);
    if (!(x > lo && x < hi)) break;
    const auto [fx, ex] = excess(x);
    if (std::abs(fx) < std::abs(f_best)) {
      best = x;
      f_best = fx;
      err_best = ex;
    }
    if (fx > 0.0) {
      lo = x;
      f_lo = fx;
    } else {
      hi = x;
      f_hi = fx;
    }
  }

  const double residual = std::abs(f_best) + err_best;
  if (residual > tol) {
    throw Error(Errc::non_convergent,
                "root residual " + format_real(residual) + " exceeds tolerance " + format_real(tol));
  }
  return {best, under.value, under.upper_bound, residual, iterations};
}

DegreeDistribution degree_dist(const WeightFunction& w, std::size_t kmax, double tol) {
  const MalthusResult root = solve_malthus(w, tol);
  const double lambda = root.lambda_star;
  DegreeDistribution out{std::vector<double>(kmax + 1), 0.0, lambda};
  double t = 1.0;
  for (std::size_t k = 0; k <= kmax; ++k) {
    const double wk = w(k);
    out.masses[k] = lambda / (lambda + wk) * t;
    t *= wk / (lambda + wk);
  }
  out.tail_mass = t;
  return out;
}

double log_falling_factorial(double x, std::size_t k) {
  return std::lgamma(x + 1.0) - std::lgamma(x - static_cast<double>(k) + 1.0);
}

double degree_dist_linear(double alpha, double beta, std::size_t k) {
  if (!(alpha > 0.0) || !(beta > 0.0)) throw std::invalid_argument("alpha and beta must be > 0");
  const double b = beta / alpha;
  const double kd = static_cast<double>(k);
  return (1.0 + b) *
         std::exp(log_falling_factorial(kd - 1.0 + b, k) - log_falling_factorial(kd + 1.0 + 2.0 * b, k + 1));
}

SeriesValue xhat_second_moment(const WeightFunction& w, double lambda_star, double tol) {
  require_tol(tol);
  const LinearEnvelope env = require_envelope(w);
  const double lambda = lambda_star;
  require_above(env, lambda);
  const SeriesValue rho2 = eval_rho_hat(w, 2.0 * lambda, 0.25 * tol);
  const double gap = lambda - env.slope;

  // Transformed double series: sum_i t_{i+1} c_i with
  //   t_{i+1} = prod_{l<=i} omega/(lambda+omega),
  //   c_i     = sum_{j<=i} u_j,  u_j = prod_{l<=j} (lambda+omega)/(2 lambda+omega).
  double t = 1.0;
  double u = 1.0;
  SeriesSum c;
  SeriesSum partial;
  for (std::size_t i = 0;; ++i) {
    const double wi = w(i);
    t *= wi / (lambda + wi);
    u *= (lambda + wi) / (2.0 * lambda + wi);
    c.add(u, i);
    partial.add(t * c.value(), 2 * i);
    const std::size_t n = i + 1;
    if (n < env.start) continue;

    // Remaining outer weights sum to T = t_N env(N)/(lambda-a) (exact for closed
    // forms); remaining inner increments sum to at most u_{N-1}(lambda+env(N))/(lambda-a).
    const double outer = t * env.at(n) / gap;
    const double inner = u * (lambda + env.at(n)) / gap;
    const double tail_lo = env.exact ? c.value() * outer : 0.0;
    const double tail_hi = (c.value() + inner) * outer;
    const double half = 0.5 * (tail_hi - tail_lo);
    const double mid = 0.5 * (tail_lo + tail_hi);
    const double value = -rho2.value + 2.0 * (partial.value() + mid);
    const double err = rho2.error_bound + 2.0 * half + 2.0 * partial.rounding(mid, 2 * n) + 4.0 * kEps * std::abs(value);
    if (err <= tol) return {value, err};
    if (n >= kMaxTerms)
      throw Error(Errc::non_convergent, "second-moment tail bound did not reach tolerance");
  }
}

}  // namespace patree
