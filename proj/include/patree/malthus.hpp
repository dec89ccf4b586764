#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "patree/weight_function.hpp"

namespace patree {

/// A series evaluated together with a certified bound on |value - true sum|.
struct SeriesValue {
  double value;
  double error_bound;
};

/// Laplace transform of the birth-point density of a single vertex,
///   rho_hat(lambda) = sum_{n>=1} prod_{i<n} omega(i) / (lambda + omega(i)),
/// the expected number of children discounted at rate lambda.
///
/// Closed-form tails contribute their exact remainder t_N * omega(N)/(lambda-a);
/// dominated tails are summed until the remainder bound drops below `tol`.
SeriesValue eval_rho_hat(const WeightFunction& w, double lambda, double tol);

/// -d/dlambda rho_hat, i.e. E int t e^{-lambda t} d xi(t).
SeriesValue eval_kappa(const WeightFunction& w, double lambda, double tol);

struct Threshold {
  double value;
  /// Set for dominated tails, where the true threshold may be smaller.
  bool upper_bound;
};

/// Infimum of the lambdas where rho_hat is finite.
Threshold lambda_underline(const WeightFunction& w);

struct ConditionM {
  bool holds;
  std::string diagnostic;
};

/// Whether rho_hat exceeds 1 just above its finiteness threshold.
ConditionM check_condition_m(const WeightFunction& w, double probe_eps);

struct MalthusResult {
  double lambda_star;
  double lambda_under;
  bool lambda_under_is_upper_bound;
  /// Certified bound on |rho_hat(lambda_star) - 1|.
  double rho_hat_residual;
  int iterations;
};

/// Unique root of rho_hat(lambda) = 1 on (lambda_under, inf).
MalthusResult solve_malthus(const WeightFunction& w, double tol);

struct DegreeDistribution {
  std::vector<double> masses;
  /// Exact limiting mass of degrees above masses.size()-1.
  double tail_mass;
  double lambda_star;
};

/// Limiting fraction of vertices with k children:
///   p(k) = lambda*/(lambda*+omega(k)) prod_{i<k} omega(i)/(lambda*+omega(i)).
DegreeDistribution degree_dist(const WeightFunction& w, std::size_t kmax, double tol);

/// Same law as degree_dist for omega(k) = alpha*k + beta, in closed form.
double degree_dist_linear(double alpha, double beta, std::size_t k);

/// log of the falling factorial x (x-1) ... (x-k+1), for x-k+1 > 0.
double log_falling_factorial(double x, std::size_t k);

/// E[(sum_k exp(-lambda*sigma_k))^2] where sigma_k are the birth times of a
/// vertex's children:
///   -rho_hat(2 lambda) + 2 sum_{i>=0} prod_{l<=i} omega(l)/(lambda+omega(l))
///                          * sum_{j<=i} prod_{l<=j} (lambda+omega(l))/(2 lambda+omega(l)).
SeriesValue xhat_second_moment(const WeightFunction& w, double lambda_star, double tol);

}  // namespace patree
