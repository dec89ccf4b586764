#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace patree {

/// Finite outcome -> probability map; tails and lumped outcomes appear as
/// explicit entries so the masses sum to 1.
using DistributionTable = std::map<std::string, double>;

/// Half the L1 distance over the union of outcomes. Throws Errc::unnormalized
/// if either table sums outside [1 - 1e-6, 1 + 1e-6].
double tv_distance(const DistributionTable& p, const DistributionTable& q);

struct ChiSquare {
  double statistic = 0.0;
  std::size_t dof = 0;
  double p_value = 1.0;
  /// Outcomes pooled into one bin because their expected count was below 5.
  std::vector<std::string> lumped;
};

/// Goodness of fit of observed counts against probabilities `expected`
/// (which must cover every observed outcome).
ChiSquare chi_square_gof(const std::map<std::string, std::uint64_t>& observed, const DistributionTable& expected);

/// Homogeneity of counts that should be equal in expectation.
ChiSquare chi_square_uniform(std::span<const std::uint64_t> counts);

/// Upper tail of the chi-square distribution.
double chi_square_survival(double statistic, std::size_t dof);

struct KolmogorovSmirnov {
  double statistic = 0.0;
  double p_value = 1.0;
};

/// One-sample KS test; the p-value uses the asymptotic Kolmogorov law with
/// Stephens' small-sample correction.
KolmogorovSmirnov ks_test(std::vector<double> samples, const std::function<double(double)>& cdf);

/// P(K > x) for the Kolmogorov distribution.
double kolmogorov_survival(double x);

/// CDF of Gamma(shape, rate).
double gamma_cdf(double x, double shape, double rate);

struct MeanEstimate {
  double mean = 0.0;
  double std_error = 0.0;
};

MeanEstimate mean_estimate(std::span<const double> xs);

}  // namespace patree
