#include "patree/statistics.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "patree/error.hpp"
#include "patree/io.hpp"

namespace patree {

namespace {

void check_normalized(const DistributionTable& t, const char* name) {
  double sum = 0.0;
  for (const auto& [k, v] : t) sum += v;
  if (std::abs(sum - 1.0) > 1e-6)
    throw Error(Errc::unnormalized, std::string(name) + " sums to " + format_real(sum));
}

}  // namespace

double tv_distance(const DistributionTable& p, const DistributionTable& q) {
  check_normalized(p, "p");
  check_normalized(q, "q");
  std::set<std::string> outcomes;
  for (const auto& [k, v] : p) outcomes.insert(k);
  for (const auto& [k, v] : q) outcomes.insert(k);
  double sum = 0.0;
  for (const auto& k : outcomes) {
    const auto pi = p.find(k);
    const auto qi = q.find(k);
    sum += std::abs((pi == p.end() ? 0.0 : pi->second) - (qi == q.end() ? 0.0 : qi->second));
  }
  return std::min(1.0, 0.5 * sum);
}

double chi_square_survival(double statistic, std::size_t dof) {
  if (dof == 0) return 1.0;
  if (!(statistic > 0.0)) return 1.0;
  return boost::math::cdf(boost::math::complement(boost::math::chi_squared(static_cast<double>(dof)), statistic));
}

ChiSquare chi_square_gof(const std::map<std::string, std::uint64_t>& observed, const DistributionTable& expected) {
  double total = 0.0;
  for (const auto& [k, c] : observed) total += static_cast<double>(c);
  ChiSquare out;
  double pooled_obs = 0.0;
  double pooled_exp = 0.0;
  std::size_t bins = 0;
  for (const auto& [k, prob] : expected) {
    const auto it = observed.find(k);
    const double o = it == observed.end() ? 0.0 : static_cast<double>(it->second);
    const double e = prob * total;
    if (e < 5.0) {
      pooled_obs += o;
      pooled_exp += e;
      out.lumped.push_back(k);
      continue;
    }
    out.statistic += (o - e) * (o - e) / e;
    ++bins;
  }
  if (pooled_exp > 0.0) {
    out.statistic += (pooled_obs - pooled_exp) * (pooled_obs - pooled_exp) / pooled_exp;
    ++bins;
  }
  out.dof = bins > 0 ? bins - 1 : 0;
  out.p_value = chi_square_survival(out.statistic, out.dof);
  return out;
}

ChiSquare chi_square_uniform(std::span<const std::uint64_t> counts) {
  ChiSquare out;
  if (counts.size() < 2) return out;
  double total = 0.0;
  for (auto c : counts) total += static_cast<double>(c);
  const double e = total / static_cast<double>(counts.size());
  if (e > 0.0) {
    for (auto c : counts) out.statistic += (static_cast<double>(c) - e) * (static_cast<double>(c) - e) / e;
  }
  out.dof = counts.size() - 1;
  out.p_value = chi_square_survival(out.statistic, out.dof);
  return out;
}

double kolmogorov_survival(double x) {
  if (x <= 0.0) return 1.0;
  if (x < 0.2) {
    // Small-x form: P(K <= x) = sqrt(2 pi)/x sum_k exp(-(2k-1)^2 pi^2 / (8 x^2)).
    const double pi = 3.14159265358979323846;
    double cdf = 0.0;
    for (int k = 1; k <= 20; ++k) {
      const double m = 2.0 * k - 1.0;
      cdf += std::exp(-m * m * pi * pi / (8.0 * x * x));
    }
    return 1.0 - std::sqrt(2.0 * pi) / x * cdf;
  }
  double sum = 0.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = std::exp(-2.0 * k * k * x * x);
    sum += (k % 2 == 1 ? 2.0 : -2.0) * term;
    if (term < 1e-18) break;
  }
  return std::clamp(sum, 0.0, 1.0);
}

KolmogorovSmirnov ks_test(std::vector<double> samples, const std::function<double(double)>& cdf) {
  KolmogorovSmirnov out;
  if (samples.empty()) return out;
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double f = cdf(samples[i]);
    out.statistic = std::max({out.statistic, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
  }
  const double root = std::sqrt(n);
  out.p_value = kolmogorov_survival((root + 0.12 + 0.11 / root) * out.statistic);
  return out;
}

double gamma_cdf(double x, double shape, double rate) {
  if (x <= 0.0) return 0.0;
  return boost::math::gamma_p(shape, rate * x);
}

MeanEstimate mean_estimate(std::span<const double> xs) {
  MeanEstimate out;
  if (xs.empty()) return out;
  double sum = 0.0;
  for (double x : xs) sum += x;
  out.mean = sum / static_cast<double>(xs.size());
  if (xs.size() < 2) return out;
  double ss = 0.0;
  for (double x : xs) ss += (x - out.mean) * (x - out.mean);
  out.std_error = std::sqrt(ss / static_cast<double>(xs.size() - 1) / static_cast<double>(xs.size()));
  return out;
}

}  // namespace patree
