#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "patree/census.hpp"
#include "patree/statistics.hpp"
#include "patree/weight_function.hpp"

namespace patree {

struct ComparisonRow {
  std::string outcome;
  double theory = 0.0;
  double empirical = 0.0;
  double std_error = 0.0;
};

struct MarkHomogeneity {
  std::string code;
  ChiSquare chi_square;
};

/// Theory against pooled simulation for one family of outcomes.
struct ComparisonReport {
  std::string kind;
  std::vector<ComparisonRow> rows;
  double tv_distance = 0.0;
  ChiSquare chi_square;
  std::string tail_note;
  double lambda_star = 0.0;
  std::uint64_t n_vertices = 0;
  std::size_t runs = 0;

  // Ancestor reports only: unmarked marginal and per-tree mark homogeneity.
  std::vector<ComparisonRow> marginal_rows;
  double marginal_tv_distance = 0.0;
  std::vector<MarkHomogeneity> mark_tests;

  const ComparisonRow* find(std::string_view outcome) const;
};

/// Grows `runs` independent discrete-time trees of n_vertices each (run r uses
/// derive_seed(seed, r)) and censuses them. Runs execute concurrently; the
/// result is ordered by run index.
std::vector<CensusReport> simulate_censuses(const WeightFunction& w, std::size_t n_vertices, std::size_t runs,
                                            std::uint64_t seed, std::size_t subtree_cap,
                                            std::span<const std::size_t> ancestor_ks = {});

/// Degrees 0..kmax plus TAIL against the limiting degree law.
ComparisonReport compare_degree(const WeightFunction& w, std::span<const CensusReport> censuses,
                                std::size_t kmax = 20);
ComparisonReport compare_degree(const WeightFunction& w, std::size_t n_vertices, std::size_t runs,
                                std::uint64_t seed, std::size_t kmax = 20);

/// Subtree codes of size <= max_size plus OTHER against pi.
ComparisonReport compare_subtrees(const WeightFunction& w, std::span<const CensusReport> censuses,
                                  std::size_t max_size);
ComparisonReport compare_subtrees(const WeightFunction& w, std::size_t n_vertices, std::size_t runs,
                                  std::uint64_t seed, std::size_t max_size);

/// (k-th ancestor progeny, mark) pairs of size <= max_size plus OTHER; every
/// vertex is an outcome, so shallow vertices land in OTHER.
ComparisonReport compare_ancestors(const WeightFunction& w, std::span<const CensusReport> censuses, std::size_t k,
                                   std::size_t max_size);
ComparisonReport compare_ancestors(const WeightFunction& w, std::size_t n_vertices, std::size_t runs,
                                   std::uint64_t seed, std::size_t k, std::size_t max_size);

struct ThetaCheck {
  double alpha = 0.0;
  double beta = 0.0;
  double shape = 0.0;  // shape = rate = beta / (alpha + beta)
  KolmogorovSmirnov ks;
  MeanEstimate mean;
  std::vector<double> samples;
};

/// Growth-constant samples for omega(k) = alpha*k + beta against
/// Gamma(shape a, rate a), a = beta/(alpha+beta).
ThetaCheck gamma_theta_check(double alpha, double beta, std::size_t n_vertices, std::size_t samples,
                             std::uint64_t seed);

/// "outcome,theory,empirical,stderr" rows.
std::string comparison_csv(const ComparisonReport& report, bool timestamp);
/// JSON summary with the configuration echo.
std::string comparison_json(const ComparisonReport& report, std::string_view weight_spec, std::uint64_t seed,
                            bool timestamp);
std::string theta_json(const ThetaCheck& check, std::size_t n_vertices, std::uint64_t seed, bool timestamp);

}  // namespace patree
