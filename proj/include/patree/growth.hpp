#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "patree/seeding.hpp"
#include "patree/weight_function.hpp"

namespace patree {

/// Binary-indexed prefix sums over a growing array of nonnegative weights,
/// supporting append, point update and inverse-CDF search in O(log n).
class FenwickSampler {
 public:
  std::size_t size() const { return weights_.size(); }
  double weight(std::size_t i) const { return weights_[i]; }

  void push_back(double w);
  void set(std::size_t i, double w);
  /// Prefix sum of the first `count` weights.
  double prefix(std::size_t count) const;
  /// Smallest i with prefix(i+1) > target, clamped to the last index.
  std::size_t find(double target) const;
  /// Recomputes every node from the stored weights, discarding accumulated
  /// rounding in the partial sums.
  void rebuild();

 private:
  std::vector<double> weights_;
  std::vector<double> tree_;  // 1-based
};

/// Uniform double in [0, 1) from the top 53 bits of a 64-bit draw.
double uniform01(std::mt19937_64& rng);
/// Exponential(1) by inversion; the same bits give the same value everywhere.
double standard_exponential(std::mt19937_64& rng);

/// Live state of one growing tree. Vertices are numbered by birth; the root is 0.
class GrowthState {
 public:
  /// The root alone, total weight omega(0), birth time 0.
  GrowthState(WeightFunction w, std::uint64_t seed);

  /// Picks a parent with probability omega(deg)/W, attaches a new vertex and
  /// returns its birth index.
  std::uint32_t attach_step();

  /// Holding time Exponential(W) followed by an attach step.
  std::uint32_t attach_step_timed();

  void grow_discrete(std::size_t n_steps);
  void grow_continuous(std::size_t n_steps);

  std::size_t size() const { return parent_.size(); }
  const WeightFunction& weight() const { return w_; }
  std::uint64_t seed() const { return seed_; }

  /// parent[0] = -1.
  std::span<const std::int64_t> parents() const { return parent_; }
  std::span<const std::uint32_t> child_counts() const { return child_count_; }
  /// Empty unless grown in continuous time.
  std::span<const double> birth_times() const { return birth_times_; }
  bool timed() const { return !birth_times_.empty(); }

  double total_weight() const { return total_weight_; }
  /// Sum of omega(child count) recomputed from scratch.
  double recomputed_total_weight() const;
  const FenwickSampler& index() const { return index_; }

  static constexpr std::size_t kRebuildInterval = std::size_t{1} << 20;

 private:
  double omega(std::uint32_t k);
  void refresh();

  WeightFunction w_;
  std::uint64_t seed_;
  std::mt19937_64 rng_;       // parent choices
  std::mt19937_64 clock_rng_;  // holding times, so both modes share one jump chain
  std::vector<double> omega_cache_;
  std::vector<std::int64_t> parent_;
  std::vector<std::uint32_t> child_count_;
  std::vector<double> birth_times_;
  FenwickSampler index_;
  double total_weight_;
  std::size_t steps_since_rebuild_ = 0;
};

/// One draw of the normalized growth constant
///   kappa * lambda* * exp(-lambda* T) * n_vertices,
/// where T is the birth time of vertex n_vertices-1 in continuous time.
double theta_sample(const WeightFunction& w, double lambda_star, double kappa, std::size_t n_vertices,
                    std::uint64_t seed);

/// As above, computing kappa from the weight function.
double theta_sample(const WeightFunction& w, double lambda_star, std::size_t n_vertices, std::uint64_t seed);

}  // namespace patree
