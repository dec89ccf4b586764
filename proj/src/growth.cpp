#include "patree/growth.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>

#include "patree/malthus.hpp"

namespace patree {

void FenwickSampler::push_back(double w) {
  weights_.push_back(w);
  if (tree_.empty()) tree_.push_back(0.0);
  // Node i covers (i - lowbit(i), i]; its value is w plus the nodes that tile
  // the rest of that range.
  const std::size_t i = weights_.size();
  const std::size_t low = i & (~i + 1);
  double node = w;
  for (std::size_t j = i - 1; j > i - low; j -= j & (~j + 1)) node += tree_[j];
  tree_.push_back(node);
}

void FenwickSampler::set(std::size_t i, double w) {
  const double delta = w - weights_[i];
  weights_[i] = w;
  for (std::size_t j = i + 1; j < tree_.size(); j += j & (~j + 1)) tree_[j] += delta;
}

double FenwickSampler::prefix(std::size_t count) const {
  double sum = 0.0;
  for (std::size_t j = count; j > 0; j -= j & (~j + 1)) sum += tree_[j];
  return sum;
}

std::size_t FenwickSampler::find(double target) const {
  const std::size_t n = weights_.size();
  std::size_t pos = 0;
  for (std::size_t step = std::bit_floor(n); step > 0; step >>= 1) {
    const std::size_t next = pos + step;
    if (next <= n && tree_[next] <= target) {
      pos = next;
      target -= tree_[next];
    }
  }
  return pos < n ? pos : n - 1;
}

void FenwickSampler::rebuild() {
  const std::size_t n = weights_.size();
  tree_.assign(n + 1, 0.0);
  for (std::size_t i = 1; i <= n; ++i) {
    tree_[i] += weights_[i - 1];
    const std::size_t parent = i + (i & (~i + 1));
    if (parent <= n) tree_[parent] += tree_[i];
  }
}

double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

double standard_exponential(std::mt19937_64& rng) { return -std::log1p(-uniform01(rng)); }

GrowthState::GrowthState(WeightFunction w, std::uint64_t seed)
    : w_(std::move(w)),
      seed_(seed),
      rng_(derive_seed(seed, 0)),
      clock_rng_(derive_seed(seed, 1)),
      parent_{-1},
      child_count_{0},
      total_weight_(0.0) {
  total_weight_ = omega(0);
  index_.push_back(total_weight_);
}

double GrowthState::omega(std::uint32_t k) {
  while (omega_cache_.size() <= k) omega_cache_.push_back(w_(omega_cache_.size()));
  return omega_cache_[k];
}

std::uint32_t GrowthState::attach_step() {
  const std::size_t parent = index_.find(uniform01(rng_) * total_weight_);
  const std::uint32_t d = child_count_[parent]++;
  const double before = omega(d);
  const double after = omega(d + 1);
  const double leaf = omega(0);
  index_.set(parent, after);
  total_weight_ += (after - before) + leaf;

  const auto born = static_cast<std::uint32_t>(parent_.size());
  parent_.push_back(static_cast<std::int64_t>(parent));
  child_count_.push_back(0);
  index_.push_back(leaf);
  if (++steps_since_rebuild_ >= kRebuildInterval) refresh();
  return born;
}

std::uint32_t GrowthState::attach_step_timed() {
  if (birth_times_.empty()) {
    if (parent_.size() != 1) throw std::logic_error("continuous growth must start from the root");
    birth_times_.push_back(0.0);
  }
  const double holding = standard_exponential(clock_rng_) / total_weight_;
  const double now = birth_times_.back() + holding;
  const std::uint32_t born = attach_step();
  birth_times_.push_back(now);
  return born;
}

void GrowthState::grow_discrete(std::size_t n_steps) {
  if (timed()) throw std::logic_error("state is being grown in continuous time");
  parent_.reserve(parent_.size() + n_steps);
  child_count_.reserve(child_count_.size() + n_steps);
  for (std::size_t i = 0; i < n_steps; ++i) attach_step();
}

void GrowthState::grow_continuous(std::size_t n_steps) {
  parent_.reserve(parent_.size() + n_steps);
  child_count_.reserve(child_count_.size() + n_steps);
  birth_times_.reserve(parent_.size() + n_steps);
  for (std::size_t i = 0; i < n_steps; ++i) attach_step_timed();
}

double GrowthState::recomputed_total_weight() const {
  double sum = 0.0;
  for (std::uint32_t d : child_count_) sum += w_(d);
  return sum;
}

void GrowthState::refresh() {
  index_.rebuild();
  total_weight_ = recomputed_total_weight();
  steps_since_rebuild_ = 0;
}

double theta_sample(const WeightFunction& w, double lambda_star, double kappa, std::size_t n_vertices,
                    std::uint64_t seed) {
  if (n_vertices == 0) throw std::invalid_argument("theta needs at least one vertex");
  GrowthState state(w, seed);
  state.grow_continuous(n_vertices - 1);
  const double t = state.timed() ? state.birth_times().back() : 0.0;
  return kappa * lambda_star * std::exp(-lambda_star * t) * static_cast<double>(n_vertices);
}

double theta_sample(const WeightFunction& w, double lambda_star, std::size_t n_vertices, std::uint64_t seed) {
  const SeriesValue kappa = eval_kappa(w, lambda_star, 1e-12);
  return theta_sample(w, lambda_star, kappa.value, n_vertices, seed);
}

}  // namespace patree
