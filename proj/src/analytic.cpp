#include "patree/analytic.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "patree/error.hpp"
#include "patree/io.hpp"
#include "patree/malthus.hpp"

namespace patree {

namespace {

constexpr std::size_t kMaxDynamicProgramSize = 20;

void check_cap(const OrderedTree& g, std::size_t cap) {
  if (g.size() > cap || g.size() > kMaxDynamicProgramSize) {
    throw Error(Errc::too_large, "tree of size " + std::to_string(g.size()) + " exceeds enumeration cap " +
                                     std::to_string(std::min(cap, kMaxDynamicProgramSize)));
  }
}

// Sum over admissible birth orders of prod_{i<|G|-1} 1/(lambda + W(G,s,i)).
//
// Adding a vertex of sibling rank r raises the total weight by
// omega(0) + omega(r) - omega(r-1) whatever the order, so W of a prefix only
// depends on which vertices it contains. A vertex is addable once its left
// sibling (or, for a first child, its parent) is present. That lets the
// history sum be memoized over prefix sets.
double history_denominator_sum(const OrderedTree& g, const WeightFunction& w, double lambda) {
  const std::size_t n = g.size();
  if (n == 1) return 1.0;
  std::vector<double> delta(n, 0.0);
  std::vector<std::uint32_t> pred(n, 0);
  for (OrderedTree::Vertex v = 1; v < n; ++v) {
    const std::uint32_t r = g.sibling_rank(v);
    delta[v] = w(0) + w(r) - w(r - 1);
    const auto p = g.parent(v);
    pred[v] = r == 1 ? p : g.children(p)[r - 2];
  }
  const std::uint32_t full = (n == 32) ? ~0u : ((1u << n) - 1);
  std::vector<double> memo(std::size_t{1} << n, std::numeric_limits<double>::quiet_NaN());

  auto solve = [&](auto& self, std::uint32_t set, double weight) -> double {
    if (set == full) return 1.0;
    double& slot = memo[set];
    if (!std::isnan(slot)) return slot;
    double sum = 0.0;
    for (OrderedTree::Vertex v = 1; v < n; ++v) {
      const std::uint32_t bit = 1u << v;
      if ((set & bit) == 0 && (set >> pred[v]) & 1u) sum += self(self, set | bit, weight + delta[v]);
    }
    slot = sum / (lambda + weight);
    return slot;
  };
  return solve(solve, 1u, w(0));
}

}  // namespace

double pi_mass(const OrderedTree& g, const WeightFunction& w, double lambda_star, std::size_t cap) {
  check_cap(g, cap);
  double numerator = 1.0;
  for (OrderedTree::Vertex v = 0; v < g.size(); ++v) {
    for (std::uint32_t j = 0; j < g.degree(v); ++j) numerator *= w(j);
  }
  const double total = total_weight(g, w);
  return lambda_star / (lambda_star + total) * numerator * history_denominator_sum(g, w, lambda_star);
}

TreeDistribution pi_table(const WeightFunction& w, double lambda_star, std::size_t max_size, std::size_t cap) {
  if (max_size > cap) {
    throw Error(Errc::too_large,
                "max_size " + std::to_string(max_size) + " exceeds enumeration cap " + std::to_string(cap));
  }
  TreeDistribution out;
  out.max_size = max_size;
  out.lambda_star = lambda_star;
  for (const OrderedTree& g : trees_up_to(max_size)) {
    const double m = pi_mass(g, w, lambda_star, cap);
    out.masses.emplace(g.code_string(), m);
    out.covered_mass += m;
  }
  return out;
}

double pi_linear(const OrderedTree& g, double beta) {
  if (!(beta > 0.0)) throw std::invalid_argument("beta must be > 0");
  const double n = static_cast<double>(g.size() - 1);
  double log_num = 0.0;
  for (OrderedTree::Vertex v = 0; v < g.size(); ++v) {
    const double d = g.degree(v);
    log_num += log_falling_factorial(d - 1.0 + beta, g.degree(v));
  }
  const double q = 1.0 / (1.0 + beta);
  const double log_den = n * std::log1p(beta) + log_falling_factorial(n + 2.0 - q, g.size());
  return count_histories(g).convert_to<double>() * std::exp(log_num - log_den);
}

double ancestor_subtree_mass(const OrderedTree& g, std::size_t k, const WeightFunction& w, double lambda_star,
                             std::size_t cap) {
  const std::size_t width = generation(g, k).size();
  if (width == 0) {
    check_cap(g, cap);
    return 0.0;
  }
  return pi_mass(g, w, lambda_star, cap) * static_cast<double>(width);
}

double marked_pi(const OrderedTree& g, const VertexLabel& u, std::size_t k, const WeightFunction& w,
                 double lambda_star, std::size_t cap) {
  if (u.generation() != k || !g.find(u)) {
    throw Error(Errc::invalid_mark,
                "mark " + u.to_string() + " is not a vertex of generation " + std::to_string(k));
  }
  return pi_mass(g, w, lambda_star, cap);
}

std::map<std::string, double> project_marked(const WeightFunction& w, double lambda_star, std::size_t k,
                                             std::size_t l, std::size_t max_size, std::size_t cap) {
  if (l > k) throw std::invalid_argument("projection level must not exceed k");
  std::map<std::string, double> out;
  for (const OrderedTree& g : trees_up_to(max_size)) {
    double mass = -1.0;
    for (OrderedTree::Vertex v = 0; v < g.size(); ++v) {
      if (g.depth(v) != k) continue;
      if (mass < 0.0) mass = pi_mass(g, w, lambda_star, cap);
      OrderedTree::Vertex top = v;
      for (std::size_t i = 0; i < l; ++i) top = g.parent(top);
      const std::string key = g.subtree(top).code_string() + "|" + relative_label(g.label(v), l).to_string();
      out[key] += mass;
    }
  }
  return out;
}

SteadinessReport steadiness_exact(const OrderedTree& g0) {
  std::map<std::string, std::size_t> counts;
  std::map<std::string, OrderedTree> examples;
  for (OrderedTree::Vertex v = 0; v < g0.size(); ++v) {
    OrderedTree sub = g0.subtree(v);
    std::string code = sub.code_string();
    ++counts[code];
    examples.emplace(std::move(code), std::move(sub));
  }
  const Rational n(static_cast<long long>(g0.size()));

  std::map<std::string, Rational> lhs;
  for (const auto& [code, h] : examples) {
    const Rational mu_h = Rational(static_cast<long long>(counts[code])) / n;
    for (OrderedTree::Vertex x : h.children(0)) lhs[h.subtree(x).code_string()] += mu_h;
  }

  SteadinessReport report;
  report.steady = true;
  const std::string root_code = g0.code_string();
  for (const auto& [code, count] : counts) {
    SteadinessReport::Row row{code, Rational(static_cast<long long>(count)) / n, lhs[code]};
    if (code == root_code) {
      report.holds_at_root = row.lhs == row.mu;
      report.root_deficit = row.mu - row.lhs;
    } else if (row.lhs != row.mu) {
      report.steady = false;
    }
    report.rows.push_back(std::move(row));
  }
  return report;
}

SteadinessResidual steadiness_residual(const WeightFunction& w, double lambda_star, const OrderedTree& g,
                                       std::size_t extra, std::size_t cap) {
  const std::size_t limit = g.size() + extra;
  if (limit > cap) {
    throw Error(Errc::too_large,
                "|G| + extra = " + std::to_string(limit) + " exceeds enumeration cap " + std::to_string(cap));
  }
  SteadinessResidual out{0.0, pi_mass(g, w, lambda_star, cap)};
  for (const OrderedTree& h : trees_up_to(limit)) {
    if (h.size() <= g.size()) continue;
    std::size_t hits = 0;
    for (OrderedTree::Vertex x : h.children(0)) {
      if (h.subtree_size(x) == g.size() && h.subtree(x) == g) ++hits;
    }
    if (hits > 0) out.lhs_partial += pi_mass(h, w, lambda_star, cap) * static_cast<double>(hits);
  }
  return out;
}

std::string tree_distribution_csv(const TreeDistribution& dist, bool timestamp) {
  std::ostringstream out;
  if (timestamp) out << timestamp_line();
  out << "# covered_mass=" << format_real(dist.covered_mass) << " lambda_star=" << format_real(dist.lambda_star)
      << " max_size=" << dist.max_size << "\n";
  out << "canonical_code,mass\n";
  // Codes contain commas; quote them so the file stays two-column CSV.
  for (const OrderedTree& g : trees_up_to(dist.max_size)) {
    const std::string code = g.code_string();
    out << '"' << code << "\"," << format_real(dist.masses.at(code)) << "\n";
  }
  return out.str();
}

}  // namespace patree
