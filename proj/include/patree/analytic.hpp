#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "patree/histories.hpp"
#include "patree/ordered_tree.hpp"
#include "patree/weight_function.hpp"

namespace patree {

/// Truncated limiting subtree law: pi(G) for every tree of size <= max_size.
struct TreeDistribution {
  /// Keyed by canonical code string, e.g. "1,0".
  std::map<std::string, double> masses;
  std::size_t max_size = 0;
  double covered_mass = 0.0;
  double lambda_star = 0.0;
};

/// Limiting fraction of vertices whose progeny is G:
///   pi(G) = lambda*/(lambda*+W(G)) * sum_{s in ord(G)} prod_i w(G,s,i+1)/(lambda*+W(G,s,i)).
/// The numerator prod_i w(G,s,i+1) does not depend on s and is factored out;
/// the history sum of denominators is accumulated over prefix trees.
double pi_mass(const OrderedTree& g, const WeightFunction& w, double lambda_star,
               std::size_t cap = kDefaultEnumerationCap);

/// pi over all trees of size <= max_size (max_size <= 10 by default).
TreeDistribution pi_table(const WeightFunction& w, double lambda_star, std::size_t max_size,
                          std::size_t cap = kDefaultEnumerationCap);

/// pi for omega(k) = k + beta in closed form.
double pi_linear(const OrderedTree& g, double beta);

/// pi(G) * |generation k of G|: limiting fraction of vertices whose k-th
/// ancestor has progeny G.
double ancestor_subtree_mass(const OrderedTree& g, std::size_t k, const WeightFunction& w,
                             double lambda_star, std::size_t cap = kDefaultEnumerationCap);

/// Limit mass of (progeny of the k-th ancestor, position of the vertex in it)
/// = (G, u). Equal to pi(G) for every admissible mark; Errc::invalid_mark if u
/// is not a vertex of G in generation k.
double marked_pi(const OrderedTree& g, const VertexLabel& u, std::size_t k, const WeightFunction& w,
                 double lambda_star, std::size_t cap = kDefaultEnumerationCap);

/// Pushes the level-k marked masses of trees with at most max_size vertices
/// down to level l <= k: each (G, u) contributes pi(G) to (H, v), where H is
/// the progeny of u's l-th ancestor inside G and v the last l steps of u.
/// Keys are "code|mark".
std::map<std::string, double> project_marked(const WeightFunction& w, double lambda_star, std::size_t k,
                                             std::size_t l, std::size_t max_size,
                                             std::size_t cap = kDefaultEnumerationCap);

using Rational = boost::multiprecision::cpp_rational;

/// Exact check of the steadiness identity
///   sum_H mu(H) #{x in gen_1(H): H_x = G} = mu(G)
/// for the empirical subtree law mu of a finite tree G0. Every vertex other
/// than the root of G0 is counted once from its parent, so the identity is
/// checked for every G in the support except G0 itself, where the left side
/// misses exactly the root's share 1/|G0|.
struct SteadinessReport {
  struct Row {
    std::string code;
    Rational mu;
    Rational lhs;
  };
  std::vector<Row> rows;
  /// The identity holds for every G in the support other than G0.
  bool steady = false;
  /// The identity also holds at G = G0 (never for a finite tree).
  bool holds_at_root = false;
  /// mu(G0) - lhs(G0).
  Rational root_deficit;
};

SteadinessReport steadiness_exact(const OrderedTree& g0);

struct SteadinessResidual {
  double lhs_partial;
  double target;
};

/// Truncation of sum_H pi(H) #{x in gen_1(H): H_x = G} over |H| <= |G| + extra,
/// against target pi(G).
SteadinessResidual steadiness_residual(const WeightFunction& w, double lambda_star, const OrderedTree& g,
                                       std::size_t extra, std::size_t cap = kDefaultEnumerationCap);

/// "canonical_code,mass" CSV with covered_mass and lambda_star in a header comment.
std::string tree_distribution_csv(const TreeDistribution& dist, bool timestamp);

}  // namespace patree
