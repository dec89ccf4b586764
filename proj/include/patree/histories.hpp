#pragma once

#include <cstddef>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "patree/error.hpp"
#include "patree/ordered_tree.hpp"
#include "patree/weight_function.hpp"

namespace patree {

inline constexpr std::size_t kDefaultEnumerationCap = 10;
inline constexpr std::size_t kMaxTreeListSize = 12;

/// One admissible birth order s of a tree: every prefix {s_0..s_i} is itself
/// an ordered tree.
struct History {
  std::vector<VertexLabel> order;
  /// W(G,s,i): total weight of the prefix tree, i = 0..|G|-1.
  std::vector<double> total_weights;
  /// w(G,s,i): weight of s_i's parent just before s_i was born, i = 1..|G|-1
  /// (stored at index i-1).
  std::vector<double> attach_weights;
};

/// W(G) = sum over vertices of omega(degree).
double total_weight(const OrderedTree& g, const WeightFunction& w);

/// Calls visit(std::span<const OrderedTree::Vertex>) once per admissible
/// birth order. A vertex becomes available once its parent and its left
/// sibling are present.
template <class Visit>
void for_each_history(const OrderedTree& g, Visit&& visit) {
  using Vertex = OrderedTree::Vertex;
  const std::size_t n = g.size();
  std::vector<Vertex> order{0};
  order.reserve(n);
  std::vector<Vertex> frontier;
  if (g.degree(0) > 0) frontier.push_back(g.children(0)[0]);

  auto recurse = [&](auto& self) -> void {
    if (order.size() == n) {
      visit(std::span<const Vertex>(order));
      return;
    }
    for (std::size_t i = 0; i < frontier.size(); ++i) {
      const Vertex v = frontier[i];
      frontier[i] = frontier.back();
      frontier.pop_back();
      std::size_t added = 0;
      if (g.degree(v) > 0) {
        frontier.push_back(g.children(v)[0]);
        ++added;
      }
      const Vertex p = g.parent(v);
      if (g.sibling_rank(v) < g.degree(p)) {
        frontier.push_back(g.children(p)[g.sibling_rank(v)]);
        ++added;
      }
      order.push_back(v);
      self(self);
      order.pop_back();
      frontier.resize(frontier.size() - added);
      frontier.push_back(v);
      std::swap(frontier[i], frontier.back());
    }
  };
  recurse(recurse);
}

/// All admissible birth orders with their weight sequences.
/// Throws Errc::too_large when |G| exceeds `cap`.
std::vector<History> enumerate_histories(const OrderedTree& g, const WeightFunction& w,
                                         std::size_t cap = kDefaultEnumerationCap);

/// |ord(G)| = (|G|-2)! / prod_{x != root} a(x) b(x), with
///   a(x) = max(|G_x| - 1, 1),  b(x) = max(sum of |G_y| over later siblings y of x, 1).
boost::multiprecision::cpp_int count_histories(const OrderedTree& g);

/// All ordered trees of exactly n vertices, in code order. n <= 12.
std::vector<OrderedTree> trees_of_size(std::size_t n);

/// All ordered trees with at most n vertices, sorted by (size, code). n <= 12.
std::vector<OrderedTree> trees_up_to(std::size_t n);

}  // namespace patree
