#include "patree/histories.hpp"

#include <algorithm>
#include <string>

namespace patree {

double total_weight(const OrderedTree& g, const WeightFunction& w) {
  double sum = 0.0;
  for (OrderedTree::Vertex v = 0; v < g.size(); ++v) sum += w(g.degree(v));
  return sum;
}

std::vector<History> enumerate_histories(const OrderedTree& g, const WeightFunction& w, std::size_t cap) {
  if (g.size() > cap) {
    throw Error(Errc::too_large,
                "tree of size " + std::to_string(g.size()) + " exceeds enumeration cap " + std::to_string(cap));
  }
  const auto labels = g.labels();
  std::vector<History> out;
  for_each_history(g, [&](std::span<const OrderedTree::Vertex> order) {
    History h;
    h.order.reserve(order.size());
    std::vector<std::uint32_t> deg(g.size(), 0);
    double total = w(0);
    h.total_weights.push_back(total);
    h.order.push_back(labels[order[0]]);
    for (std::size_t i = 1; i < order.size(); ++i) {
      const auto v = order[i];
      const auto p = g.parent(v);
      const double before = w(deg[p]);
      h.attach_weights.push_back(before);
      ++deg[p];
      total += w(deg[p]) - before + w(0);
      h.total_weights.push_back(total);
      h.order.push_back(labels[v]);
    }
    out.push_back(std::move(h));
  });
  return out;
}

boost::multiprecision::cpp_int count_histories(const OrderedTree& g) {
  using boost::multiprecision::cpp_int;
  const std::size_t n = g.size();
  if (n <= 2) return 1;
  cpp_int numerator = 1;
  for (std::size_t i = 2; i <= n - 2; ++i) numerator *= i;
  cpp_int denominator = 1;
  for (OrderedTree::Vertex x = 1; x < n; ++x) {
    const std::uint64_t a = std::max<std::uint64_t>(g.subtree_size(x) - 1, 1);
    std::uint64_t later = 0;
    const auto siblings = g.children(g.parent(x));
    for (std::size_t r = g.sibling_rank(x); r < siblings.size(); ++r) later += g.subtree_size(siblings[r]);
    denominator *= a * std::max<std::uint64_t>(later, 1);
  }
  return numerator / denominator;
}

namespace {

void check_list_size(std::size_t n) {
  if (n > kMaxTreeListSize) {
    throw Error(Errc::too_large,
                "tree lists are limited to size " + std::to_string(kMaxTreeListSize));
  }
}

struct Forest {
  std::vector<std::uint32_t> code;
  std::uint32_t roots;
};

}  // namespace

std::vector<OrderedTree> trees_of_size(std::size_t n) {
  check_list_size(n);
  if (n == 0) return {};
  // A tree of m vertices is a root over a forest of m-1 vertices; a forest is
  // a first tree followed by a (possibly empty) forest.
  std::vector<std::vector<std::vector<std::uint32_t>>> trees(n + 1);
  std::vector<std::vector<Forest>> forests(n);
  forests[0].push_back({{}, 0});
  for (std::size_t m = 1; m <= n; ++m) {
    for (const Forest& f : forests[m - 1]) {
      std::vector<std::uint32_t> code{f.roots};
      code.insert(code.end(), f.code.begin(), f.code.end());
      trees[m].push_back(std::move(code));
    }
    if (m == n) break;
    for (std::size_t k = 1; k <= m; ++k) {
      for (const auto& head : trees[k]) {
        for (const Forest& rest : forests[m - k]) {
          Forest f{head, rest.roots + 1};
          f.code.insert(f.code.end(), rest.code.begin(), rest.code.end());
          forests[m].push_back(std::move(f));
        }
      }
    }
  }
  auto& codes = trees[n];
  std::sort(codes.begin(), codes.end());
  std::vector<OrderedTree> out;
  out.reserve(codes.size());
  for (const auto& c : codes) out.push_back(OrderedTree::from_code(c));
  return out;
}

std::vector<OrderedTree> trees_up_to(std::size_t n) {
  check_list_size(n);
  std::vector<OrderedTree> out;
  for (std::size_t m = 1; m <= n; ++m) {
    auto trees = trees_of_size(m);
    out.insert(out.end(), std::make_move_iterator(trees.begin()), std::make_move_iterator(trees.end()));
  }
  return out;
}

}  // namespace patree
