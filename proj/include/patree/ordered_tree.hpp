#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace patree {

/// Position of a vertex in the infinite ordered tree: the root is the empty
/// path, and (x1, ..., xk, n) is the n-th child of (x1, ..., xk).
class VertexLabel {
 public:
  VertexLabel() = default;
  explicit VertexLabel(std::vector<std::uint32_t> path);
  VertexLabel(std::initializer_list<std::uint32_t> path);

  /// "-" for the root, otherwise dot-separated child indices ("1.2.3").
  static VertexLabel parse(std::string_view text);
  std::string to_string() const;

  std::size_t generation() const { return path_.size(); }
  bool is_root() const { return path_.empty(); }
  std::span<const std::uint32_t> path() const { return path_; }

  VertexLabel child(std::uint32_t index) const;
  /// Labels are compared lexicographically, which is tree preorder.
  auto operator<=>(const VertexLabel&) const = default;

 private:
  std::vector<std::uint32_t> path_;
};

/// Drops the last n coordinates. Throws Errc::too_shallow if n > |x|.
VertexLabel ancestor(const VertexLabel& x, std::size_t n);

/// The last n coordinates of x, i.e. x seen from its n-th ancestor.
VertexLabel relative_label(const VertexLabel& x, std::size_t n);

/// Finite rooted ordered tree. Vertices are numbered in preorder, so the root
/// is 0 and the progeny of v occupies [v, v + subtree_size(v)). The canonical
/// code is the preorder sequence of child counts.
class OrderedTree {
 public:
  using Vertex = std::uint32_t;
  static constexpr Vertex npos = static_cast<Vertex>(-1);

  OrderedTree();  // the singleton {root}

  /// Checks root, parent and left-sibling closure of a label set.
  static OrderedTree from_labels(const std::set<VertexLabel>& labels);
  /// Throws Errc::parse_error unless `code` is a complete preorder code.
  static OrderedTree from_code(std::span<const std::uint32_t> code);
  /// "2,0,0"-style text.
  static OrderedTree parse_code(std::string_view text);
  /// Parent array in birth order (entry 0 is the root, parents precede
  /// children); siblings are ordered by birth.
  static OrderedTree from_parents(std::span<const std::int64_t> parents);

  std::size_t size() const { return code_.size(); }
  std::span<const std::uint32_t> code() const { return code_; }
  std::string code_string() const;

  Vertex parent(Vertex v) const { return parent_[v]; }
  std::span<const Vertex> children(Vertex v) const;
  std::uint32_t degree(Vertex v) const { return code_[v]; }
  std::uint32_t depth(Vertex v) const { return depth_[v]; }
  std::uint32_t subtree_size(Vertex v) const { return subtree_size_[v]; }
  /// 1-based position among siblings; 0 for the root.
  std::uint32_t sibling_rank(Vertex v) const { return rank_[v]; }

  VertexLabel label(Vertex v) const;
  std::optional<Vertex> find(const VertexLabel& x) const;
  std::vector<VertexLabel> labels() const;

  /// Progeny of v re-rooted at the root.
  OrderedTree subtree(Vertex v) const;

  bool operator==(const OrderedTree& other) const { return code_ == other.code_; }
  /// Size first, then code: the order trees_up_to produces.
  std::strong_ordering operator<=>(const OrderedTree& other) const;

 private:
  explicit OrderedTree(std::vector<std::uint32_t> code);

  std::vector<std::uint32_t> code_;
  std::vector<Vertex> parent_;
  std::vector<std::uint32_t> first_child_;  // offsets into child_list_
  std::vector<Vertex> child_list_;
  std::vector<std::uint32_t> depth_;
  std::vector<std::uint32_t> subtree_size_;
  std::vector<std::uint32_t> rank_;
};

/// Validates a label set; Errc::missing_root / missing_parent / missing_left_sibling.
OrderedTree validate(const std::set<VertexLabel>& labels);

/// Throws Errc::vertex_absent if x is not in g.
OrderedTree subtree_at(const OrderedTree& g, const VertexLabel& x);
std::uint32_t degree_of(const OrderedTree& g, const VertexLabel& x);
/// Generation n in lexicographic order; empty if the tree is shallower.
std::vector<VertexLabel> generation(const OrderedTree& g, std::size_t n);

/// Serializes a preorder code as comma-separated counts.
std::string code_to_string(std::span<const std::uint32_t> code);

struct OrderedTreeHash {
  std::size_t operator()(const OrderedTree& g) const noexcept;
};

}  // namespace patree
