#include "patree/ordered_tree.hpp"

#include <algorithm>

#include "patree/error.hpp"
#include "patree/io.hpp"

namespace patree {

VertexLabel::VertexLabel(std::vector<std::uint32_t> path) : path_(std::move(path)) {
  for (std::uint32_t x : path_) {
    if (x == 0) throw Error(Errc::parse_error, "label coordinates start at 1");
  }
}

VertexLabel::VertexLabel(std::initializer_list<std::uint32_t> path)
    : VertexLabel(std::vector<std::uint32_t>(path)) {}

VertexLabel VertexLabel::parse(std::string_view text) {
  if (text == "-" || text.empty()) return {};
  std::vector<std::uint32_t> path;
  std::size_t pos = 0;
  while (true) {
    const std::size_t dot = text.find('.', pos);
    const std::uint64_t v = parse_u64(text.substr(pos, dot - pos));
    if (v == 0 || v > UINT32_MAX) throw Error(Errc::parse_error, "bad label coordinate");
    path.push_back(static_cast<std::uint32_t>(v));
    if (dot == std::string_view::npos) break;
    pos = dot + 1;
  }
  return VertexLabel(std::move(path));
}

std::string VertexLabel::to_string() const {
  if (path_.empty()) return "-";
  std::string out;
  for (std::size_t i = 0; i < path_.size(); ++i) {
    if (i > 0) out += '.';
    out += std::to_string(path_[i]);
  }
  return out;
}

VertexLabel VertexLabel::child(std::uint32_t index) const {
  std::vector<std::uint32_t> path = path_;
  path.push_back(index);
  return VertexLabel(std::move(path));
}

VertexLabel ancestor(const VertexLabel& x, std::size_t n) {
  if (n > x.generation()) {
    throw Error(Errc::too_shallow, "label " + x.to_string() + " has no ancestor " + std::to_string(n) +
                                       " generations up");
  }
  const auto p = x.path();
  return VertexLabel(std::vector<std::uint32_t>(p.begin(), p.end() - static_cast<std::ptrdiff_t>(n)));
}

VertexLabel relative_label(const VertexLabel& x, std::size_t n) {
  if (n > x.generation()) throw Error(Errc::too_shallow, "label shorter than requested suffix");
  const auto p = x.path();
  return VertexLabel(std::vector<std::uint32_t>(p.end() - static_cast<std::ptrdiff_t>(n), p.end()));
}

OrderedTree::OrderedTree() : OrderedTree(std::vector<std::uint32_t>{0}) {}

OrderedTree::OrderedTree(std::vector<std::uint32_t> code) : code_(std::move(code)) {
  const std::size_t n = code_.size();
  parent_.assign(n, npos);
  depth_.assign(n, 0);
  subtree_size_.assign(n, 1);
  rank_.assign(n, 0);
  first_child_.assign(n + 1, 0);
  child_list_.reserve(n > 0 ? n - 1 : 0);

  // Preorder: each vertex's parent is the nearest open vertex on the stack.
  std::vector<std::pair<Vertex, std::uint32_t>> open;  // (vertex, children still to come)
  std::vector<std::vector<Vertex>> kids(n);
  for (Vertex v = 0; v < n; ++v) {
    if (v > 0) {
      auto& top = open.back();
      parent_[v] = top.first;
      depth_[v] = depth_[top.first] + 1;
      kids[top.first].push_back(v);
      rank_[v] = static_cast<std::uint32_t>(kids[top.first].size());
      if (--top.second == 0) open.pop_back();
    }
    if (code_[v] > 0) open.emplace_back(v, code_[v]);
  }
  for (Vertex v = 0; v < n; ++v) {
    first_child_[v] = static_cast<std::uint32_t>(child_list_.size());
    child_list_.insert(child_list_.end(), kids[v].begin(), kids[v].end());
  }
  first_child_[n] = static_cast<std::uint32_t>(child_list_.size());
  for (Vertex v = static_cast<Vertex>(n); v-- > 1;) subtree_size_[parent_[v]] += subtree_size_[v];
}

OrderedTree OrderedTree::from_labels(const std::set<VertexLabel>& labels) {
  if (!labels.contains(VertexLabel{})) throw Error(Errc::missing_root, "label set lacks the root");
  for (const VertexLabel& x : labels) {
    if (x.is_root()) continue;
    if (!labels.contains(ancestor(x, 1)))
      throw Error(Errc::missing_parent, "parent of " + x.to_string() + " is missing");
    const std::uint32_t last = x.path().back();
    if (last > 1) {
      std::vector<std::uint32_t> sib(x.path().begin(), x.path().end());
      sib.back() = last - 1;
      if (!labels.contains(VertexLabel(std::move(sib))))
        throw Error(Errc::missing_left_sibling, "left sibling of " + x.to_string() + " is missing");
    }
  }
  // Lexicographic label order is preorder; a vertex's degree is the number of
  // labels one generation deeper that extend it.
  std::vector<std::uint32_t> code;
  code.reserve(labels.size());
  for (const VertexLabel& x : labels) {
    std::uint32_t deg = 0;
    while (labels.contains(x.child(deg + 1))) ++deg;
    code.push_back(deg);
  }
  return OrderedTree(std::move(code));
}

OrderedTree OrderedTree::from_code(std::span<const std::uint32_t> code) {
  std::uint64_t pending = 1;
  for (std::size_t i = 0; i < code.size(); ++i) {
    if (pending == 0) throw Error(Errc::parse_error, "code continues past a complete tree");
    pending = pending - 1 + code[i];
  }
  if (code.empty() || pending != 0) throw Error(Errc::parse_error, "incomplete tree code");
  return OrderedTree(std::vector<std::uint32_t>(code.begin(), code.end()));
}

OrderedTree OrderedTree::parse_code(std::string_view text) {
  std::vector<std::uint32_t> code;
  std::size_t pos = 0;
  while (true) {
    const std::size_t comma = text.find(',', pos);
    const std::uint64_t v = parse_u64(text.substr(pos, comma - pos));
    if (v > UINT32_MAX) throw Error(Errc::parse_error, "child count too large");
    code.push_back(static_cast<std::uint32_t>(v));
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return from_code(code);
}

OrderedTree OrderedTree::from_parents(std::span<const std::int64_t> parents) {
  const std::size_t n = parents.size();
  if (n == 0 || parents[0] >= 0) throw Error(Errc::missing_root, "parent array must start at the root");
  std::vector<std::vector<std::uint32_t>> kids(n);
  for (std::size_t v = 1; v < n; ++v) {
    const std::int64_t p = parents[v];
    if (p < 0 || static_cast<std::size_t>(p) >= v)
      throw Error(Errc::missing_parent, "vertex " + std::to_string(v) + " has no earlier parent");
    kids[static_cast<std::size_t>(p)].push_back(static_cast<std::uint32_t>(v));
  }
  std::vector<std::uint32_t> code;
  code.reserve(n);
  std::vector<std::uint32_t> stack{0};
  while (!stack.empty()) {
    const std::uint32_t v = stack.back();
    stack.pop_back();
    code.push_back(static_cast<std::uint32_t>(kids[v].size()));
    for (auto it = kids[v].rbegin(); it != kids[v].rend(); ++it) stack.push_back(*it);
  }
  return OrderedTree(std::move(code));
}

std::string OrderedTree::code_string() const { return code_to_string(code_); }

std::span<const OrderedTree::Vertex> OrderedTree::children(Vertex v) const {
  return std::span<const Vertex>(child_list_).subspan(first_child_[v], first_child_[v + 1] - first_child_[v]);
}

VertexLabel OrderedTree::label(Vertex v) const {
  std::vector<std::uint32_t> path(depth_[v]);
  for (Vertex x = v; x != 0; x = parent_[x]) path[depth_[x] - 1] = rank_[x];
  return VertexLabel(std::move(path));
}

std::optional<OrderedTree::Vertex> OrderedTree::find(const VertexLabel& x) const {
  Vertex v = 0;
  for (std::uint32_t idx : x.path()) {
    if (idx > code_[v]) return std::nullopt;
    v = children(v)[idx - 1];
  }
  return v;
}

std::vector<VertexLabel> OrderedTree::labels() const {
  std::vector<VertexLabel> out;
  out.reserve(size());
  for (Vertex v = 0; v < size(); ++v) out.push_back(label(v));
  return out;
}

OrderedTree OrderedTree::subtree(Vertex v) const {
  return OrderedTree(std::vector<std::uint32_t>(code_.begin() + v, code_.begin() + v + subtree_size_[v]));
}

std::strong_ordering OrderedTree::operator<=>(const OrderedTree& other) const {
  if (auto c = size() <=> other.size(); c != 0) return c;
  return code_ <=> other.code_;
}

OrderedTree validate(const std::set<VertexLabel>& labels) { return OrderedTree::from_labels(labels); }

namespace {

OrderedTree::Vertex locate(const OrderedTree& g, const VertexLabel& x) {
  const auto v = g.find(x);
  if (!v) throw Error(Errc::vertex_absent, "vertex " + x.to_string() + " is not in the tree");
  return *v;
}

}  // namespace

OrderedTree subtree_at(const OrderedTree& g, const VertexLabel& x) { return g.subtree(locate(g, x)); }

std::uint32_t degree_of(const OrderedTree& g, const VertexLabel& x) { return g.degree(locate(g, x)); }

std::vector<VertexLabel> generation(const OrderedTree& g, std::size_t n) {
  std::vector<VertexLabel> out;
  for (OrderedTree::Vertex v = 0; v < g.size(); ++v) {
    if (g.depth(v) == n) out.push_back(g.label(v));
  }
  return out;
}

std::string code_to_string(std::span<const std::uint32_t> code) {
  std::string out;
  for (std::size_t i = 0; i < code.size(); ++i) {
    if (i > 0) out += ',';
    out += std::to_string(code[i]);
  }
  return out;
}

std::size_t OrderedTreeHash::operator()(const OrderedTree& g) const noexcept {
  std::size_t h = 1469598103934665603ull;
  for (std::uint32_t c : g.code()) h = (h ^ c) * 1099511628211ull;
  return h;
}

}  // namespace patree
