#include "patree/census.hpp"

#include <sstream>

#include "json.hpp"

#include "patree/error.hpp"

namespace patree {

CensusReport census(std::span<const std::int64_t> parents, std::size_t subtree_cap,
                    std::span<const std::size_t> ancestor_ks) {
  const std::size_t n = parents.size();
  CensusReport out;
  out.n_vertices = n;
  out.subtree_cap = subtree_cap;
  if (n == 0) return out;

  // Children in birth order, CSR layout; parents always precede children.
  std::vector<std::uint32_t> degree(n, 0), rank(n, 0), depth(n, 0);
  for (std::size_t v = 1; v < n; ++v) {
    const auto p = static_cast<std::size_t>(parents[v]);
    rank[v] = ++degree[p];
    depth[v] = depth[p] + 1;
  }
  std::vector<std::size_t> first(n + 1, 0);
  for (std::size_t v = 0; v < n; ++v) first[v + 1] = first[v] + degree[v];
  std::vector<std::uint32_t> kids(n > 0 ? n - 1 : 0);
  {
    std::vector<std::size_t> fill(first.begin(), first.end() - 1);
    for (std::size_t v = 1; v < n; ++v) kids[fill[static_cast<std::size_t>(parents[v])]++] = static_cast<std::uint32_t>(v);
  }

  // Progeny sizes and codes bottom-up; codes are kept only below the cap.
  std::vector<std::uint32_t> size(n, 1);
  std::vector<std::string> code(n);
  for (std::size_t v = n; v-- > 0;) {
    for (std::size_t i = first[v]; i < first[v + 1]; ++i) size[v] += size[kids[i]];
    if (size[v] <= subtree_cap) {
      std::string& c = code[v];
      c = std::to_string(degree[v]);
      for (std::size_t i = first[v]; i < first[v + 1]; ++i) {
        c += ',';
        c += code[kids[i]];
      }
    }
  }

  for (std::size_t v = 0; v < n; ++v) {
    ++out.degree_hist[degree[v]];
    ++out.subtree_hist[size[v] <= subtree_cap ? code[v] : std::string(kOther)];
  }

  for (std::size_t k : ancestor_ks) {
    auto& hist = out.ancestor_hist[k];
    std::vector<std::uint32_t> steps(k);
    for (std::size_t v = 0; v < n; ++v) {
      if (depth[v] < k) continue;
      std::size_t a = v;
      for (std::size_t i = k; i-- > 0;) {
        steps[i] = rank[a];
        a = static_cast<std::size_t>(parents[a]);
      }
      if (size[a] > subtree_cap) {
        ++hist[{std::string(kOther), ""}];
        continue;
      }
      std::string mark;
      if (k == 0) mark = "-";
      for (std::size_t i = 0; i < k; ++i) {
        if (i > 0) mark += '.';
        mark += std::to_string(steps[i]);
      }
      ++hist[{code[a], std::move(mark)}];
    }
  }
  return out;
}

std::string census_degrees_csv(const CensusReport& report) {
  std::ostringstream out;
  out << "degree,count\n";
  for (const auto& [d, c] : report.degree_hist) out << d << ',' << c << '\n';
  return out.str();
}

std::string census_subtrees_csv(const CensusReport& report) {
  std::ostringstream out;
  out << "canonical_code,count\n";
  for (const auto& [code, c] : report.subtree_hist) out << '"' << code << "\"," << c << '\n';
  return out.str();
}

std::string census_ancestors_csv(const CensusReport& report, std::size_t k) {
  std::ostringstream out;
  out << "k,canonical_code,mark,count\n";
  const auto it = report.ancestor_hist.find(k);
  if (it == report.ancestor_hist.end()) return out.str();
  for (const auto& [key, c] : it->second) out << k << ",\"" << key.first << "\"," << key.second << ',' << c << '\n';
  return out.str();
}

std::string tree_dump_line(const GrowthState& state, std::string_view weight_spec) {
  nlohmann::json j;
  j["seed"] = state.seed();
  j["weight"] = std::string(weight_spec);
  nlohmann::json parents = nlohmann::json::array();
  for (std::int64_t p : state.parents()) {
    if (p < 0) {
      parents.push_back(nullptr);
    } else {
      parents.push_back(p);
    }
  }
  j["parents"] = std::move(parents);
  if (state.timed()) j["birth_times"] = std::vector<double>(state.birth_times().begin(), state.birth_times().end());
  return j.dump();
}

TreeDump parse_tree_dump_line(std::string_view line) {
  TreeDump out;
  try {
    const auto j = nlohmann::json::parse(line);
    out.seed = j.at("seed").get<std::uint64_t>();
    out.weight = j.at("weight").get<std::string>();
    for (const auto& p : j.at("parents")) out.parents.push_back(p.is_null() ? -1 : p.get<std::int64_t>());
    if (j.contains("birth_times")) out.birth_times = j.at("birth_times").get<std::vector<double>>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::parse_error, std::string("tree dump: ") + e.what());
  }
  return out;
}

}  // namespace patree
