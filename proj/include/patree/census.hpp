#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "patree/growth.hpp"

namespace patree {

/// Outcome key for subtrees (or ancestor subtrees) above the size cap.
inline constexpr std::string_view kOther = "OTHER";

/// (canonical code of the k-th ancestor's progeny, mark of the vertex in it).
using MarkedKey = std::pair<std::string, std::string>;

struct CensusReport {
  std::map<std::uint32_t, std::uint64_t> degree_hist;
  /// Canonical code (or OTHER) -> number of vertices with that progeny.
  std::map<std::string, std::uint64_t> subtree_hist;
  /// k -> counts over vertices of depth >= k. Lumped ancestors use (OTHER, "").
  std::map<std::size_t, std::map<MarkedKey, std::uint64_t>> ancestor_hist;
  std::uint64_t n_vertices = 0;
  std::size_t subtree_cap = 0;
};

/// Single read-only pass over a birth-ordered parent array.
CensusReport census(std::span<const std::int64_t> parents, std::size_t subtree_cap,
                    std::span<const std::size_t> ancestor_ks = {});

inline CensusReport census(const GrowthState& state, std::size_t subtree_cap,
                           std::span<const std::size_t> ancestor_ks = {}) {
  return census(state.parents(), subtree_cap, ancestor_ks);
}

std::string census_degrees_csv(const CensusReport& report);
std::string census_subtrees_csv(const CensusReport& report);
std::string census_ancestors_csv(const CensusReport& report, std::size_t k);

/// Tree dump record; one JSON object per line:
///   {"seed":u64,"weight":"<weight-spec>","parents":[null,0,...],"birth_times":[...]}
/// birth_times is present only for continuous-time runs.
struct TreeDump {
  std::uint64_t seed = 0;
  std::string weight;
  std::vector<std::int64_t> parents;  // root is -1
  std::vector<double> birth_times;
};

std::string tree_dump_line(const GrowthState& state, std::string_view weight_spec);
TreeDump parse_tree_dump_line(std::string_view line);

}  // namespace patree
