#include <cmath>
#include <map>
#include <random>

#include "doctest.h"

#include "patree/census.hpp"
#include "patree/error.hpp"
#include "patree/growth.hpp"
#include "patree/malthus.hpp"
#include "patree/seeding.hpp"
#include "patree/statistics.hpp"
#include "patree/weight_spec.hpp"

using namespace patree;

namespace {

// Parent chosen for the third vertex, over many independent two-vertex trees.
std::map<std::string, std::uint64_t> third_vertex_parents(const WeightFunction& w, std::size_t trials) {
  std::map<std::string, std::uint64_t> counts;
  for (std::size_t i = 0; i < trials; ++i) {
    GrowthState s(w, derive_seed(77, i));
    s.attach_step();
    s.attach_step();
    ++counts[std::to_string(s.parents()[2])];
  }
  return counts;
}

double exponential_cdf(double x) { return x <= 0.0 ? 0.0 : -std::expm1(-x); }

}  // namespace

TEST_CASE("seed splitting") {
  CHECK(derive_seed(1, 0) != derive_seed(1, 1));
  CHECK(derive_seed(1, 0) != derive_seed(2, 0));
  CHECK(derive_seed(5, 3) == derive_seed(5, 3));
  // SplitMix64 reference output for state 0x9E3779B97F4A7C15.
  CHECK(derive_seed(0, 0) == 0xE220A8397B1DCDAFull);
}

TEST_CASE("Fenwick sampler") {
  FenwickSampler f;
  const std::vector<double> ws{1.0, 0.0, 2.5, 0.5, 3.0};
  for (double x : ws) f.push_back(x);
  double running = 0.0;
  for (std::size_t i = 0; i < ws.size(); ++i) {
    CHECK(f.prefix(i) == doctest::Approx(running));
    running += ws[i];
  }
  CHECK(f.find(0.0) == 0);
  CHECK(f.find(0.999) == 0);
  CHECK(f.find(1.0) == 2);
  CHECK(f.find(3.6) == 3);
  CHECK(f.find(6.9) == 4);
  CHECK(f.find(100.0) == 4);
  f.set(1, 4.0);
  CHECK(f.find(1.5) == 1);
  CHECK(f.prefix(5) == doctest::Approx(11.0));
  f.rebuild();
  CHECK(f.prefix(5) == doctest::Approx(11.0));
}

TEST_CASE("first attachment goes to the root") {
  GrowthState s(WeightFunction::linear(1.0, 1.0), 3);
  CHECK(s.size() == 1);
  CHECK(s.attach_step() == 1);
  CHECK(s.parents()[1] == 0);
  CHECK(s.child_counts()[0] == 1);
}

TEST_CASE("uniform attachment between two vertices") {
  const auto counts = third_vertex_parents(WeightFunction::constant(1.0), 100000);
  const ChiSquare chi = chi_square_gof(counts, {{"0", 0.5}, {"1", 0.5}});
  CHECK(chi.p_value > 0.001);
}

TEST_CASE("linear attachment prefers the root two to one") {
  const auto counts = third_vertex_parents(WeightFunction::linear(1.0, 1.0), 100000);
  const ChiSquare chi = chi_square_gof(counts, {{"0", 2.0 / 3.0}, {"1", 1.0 / 3.0}});
  CHECK(chi.p_value > 0.001);
}

TEST_CASE("inverse-CDF sampling follows the weights of a grown tree") {
  const WeightFunction w = parse_weight_spec("table:1,4;tail=const:0.5");
  GrowthState base(w, 11);
  base.grow_discrete(9);
  std::map<std::string, double> expected;
  for (std::size_t v = 0; v < base.size(); ++v) {
    CHECK(base.index().weight(v) == doctest::Approx(w(base.child_counts()[v])));
    expected[std::to_string(v)] = w(base.child_counts()[v]) / base.recomputed_total_weight();
  }
  std::mt19937_64 rng(derive_seed(1000, 0));
  std::map<std::string, std::uint64_t> counts;
  for (int i = 0; i < 200000; ++i)
    ++counts[std::to_string(base.index().find(uniform01(rng) * base.total_weight()))];
  CHECK(chi_square_gof(counts, expected).p_value > 0.001);
}

TEST_CASE("determinism and shared jump chain") {
  const WeightFunction w = WeightFunction::linear(1.0, 1.0);
  GrowthState a(w, 42);
  GrowthState b(w, 42);
  GrowthState c(w, 42);
  a.grow_discrete(5000);
  b.grow_discrete(5000);
  c.grow_continuous(5000);
  CHECK(std::equal(a.parents().begin(), a.parents().end(), b.parents().begin(), b.parents().end()));
  CHECK(std::equal(a.parents().begin(), a.parents().end(), c.parents().begin(), c.parents().end()));
  GrowthState d(w, 42);
  d.grow_continuous(5000);
  CHECK(std::equal(c.birth_times().begin(), c.birth_times().end(), d.birth_times().begin(), d.birth_times().end()));
  GrowthState e(w, 43);
  e.grow_discrete(5000);
  CHECK_FALSE(std::equal(a.parents().begin(), a.parents().end(), e.parents().begin(), e.parents().end()));
  CHECK_THROWS_AS(c.grow_discrete(1), std::logic_error);
  CHECK_THROWS_AS(a.grow_continuous(1), std::logic_error);
}

TEST_CASE("incremental weights agree with a rebuild") {
  for (const char* text : {"linear:1,1", "const:1", "table:3,0.1,2;tail=linear:2,0.5"}) {
    CAPTURE(text);
    GrowthState s(parse_weight_spec(text), 8);
    for (int round = 0; round < 5; ++round) {
      s.grow_discrete(20000);
      const double exact = s.recomputed_total_weight();
      CHECK(std::abs(s.total_weight() - exact) <= 1e-9 * exact);
      CHECK(std::abs(s.index().prefix(s.size()) - exact) <= 1e-9 * exact);
    }
  }
}

TEST_CASE("holding times are exponential with the total weight as rate") {
  const WeightFunction w = WeightFunction::linear(1.0, 1.0);
  GrowthState s(w, 5);
  s.grow_continuous(20000);
  std::vector<double> scaled;
  std::vector<std::uint32_t> degree(s.size(), 0);
  double total = w(0);
  for (std::size_t v = 1; v < s.size(); ++v) {
    scaled.push_back((s.birth_times()[v] - s.birth_times()[v - 1]) * total);
    const auto p = static_cast<std::size_t>(s.parents()[v]);
    total += w(degree[p] + 1) - w(degree[p]) + w(0);
    ++degree[p];
  }
  CHECK(ks_test(scaled, exponential_cdf).p_value > 0.001);
}

TEST_CASE("time rescaling") {
  // Multiplying omega by c speeds time up by c: c*T_1 and c*T_2 have the
  // law of T_1 and T_2 under omega.
  const WeightFunction w = parse_weight_spec("table:2,1;tail=linear:1,1");
  const double c = 3.5;
  const WeightFunction fast = w.scaled(c);
  std::vector<double> t1, t2;
  for (std::size_t i = 0; i < 20000; ++i) {
    GrowthState s(fast, derive_seed(9, i));
    s.grow_continuous(2);
    t1.push_back(c * s.birth_times()[1]);
    t2.push_back(c * s.birth_times()[2]);
  }
  // T_1 ~ Exp(omega(0)); T_2 - T_1 ~ Exp(omega(1) + omega(0)).
  const double r1 = w(0);
  const double r2 = w(1) + w(0);
  CHECK(ks_test(t1, [&](double x) { return exponential_cdf(r1 * x); }).p_value > 0.001);
  const auto hypo = [&](double x) {
    if (x <= 0.0) return 0.0;
    return 1.0 - (r2 * std::exp(-r1 * x) - r1 * std::exp(-r2 * x)) / (r2 - r1);
  };
  CHECK(ks_test(t2, hypo).p_value > 0.001);
}

TEST_CASE("census of small trees") {
  GrowthState fresh(WeightFunction::constant(1.0), 1);
  const CensusReport one = census(fresh, 4);
  CHECK(one.degree_hist == std::map<std::uint32_t, std::uint64_t>{{0, 1}});
  CHECK(one.n_vertices == 1);

  const std::vector<std::int64_t> star{-1, 0, 0};
  const CensusReport s = census(star, 4);
  CHECK(s.subtree_hist == std::map<std::string, std::uint64_t>{{"2,0,0", 1}, {"0", 2}});

  // Root with children 1 and 2; vertex 1 has child 3.
  const std::vector<std::int64_t> parents{-1, 0, 0, 1};
  const std::vector<std::size_t> ks{0, 1, 2, 3};
  const CensusReport r = census(parents, 3, ks);
  CHECK(r.subtree_hist == std::map<std::string, std::uint64_t>{{"OTHER", 1}, {"1,0", 1}, {"0", 2}});
  CHECK(r.ancestor_hist.at(0) ==
        std::map<MarkedKey, std::uint64_t>{{{"OTHER", ""}, 1}, {{"1,0", "-"}, 1}, {{"0", "-"}, 2}});
  CHECK(r.ancestor_hist.at(1) == std::map<MarkedKey, std::uint64_t>{{{"OTHER", ""}, 2}, {{"1,0", "1"}, 1}});
  CHECK(r.ancestor_hist.at(2) == std::map<MarkedKey, std::uint64_t>{{{"OTHER", ""}, 1}});
  CHECK(r.ancestor_hist.at(3).empty());
  CHECK(census_subtrees_csv(r) == "canonical_code,count\n\"0\",2\n\"1,0\",1\n\"OTHER\",1\n");
  CHECK(census_degrees_csv(r) == "degree,count\n0,2\n1,1\n2,1\n");
  CHECK(census_ancestors_csv(r, 1) == "k,canonical_code,mark,count\n1,\"1,0\",1,1\n1,\"OTHER\",,2\n");
}

TEST_CASE("census counts every vertex once") {
  GrowthState s(WeightFunction::linear(1.0, 1.0), 17);
  s.grow_discrete(10000);
  const std::vector<std::size_t> ks{1, 2};
  const CensusReport r = census(s, 5, ks);
  std::uint64_t degrees = 0, subtrees = 0;
  for (const auto& [d, c] : r.degree_hist) degrees += c;
  for (const auto& [g, c] : r.subtree_hist) subtrees += c;
  CHECK(degrees == s.size());
  CHECK(subtrees == s.size());
  std::uint64_t first_gen = 0;
  for (const auto& [key, c] : r.ancestor_hist.at(1)) first_gen += c;
  CHECK(first_gen == s.size() - 1);
}

TEST_CASE("tree dumps round-trip") {
  const WeightFunction w = parse_weight_spec("table:1,2;tail=linear:1,1");
  GrowthState s(w, 123);
  s.grow_continuous(50);
  const std::string line = tree_dump_line(s, format_weight_spec(w));
  CHECK(line.find("\"parents\":[null,0,") != std::string::npos);
  const TreeDump d = parse_tree_dump_line(line);
  CHECK(d.seed == 123);
  CHECK(d.weight == "table:1,2;tail=linear:1,1");
  CHECK(std::equal(d.parents.begin(), d.parents.end(), s.parents().begin(), s.parents().end()));
  CHECK(std::equal(d.birth_times.begin(), d.birth_times.end(), s.birth_times().begin(), s.birth_times().end()));

  GrowthState plain(w, 5);
  plain.grow_discrete(3);
  CHECK(tree_dump_line(plain, "x").find("birth_times") == std::string::npos);
  CHECK_THROWS_AS(parse_tree_dump_line("{\"seed\":1}"), Error);
}

TEST_CASE("growth constant samples average to one") {
  const WeightFunction w = WeightFunction::linear(1.0, 1.0);
  std::vector<double> xs;
  for (std::size_t i = 0; i < 400; ++i) xs.push_back(theta_sample(w, 2.0, 5000, derive_seed(31, i)));
  const MeanEstimate m = mean_estimate(xs);
  CHECK(std::abs(m.mean - 1.0) <= 4.0 * m.std_error);
  CHECK(theta_sample(WeightFunction::constant(1.0), 1.0, 1, 7) == doctest::Approx(1.0));
}
