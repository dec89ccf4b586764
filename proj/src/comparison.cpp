#include "patree/comparison.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <map>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "json.hpp"

#include "patree/analytic.hpp"
#include "patree/error.hpp"
#include "patree/growth.hpp"
#include "patree/histories.hpp"
#include "patree/io.hpp"
#include "patree/malthus.hpp"
#include "patree/seeding.hpp"

namespace patree {

namespace {

constexpr double kSolverTol = 1e-12;
const std::string kTail = "TAIL";

// Runs fn(i) for i in [0, count) on up to hardware_concurrency threads.
// Each index is handled by exactly one thread, so results written by index are
// independent of scheduling.
template <class Fn>
void parallel_for(std::size_t count, Fn&& fn) {
  const std::size_t workers =
      std::max<std::size_t>(1, std::min<std::size_t>(count, std::thread::hardware_concurrency()));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t t = 0; t < workers; ++t) {
    pool.emplace_back([&, t] {
      for (std::size_t i = t; i < count; i += workers) fn(i);
    });
  }
  for (auto& th : pool) th.join();
}

std::size_t code_size(std::string_view code) { return static_cast<std::size_t>(std::count(code.begin(), code.end(), ',')) + 1; }

using Counts = std::map<std::string, std::uint64_t>;

struct Pooled {
  std::vector<ComparisonRow> rows;
  double tv = 0.0;
  ChiSquare chi_square;
};

// Pools per-run counts; rows follow `theory` order. Standard errors come from
// the spread of per-run fractions (vertices within one tree are dependent).
Pooled pool(const std::vector<std::pair<std::string, double>>& theory, const std::vector<Counts>& per_run,
            const std::vector<std::uint64_t>& sizes) {
  std::uint64_t total = 0;
  for (auto n : sizes) total += n;
  Counts pooled;
  for (const auto& counts : per_run) {
    for (const auto& [k, c] : counts) pooled[k] += c;
  }

  Pooled out;
  DistributionTable theory_table, empirical_table;
  for (const auto& [outcome, mass] : theory) {
    ComparisonRow row;
    row.outcome = outcome;
    row.theory = mass;
    const auto it = pooled.find(outcome);
    const double count = it == pooled.end() ? 0.0 : static_cast<double>(it->second);
    row.empirical = total > 0 ? count / static_cast<double>(total) : 0.0;
    if (per_run.size() >= 2) {
      std::vector<double> fractions;
      for (std::size_t r = 0; r < per_run.size(); ++r) {
        const auto jt = per_run[r].find(outcome);
        const double c = jt == per_run[r].end() ? 0.0 : static_cast<double>(jt->second);
        fractions.push_back(c / static_cast<double>(sizes[r]));
      }
      row.std_error = mean_estimate(fractions).std_error;
    } else if (total > 0) {
      row.std_error = std::sqrt(row.empirical * (1.0 - row.empirical) / static_cast<double>(total));
    }
    theory_table[outcome] = mass;
    empirical_table[outcome] = row.empirical;
    out.rows.push_back(std::move(row));
  }
  out.tv = tv_distance(theory_table, empirical_table);
  out.chi_square = chi_square_gof(pooled, theory_table);
  return out;
}

ComparisonReport make_report(std::string kind, Pooled pooled, std::span<const CensusReport> censuses) {
  ComparisonReport report;
  report.kind = std::move(kind);
  report.rows = std::move(pooled.rows);
  report.tv_distance = pooled.tv;
  report.chi_square = std::move(pooled.chi_square);
  report.runs = censuses.size();
  report.n_vertices = censuses.empty() ? 0 : censuses.front().n_vertices;
  return report;
}

std::vector<std::uint64_t> run_sizes(std::span<const CensusReport> censuses) {
  std::vector<std::uint64_t> out;
  for (const auto& c : censuses) out.push_back(c.n_vertices);
  return out;
}

void require_runs(std::span<const CensusReport> censuses) {
  if (censuses.empty()) throw std::invalid_argument("comparison needs at least one census");
}

}  // namespace

const ComparisonRow* ComparisonReport::find(std::string_view outcome) const {
  for (const auto& row : rows) {
    if (row.outcome == outcome) return &row;
  }
  return nullptr;
}

std::vector<CensusReport> simulate_censuses(const WeightFunction& w, std::size_t n_vertices, std::size_t runs,
                                            std::uint64_t seed, std::size_t subtree_cap,
                                            std::span<const std::size_t> ancestor_ks) {
  if (n_vertices == 0) throw std::invalid_argument("n_vertices must be >= 1");
  std::vector<CensusReport> out(runs);
  parallel_for(runs, [&](std::size_t r) {
    GrowthState state(w, derive_seed(seed, r));
    state.grow_discrete(n_vertices - 1);
    out[r] = census(state, subtree_cap, ancestor_ks);
  });
  return out;
}

ComparisonReport compare_degree(const WeightFunction& w, std::span<const CensusReport> censuses, std::size_t kmax) {
  require_runs(censuses);
  const DegreeDistribution dd = degree_dist(w, kmax, kSolverTol);
  std::vector<std::pair<std::string, double>> theory;
  for (std::size_t k = 0; k <= kmax; ++k) theory.emplace_back(std::to_string(k), dd.masses[k]);
  theory.emplace_back(kTail, dd.tail_mass);

  std::vector<Counts> per_run;
  for (const auto& c : censuses) {
    Counts counts;
    for (const auto& [d, n] : c.degree_hist) counts[d <= kmax ? std::to_string(d) : kTail] += n;
    per_run.push_back(std::move(counts));
  }
  ComparisonReport report = make_report("degrees", pool(theory, per_run, run_sizes(censuses)), censuses);
  report.lambda_star = dd.lambda_star;
  report.tail_note = "TAIL collects degrees above " + std::to_string(kmax) + "; its theory mass is exact";
  return report;
}

ComparisonReport compare_degree(const WeightFunction& w, std::size_t n_vertices, std::size_t runs, std::uint64_t seed,
                                std::size_t kmax) {
  const auto censuses = simulate_censuses(w, n_vertices, runs, seed, 0);
  return compare_degree(w, censuses, kmax);
}

ComparisonReport compare_subtrees(const WeightFunction& w, std::span<const CensusReport> censuses,
                                  std::size_t max_size) {
  require_runs(censuses);
  for (const auto& c : censuses) {
    if (c.subtree_cap < max_size) throw std::invalid_argument("census subtree cap is below max_size");
  }
  const MalthusResult root = solve_malthus(w, kSolverTol);
  const TreeDistribution pi = pi_table(w, root.lambda_star, max_size);
  std::vector<std::pair<std::string, double>> theory;
  for (const OrderedTree& g : trees_up_to(max_size)) {
    const std::string code = g.code_string();
    theory.emplace_back(code, pi.masses.at(code));
  }
  theory.emplace_back(std::string(kOther), std::max(0.0, 1.0 - pi.covered_mass));

  std::vector<Counts> per_run;
  for (const auto& c : censuses) {
    Counts counts;
    for (const auto& [code, n] : c.subtree_hist) {
      const bool kept = code != kOther && code_size(code) <= max_size;
      counts[kept ? code : std::string(kOther)] += n;
    }
    per_run.push_back(std::move(counts));
  }
  ComparisonReport report = make_report("subtrees", pool(theory, per_run, run_sizes(censuses)), censuses);
  report.lambda_star = root.lambda_star;
  report.tail_note = "OTHER collects progenies above " + std::to_string(max_size) +
                     " vertices; theory mass 1 - covered_mass = " + format_real(1.0 - pi.covered_mass);
  return report;
}

ComparisonReport compare_subtrees(const WeightFunction& w, std::size_t n_vertices, std::size_t runs,
                                  std::uint64_t seed, std::size_t max_size) {
  const auto censuses = simulate_censuses(w, n_vertices, runs, seed, max_size);
  return compare_subtrees(w, censuses, max_size);
}

ComparisonReport compare_ancestors(const WeightFunction& w, std::span<const CensusReport> censuses, std::size_t k,
                                   std::size_t max_size) {
  require_runs(censuses);
  for (const auto& c : censuses) {
    if (c.subtree_cap < max_size) throw std::invalid_argument("census subtree cap is below max_size");
    if (!c.ancestor_hist.contains(k)) throw std::invalid_argument("census lacks the requested ancestor level");
  }
  const MalthusResult root = solve_malthus(w, kSolverTol);
  const std::string other(kOther);

  std::vector<std::pair<std::string, double>> theory, marginal_theory;
  std::map<std::string, std::vector<std::string>> marks_of;
  double covered = 0.0;
  for (const OrderedTree& g : trees_up_to(max_size)) {
    const auto gen = generation(g, k);
    if (gen.empty()) continue;
    const std::string code = g.code_string();
    double mass = 0.0;
    for (const VertexLabel& u : gen) {
      mass = marked_pi(g, u, k, w, root.lambda_star);
      theory.emplace_back(code + "|" + u.to_string(), mass);
      marks_of[code].push_back(u.to_string());
      covered += mass;
    }
    marginal_theory.emplace_back(code, ancestor_subtree_mass(g, k, w, root.lambda_star));
  }
  theory.emplace_back(other, std::max(0.0, 1.0 - covered));
  marginal_theory.emplace_back(other, std::max(0.0, 1.0 - covered));

  std::vector<Counts> per_run, marginal_per_run;
  for (const auto& c : censuses) {
    Counts counts, marginal;
    std::uint64_t seen = 0;
    for (const auto& [key, n] : c.ancestor_hist.at(k)) {
      seen += n;
      const bool kept = key.first != kOther && code_size(key.first) <= max_size;
      counts[kept ? key.first + "|" + key.second : other] += n;
      marginal[kept ? key.first : other] += n;
    }
    counts[other] += c.n_vertices - seen;
    marginal[other] += c.n_vertices - seen;
    per_run.push_back(std::move(counts));
    marginal_per_run.push_back(std::move(marginal));
  }
  const auto sizes = run_sizes(censuses);
  ComparisonReport report = make_report("ancestors", pool(theory, per_run, sizes), censuses);
  Pooled marginal = pool(marginal_theory, marginal_per_run, sizes);
  report.marginal_rows = std::move(marginal.rows);
  report.marginal_tv_distance = marginal.tv;
  report.lambda_star = root.lambda_star;
  report.tail_note = "OTHER collects vertices shallower than " + std::to_string(k) +
                     " and ancestors whose progeny exceeds " + std::to_string(max_size) + " vertices";

  Counts pooled;
  for (const auto& counts : per_run) {
    for (const auto& [key, n] : counts) pooled[key] += n;
  }
  for (const auto& [code, marks] : marks_of) {
    if (marks.size() < 2) continue;
    std::vector<std::uint64_t> counts;
    for (const auto& m : marks) {
      const auto it = pooled.find(code + "|" + m);
      counts.push_back(it == pooled.end() ? 0 : it->second);
    }
    report.mark_tests.push_back({code, chi_square_uniform(counts)});
  }
  return report;
}

ComparisonReport compare_ancestors(const WeightFunction& w, std::size_t n_vertices, std::size_t runs,
                                   std::uint64_t seed, std::size_t k, std::size_t max_size) {
  const std::size_t ks[] = {k};
  const auto censuses = simulate_censuses(w, n_vertices, runs, seed, max_size, ks);
  return compare_ancestors(w, censuses, k, max_size);
}

ThetaCheck gamma_theta_check(double alpha, double beta, std::size_t n_vertices, std::size_t samples,
                             std::uint64_t seed) {
  const WeightFunction w = WeightFunction::linear(alpha, beta);
  const MalthusResult root = solve_malthus(w, kSolverTol);
  const SeriesValue kappa = eval_kappa(w, root.lambda_star, kSolverTol);
  ThetaCheck out;
  out.alpha = alpha;
  out.beta = beta;
  out.shape = beta / (alpha + beta);
  out.samples.resize(samples);
  parallel_for(samples, [&](std::size_t i) {
    out.samples[i] = theta_sample(w, root.lambda_star, kappa.value, n_vertices, derive_seed(seed, i));
  });
  const double a = out.shape;
  out.ks = ks_test(out.samples, [a](double x) { return gamma_cdf(x, a, a); });
  out.mean = mean_estimate(out.samples);
  return out;
}

std::string comparison_csv(const ComparisonReport& report, bool timestamp) {
  std::ostringstream out;
  if (timestamp) out << timestamp_line();
  out << "outcome,theory,empirical,stderr\n";
  for (const auto& row : report.rows) {
    out << '"' << row.outcome << "\"," << format_real(row.theory) << ',' << format_real(row.empirical) << ','
        << format_real(row.std_error) << '\n';
  }
  return out.str();
}

namespace {

nlohmann::json chi_json(const ChiSquare& chi) {
  return {{"statistic", chi.statistic}, {"dof", chi.dof}, {"p_value", chi.p_value}, {"lumped", chi.lumped}};
}

std::string generated_stamp() {
  std::string line = timestamp_line();  // "# generated <time>\n"
  return line.substr(12, line.size() - 13);
}

}  // namespace

std::string comparison_json(const ComparisonReport& report, std::string_view weight_spec, std::uint64_t seed,
                            bool timestamp) {
  nlohmann::json j;
  if (timestamp) j["generated"] = generated_stamp();
  std::vector<std::uint64_t> seeds;
  for (std::size_t r = 0; r < report.runs; ++r) seeds.push_back(derive_seed(seed, r));
  j["config"] = {{"kind", report.kind},
                 {"weight", std::string(weight_spec)},
                 {"seed", seed},
                 {"vertices", report.n_vertices},
                 {"runs", report.runs}};
  j["seeds"] = seeds;
  j["lambda_star"] = report.lambda_star;
  j["tv"] = report.tv_distance;
  j["chi_square"] = chi_json(report.chi_square);
  j["tail_note"] = report.tail_note;
  if (!report.marginal_rows.empty()) {
    j["marginal_tv"] = report.marginal_tv_distance;
    nlohmann::json marginal = nlohmann::json::array();
    for (const auto& row : report.marginal_rows) {
      marginal.push_back(
          {{"outcome", row.outcome}, {"theory", row.theory}, {"empirical", row.empirical}, {"stderr", row.std_error}});
    }
    j["marginal"] = std::move(marginal);
    nlohmann::json marks = nlohmann::json::array();
    for (const auto& m : report.mark_tests) marks.push_back({{"code", m.code}, {"chi_square", chi_json(m.chi_square)}});
    j["mark_homogeneity"] = std::move(marks);
  }
  return j.dump(2) + "\n";
}

std::string theta_json(const ThetaCheck& check, std::size_t n_vertices, std::uint64_t seed, bool timestamp) {
  nlohmann::json j;
  if (timestamp) j["generated"] = generated_stamp();
  j["config"] = {{"alpha", check.alpha},
                 {"beta", check.beta},
                 {"vertices", n_vertices},
                 {"samples", check.samples.size()},
                 {"seed", seed}};
  j["gamma_shape"] = check.shape;
  j["gamma_rate"] = check.shape;
  j["ks"] = {{"statistic", check.ks.statistic}, {"p_value", check.ks.p_value}};
  j["mean"] = check.mean.mean;
  j["mean_stderr"] = check.mean.std_error;
  return j.dump(2) + "\n";
}

}  // namespace patree
