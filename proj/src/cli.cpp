#include "patree/cli.hpp"

#include <charconv>
#include <cstdint>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "CLI11.hpp"

#include "patree/analytic.hpp"
#include "patree/census.hpp"
#include "patree/comparison.hpp"
#include "patree/error.hpp"
#include "patree/growth.hpp"
#include "patree/io.hpp"
#include "patree/malthus.hpp"
#include "patree/seeding.hpp"
#include "patree/weight_spec.hpp"

namespace patree {

namespace {

constexpr double kDefaultTol = 1e-12;

struct Common {
  std::string weight;
  std::string out;
  bool no_timestamp = false;
};

struct CensusRequest {
  bool degrees = false;
  bool subtrees = false;
  std::size_t subtree_cap = 4;
  std::vector<std::size_t> ancestor_ks;
};

std::size_t parse_count(std::string_view token, std::string_view what) {
  std::size_t value = 0;
  const auto [end, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc{} || end != token.data() + token.size())
    throw Error(Errc::parse_error, std::string(what) + ": expected a nonnegative integer, got '" + std::string(token) + "'");
  return value;
}

// "degrees,subtrees:S,ancestors:k1,k2": bare integers after ancestors:k1
// extend the ancestor list.
CensusRequest parse_census(std::string_view text) {
  CensusRequest req;
  bool in_ancestors = false;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t stop = text.find(',', start);
    if (stop == std::string_view::npos) stop = text.size();
    const std::string_view tok = text.substr(start, stop - start);
    start = stop + 1;
    if (tok == "degrees") {
      req.degrees = true;
      in_ancestors = false;
    } else if (tok.starts_with("subtrees:")) {
      req.subtrees = true;
      req.subtree_cap = parse_count(tok.substr(9), "--census subtrees size");
      if (req.subtree_cap < 1) throw Error(Errc::parse_error, "--census subtrees size must be >= 1");
      in_ancestors = false;
    } else if (tok == "subtrees") {
      req.subtrees = true;
      in_ancestors = false;
    } else if (tok.starts_with("ancestors:")) {
      req.ancestor_ks.push_back(parse_count(tok.substr(10), "--census ancestor generation"));
      in_ancestors = true;
    } else if (in_ancestors && !tok.empty()) {
      req.ancestor_ks.push_back(parse_count(tok, "--census ancestor generation"));
    } else {
      throw Error(Errc::parse_error, "--census: unknown item '" + std::string(tok) + "'");
    }
  }
  return req;
}

void emit(const Common& common, std::ostream& out, const std::string& suffix, const std::string& text) {
  if (common.out.empty()) {
    out << text;
  } else {
    write_file(common.out + suffix, text);
  }
}

std::string stamp(const Common& common) { return common.no_timestamp ? std::string() : timestamp_line(); }

void add_common(CLI::App* sub, Common& common, bool with_out) {
  sub->add_option("--weight", common.weight, "weight spec, e.g. linear:1,1 or const:3")->required();
  if (with_out) {
    sub->add_option("--out", common.out, "file prefix; outputs go to stdout when absent");
    sub->add_flag("--no-timestamp", common.no_timestamp, "omit the '# generated' header line");
  }
}

void check_tol(double tol) {
  if (!(tol > 0.0) || tol > 1e-2) throw Error(Errc::parse_error, "--tol must lie in (0, 1e-2]");
}

void require_at_least_one(std::size_t value, const char* name) {
  if (value < 1) throw Error(Errc::parse_error, std::string(name) + " must be >= 1");
}

int exit_code_for(Errc code) {
  switch (code) {
    case Errc::non_convergent:
    case Errc::bracketing_failed:
      return kExitNumeric;
    case Errc::io_error:
      return kExitIo;
    default:
      return kExitUsage;
  }
}

void merge_into(CensusReport& total, const CensusReport& run) {
  total.n_vertices += run.n_vertices;
  total.subtree_cap = run.subtree_cap;
  for (const auto& [d, c] : run.degree_hist) total.degree_hist[d] += c;
  for (const auto& [code, c] : run.subtree_hist) total.subtree_hist[code] += c;
  for (const auto& [k, hist] : run.ancestor_hist)
    for (const auto& [key, c] : hist) total.ancestor_hist[k][key] += c;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Preferential-attachment trees: limit laws and simulation"};
  app.require_subcommand(1);
  Common common;
  double tol = kDefaultTol;
  std::size_t kmax = 20;
  std::size_t max_size = 4;
  std::size_t vertices = 0;
  std::size_t runs = 1;
  std::size_t samples = 0;
  std::size_t ancestor_k = 1;
  std::uint64_t seed = 0;
  bool continuous = false;
  std::string census_text;
  std::string compare_kind;

  auto* malthus = app.add_subcommand("malthus", "Malthusian parameter lambda*");
  add_common(malthus, common, false);
  malthus->add_option("--tol", tol, "target accuracy, in (0, 1e-2]");

  auto* degdist = app.add_subcommand("degdist", "limiting degree law p(0..K) and its tail");
  add_common(degdist, common, true);
  degdist->add_option("--kmax", kmax, "largest tabulated degree")->required();
  degdist->add_option("--tol", tol, "target accuracy, in (0, 1e-2]");

  auto* treedist = app.add_subcommand("treedist", "limiting subtree law over trees of bounded size");
  add_common(treedist, common, true);
  treedist->add_option("--max-size", max_size, "largest tree size")->required();
  treedist->add_option("--tol", tol, "target accuracy, in (0, 1e-2]");

  auto* simulate = app.add_subcommand("simulate", "grow random trees, dump them and take censuses");
  add_common(simulate, common, true);
  simulate->add_option("--vertices", vertices, "vertices per tree")->required();
  simulate->add_option("--runs", runs, "independent trees")->required();
  simulate->add_option("--seed", seed, "master seed")->required();
  simulate->add_flag("--continuous", continuous, "record birth times of the continuous-time process");
  simulate->add_option("--census", census_text, "degrees,subtrees:S,ancestors:k1,k2");

  auto* compare = app.add_subcommand("compare", "simulation against the limit law");
  add_common(compare, common, true);
  compare->add_option("kind", compare_kind, "degrees | subtrees | ancestors")
      ->required()
      ->check(CLI::IsMember({"degrees", "subtrees", "ancestors"}));
  compare->add_option("--vertices", vertices, "vertices per tree")->required();
  compare->add_option("--runs", runs, "independent trees")->required();
  compare->add_option("--seed", seed, "master seed")->required();
  compare->add_option("--kmax", kmax, "largest separately reported degree (degrees)");
  compare->add_option("--max-size", max_size, "largest separately reported tree (subtrees, ancestors)");
  compare->add_option("--k", ancestor_k, "ancestor generation (ancestors)");

  auto* theta = app.add_subcommand("theta", "growth-constant samples against the Gamma law");
  add_common(theta, common, true);
  theta->add_option("--vertices", vertices, "vertices per tree")->required();
  theta->add_option("--samples", samples, "independent trees")->required();
  theta->add_option("--seed", seed, "master seed")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return kExitOk;
    }
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    const WeightFunction w = parse_weight_spec(common.weight);
    const std::string spec = format_weight_spec(w);
    check_tol(tol);

    if (malthus->parsed()) {
      const MalthusResult r = solve_malthus(w, tol);
      out << "lambda_star " << format_real(r.lambda_star) << "\n"
          << "lambda_under " << format_real(r.lambda_under)
          << (r.lambda_under_is_upper_bound ? " (upper bound)" : "") << "\n"
          << "residual " << format_real(r.rho_hat_residual) << "\n";
      return kExitOk;
    }

    if (degdist->parsed()) {
      require_at_least_one(kmax, "--kmax");
      const DegreeDistribution d = degree_dist(w, kmax, tol);
      std::ostringstream csv;
      csv << stamp(common) << "# weight=" << spec << " lambda_star=" << format_real(d.lambda_star) << "\n"
          << "k,mass\n";
      for (std::size_t k = 0; k < d.masses.size(); ++k) csv << k << ',' << format_real(d.masses[k]) << "\n";
      csv << "tail," << format_real(d.tail_mass) << "\n";
      emit(common, out, ".csv", csv.str());
      return kExitOk;
    }

    if (treedist->parsed()) {
      require_at_least_one(max_size, "--max-size");
      const MalthusResult r = solve_malthus(w, tol);
      const TreeDistribution dist = pi_table(w, r.lambda_star, max_size);
      emit(common, out, ".csv", tree_distribution_csv(dist, !common.no_timestamp));
      return kExitOk;
    }

    if (simulate->parsed()) {
      require_at_least_one(vertices, "--vertices");
      require_at_least_one(runs, "--runs");
      const CensusRequest req = census_text.empty() ? CensusRequest{} : parse_census(census_text);
      const bool any_census = req.degrees || req.subtrees || !req.ancestor_ks.empty();
      std::string dumps;
      CensusReport pooled;
      for (std::size_t r = 0; r < runs; ++r) {
        GrowthState state(w, derive_seed(seed, r));
        if (continuous) {
          state.grow_continuous(vertices - 1);
        } else {
          state.grow_discrete(vertices - 1);
        }
        dumps += tree_dump_line(state, spec);
        dumps += '\n';
        if (any_census) merge_into(pooled, census(state, req.subtree_cap, req.ancestor_ks));
      }
      emit(common, out, ".jsonl", dumps);
      const std::string header = stamp(common) + "# weight=" + spec + " vertices=" + std::to_string(vertices) +
                                 " runs=" + std::to_string(runs) + " seed=" + std::to_string(seed) + "\n";
      if (req.degrees) emit(common, out, ".degrees.csv", header + census_degrees_csv(pooled));
      if (req.subtrees) emit(common, out, ".subtrees.csv", header + census_subtrees_csv(pooled));
      if (!req.ancestor_ks.empty()) {
        std::string csv = header + "k,canonical_code,mark,count\n";
        for (std::size_t k : req.ancestor_ks) {
          const std::string part = census_ancestors_csv(pooled, k);
          csv += part.substr(part.find('\n') + 1);
        }
        emit(common, out, ".ancestors.csv", csv);
      }
      return kExitOk;
    }

    if (compare->parsed()) {
      require_at_least_one(vertices, "--vertices");
      require_at_least_one(runs, "--runs");
      require_at_least_one(kmax, "--kmax");
      require_at_least_one(max_size, "--max-size");
      ComparisonReport report;
      if (compare_kind == "degrees") {
        report = compare_degree(w, vertices, runs, seed, kmax);
      } else if (compare_kind == "subtrees") {
        report = compare_subtrees(w, vertices, runs, seed, max_size);
      } else {
        report = compare_ancestors(w, vertices, runs, seed, ancestor_k, max_size);
      }
      emit(common, out, ".csv", comparison_csv(report, !common.no_timestamp));
      emit(common, out, ".json", comparison_json(report, spec, seed, !common.no_timestamp));
      return kExitOk;
    }

    if (theta->parsed()) {
      require_at_least_one(vertices, "--vertices");
      require_at_least_one(samples, "--samples");
      const auto* lin = std::get_if<LinearTail>(&w.tail());
      if (lin == nullptr || !w.prefix().empty())
        throw Error(Errc::parse_error, "theta needs --weight linear:<a>,<b>");
      const ThetaCheck check = gamma_theta_check(lin->a, lin->b, vertices, samples, seed);
      emit(common, out, ".json", theta_json(check, vertices, seed, !common.no_timestamp));
      return kExitOk;
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitNumeric;
  }
  return kExitUsage;
}

}  // namespace patree
