#include "sbic/cli.hpp"

#include <CLI11.hpp>

#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>

#include "sbic/errors.hpp"
#include "sbic/io.hpp"

namespace sbic {

namespace {

struct Options {
  std::string tree, data, theta, exponents, probs, out;
  std::string format = "json";
  std::optional<double> tol;
  std::uint64_t seed = 42;
  std::string grid = "128:32768:2";
  std::size_t samples = 200'000;
  std::string prior = "uniform";
  std::string h;
  std::string estimator = "annealed";
  double slope_tol = 0.2;
  std::size_t drop = 2;
  std::string csv_out;
  std::size_t hull_cap = 6;
  bool no_model_check = false;
  bool serial = false;
  bool quiet = false;
};

void emit(const Options& o, std::ostream& out, const std::string& text) {
  if (o.out.empty())
    out << text;
  else
    write_file(o.out, text);
}

std::string dump(const nlohmann::ordered_json& j) { return j.dump(2) + "\n"; }

std::string csv_double(double x) {
  std::ostringstream os;
  os << std::setprecision(17) << x;
  return os.str();
}

void warn(const Options& o, std::ostream& err, const std::vector<std::string>& warnings) {
  if (o.quiet) return;
  for (const auto& w : warnings) err << "warning: " << w << "\n";
}

int cmd_score(const Options& o, std::ostream& out, std::ostream& err) {
  const auto tree = load_tree(o.tree);
  const auto counts = parse_counts(read_file(o.data), tree.leaf_count());
  ScoreConfig cfg;
  cfg.tolerance = o.tol;
  cfg.seed = o.seed;
  cfg.check_model = !o.no_model_check;
  const auto rep = full_score(tree, counts, cfg);
  warn(o, err, rep.warnings);
  if (o.format == "csv") {
    std::ostringstream os;
    os << "lambda,lambda_float,multiplicity,loglog_known,regime,l1,l2,l3,max_loglik\n"
       << to_string(rep.lambda) << ',' << csv_double(rep.lambda.get_d()) << ','
       << (rep.multiplicity ? std::to_string(*rep.multiplicity) : "") << ',' << (rep.loglog_known ? "true" : "false")
       << ',' << regime_name(rep.regime) << ',' << rep.pattern.l1 << ',' << rep.pattern.l2 << ',' << rep.pattern.l3
       << ',' << (rep.max_loglik ? csv_double(*rep.max_loglik) : "") << "\n";
    emit(o, out, os.str());
  } else {
    emit(o, out, dump(score_json(tree, rep)));
  }
  return kExitOk;
}

int cmd_rlct(const Options& o, std::ostream& out, std::ostream&) {
  auto ex = parse_exponents(read_file(o.exponents));
  if (!o.h.empty()) ex.prior = parse_long_list(o.h);
  const auto res = monomial_rlct(ex);
  if (o.format == "csv") {
    emit(o, out, "threshold,multiplicity\n" + (res.rlct.infinite ? std::string("inf") : to_string(res.rlct.threshold)) +
                     "," + std::to_string(res.rlct.multiplicity) + "\n");
  } else {
    emit(o, out, dump(rlct_json(res.rlct)));
  }
  return kExitOk;
}

int cmd_polytope(const Options& o, std::ostream& out, std::ostream&) {
  const auto tree = load_tree(o.tree);
  const auto rep = pair_edge_polytope(tree, o.hull_cap);
  std::optional<GammaReport> gamma;
  if (tree.leaf_count() <= 8) {
    // Structure equations of Q_delta for every degeneracy vector.
    GammaReport all;
    for (const auto& d : all_degeneracy_vectors(tree)) {
      const auto g = gamma_Q_structure_check(tree, d);
      all.points_checked += g.points_checked;
      all.failures.insert(all.failures.end(), g.failures.begin(), g.failures.end());
    }
    gamma = std::move(all);
  }
  const auto j = polytope_json(tree, rep, gamma ? &*gamma : nullptr);
  if (o.format == "csv") {
    std::ostringstream os;
    os << "verdict,dimension,expected_dimension,facets,expected_facets\n"
       << j["verdict"].get<std::string>() << ',' << rep.dimension << ',' << rep.expected_dimension << ','
       << (rep.hull_computed ? std::to_string(rep.facet_count) : "") << ',' << rep.expected_facets << "\n";
    emit(o, out, os.str());
  } else {
    emit(o, out, dump(j));
  }
  return kExitOk;
}

int cmd_validate(const Options& o, std::ostream& out, std::ostream& err) {
  const auto tree = load_tree(o.tree);
  const auto theta = parse_theta(read_file(o.theta), tree);
  ValidationConfig cfg;
  cfg.grid = parse_grid(o.grid);
  cfg.samples = o.samples;
  cfg.seed = o.seed;
  cfg.prior = Prior::parse(o.prior);
  cfg.estimator = parse_estimator(o.estimator);
  cfg.slope_tolerance = o.slope_tol;
  cfg.drop_smallest = o.drop;
  cfg.parallel = !o.serial;
  const auto rep = validate_tree(tree, theta, cfg);
  warn(o, err, rep.warnings);
  if (!o.csv_out.empty()) write_file(o.csv_out, validation_csv(rep));
  emit(o, out, o.format == "csv" ? validation_csv(rep) : dump(validation_json(rep, cfg)));
  return kExitOk;
}

int cmd_transform(const Options& o, std::ostream& out, std::ostream&) {
  const auto tree = load_tree(o.tree);
  const auto p = parse_probabilities(read_file(o.probs), tree.leaf_count());
  const auto c = tree_cumulants(tree, p);
  if (o.format == "csv") {
    std::ostringstream os;
    os << "leaves,kappa\n";
    for (std::size_t I = 0; I < c.kappa.size(); ++I)
      if (std::popcount(I) >= 2) os << '"' << leaf_set_names(tree, static_cast<LeafSet>(I)) << "\"," << to_string(c.kappa[I]) << "\n";
    emit(o, out, os.str());
  } else {
    emit(o, out, dump(cumulants_json(tree, c)));
  }
  return kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Singular BIC scores, learning coefficients and checks for binary latent tree models", "sbic"};
  app.require_subcommand(1);
  Options o;

  auto add_format = [&](CLI::App* sub) {
    sub->add_option("--format", o.format, "Output format")->check(CLI::IsMember({"json", "csv"}));
    sub->add_option("--out", o.out, "Write the output here instead of stdout");
    sub->add_flag("--quiet", o.quiet, "Suppress warnings on stderr");
  };

  auto* score = app.add_subcommand("score", "Learning coefficient and score of a count table");
  score->add_option("--tree", o.tree, "Tree JSON")->required();
  score->add_option("--data", o.data, "Counts CSV (pattern,count)")->required();
  score->add_option("--tol", o.tol, "Covariance zero threshold");
  score->add_option("--seed", o.seed, "Seed for the EM restarts");
  score->add_flag("--no-model-check", o.no_model_check, "Skip the model membership diagnostic");
  add_format(score);

  auto* rlct = app.add_subcommand("rlct", "Newton-diagram threshold of a sum of squared monomials");
  rlct->add_option("exponents,--exponents", o.exponents, "CSV, one exponent vector per line")->required();
  rlct->add_option("--prior", o.h, "Prior exponents h1,h2,...");
  add_format(rlct);

  auto* poly = app.add_subcommand("polytope", "Pair-edge polytope checks for a trivalent tree");
  poly->add_option("--tree", o.tree, "Tree JSON")->required();
  poly->add_option("--hull-cap", o.hull_cap, "Largest leaf count for the brute-force hull");
  add_format(poly);

  auto* val = app.add_subcommand("validate", "Monte Carlo check of the learning coefficient");
  val->add_option("--tree", o.tree, "Tree JSON")->required();
  val->add_option("--theta", o.theta, "Parameter point JSON")->required();
  val->add_option("--grid", o.grid, "Sample sizes lo:hi:factor");
  val->add_option("--samples", o.samples, "Monte Carlo samples (particles)");
  val->add_option("--seed", o.seed, "Random seed");
  val->add_option("--prior", o.prior, "uniform or beta:a,b");
  val->add_option("--estimator", o.estimator, "annealed or prior")->check(CLI::IsMember({"annealed", "prior"}));
  val->add_option("--slope-tol", o.slope_tol, "Allowed |slope + lambda|");
  val->add_option("--drop", o.drop, "Smallest grid points left out of the regression");
  val->add_option("--csv", o.csv_out, "Also write the N,logI,stderr table here");
  val->add_flag("--serial", o.serial, "Use the single-threaded kernel");
  add_format(val);

  auto* tr = app.add_subcommand("transform", "Tree cumulants of a probability table");
  tr->add_option("--tree", o.tree, "Tree JSON")->required();
  tr->add_option("--probs", o.probs, "CSV (pattern,probability)")->required();
  add_format(tr);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInput;
  }

  try {
    if (score->parsed()) return cmd_score(o, out, err);
    if (rlct->parsed()) return cmd_rlct(o, out, err);
    if (poly->parsed()) return cmd_polytope(o, out, err);
    if (val->parsed()) return cmd_validate(o, out, err);
    return cmd_transform(o, out, err);
  } catch (const UnsupportedRegime& e) {
    err << "unsupported regime: " << e.what() << "\n";
    return kExitUnsupported;
  } catch (const CapacityError& e) {
    err << "unsupported regime: " << e.what() << "\n";
    return kExitUnsupported;
  } catch (const EstimationError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  }
}

}  // namespace sbic
