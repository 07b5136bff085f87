#include "sbic/laplace.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "sbic/errors.hpp"
#include "sbic/score.hpp"

namespace sbic {

TreeObjective::TreeObjective(const RootedTree& tree, const SubsetVector<double>& phat) {
  if (phat.size() != (std::size_t{1} << tree.leaf_count())) throw InputError("distribution does not match the tree");
  const auto& order = tree.postorder();
  std::vector<std::size_t> pos(tree.node_count());
  for (std::size_t k = 0; k < order.size(); ++k) pos[order[k]] = k;
  for (NodeId v : order) {
    parent_pos_.push_back(v == tree.root() ? kNone : pos[tree.parent(v)]);
    edge_.push_back(v == tree.root() ? kNone : tree.parent_edge(v));
    leaf_bit_.push_back(tree.is_leaf(v) ? static_cast<int>(tree.leaf_index(v)) : -1);
  }
  double total = 0.0;
  for (double x : phat) {
    if (!(x >= 0.0)) throw InputError("distribution has a negative entry");
    total += x;
  }
  if (std::abs(total - 1.0) > 1e-9) throw InputError("distribution does not sum to one");
  for (std::size_t a = 0; a < phat.size(); ++a)
    if (phat[a] > 0.0) {
      support_.push_back(a);
      weight_.push_back(phat[a]);
      negentropy_ += phat[a] * std::log(phat[a]);
    }
}

double TreeObjective::evaluate(const double* theta, double* scratch) const {
  const std::size_t nv = parent_pos_.size();
  double* l0 = scratch;
  double* l1 = scratch + nv;
  double cross = 0.0;
  for (std::size_t s = 0; s < support_.size(); ++s) {
    const std::size_t alpha = support_[s];
    for (std::size_t k = 0; k < nv; ++k) {
      if (leaf_bit_[k] < 0) {
        l0[k] = l1[k] = 1.0;
      } else {
        const bool one = alpha >> leaf_bit_[k] & 1u;
        l0[k] = one ? 0.0 : 1.0;
        l1[k] = one ? 1.0 : 0.0;
      }
    }
    for (std::size_t k = 0; k + 1 < nv; ++k) {
      const double a = theta[1 + 2 * edge_[k]];
      const double b = theta[2 + 2 * edge_[k]];
      const std::size_t p = parent_pos_[k];
      l0[p] *= (1.0 - a) * l0[k] + a * l1[k];
      l1[p] *= (1.0 - b) * l0[k] + b * l1[k];
    }
    const double prob = (1.0 - theta[0]) * l0[nv - 1] + theta[0] * l1[nv - 1];
    if (!(prob > 0.0)) return std::numeric_limits<double>::infinity();
    cross += weight_[s] * std::log(prob);
  }
  return negentropy_ - cross;
}

BernoulliObjective::BernoulliObjective(double q) : q_(q) {
  if (!(q > 0.0 && q < 1.0)) throw InputError("Bernoulli proportion must lie strictly between 0 and 1");
}

double BernoulliObjective::evaluate(const double* theta, double*) const {
  const double t = theta[0];
  if (!(t > 0.0 && t < 1.0)) return std::numeric_limits<double>::infinity();
  return q_ * std::log(q_ / t) + (1.0 - q_) * std::log((1.0 - q_) / (1.0 - t));
}

double bernoulli_log_integral(double n1, double n0) {
  const double n = n1 + n0;
  const double log_beta = std::lgamma(n1 + 1.0) + std::lgamma(n0 + 1.0) - std::lgamma(n + 2.0);
  const double q = n1 / n;
  double max_loglik = 0.0;
  if (n1 > 0) max_loglik += n1 * std::log(q);
  if (n0 > 0) max_loglik += n0 * std::log(1.0 - q);
  return log_beta - max_loglik;
}

Prior Prior::parse(const std::string& text) {
  if (text == "uniform") return {};
  if (text.rfind("beta:", 0) == 0) {
    const auto body = text.substr(5);
    const auto comma = body.find(',');
    if (comma == std::string::npos) throw InputError("beta prior needs two parameters, as in beta:2,2");
    Prior p;
    try {
      std::size_t used = 0;
      p.a = std::stod(body.substr(0, comma), &used);
      if (used != comma) throw InputError("");
      const auto rest = body.substr(comma + 1);
      p.b = std::stod(rest, &used);
      if (used != rest.size()) throw InputError("");
    } catch (const std::exception&) {
      throw InputError("malformed beta prior '" + text + "'");
    }
    if (!(p.a >= 1.0 && p.b >= 1.0)) throw InputError("beta prior parameters must be at least 1");
    return p;
  }
  throw InputError("unknown prior '" + text + "' (expected uniform or beta:a,b)");
}

std::string Prior::describe() const {
  if (uniform()) return "uniform";
  std::ostringstream os;
  os << "beta:" << a << "," << b;
  return os.str();
}

Estimator parse_estimator(const std::string& text) {
  if (text == "annealed") return Estimator::Annealed;
  if (text == "prior") return Estimator::PriorSampling;
  throw InputError("unknown estimator '" + text + "' (expected annealed or prior)");
}

std::string estimator_name(Estimator e) { return e == Estimator::Annealed ? "annealed" : "prior"; }

void ValidationConfig::validate() const {
  if (grid.empty()) throw InputError("empty sample-size grid");
  for (std::size_t k = 0; k < grid.size(); ++k) {
    if (!(grid[k] > 0.0) || !std::isfinite(grid[k])) throw InputError("grid values must be positive");
    if (k > 0 && !(grid[k] > grid[k - 1])) throw InputError("grid must be strictly increasing");
  }
  if (samples < 2) throw InputError("need at least two samples");
  if (chunk_size < 2) throw InputError("chunk size must be at least two");
  if (!(ladder_ratio > 1.0)) throw InputError("ladder ratio must exceed one");
  if (!(ladder_start > 0.0)) throw InputError("ladder start must be positive");
  if (!(prior.a >= 1.0 && prior.b >= 1.0)) throw InputError("beta prior parameters must be at least 1");
}

std::vector<std::string> ValidationConfig::warnings() const {
  std::vector<std::string> w;
  if (samples < 10'000) w.push_back("samples below minimum (10000); estimates will be noisy");
  return w;
}

std::vector<double> parse_grid(const std::string& text) {
  double lo = 0, hi = 0, factor = 0;
  char c1 = 0, c2 = 0;
  std::istringstream is(text);
  if (!(is >> lo >> c1 >> hi >> c2 >> factor) || c1 != ':' || c2 != ':' || !(is >> std::ws).eof())
    throw InputError("malformed grid '" + text + "' (expected lo:hi:factor)");
  if (!(lo > 0.0) || !(hi >= lo) || !(factor > 1.0)) throw InputError("grid needs 0 < lo <= hi and factor > 1");
  std::vector<double> grid;
  for (double n = lo; n <= hi * (1.0 + 1e-12); n *= factor) grid.push_back(n);
  return grid;
}

RegressionResult slope_regression(const std::vector<double>& n, const std::vector<double>& log_integral) {
  if (n.size() != log_integral.size()) throw InputError("regression inputs differ in length");
  if (n.size() < 4) throw InputError("slope regression needs at least four points");
  const std::size_t m = n.size();
  double sx = 0, sy = 0;
  for (std::size_t k = 0; k < m; ++k) {
    sx += std::log(n[k]);
    sy += log_integral[k];
  }
  const double mx = sx / m, my = sy / m;
  double sxx = 0, sxy = 0;
  for (std::size_t k = 0; k < m; ++k) {
    const double dx = std::log(n[k]) - mx;
    sxx += dx * dx;
    sxy += dx * (log_integral[k] - my);
  }
  if (!(sxx > 0)) throw InputError("regression needs distinct sample sizes");
  RegressionResult r;
  r.slope = sxy / sxx;
  r.intercept = my - r.slope * mx;
  double rss = 0;
  for (std::size_t k = 0; k < m; ++k) {
    const double e = log_integral[k] - (r.intercept + r.slope * std::log(n[k]));
    rss += e * e;
  }
  r.slope_se = std::sqrt(rss / static_cast<double>(m - 2) / sxx);
  r.points_used = m;
  return r;
}

CountTable make_fiber_data(const RootedTree& tree, const ThetaPoint<Rational>& theta0, const Rational& n) {
  if (n <= 0) throw InputError("sample size must be positive");
  auto p = model_probs(tree, theta0);
  for (auto& x : p) x *= n;
  return CountTable::from_counts(tree.leaf_count(), std::move(p));
}

ValidationReport validate_tree(const RootedTree& tree, const ThetaPoint<Rational>& theta0,
                               const ValidationConfig& config) {
  config.validate();
  ValidationReport rep;
  rep.warnings = config.warnings();

  const Rational largest = from_double(config.grid.back());
  const CountTable counts = make_fiber_data(tree, theta0, largest);
  ScoreConfig sc;
  sc.tolerance = 1e-8;
  sc.check_model = false;
  const ScoreReport score = full_score(tree, counts, sc);
  rep.expected_lambda = score.lambda;
  rep.regime = regime_name(score.regime);
  rep.warnings.insert(rep.warnings.end(), score.warnings.begin(), score.warnings.end());

  TreeObjective objective(tree, counts.proportions_double());
  rep.estimates = mc_laplace(objective, config);
  for (const auto& e : rep.estimates)
    if (e.ess < 100.0) {
      rep.warnings.push_back("low effective sample size at N=" + std::to_string(static_cast<long long>(e.n)));
      break;
    }

  std::vector<double> ns, ls;
  for (std::size_t k = std::min(config.drop_smallest, rep.estimates.size()); k < rep.estimates.size(); ++k) {
    ns.push_back(rep.estimates[k].n);
    ls.push_back(rep.estimates[k].log_integral);
  }
  rep.regression = slope_regression(ns, ls);
  rep.pass = std::abs(rep.regression.slope + score.lambda.get_d()) <= config.slope_tolerance;
  return rep;
}

}  // namespace sbic
