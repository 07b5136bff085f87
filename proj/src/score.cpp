#include "sbic/score.hpp"

#include <cmath>

#include "sbic/errors.hpp"

namespace sbic {

std::strong_ordering compare(const RlctPair& a, const RlctPair& b) {
  if (a.infinite != b.infinite) return a.infinite ? std::strong_ordering::greater : std::strong_ordering::less;
  if (!a.infinite) {
    const int c = cmp(a.threshold, b.threshold);
    if (c != 0) return c < 0 ? std::strong_ordering::less : std::strong_ordering::greater;
  }
  // Equal thresholds: the larger multiplicity is the smaller pair.
  return b.multiplicity <=> a.multiplicity;
}

std::string regime_name(Regime r) {
  switch (r) {
    case Regime::Smooth: return "smooth";
    case Regime::ThreeLeaf: return "three-leaf";
    case Regime::CaseA: return "trivalent-singular-case-A";
    case Regime::CaseB: return "trivalent-singular-case-B";
    case Regime::CaseC: return "trivalent-singular-case-C";
  }
  return "unknown";
}

RlctPair smooth_score(const RootedTree& tree, const ZeroPattern& pattern) {
  if (!pattern.degenerate.empty())
    throw UnsupportedRegime("pattern has degenerate nodes; the smooth formula does not apply");
  const long nv = static_cast<long>(tree.node_count());
  const long ne = static_cast<long>(tree.edge_count());
  const long l2 = static_cast<long>(pattern.l2);
  return {ratio(nv + ne - 2 * l2, 2), 1, true, false};
}

RlctPair three_leaf_score(const RootedTree& tree, const ZeroPattern& pattern) {
  if (tree.leaf_count() != 3) throw InputError("three-leaf formula needs exactly three leaves");
  if (pattern.isolated_edges.size() == tree.edge_count()) {
    RlctPair r{tree.is_inner(tree.root()) ? Rational(2) : ratio(9, 4), 1, true, false};
    return r;
  }
  return {ratio(7 - 2 * static_cast<long>(pattern.l2), 2), 1, true, false};
}

std::vector<Contribution> decompose_contributions(const RootedTree& tree, const ZeroPattern& pattern) {
  if (!is_trivalent(tree)) throw UnsupportedRegime("the component decomposition needs a trivalent tree");
  std::vector<Contribution> out;
  const long n = static_cast<long>(tree.leaf_count());
  out.push_back({"means", ratio(n, 2), tree.all_leaves(), {}, {}});
  for (const auto& s : pattern.smooth_components) {
    const long nv = static_cast<long>(s.nodes.size());
    const long ne = static_cast<long>(s.edges.size());
    const long ni = popcount(s.leaves);
    const long l2 = static_cast<long>(s.degree_two);
    out.push_back({"smooth", ratio(nv + ne - ni - 2 * l2, 2), s.leaves, {}, s.edges});
  }
  for (const auto& t : pattern.zero_components) {
    const long size = static_cast<long>(t.terminals.size());
    const long effective = (t.root_is_inner && size == 3) ? size - 1 : size;
    out.push_back({"zero", ratio(effective, 4), 0, t.terminals, t.edges});
  }
  return out;
}

ScoreReport trivalent_singular_score(const RootedTree& tree, const ZeroPattern& pattern) {
  ScoreReport rep;
  rep.pattern = pattern;
  if (pattern.degenerate.empty()) {
    const auto r = smooth_score(tree, pattern);
    rep.lambda = r.threshold;
    rep.multiplicity = 1;
    rep.regime = Regime::Smooth;
    if (tree.leaf_count() == 3) rep.regime = Regime::ThreeLeaf;
    return rep;
  }
  if (!is_trivalent(tree))
    throw UnsupportedRegime("no closed form for a non-trivalent tree with degenerate nodes");
  if (tree.leaf_count() == 3) {
    const auto r = three_leaf_score(tree, pattern);
    rep.lambda = r.threshold;
    rep.multiplicity = 1;
    rep.regime = Regime::ThreeLeaf;
    return rep;
  }

  const long n = static_cast<long>(tree.leaf_count());
  const Rational base = ratio(3 * n + static_cast<long>(pattern.l2) + 5 * static_cast<long>(pattern.l3), 4);
  const NodeId r = tree.root();
  rep.lambda = base;
  rep.multiplicity = 1;
  rep.regime = Regime::CaseB;
  if (pattern.is_degenerate(r)) {
    std::size_t degenerate_neighbours = 0;
    for (NodeId u : tree.neighbors(r)) degenerate_neighbours += pattern.is_degenerate(u) ? 1 : 0;
    if (degenerate_neighbours == 0) {
      rep.regime = Regime::CaseA;
      rep.lambda = base - ratio(1, 4);
    } else if (degenerate_neighbours < tree.degree(r)) {
      rep.regime = Regime::CaseC;
      rep.multiplicity.reset();
      rep.loglog_known = false;
    }
  }
  return rep;
}

ScoreReport score_pattern(const RootedTree& tree, const ZeroPattern& pattern) {
  ScoreReport rep = trivalent_singular_score(tree, pattern);
  if (is_trivalent(tree)) {
    rep.components = decompose_contributions(tree, pattern);
    Rational total = 0;
    for (const auto& c : rep.components) total += c.value;
    if (total != rep.lambda)
      rep.warnings.push_back("component decomposition sums to " + to_string(total) + ", not " + to_string(rep.lambda));
  }
  const Rational regular = ratio(static_cast<long>(tree.node_count() + tree.edge_count()), 2);
  if (rep.lambda > regular) rep.warnings.push_back("coefficient exceeds half the parameter count");
  if (rep.regime == Regime::CaseC)
    rep.warnings.push_back("root is degenerate with mixed neighbours: log log N coefficient unknown");
  return rep;
}

ScoreReport full_score(const RootedTree& tree, const CountTable& counts, const ScoreConfig& config) {
  if (counts.n != tree.leaf_count()) throw InputError("count table has a different number of leaves than the tree");
  const CovMatrix cov = sample_covariance(counts);
  const double tol = config.tolerance.value_or(default_zero_tolerance(counts));
  auto isolated = isolated_edges(tree, cov, tol);
  auto promotions = promote_isolated_edges(tree, cov, isolated);

  ScoreReport rep = score_pattern(tree, classify_pattern(tree, isolated));
  rep.tolerance = tol;
  rep.sample_size = counts.total.get_d();
  rep.warnings.insert(rep.warnings.begin(), promotions.begin(), promotions.end());

  double empirical = 0.0;
  for (const auto& c : counts.counts) {
    if (c <= 0) continue;
    empirical += c.get_d() * std::log(Rational(c / counts.total).get_d());
  }
  rep.max_loglik = empirical;
  if (config.check_model) {
    A2Config a2cfg;
    a2cfg.seed = config.seed;
    const A2Report a2 = check_A2(counts, tree, a2cfg);
    rep.fit_distance = a2.fit_distance;
    rep.warnings.insert(rep.warnings.end(), a2.warnings.begin(), a2.warnings.end());
    if (!a2.passed()) {
      rep.warnings.push_back("heuristic: A2 violated, coefficient taken from the zero pattern");
      if (!a2.model_consistent && a2.fitted_loglik) {
        rep.max_loglik = a2.fitted_loglik;
        rep.warnings.push_back("maximum log-likelihood taken from the EM fit");
      }
    }
  }
  const double N = rep.sample_size;
  if (rep.multiplicity && N > std::exp(1.0))
    rep.log_evidence = *rep.max_loglik - rep.lambda.get_d() * std::log(N) + (*rep.multiplicity - 1) * std::log(std::log(N));
  return rep;
}

}  // namespace sbic
