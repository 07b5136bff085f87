#include "sbic/em_fit.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <random>

namespace sbic {

namespace {

using Pair = std::array<double, 2>;

double cond(const ThetaPoint<double>& th, EdgeId e, int parent_state, int child_state) {
  const double p1 = parent_state ? th.p1_given1[e] : th.p1_given0[e];
  return child_state ? p1 : 1.0 - p1;
}

struct Sufficient {
  double root1 = 0.0;
  std::vector<std::array<double, 4>> edge;  // expected counts of (parent, child) states, index 2*parent+child
};

// One E-step; returns the log-likelihood at the current parameters.
double expectation(const RootedTree& tree, const ThetaPoint<double>& th, const SubsetVector<double>& counts,
                   Sufficient& stats) {
  const std::size_t nv = tree.node_count();
  stats.root1 = 0.0;
  stats.edge.assign(tree.edge_count(), {0, 0, 0, 0});
  std::vector<Pair> evidence(nv), inside(nv), message(nv), outside(nv);
  double loglik = 0.0;

  for (std::size_t alpha = 0; alpha < counts.size(); ++alpha) {
    const double w = counts[alpha];
    if (w <= 0.0) continue;
    for (NodeId v : tree.postorder()) {
      evidence[v] = {1.0, 1.0};
      if (tree.is_leaf(v)) {
        const bool one = alpha >> tree.leaf_index(v) & 1u;
        evidence[v] = {one ? 0.0 : 1.0, one ? 1.0 : 0.0};
      }
      inside[v] = evidence[v];
      for (NodeId c : tree.children(v))
        for (int b = 0; b < 2; ++b) inside[v][b] *= message[c][b];
      if (v != tree.root()) {
        const EdgeId e = tree.parent_edge(v);
        for (int b = 0; b < 2; ++b) message[v][b] = cond(th, e, b, 0) * inside[v][0] + cond(th, e, b, 1) * inside[v][1];
      }
    }
    const NodeId r = tree.root();
    outside[r] = {1.0 - th.root_p1, th.root_p1};
    const double p = outside[r][0] * inside[r][0] + outside[r][1] * inside[r][1];
    if (p <= 0.0) return -std::numeric_limits<double>::infinity();
    loglik += w * std::log(p);
    stats.root1 += w * outside[r][1] * inside[r][1] / p;

    const auto& order = tree.postorder();
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
      const NodeId v = *it;
      for (NodeId c : tree.children(v)) {
        const EdgeId e = tree.parent_edge(c);
        Pair above{};
        for (int b = 0; b < 2; ++b) {
          above[b] = outside[v][b] * evidence[v][b];
          for (NodeId o : tree.children(v))
            if (o != c) above[b] *= message[o][b];
        }
        outside[c] = {0.0, 0.0};
        for (int b = 0; b < 2; ++b)
          for (int d = 0; d < 2; ++d) {
            const double joint = above[b] * cond(th, e, b, d);
            outside[c][d] += joint;
            stats.edge[e][2 * b + d] += w * joint * inside[c][d] / p;
          }
      }
    }
  }
  return loglik;
}

void maximization(const Sufficient& stats, double total, ThetaPoint<double>& th) {
  th.root_p1 = stats.root1 / total;
  for (std::size_t e = 0; e < stats.edge.size(); ++e) {
    const auto& s = stats.edge[e];
    if (s[0] + s[1] > 0.0) th.p1_given0[e] = s[1] / (s[0] + s[1]);
    if (s[2] + s[3] > 0.0) th.p1_given1[e] = s[3] / (s[2] + s[3]);
  }
}

}  // namespace

EmResult fit_em(const RootedTree& tree, const SubsetVector<double>& counts, const EmConfig& config) {
  if (counts.size() != (std::size_t{1} << tree.leaf_count())) throw InputError("count vector does not match the tree");
  double total = 0.0;
  for (double c : counts) total += c;
  if (!(total > 0.0)) throw InputError("empty count table");

  std::mt19937_64 rng(config.seed);
  std::uniform_real_distribution<double> unif(0.05, 0.95);
  EmResult best;
  best.loglik = -std::numeric_limits<double>::infinity();
  Sufficient stats;

  for (std::size_t start = 0; start < std::max<std::size_t>(1, config.restarts); ++start) {
    ThetaPoint<double> th;
    th.root_p1 = unif(rng);
    for (std::size_t e = 0; e < tree.edge_count(); ++e) {
      th.p1_given0.push_back(unif(rng));
      th.p1_given1.push_back(unif(rng));
    }
    double previous = -std::numeric_limits<double>::infinity();
    std::size_t it = 0;
    for (; it < config.max_iterations; ++it) {
      const double ll = expectation(tree, th, counts, stats);
      maximization(stats, total, th);
      if (std::isfinite(previous) && (ll - previous) / total < config.tolerance) break;
      previous = ll;
    }
    const double ll = expectation(tree, th, counts, stats);
    if (ll > best.loglik) {
      best.loglik = ll;
      best.theta = th;
      best.iterations = it;
    }
  }
  best.probs = model_probs(tree, best.theta);
  return best;
}

}  // namespace sbic
