#include "sbic/covariance.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <numeric>

#include "sbic/em_fit.hpp"
#include "sbic/errors.hpp"

namespace sbic {

CountTable CountTable::from_counts(std::size_t n, SubsetVector<Rational> counts) {
  if (counts.size() != (std::size_t{1} << n)) throw InputError("count vector length does not match 2^n");
  CountTable t;
  t.n = n;
  t.total = 0;
  for (auto& c : counts) {
    if (c < 0) throw InputError("negative count");
    c.canonicalize();
    if (c.get_den() != 1) t.integral = false;
    t.total += c;
  }
  if (t.total <= 0) throw InputError("empty count table");
  t.counts = std::move(counts);
  return t;
}

SubsetVector<Rational> CountTable::proportions() const {
  SubsetVector<Rational> p(counts.size());
  for (std::size_t a = 0; a < counts.size(); ++a) p[a] = counts[a] / total;
  return p;
}

SubsetVector<double> CountTable::proportions_double() const {
  SubsetVector<double> p(counts.size());
  for (std::size_t a = 0; a < counts.size(); ++a) p[a] = Rational(counts[a] / total).get_d();
  return p;
}

CovMatrix covariance_from_probs(const SubsetVector<Rational>& p) {
  const std::size_t n = leaf_count_of(p.size());
  const auto lam = probs_to_lambda(p);
  CovMatrix cov;
  cov.n = n;
  cov.entries.resize(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const std::size_t bi = std::size_t{1} << i, bj = std::size_t{1} << j;
      cov.entries[i * n + j] = lam[bi | bj] - lam[bi] * lam[bj];
    }
  return cov;
}

CovMatrix sample_covariance(const CountTable& counts) {
  if (counts.total <= 0) throw InputError("empty count table");
  return covariance_from_probs(counts.proportions());
}

double default_zero_tolerance(const CountTable& counts) {
  if (!counts.integral) return 1e-8;
  const double n = static_cast<double>(std::max<std::size_t>(counts.n, 2));
  return std::sqrt(std::log(n) / counts.total.get_d());
}

namespace {

std::string short_number(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

// Leaf pairs (i < j) whose path uses each edge.
std::vector<std::vector<std::pair<std::size_t, std::size_t>>> pairs_by_edge(const RootedTree& tree) {
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> out(tree.edge_count());
  for (std::size_t i = 0; i < tree.leaf_count(); ++i)
    for (std::size_t j = i + 1; j < tree.leaf_count(); ++j)
      for (EdgeId e : path_edges(tree, tree.leaf(i), tree.leaf(j)).edges) out[e].push_back({i, j});
  return out;
}

}  // namespace

double edge_support(const RootedTree& tree, const CovMatrix& cov, EdgeId e) {
  double m = 0.0;
  const auto by_edge = pairs_by_edge(tree);
  for (auto [i, j] : by_edge.at(e)) m = std::max(m, std::abs(cov(i, j).get_d()));
  return m;
}

std::vector<EdgeId> isolated_edges(const RootedTree& tree, const CovMatrix& cov, double tol) {
  if (tol < 0) throw InputError("zero tolerance must be nonnegative");
  if (cov.n != tree.leaf_count()) throw InputError("covariance matrix does not match the tree");
  const Rational bound = from_double(tol);
  std::vector<EdgeId> out;
  const auto by_edge = pairs_by_edge(tree);
  for (EdgeId e = 0; e < tree.edge_count(); ++e) {
    bool all_zero = true;
    for (auto [i, j] : by_edge[e]) all_zero = all_zero && abs(cov(i, j)) <= bound;
    if (all_zero) out.push_back(e);
  }
  return out;
}

std::vector<std::string> promote_isolated_edges(const RootedTree& tree, const CovMatrix& cov,
                                                std::vector<EdgeId>& isolated) {
  std::vector<char> is_iso(tree.edge_count(), 0);
  for (EdgeId e : isolated) is_iso.at(e) = 1;
  std::vector<std::string> messages;
  for (;;) {
    std::optional<EdgeId> pick;
    double pick_support = 0.0;
    for (NodeId v = 0; v < tree.node_count(); ++v) {
      if (tree.is_leaf(v)) continue;
      std::vector<EdgeId> live;
      for (EdgeId e : tree.incident_edges(v))
        if (!is_iso[e]) live.push_back(e);
      if (live.size() != 1) continue;
      const double s = edge_support(tree, cov, live[0]);
      if (!pick || s < pick_support || (s == pick_support && live[0] < *pick)) {
        pick = live[0];
        pick_support = s;
      }
    }
    if (!pick) break;
    is_iso[*pick] = 1;
    const auto& ed = tree.edge(*pick);
    messages.push_back("edge " + tree.name(ed.parent) + "->" + tree.name(ed.child) +
                       " promoted to isolated (inner node left with one non-isolated edge; max |cov| = " +
                       short_number(pick_support) + ")");
  }
  isolated.clear();
  for (EdgeId e = 0; e < tree.edge_count(); ++e)
    if (is_iso[e]) isolated.push_back(e);
  return messages;
}

bool ZeroPattern::is_degenerate(NodeId v) const {
  return std::find(degenerate.begin(), degenerate.end(), v) != degenerate.end();
}

ZeroPattern classify_pattern(const RootedTree& tree, const std::vector<EdgeId>& isolated) {
  ZeroPattern z;
  z.isolated.assign(tree.edge_count(), 0);
  for (EdgeId e : isolated) z.isolated.at(e) = 1;
  for (EdgeId e = 0; e < tree.edge_count(); ++e)
    if (z.isolated[e]) z.isolated_edges.push_back(e);

  z.forest_degree.assign(tree.node_count(), 0);
  for (EdgeId e = 0; e < tree.edge_count(); ++e)
    if (!z.isolated[e]) {
      ++z.forest_degree[tree.edge(e).parent];
      ++z.forest_degree[tree.edge(e).child];
    }
  std::vector<char> degenerate(tree.node_count(), 0);
  for (NodeId v = 0; v < tree.node_count(); ++v) {
    const std::size_t d = z.forest_degree[v];
    if (d == 1) ++z.degree_one;
    if (tree.is_leaf(v)) continue;
    if (d == 1) throw InputError("inner node '" + tree.name(v) + "' has exactly one non-isolated edge");
    if (d == 0) {
      degenerate[v] = 1;
      z.degenerate.push_back(v);
      ++z.l1;
    } else if (d == 2) {
      ++z.l2;
    } else if (d == 3) {
      ++z.l3;
    }
  }

  // Both decompositions are unions of edges over shared nodes; the smooth
  // components join at any node, the zero components only at degenerate ones.
  auto group = [&](bool want_isolated, auto joins_at) {
    std::vector<std::size_t> comp(tree.edge_count());
    std::iota(comp.begin(), comp.end(), 0);
    auto find = [&](std::size_t x) {
      while (comp[x] != x) x = comp[x] = comp[comp[x]];
      return x;
    };
    for (NodeId v = 0; v < tree.node_count(); ++v) {
      if (!joins_at(v)) continue;
      std::optional<EdgeId> first;
      for (EdgeId e : tree.incident_edges(v)) {
        if (static_cast<bool>(z.isolated[e]) != want_isolated) continue;
        if (first)
          comp[find(e)] = find(*first);
        else
          first = e;
      }
    }
    std::map<std::size_t, std::vector<EdgeId>> classes;
    for (EdgeId e = 0; e < tree.edge_count(); ++e)
      if (static_cast<bool>(z.isolated[e]) == want_isolated) classes[find(e)].push_back(e);
    std::vector<std::vector<EdgeId>> out;
    for (auto& [k, edges] : classes) out.push_back(std::move(edges));
    return out;
  };
  auto nodes_of = [&](const std::vector<EdgeId>& edges) {
    std::vector<NodeId> nodes;
    for (EdgeId e : edges) {
      nodes.push_back(tree.edge(e).parent);
      nodes.push_back(tree.edge(e).child);
    }
    std::sort(nodes.begin(), nodes.end());
    nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
    return nodes;
  };

  for (auto& edges : group(false, [](NodeId) { return true; })) {
    SmoothComponent s;
    s.nodes = nodes_of(edges);
    s.edges = std::move(edges);
    for (NodeId v : s.nodes) {
      if (tree.is_leaf(v)) s.leaves |= LeafSet{1} << tree.leaf_index(v);
      else if (z.forest_degree[v] == 2) ++s.degree_two;
    }
    z.smooth_components.push_back(std::move(s));
  }
  for (auto& edges : group(true, [&](NodeId v) { return degenerate[v] != 0; })) {
    ZeroComponent t;
    t.nodes = nodes_of(edges);
    t.edges = std::move(edges);
    for (NodeId v : t.nodes) {
      if (!degenerate[v]) t.terminals.push_back(v);
      else if (v == tree.root()) t.root_is_inner = true;
    }
    z.zero_components.push_back(std::move(t));
  }
  return z;
}

A2Report check_A2(const CountTable& counts, const RootedTree& tree, const A2Config& config) {
  if (counts.n != tree.leaf_count()) throw InputError("count table does not match the tree's leaf count");
  A2Report report;
  for (const auto& c : counts.counts)
    if (c <= 0) report.positive = false;
  if (!report.positive) report.warnings.push_back("A2 positivity violated: some pattern has zero count");

  if (is_trivalent(tree) && tree.leaf_count() <= 5) {
    SubsetVector<double> w(counts.counts.size());
    for (std::size_t a = 0; a < w.size(); ++a) w[a] = counts.counts[a].get_d();
    EmConfig em;
    em.restarts = config.restarts;
    em.seed = config.seed;
    const EmResult fit = fit_em(tree, w, em);
    const auto phat = counts.proportions_double();
    double dist = 0.0;
    for (std::size_t a = 0; a < phat.size(); ++a) dist = std::max(dist, std::abs(phat[a] - fit.probs[a]));
    report.membership_checked = true;
    report.fit_distance = dist;
    report.fitted_loglik = fit.loglik;
    report.model_consistent = dist <= config.fit_tolerance;
    if (!report.model_consistent)
      report.warnings.push_back("A2 model membership violated: fitted distance " + short_number(dist));
  }
  return report;
}

}  // namespace sbic
