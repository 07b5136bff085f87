#include "sbic/newton.hpp"

#include <algorithm>

#include "sbic/errors.hpp"
#include "sbic/lp.hpp"

namespace sbic {

void ExponentSet::validate() const {
  if (dimension == 0) throw InputError("exponent set has dimension zero");
  if (points.empty()) throw InputError("exponent set is empty");
  for (const auto& p : points) {
    if (p.size() != dimension) throw InputError("ragged exponent rows");
    for (long v : p)
      if (v < 0) throw InputError("negative exponent");
  }
  if (!prior.empty()) {
    if (prior.size() != dimension) throw InputError("prior exponent length differs from the dimension");
    for (long v : prior)
      if (v < 0) throw InputError("negative prior exponent");
  }
}

namespace {

std::vector<Rational> line_direction(const ExponentSet& ex) {
  std::vector<Rational> w(ex.dimension, Rational(1));
  if (!ex.prior.empty())
    for (std::size_t j = 0; j < ex.dimension; ++j) w[j] += ex.prior[j];
  return w;
}

Rational dot(const std::vector<Rational>& c, const std::vector<long>& a) {
  Rational s = 0;
  for (std::size_t j = 0; j < a.size(); ++j)
    if (a[j] != 0) s += c[j] * a[j];
  return s;
}

Rational dot(const std::vector<Rational>& c, const std::vector<Rational>& a) {
  Rational s = 0;
  for (std::size_t j = 0; j < a.size(); ++j) s += c[j] * a[j];
  return s;
}

// Dimension of {c >= 0 : c.(a_k - p) >= 0 for all k}, via implicit equalities.
std::size_t normal_cone_dimension(const ExponentSet& ex, const std::vector<Rational>& p,
                                  const std::vector<Rational>& known_member) {
  const std::size_t d = ex.dimension;
  std::vector<std::vector<Rational>> g;
  for (std::size_t j = 0; j < d; ++j) {
    std::vector<Rational> e(d, Rational(0));
    e[j] = 1;
    g.push_back(std::move(e));
  }
  for (const auto& a : ex.points) {
    std::vector<Rational> row(d);
    for (std::size_t j = 0; j < d; ++j) row[j] = Rational(a[j]) - p[j];
    g.push_back(std::move(row));
  }

  std::vector<char> slack(g.size(), 0);
  auto mark = [&](const std::vector<Rational>& c) {
    for (std::size_t k = 0; k < g.size(); ++k)
      if (sgn(dot(c, g[k])) > 0) slack[k] = 1;
  };
  mark(known_member);

  LinearProgram base;
  base.variables = d;
  for (std::size_t k = d; k < g.size(); ++k) base.add_row(g[k], Sense::Ge, Rational(0));
  base.add_row(std::vector<Rational>(d, Rational(1)), Sense::Le, Rational(1));

  std::vector<std::vector<Rational>> implicit;
  for (std::size_t k = 0; k < g.size(); ++k) {
    if (slack[k]) continue;
    LinearProgram lp = base;
    lp.objective = g[k];
    const auto res = solve_lp(lp);
    if (res.status != LpStatus::Optimal) throw std::logic_error("normal cone LP failed");
    if (sgn(res.value) > 0) {
      mark(res.x);
    } else {
      implicit.push_back(g[k]);
    }
  }
  return d - matrix_rank(implicit);
}

}  // namespace

NewtonResult monomial_rlct(const ExponentSet& ex) {
  ex.validate();
  const std::size_t d = ex.dimension;
  const std::size_t K = ex.points.size();
  const auto w = line_direction(ex);
  NewtonResult out;

  for (const auto& a : ex.points)
    if (std::all_of(a.begin(), a.end(), [](long v) { return v == 0; })) {
      out.rlct.infinite = true;
      out.rlct.multiplicity = static_cast<int>(d);
      out.t_star = 0;
      out.hit_point.assign(d, Rational(0));
      return out;
    }

  // Dual: max u subject to u <= c.a_k, c.w = 1, c >= 0.
  LinearProgram dual;
  dual.variables = d + 1;
  for (const auto& a : ex.points) {
    std::vector<Rational> row(d + 1);
    for (std::size_t j = 0; j < d; ++j) row[j] = -a[j];
    row[d] = 1;
    dual.add_row(std::move(row), Sense::Le, Rational(0));
  }
  {
    std::vector<Rational> row(w);
    row.push_back(0);
    dual.add_row(std::move(row), Sense::Eq, Rational(1));
  }
  dual.objective.assign(d + 1, Rational(0));
  dual.objective[d] = 1;
  const auto dres = solve_lp(dual);
  if (dres.status != LpStatus::Optimal) throw std::logic_error("Newton dual LP did not reach an optimum");

  // Primal: min t subject to sum_k l_k a_k <= t w, sum l = 1.
  LinearProgram primal;
  primal.variables = K + 1;
  for (std::size_t j = 0; j < d; ++j) {
    std::vector<Rational> row(K + 1);
    for (std::size_t k = 0; k < K; ++k) row[k] = ex.points[k][j];
    row[K] = -w[j];
    primal.add_row(std::move(row), Sense::Le, Rational(0));
  }
  {
    std::vector<Rational> row(K + 1, Rational(1));
    row[K] = 0;
    primal.add_row(std::move(row), Sense::Eq, Rational(1));
  }
  primal.objective.assign(K + 1, Rational(0));
  primal.objective[K] = -1;
  const auto pres = solve_lp(primal);
  if (pres.status != LpStatus::Optimal) throw std::logic_error("Newton primal LP did not reach an optimum");

  out.t_star = dres.value;
  if (-pres.value != out.t_star) throw std::logic_error("Newton LP duality gap");
  out.normal.assign(dres.x.begin(), dres.x.begin() + static_cast<std::ptrdiff_t>(d));
  out.convex_weights.assign(pres.x.begin(), pres.x.begin() + static_cast<std::ptrdiff_t>(K));
  out.hit_point.resize(d);
  for (std::size_t j = 0; j < d; ++j) out.hit_point[j] = out.t_star * w[j];

  out.face_codimension = normal_cone_dimension(ex, out.hit_point, out.normal);
  out.rlct.threshold = 1 / out.t_star;
  out.rlct.threshold.canonicalize();
  out.rlct.multiplicity = static_cast<int>(out.face_codimension);
  return out;
}

bool verify_certificates(const ExponentSet& ex, const NewtonResult& r) {
  if (r.rlct.infinite) return true;
  const std::size_t d = ex.dimension;
  const auto w = line_direction(ex);
  // Primal: the hit point dominates a convex combination of the points.
  Rational mass = 0;
  for (const auto& l : r.convex_weights) {
    if (sgn(l) < 0) return false;
    mass += l;
  }
  if (mass != 1) return false;
  for (std::size_t j = 0; j < d; ++j) {
    Rational s = 0;
    for (std::size_t k = 0; k < ex.points.size(); ++k) s += r.convex_weights[k] * ex.points[k][j];
    if (s > r.t_star * w[j]) return false;
  }
  // Dual: c.x >= t_star on the polyhedron while c.(t w) = t, so smaller t misses it.
  for (const auto& c : r.normal)
    if (sgn(c) < 0) return false;
  if (dot(r.normal, w) != 1) return false;
  for (const auto& a : ex.points)
    if (dot(r.normal, a) < r.t_star) return false;
  return true;
}

std::size_t QDelta::y_coordinate(NodeId v) const {
  auto it = std::find(y_nodes.begin(), y_nodes.end(), v);
  if (it == y_nodes.end()) return kNone;
  return exponents.dimension - y_nodes.size() + static_cast<std::size_t>(it - y_nodes.begin());
}

QDelta build_Q_delta(const RootedTree& tree, const Degeneracy& delta) {
  if (delta.size() != tree.node_count()) throw InputError("degeneracy vector does not match the tree");
  QDelta q;
  for (NodeId v = 0; v < tree.node_count(); ++v) {
    if (!delta[v]) continue;
    if (tree.is_leaf(v)) throw InputError("degeneracy vector sets a leaf");
    q.y_nodes.push_back(v);
  }
  const std::size_t ne = tree.edge_count();
  q.exponents.dimension = ne + q.y_nodes.size();
  for (std::size_t i = 0; i < tree.leaf_count(); ++i)
    for (std::size_t j = i + 1; j < tree.leaf_count(); ++j) {
      std::vector<long> point(q.exponents.dimension, 0);
      for (EdgeId e : path_edges(tree, tree.leaf(i), tree.leaf(j)).edges) point[e] = 2;
      const NodeId r = pair_root(tree, i, j);
      if (delta[r]) point[q.y_coordinate(r)] = 2;
      q.exponents.points.push_back(std::move(point));
      q.pairs.push_back({i, j});
    }
  return q;
}

RlctPair verify_score_via_newton(const RootedTree& tree, const Degeneracy& delta) {
  if (tree.leaf_count() == 3) throw InputError("the Newton check excludes three-leaf trees");
  if (tree.leaf_count() > 2 && !is_trivalent(tree)) throw UnsupportedRegime("the Newton check needs a trivalent tree");
  return monomial_rlct(build_Q_delta(tree, delta).exponents).rlct;
}

bool multiplicity_one_proven(const RootedTree& tree, const Degeneracy& delta) {
  const NodeId r = tree.root();
  if (!delta[r]) return true;
  for (NodeId u : tree.neighbors(r))
    if (!delta[u]) return false;
  return true;
}

std::vector<Degeneracy> all_degeneracy_vectors(const RootedTree& tree) {
  std::vector<NodeId> inner;
  for (NodeId v = 0; v < tree.node_count(); ++v)
    if (tree.is_inner(v)) inner.push_back(v);
  if (inner.size() > 20) throw CapacityError("too many inner nodes to enumerate degeneracy vectors");
  std::vector<Degeneracy> out;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << inner.size()); ++mask) {
    Degeneracy d(tree.node_count(), 0);
    for (std::size_t k = 0; k < inner.size(); ++k) d[inner[k]] = static_cast<char>(mask >> k & 1u);
    out.push_back(std::move(d));
  }
  return out;
}

namespace {

// Children of v seen from the core, sorted by name.
std::vector<NodeId> outward(const RootedTree& tree, NodeId v, NodeId towards_core) {
  std::vector<NodeId> out;
  for (NodeId u : tree.neighbors(v))
    if (u != towards_core) out.push_back(u);
  std::sort(out.begin(), out.end(), [&](NodeId a, NodeId b) { return tree.name(a) < tree.name(b); });
  return out;
}

NodeId first_inner_by_name(const RootedTree& tree, const std::vector<NodeId>& candidates) {
  NodeId best = kNone;
  for (NodeId u : candidates)
    if (tree.is_inner(u) && (best == kNone || tree.name(u) < tree.name(best))) best = u;
  return best;
}

}  // namespace

PathNetwork build_path_network(const RootedTree& tree, const Degeneracy& delta) {
  if (!is_trivalent(tree) || tree.leaf_count() < 4)
    throw UnsupportedRegime("path networks need a trivalent tree with at least four leaves");
  if (delta.size() != tree.node_count()) throw InputError("degeneracy vector does not match the tree");

  PathNetwork net;
  const NodeId r = tree.root();
  net.root_variant = delta[r] != 0;
  NodeId a = r;
  if (tree.is_leaf(r)) a = tree.neighbors(r).front();
  NodeId b = first_inner_by_name(tree, tree.neighbors(a));
  net.core = {a, b};

  // Paths as endpoint pairs; each entry is one copy.
  std::vector<std::pair<NodeId, NodeId>> paths;
  const auto side_a = outward(tree, a, b);
  const auto side_b = outward(tree, b, a);
  if (net.root_variant) {
    for (int k = 0; k < 2; ++k) {
      paths.push_back({side_a[0], side_a[1]});
      paths.push_back({side_b[0], side_b[1]});
    }
  } else {
    std::vector<NodeId> quartet{side_a[0], side_a[1], side_b[0], side_b[1]};
    for (std::size_t i = 0; i < 4; ++i)
      for (std::size_t j = i + 1; j < 4; ++j) paths.push_back({quartet[i], quartet[j]});
    paths.push_back({side_a[0], side_a[1]});
    paths.push_back({side_b[0], side_b[1]});
  }

  // Frontier nodes with the neighbour they were reached from.
  std::vector<std::pair<NodeId, NodeId>> frontier;
  for (NodeId u : side_a) frontier.push_back({u, a});
  for (NodeId u : side_b) frontier.push_back({u, b});
  for (;;) {
    auto pick = frontier.end();
    for (auto it = frontier.begin(); it != frontier.end(); ++it)
      if (tree.is_inner(it->first) && (pick == frontier.end() || tree.name(it->first) < tree.name(pick->first)))
        pick = it;
    if (pick == frontier.end()) break;
    const auto [v, from] = *pick;
    frontier.erase(pick);
    const auto kids = outward(tree, v, from);
    std::size_t turn = 0;
    for (auto& p : paths) {
      if (p.first == v) p.first = kids[turn++ % 2];
      if (p.second == v) p.second = kids[turn++ % 2];
    }
    const int cherries = net.root_variant ? 1 : 2;
    for (int k = 0; k < cherries; ++k) paths.push_back({kids[0], kids[1]});
    for (NodeId c : kids) frontier.push_back({c, v});
  }

  const QDelta q = build_Q_delta(tree, delta);
  net.barycenter.assign(q.exponents.dimension, Rational(0));
  for (auto [u, w] : paths) {
    std::size_t i = tree.leaf_index(u), j = tree.leaf_index(w);
    if (i > j) std::swap(i, j);
    ++net.paths[{i, j}];
    ++net.path_count;
    const auto it = std::find(q.pairs.begin(), q.pairs.end(), std::make_pair(i, j));
    const auto& point = q.exponents.points[static_cast<std::size_t>(it - q.pairs.begin())];
    for (std::size_t k = 0; k < point.size(); ++k) net.barycenter[k] += point[k];
  }
  for (auto& x : net.barycenter) x /= net.path_count;
  return net;
}

bool principal_part_nondegenerate(const ExponentSet& ex, std::size_t max_dimension) {
  ex.validate();
  if (ex.dimension > max_dimension) throw CapacityError("dimension above the face-enumeration cap");
  // Each compact face of a sum of squared monomials restricts to another such
  // sum, which has no zero with every coordinate nonzero.
  for (const auto& p : ex.points)
    for (long v : p)
      if (v % 2 != 0) return false;
  return true;
}

}  // namespace sbic
