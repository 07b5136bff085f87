#include "sbic/polytope.hpp"

#include <algorithm>
#include <set>

#include "sbic/errors.hpp"

namespace sbic {

namespace {

Rational dot(const std::vector<Rational>& a, const std::vector<Rational>& b) {
  Rational s = 0;
  for (std::size_t j = 0; j < a.size(); ++j)
    if (sgn(a[j]) != 0) s += a[j] * b[j];
  return s;
}

std::vector<Rational> minus(const std::vector<Rational>& a, const std::vector<Rational>& b) {
  std::vector<Rational> d(a.size());
  for (std::size_t j = 0; j < a.size(); ++j) d[j] = a[j] - b[j];
  return d;
}

std::size_t affine_rank(const Matrix& points, const std::vector<std::size_t>& subset) {
  if (subset.size() < 2) return 0;
  Matrix diffs;
  for (std::size_t k = 1; k < subset.size(); ++k) diffs.push_back(minus(points[subset[k]], points[subset[0]]));
  return matrix_rank(diffs);
}

std::uint64_t binomial(std::size_t n, std::size_t k) {
  std::uint64_t r = 1;
  for (std::size_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

std::vector<std::size_t> tight_set(const Matrix& points, const Halfspace& h) {
  std::vector<std::size_t> out;
  for (std::size_t k = 0; k < points.size(); ++k)
    if (dot(h.normal, points[k]) == h.offset) out.push_back(k);
  return out;
}

}  // namespace

HullSummary brute_force_hull(const Matrix& points, std::size_t max_subsets) {
  if (points.empty()) throw InputError("hull of an empty point set");
  const std::size_t ambient = points.front().size();
  HullSummary hull;

  Matrix diffs;
  for (std::size_t k = 1; k < points.size(); ++k) diffs.push_back(minus(points[k], points[0]));
  // Coordinates on which the affine hull projects injectively.
  std::vector<std::size_t> coords;
  {
    Matrix work = diffs;
    std::size_t r = 0;
    for (std::size_t c = 0; c < ambient && r < work.size(); ++c) {
      std::size_t p = r;
      while (p < work.size() && sgn(work[p][c]) == 0) ++p;
      if (p == work.size()) continue;
      std::swap(work[p], work[r]);
      for (std::size_t i = 0; i < work.size(); ++i) {
        if (i == r || sgn(work[i][c]) == 0) continue;
        const Rational f = work[i][c] / work[r][c];
        for (std::size_t j = c; j < ambient; ++j) work[i][j] -= f * work[r][j];
      }
      coords.push_back(c);
      ++r;
    }
  }
  const std::size_t D = coords.size();
  hull.dimension = D;
  if (D == 0) return hull;
  if (binomial(points.size(), D) > max_subsets) throw CapacityError("too many subsets for brute-force hull");

  Matrix proj;
  for (const auto& p : points) {
    std::vector<Rational> q;
    for (auto c : coords) q.push_back(p[c]);
    proj.push_back(std::move(q));
  }

  std::set<std::vector<std::size_t>> seen;
  std::vector<std::size_t> idx(D);
  for (std::size_t i = 0; i < D; ++i) idx[i] = i;
  for (;;) {
    Matrix rows;
    for (std::size_t k = 1; k < D; ++k) rows.push_back(minus(proj[idx[k]], proj[idx[0]]));
    const Matrix ns = null_space(rows, D);
    if (ns.size() == 1) {
      std::vector<Rational> normal = ns[0];
      const Rational offset = dot(normal, proj[idx[0]]);
      int side = 0;
      bool ok = true;
      for (const auto& p : proj) {
        const int s = sgn(dot(normal, p) - offset);
        if (s == 0) continue;
        if (side == 0) side = s;
        if (s != side) {
          ok = false;
          break;
        }
      }
      if (ok && side != 0) {
        Halfspace h;
        h.normal.assign(ambient, Rational(0));
        for (std::size_t j = 0; j < D; ++j) h.normal[coords[j]] = side > 0 ? normal[j] : Rational(-normal[j]);
        h.offset = side > 0 ? offset : Rational(-offset);
        auto tight = tight_set(points, h);
        if (seen.insert(tight).second) hull.facets.push_back(std::move(h));
      }
    }
    // Next D-subset in lexicographic order.
    std::size_t i = D;
    while (i > 0 && idx[i - 1] == points.size() - D + i - 1) --i;
    if (i == 0) break;
    ++idx[i - 1];
    for (std::size_t j = i; j < D; ++j) idx[j] = idx[j - 1] + 1;
  }
  return hull;
}

namespace {

std::vector<Halfspace> triangle_inequalities(const RootedTree& tree) {
  std::vector<Halfspace> out;
  for (NodeId v = 0; v < tree.node_count(); ++v) {
    if (tree.is_leaf(v)) continue;
    const auto& inc = tree.incident_edges(v);
    for (std::size_t k = 0; k < inc.size(); ++k) {
      Halfspace h;
      h.normal.assign(tree.edge_count(), Rational(0));
      for (EdgeId e : inc) h.normal[e] = 1;
      h.normal[inc[k]] = -1;
      h.offset = 0;
      const auto& ed = tree.edge(inc[k]);
      h.label = "node " + tree.name(v) + ", against edge " + tree.name(ed.parent) + "->" + tree.name(ed.child);
      out.push_back(std::move(h));
    }
  }
  return out;
}

Rational terminal_sum(const RootedTree& tree, const std::vector<Rational>& x) {
  Rational s = 0;
  for (EdgeId e = 0; e < tree.edge_count(); ++e)
    if (tree.is_terminal(e)) s += x[e];
  return s;
}

}  // namespace

PolytopeReport pair_edge_polytope(const RootedTree& tree, std::size_t hull_leaf_cap) {
  if (!is_trivalent(tree) || tree.leaf_count() < 4)
    throw UnsupportedRegime("the pair-edge polytope check needs a trivalent tree with at least four leaves");
  PolytopeReport rep;
  const std::size_t n = tree.leaf_count();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      std::vector<Rational> x(tree.edge_count(), Rational(0));
      for (EdgeId e : path_edges(tree, tree.leaf(i), tree.leaf(j)).edges) x[e] = 1;
      rep.vertices.push_back(std::move(x));
      rep.pairs.push_back({i, j});
    }
  rep.expected_dimension = 2 * n - 4;
  rep.expected_facets = 3 * (n - 2);

  std::vector<std::size_t> all(rep.vertices.size());
  for (std::size_t k = 0; k < all.size(); ++k) all[k] = k;
  rep.dimension = affine_rank(rep.vertices, all);
  if (rep.dimension != rep.expected_dimension)
    rep.failures.push_back("affine dimension " + std::to_string(rep.dimension) + ", expected " +
                           std::to_string(rep.expected_dimension));

  rep.terminal_sum_ok = std::all_of(rep.vertices.begin(), rep.vertices.end(),
                                    [&](const auto& x) { return terminal_sum(tree, x) == 2; });
  if (!rep.terminal_sum_ok) rep.failures.push_back("a vertex violates the terminal-sum equation");

  rep.claimed = triangle_inequalities(tree);
  rep.inequalities_valid = true;
  rep.inequalities_facets = true;
  std::set<std::vector<std::size_t>> claimed_sets;
  for (const auto& h : rep.claimed) {
    for (const auto& x : rep.vertices)
      if (dot(h.normal, x) < h.offset) {
        rep.inequalities_valid = false;
        rep.failures.push_back("inequality at " + h.label + " is violated");
        break;
      }
    const auto tight = tight_set(rep.vertices, h);
    if (tight.empty() || affine_rank(rep.vertices, tight) + 1 != rep.dimension) {
      rep.inequalities_facets = false;
      rep.failures.push_back("inequality at " + h.label + " is not facet defining");
    }
    claimed_sets.insert(tight);
  }
  if (claimed_sets.size() != rep.claimed.size()) rep.failures.push_back("claimed inequalities define repeated faces");

  if (n <= hull_leaf_cap) {
    const auto hull = brute_force_hull(rep.vertices);
    rep.hull_computed = true;
    rep.facet_count = hull.facets.size();
    std::set<std::vector<std::size_t>> hull_sets;
    for (const auto& h : hull.facets) hull_sets.insert(tight_set(rep.vertices, h));
    rep.facets_match = hull_sets == claimed_sets;
    if (rep.facet_count != rep.expected_facets)
      rep.failures.push_back("hull has " + std::to_string(rep.facet_count) + " facets, expected " +
                             std::to_string(rep.expected_facets));
    if (!rep.facets_match) rep.failures.push_back("hull facets differ from the claimed inequalities");
  }
  return rep;
}

bool satisfies_gamma_equations(const RootedTree& tree, const QDelta& q, const std::vector<Rational>& point) {
  if (point.size() != q.exponents.dimension) return false;
  for (NodeId v : q.y_nodes) {
    Rational rhs = 0;
    for (EdgeId e : tree.incident_edges(v)) {
      const bool towards_parent = v != tree.root() && e == tree.parent_edge(v);
      rhs += towards_parent ? Rational(-point[e]) : point[e];
    }
    if (2 * point[q.y_coordinate(v)] != rhs) return false;
  }
  return terminal_sum(tree, point) == 4;
}

GammaReport gamma_Q_structure_check(const RootedTree& tree, const Degeneracy& delta) {
  if (!is_trivalent(tree) || tree.leaf_count() < 4)
    throw UnsupportedRegime("the structure check needs a trivalent tree with at least four leaves");
  const QDelta q = build_Q_delta(tree, delta);
  const auto inequalities = triangle_inequalities(tree);
  GammaReport rep;
  for (std::size_t k = 0; k < q.exponents.points.size(); ++k) {
    const auto& raw = q.exponents.points[k];
    std::vector<Rational> point(raw.begin(), raw.end());
    const auto [i, j] = q.pairs[k];
    const std::string where = "pair (" + tree.name(tree.leaf(i)) + "," + tree.name(tree.leaf(j)) + ")";
    if (!satisfies_gamma_equations(tree, q, point)) rep.failures.push_back(where + " violates the structure equations");
    std::vector<Rational> x(point.begin(), point.begin() + static_cast<std::ptrdiff_t>(tree.edge_count()));
    for (const auto& h : inequalities)
      if (dot(h.normal, x) < 2 * h.offset) rep.failures.push_back(where + " violates the doubled inequality at " + h.label);
    std::vector<Rational> doubled(tree.edge_count(), Rational(0));
    for (EdgeId e : path_edges(tree, tree.leaf(i), tree.leaf(j)).edges) doubled[e] = 2;
    if (doubled != x) rep.failures.push_back(where + " edge part is not twice the path indicator");
    ++rep.points_checked;
  }
  return rep;
}

}  // namespace sbic
