#include <doctest.h>

#include "sbic/errors.hpp"
#include "sbic/lp.hpp"
#include "sbic/newton.hpp"
#include "sbic/polytope.hpp"
#include "sbic/score.hpp"
#include "support.hpp"

using namespace sbic;
using testkit::quartet;

namespace {

ExponentSet points(std::size_t d, std::vector<std::vector<long>> pts, std::vector<long> h = {}) {
  ExponentSet e;
  e.dimension = d;
  e.points = std::move(pts);
  e.prior = std::move(h);
  return e;
}

Degeneracy delta_for(const RootedTree& t, std::initializer_list<const char*> set) {
  Degeneracy d(t.node_count(), 0);
  for (auto v : set) d[t.node(v)] = 1;
  return d;
}

Degeneracy all_inner(const RootedTree& t) {
  Degeneracy d(t.node_count(), 0);
  for (NodeId v = 0; v < t.node_count(); ++v) d[v] = t.is_inner(v);
  return d;
}

// Two-dimensional oracle: min over convex combinations of the larger coordinate,
// scanning single points and the crossing point of every pair.
Rational brute_tstar_2d(const ExponentSet& e) {
  std::optional<Rational> best;
  auto consider = [&](const Rational& v) {
    if (!best || v < *best) best = v;
  };
  for (const auto& a : e.points) consider(std::max(Rational(a[0]), Rational(a[1])));
  for (const auto& a : e.points)
    for (const auto& b : e.points) {
      // w a + (1 - w) b with equal coordinates
      const Rational da = a[0] - a[1], db = b[0] - b[1];
      if (da == db) continue;
      const Rational w = -db / (da - db);
      if (w < 0 || w > 1) continue;
      consider(w * a[0] + (1 - w) * b[0]);
    }
  return *best;
}

}  // namespace

TEST_CASE("lp: small problems") {
  LinearProgram lp;
  lp.variables = 2;
  lp.objective = {3, 2};
  lp.add_row({1, 1}, Sense::Le, 4);
  lp.add_row({1, 3}, Sense::Le, 6);
  lp.add_row({1, 0}, Sense::Le, 3);
  auto r = solve_lp(lp);
  REQUIRE(r.status == LpStatus::Optimal);
  CHECK(r.value == 11);
  CHECK(r.x == std::vector<Rational>{3, 1});

  LinearProgram eq;
  eq.variables = 2;
  eq.objective = {-1, -1};
  eq.add_row({1, 2}, Sense::Eq, 3);
  eq.add_row({2, 1}, Sense::Ge, 3);
  r = solve_lp(eq);
  REQUIRE(r.status == LpStatus::Optimal);
  CHECK(r.value == -2);

  LinearProgram infeasible;
  infeasible.variables = 1;
  infeasible.objective = {1};
  infeasible.add_row({1}, Sense::Le, 1);
  infeasible.add_row({1}, Sense::Ge, 2);
  CHECK(solve_lp(infeasible).status == LpStatus::Infeasible);

  LinearProgram unbounded;
  unbounded.variables = 2;
  unbounded.objective = {1, 0};
  unbounded.add_row({1, -1}, Sense::Le, 1);
  CHECK(solve_lp(unbounded).status == LpStatus::Unbounded);
}

TEST_CASE("lp: rank and null space") {
  Matrix m{{1, 2, 3}, {2, 4, 6}, {1, 0, 1}};
  CHECK(matrix_rank(m) == 2);
  const auto ns = null_space(m, 3);
  REQUIRE(ns.size() == 1);
  for (const auto& row : m) {
    Rational s = 0;
    for (std::size_t j = 0; j < 3; ++j) s += row[j] * ns[0][j];
    CHECK(s == 0);
  }
}

TEST_CASE("monomial_rlct examples") {
  const auto xyz = points(3, {{2, 0, 0}, {0, 2, 0}, {0, 0, 2}});
  auto r = monomial_rlct(xyz);
  CHECK(r.t_star == ratio(2, 3));
  CHECK(r.rlct.threshold == ratio(3, 2));
  CHECK(r.rlct.multiplicity == 1);
  CHECK(verify_certificates(xyz, r));

  r = monomial_rlct(points(3, {{2, 2, 0}, {2, 0, 2}, {0, 2, 2}}));
  CHECK(r.rlct.threshold == ratio(3, 4));
  CHECK(r.rlct.multiplicity == 1);

  for (long u = 1; u <= 4; ++u)
    for (long h = 0; h <= 3; ++h) {
      r = monomial_rlct(points(1, {{2 * u}}, {h}));
      CHECK(r.rlct.threshold == ratio(1 + h, 2 * u));
      CHECK(r.rlct.multiplicity == 1);
    }

  r = monomial_rlct(points(2, {{0, 0}, {2, 2}}));
  CHECK(r.rlct.infinite);
  CHECK(r.rlct.multiplicity == 2);
  CHECK_THROWS_AS(monomial_rlct(points(2, {})), InputError);
  CHECK_THROWS_AS(monomial_rlct(points(2, {{1, 2}, {3}})), InputError);
  CHECK_THROWS_AS(monomial_rlct(points(2, {{1, -2}})), InputError);
}

TEST_CASE("property: single monomials and axis-aligned sums in closed form") {
  testkit::Rng rng(61);
  std::uniform_int_distribution<std::size_t> dim(1, 5);
  std::uniform_int_distribution<long> u(0, 4), h(0, 3);
  for (int rep = 0; rep < 60; ++rep) {
    const std::size_t d = dim(rng);
    // one monomial: the smallest (1 + h_i) / p_i, ties raise the multiplicity
    ExponentSet single;
    single.dimension = d;
    std::vector<long> p(d);
    for (auto& x : p) x = 2 * u(rng);
    p[0] = std::max(p[0], 2L);
    single.points.push_back(p);
    Rational best = -1;
    int ties = 0;
    for (std::size_t i = 0; i < d; ++i) {
      single.prior.push_back(h(rng));
      if (p[i] == 0) continue;
      const Rational v = ratio(1 + single.prior[i], p[i]);
      if (best < 0 || v < best) {
        best = v;
        ties = 1;
      } else if (v == best) {
        ++ties;
      }
    }
    auto r = monomial_rlct(single);
    CHECK(r.rlct.threshold == best);
    CHECK(r.rlct.multiplicity == ties);
    CHECK(verify_certificates(single, r));

    // x_1^p_1 + ... + x_d^p_d: the coordinates add
    ExponentSet axis;
    axis.dimension = d;
    Rational sum = 0;
    for (std::size_t i = 0; i < d; ++i) {
      std::vector<long> q(d, 0);
      q[i] = 2 * std::max(1L, u(rng));
      axis.prior.push_back(h(rng));
      sum += ratio(1 + axis.prior[i], q[i]);
      axis.points.push_back(std::move(q));
    }
    r = monomial_rlct(axis);
    CHECK(r.rlct.threshold == sum);
    CHECK(r.rlct.multiplicity == 1);
    CHECK(verify_certificates(axis, r));
  }
}

TEST_CASE("property: two-dimensional instances against direct minimisation") {
  testkit::Rng rng(67);
  std::uniform_int_distribution<long> c(0, 6);
  std::uniform_int_distribution<int> k(1, 5);
  for (int rep = 0; rep < 80; ++rep) {
    ExponentSet e;
    e.dimension = 2;
    const int m = k(rng);
    for (int i = 0; i < m; ++i) {
      std::vector<long> p{2 * c(rng), 2 * c(rng)};
      if (p[0] == 0 && p[1] == 0) p[0] = 2;
      e.points.push_back(p);
    }
    const auto r = monomial_rlct(e);
    CHECK(r.t_star == brute_tstar_2d(e));
    CHECK(verify_certificates(e, r));
  }
}

TEST_CASE("property: redundant points and permuted coordinates change nothing") {
  testkit::Rng rng(71);
  std::uniform_int_distribution<long> c(0, 3);
  for (int rep = 0; rep < 30; ++rep) {
    const std::size_t d = 2 + rep % 3;
    ExponentSet e;
    e.dimension = d;
    for (int i = 0; i < 4; ++i) {
      std::vector<long> p(d);
      for (auto& x : p) x = 2 * c(rng);
      if (std::all_of(p.begin(), p.end(), [](long x) { return x == 0; })) p[0] = 2;
      e.points.push_back(p);
    }
    const auto base = monomial_rlct(e).rlct;

    auto bigger = e;
    auto extra = e.points[0];
    for (auto& x : extra) x += c(rng);
    bigger.points.push_back(extra);
    CHECK(monomial_rlct(bigger).rlct == base);

    auto permuted = e;
    std::vector<std::size_t> perm(d);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    for (auto& p : permuted.points) {
      std::vector<long> q(d);
      for (std::size_t j = 0; j < d; ++j) q[j] = p[perm[j]];
      p = q;
    }
    CHECK(monomial_rlct(permuted).rlct == base);
  }
}

TEST_CASE("build_Q_delta examples") {
  const auto s = testkit::star3();
  auto q = build_Q_delta(s, Degeneracy(s.node_count(), 0));
  CHECK(q.exponents.dimension == 3);
  std::set<std::vector<long>> got(q.exponents.points.begin(), q.exponents.points.end());
  CHECK(got == std::set<std::vector<long>>{{2, 2, 0}, {2, 0, 2}, {0, 2, 2}});

  const auto t = quartet();
  q = build_Q_delta(t, delta_for(t, {"a", "b"}));
  CHECK(q.exponents.dimension == 7);
  const auto y_a = q.y_coordinate(t.node("a"));
  for (std::size_t k = 0; k < q.pairs.size(); ++k) {
    if (q.pairs[k] != std::pair<std::size_t, std::size_t>{0, 1}) continue;
    std::vector<long> expect(7, 0);
    expect[t.parent_edge(t.node("1"))] = 2;
    expect[t.parent_edge(t.node("2"))] = 2;
    expect[y_a] = 2;
    CHECK(q.exponents.points[k] == expect);
  }
  for (const auto& p : q.exponents.points) {
    long terminal = 0;
    for (EdgeId e = 0; e < t.edge_count(); ++e)
      if (t.is_terminal(e)) terminal += p[e];
    CHECK(terminal == 4);
  }
}

TEST_CASE("verify_score_via_newton examples") {
  const auto q = quartet();
  auto r = verify_score_via_newton(q, Degeneracy(q.node_count(), 0));
  CHECK(r.threshold == 1);
  CHECK(r.multiplicity == 1);
  const auto cat = testkit::caterpillar(5);
  r = verify_score_via_newton(cat, Degeneracy(cat.node_count(), 0));
  CHECK(r.threshold == ratio(5, 4));
  CHECK(r.multiplicity == 1);
  const auto ch = testkit::cherry();
  r = verify_score_via_newton(ch, Degeneracy(ch.node_count(), 0));
  CHECK(r.threshold == ratio(1, 2));
  CHECK(r.multiplicity == 1);
  CHECK_THROWS(verify_score_via_newton(testkit::star3(), Degeneracy(4, 0)));
}

TEST_CASE("property: n/4 for every degeneracy vector on small shapes") {
  for (std::size_t n = 4; n <= 5; ++n)
    for (const auto& t : testkit::trivalent_shapes(n))
      for (const auto& d : all_degeneracy_vectors(t)) {
        const auto r = verify_score_via_newton(t, d);
        CHECK(r.threshold == ratio(static_cast<long>(n), 4));
        if (multiplicity_one_proven(t, d)) CHECK(r.multiplicity == 1);
      }
}

TEST_CASE("property: all-zero pattern, means plus Newton threshold equals the score") {
  for (std::size_t n = 4; n <= 6; ++n)
    for (const auto& t : testkit::trivalent_shapes(n)) {
      std::vector<EdgeId> all(t.edge_count());
      std::iota(all.begin(), all.end(), 0);
      const auto score = score_pattern(t, classify_pattern(t, all));
      const auto newton = verify_score_via_newton(t, all_inner(t));
      CHECK(ratio(static_cast<long>(n), 2) + newton.threshold == score.lambda);
    }
}

TEST_CASE("path networks") {
  const auto q = quartet();
  auto net = build_path_network(q, delta_for(q, {"a", "b"}));
  CHECK(net.root_variant);
  CHECK(net.path_count == 4);
  // edge coordinates in declared order a1, a2, ab, b3, b4, then y_a, y_b
  CHECK(net.barycenter == std::vector<Rational>{1, 1, 0, 1, 1, 1, 1});

  net = build_path_network(q, delta_for(q, {"b"}));
  CHECK_FALSE(net.root_variant);
  CHECK(net.path_count == 8);
  for (EdgeId e = 0; e < q.edge_count(); ++e) CHECK(net.barycenter[e] == 1);
  CHECK(net.barycenter[5] == ratio(1, 2));

  for (std::size_t n = 4; n <= 6; ++n)
    for (const auto& t : testkit::trivalent_shapes(n))
      for (const auto& d : all_degeneracy_vectors(t)) {
        const auto p = build_path_network(t, d);
        const Rational cap = ratio(4, static_cast<long>(n));
        for (const auto& x : p.barycenter) CHECK(x <= cap);
        CHECK(p.path_count == static_cast<int>(p.root_variant ? n : 2 * n));
        std::vector<int> cover(t.edge_count(), 0);
        for (const auto& [pair, copies] : p.paths)
          for (EdgeId e : path_edges(t, t.leaf(pair.first), t.leaf(pair.second)).edges) cover[e] += copies;
        for (EdgeId e = 0; e < t.edge_count(); ++e)
          if (t.is_terminal(e)) CHECK(cover[e] == (p.root_variant ? 2 : 4));
        const auto qd = build_Q_delta(t, d);
        CHECK(satisfies_gamma_equations(t, qd, p.barycenter));
      }
}

TEST_CASE("principal part nondegeneracy") {
  CHECK(principal_part_nondegenerate(points(3, {{2, 0, 0}, {0, 2, 0}, {0, 0, 2}})));
  const auto q = quartet();
  CHECK(principal_part_nondegenerate(build_Q_delta(q, delta_for(q, {"a"})).exponents));
  CHECK_FALSE(principal_part_nondegenerate(points(2, {{1, 2}})));
  CHECK_THROWS_AS(principal_part_nondegenerate(points(15, {std::vector<long>(15, 2)})), CapacityError);
}
