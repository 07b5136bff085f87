#include <doctest.h>

#include <cmath>

#include "sbic/errors.hpp"
#include "sbic/score.hpp"
#include "support.hpp"

using namespace sbic;
using testkit::quartet;

namespace {

std::vector<EdgeId> all_edges(const RootedTree& t) {
  std::vector<EdgeId> e(t.edge_count());
  for (std::size_t k = 0; k < e.size(); ++k) e[k] = k;
  return e;
}

Rational regular_half(const RootedTree& t) { return ratio(static_cast<long>(t.node_count() + t.edge_count()), 2); }

std::vector<EdgeId> random_subset(const RootedTree& t, testkit::Rng& rng) {
  std::vector<EdgeId> iso;
  std::uniform_int_distribution<int> coin(0, 1);
  for (EdgeId e = 0; e < t.edge_count(); ++e)
    if (coin(rng)) iso.push_back(e);
  return iso;
}

std::optional<ZeroPattern> try_classify(const RootedTree& t, const std::vector<EdgeId>& iso) {
  try {
    return classify_pattern(t, iso);
  } catch (const InputError&) {
    return std::nullopt;
  }
}

}  // namespace

TEST_CASE("smooth_score examples") {
  const auto q = quartet();
  auto r = smooth_score(q, classify_pattern(q, {}));
  CHECK(r.threshold == ratio(11, 2));
  CHECK(r.multiplicity == 1);
  const auto s = testkit::star3();
  CHECK(smooth_score(s, classify_pattern(s, {})).threshold == ratio(7, 2));
  CHECK(smooth_score(s, classify_pattern(s, {2})).threshold == ratio(5, 2));
  CHECK_THROWS_AS(smooth_score(q, classify_pattern(q, all_edges(q))), UnsupportedRegime);
}

TEST_CASE("trivalent_singular_score examples") {
  const auto s = testkit::star3();
  auto r = trivalent_singular_score(s, classify_pattern(s, all_edges(s)));
  CHECK(r.lambda == 2);
  CHECK(r.multiplicity == 1);

  const auto q = quartet();
  r = trivalent_singular_score(q, classify_pattern(q, all_edges(q)));
  CHECK(r.lambda == 3);
  CHECK(r.regime == Regime::CaseC);
  CHECK_FALSE(r.multiplicity.has_value());
  CHECK_FALSE(r.loglog_known);

  const auto leaf_rooted = testkit::root_at({{"a", "1"}, {"a", "2"}, {"a", "b"}, {"b", "3"}, {"b", "4"}}, "1", 4);
  r = trivalent_singular_score(leaf_rooted, classify_pattern(leaf_rooted, all_edges(leaf_rooted)));
  CHECK(r.lambda == 3);
  CHECK(r.regime == Regime::CaseB);
  CHECK(r.multiplicity == 1);
  CHECK(r.loglog_known);
}

TEST_CASE("case A: degenerate root with non-degenerate neighbours") {
  // every edge at the root isolated, each neighbour keeps its cherry
  const auto big = RootedTree::build(
      "r", {"1", "2", "3", "4", "5", "6"},
      {{"r", "x"}, {"r", "y"}, {"r", "z"}, {"x", "1"}, {"x", "2"}, {"y", "3"}, {"y", "4"}, {"z", "5"}, {"z", "6"}});
  std::vector<EdgeId> iso;
  for (auto c : {"x", "y", "z"}) iso.push_back(big.parent_edge(big.node(c)));
  std::sort(iso.begin(), iso.end());
  const auto z = classify_pattern(big, iso);
  CHECK(z.l1 == 1);
  CHECK(z.l2 == 3);
  const auto r = score_pattern(big, z);
  CHECK(r.regime == Regime::CaseA);
  CHECK(r.lambda == ratio(3 * 6 + 3 - 1, 4));
  CHECK(r.multiplicity == 1);
}

TEST_CASE("three_leaf_score golden values") {
  const auto s = testkit::star3();
  CHECK(three_leaf_score(s, classify_pattern(s, all_edges(s))).threshold == 2);
  CHECK(three_leaf_score(s, classify_pattern(s, {0})).threshold == ratio(5, 2));
  CHECK(three_leaf_score(s, classify_pattern(s, {})).threshold == ratio(7, 2));
  const auto l = testkit::star3_leaf_root();
  CHECK(three_leaf_score(l, classify_pattern(l, all_edges(l))).threshold == ratio(9, 4));
  CHECK(three_leaf_score(l, classify_pattern(l, {})).threshold == ratio(7, 2));
}

TEST_CASE("decompose_contributions examples") {
  const auto q = quartet();
  auto parts = decompose_contributions(q, classify_pattern(q, {}));
  REQUIRE(parts.size() == 2);
  CHECK(parts[0].kind == "means");
  CHECK(parts[0].value == 2);
  CHECK(parts[1].kind == "smooth");
  CHECK(parts[0].value + parts[1].value == ratio(11, 2));

  parts = decompose_contributions(q, classify_pattern(q, all_edges(q)));
  REQUIRE(parts.size() == 2);
  CHECK(parts[1].kind == "zero");
  CHECK(parts[1].value == 1);

  std::vector<EdgeId> iso;
  for (auto c : {"b", "3", "4"}) iso.push_back(q.parent_edge(q.node(c)));
  std::sort(iso.begin(), iso.end());
  const auto z = classify_pattern(q, iso);
  parts = decompose_contributions(q, z);
  Rational total = 0;
  int smooth = 0, zero = 0;
  for (const auto& p : parts) {
    total += p.value;
    smooth += p.kind == "smooth";
    zero += p.kind == "zero";
  }
  CHECK(smooth == 1);
  CHECK(zero == 1);
  CHECK(total == score_pattern(q, z).lambda);
  CHECK(total == ratio(13, 4));
}

TEST_CASE("property: smooth and singular formulas agree without degenerate nodes") {
  testkit::Rng rng(41);
  int checked = 0;
  while (checked < 150) {
    std::uniform_int_distribution<std::size_t> size(4, 8);
    const auto t = testkit::random_trivalent(size(rng), rng);
    const auto z = try_classify(t, random_subset(t, rng));
    if (!z || z->l1 != 0) continue;
    ++checked;
    const long n = static_cast<long>(t.leaf_count());
    const long l2 = static_cast<long>(z->l2);
    const long l3 = static_cast<long>(t.inner_count()) - l2;
    const Rational smooth = ratio(static_cast<long>(t.node_count() + t.edge_count()) - 2 * l2, 2);
    const Rational singular = ratio(3 * n + l2 + 5 * l3, 4);
    CHECK(smooth == singular);
    CHECK(smooth == ratio(4 * n - 5 - 2 * l2, 2));
    CHECK(score_pattern(t, *z).lambda == smooth);
  }
}

TEST_CASE("property: decomposition totals and regular bound") {
  testkit::Rng rng(43);
  int checked = 0;
  while (checked < 200) {
    std::uniform_int_distribution<std::size_t> size(3, 8);
    const auto t = testkit::random_trivalent(size(rng), rng);
    const auto z = try_classify(t, random_subset(t, rng));
    if (!z) continue;
    ++checked;
    const auto r = score_pattern(t, *z);
    CHECK(r.lambda <= regular_half(t));
    if (t.leaf_count() == 3) continue;
    Rational total = 0;
    for (const auto& c : decompose_contributions(t, *z)) total += c.value;
    CHECK(total == r.lambda);
    for (const auto& w : r.warnings) CHECK(w.find("decomposition") == std::string::npos);
  }
}

TEST_CASE("property: coarsening the pattern never increases lambda") {
  testkit::Rng rng(47);
  int checked = 0;
  while (checked < 150) {
    std::uniform_int_distribution<std::size_t> size(3, 7);
    const auto t = testkit::random_trivalent(size(rng), rng);
    const auto fine = random_subset(t, rng);
    auto coarse = fine;
    for (auto e : random_subset(t, rng)) coarse.push_back(e);
    std::sort(coarse.begin(), coarse.end());
    coarse.erase(std::unique(coarse.begin(), coarse.end()), coarse.end());
    const auto zf = try_classify(t, fine);
    const auto zc = try_classify(t, coarse);
    if (!zf || !zc) continue;
    ++checked;
    CHECK(score_pattern(t, *zc).lambda <= score_pattern(t, *zf).lambda);
  }
}

TEST_CASE("property: all-zero pattern on every small trivalent shape") {
  for (std::size_t n = 4; n <= 6; ++n)
    for (const auto& t : testkit::trivalent_shapes(n)) {
      const auto r = score_pattern(t, classify_pattern(t, all_edges(t)));
      const Rational base = ratio(3 * static_cast<long>(n), 4);
      // n/2 for the means plus n/4, less 1/4 in case A
      CHECK(r.lambda <= base);
      CHECK(r.lambda >= base - ratio(1, 4));
      CHECK(r.lambda < regular_half(t));
    }
}

TEST_CASE("RlctPair order") {
  auto pair = [](Rational t, int m) {
    RlctPair p;
    p.threshold = t;
    p.multiplicity = m;
    return p;
  };
  CHECK(pair(1, 1) < pair(2, 1));
  CHECK(pair(1, 2) < pair(1, 1));
  CHECK(pair(ratio(3, 2), 1) == pair(ratio(3, 2), 1));
  testkit::Rng rng(3);
  std::vector<RlctPair> v;
  std::uniform_int_distribution<int> m(1, 3), t(1, 4);
  for (int k = 0; k < 30; ++k) v.push_back(pair(ratio(t(rng), 2), m(rng)));
  for (const auto& a : v)
    for (const auto& b : v) {
      const int relations = (a < b) + (b < a) + (a == b);
      CHECK(relations == 1);
      for (const auto& c : v)
        if (a < b && b < c) CHECK(a < c);
    }
}

TEST_CASE("full_score pipeline") {
  const auto q = quartet();
  testkit::Rng rng(50);
  const auto p = model_probs(q, testkit::random_theta(q, rng));
  SubsetVector<Rational> c(p.size());
  for (std::size_t a = 0; a < p.size(); ++a) c[a] = 4001 * p[a];
  const auto r = full_score(q, CountTable::from_counts(4, c));
  CHECK(r.lambda == ratio(11, 2));
  CHECK(r.multiplicity == 1);
  double loglik = 0;
  for (std::size_t a = 0; a < p.size(); ++a)
    if (p[a] > 0) loglik += c[a].get_d() * std::log(p[a].get_d());
  REQUIRE(r.max_loglik.has_value());
  CHECK(*r.max_loglik == doctest::Approx(loglik).epsilon(1e-10));
  REQUIRE(r.log_evidence.has_value());
  CHECK(*r.log_evidence == doctest::Approx(loglik - 5.5 * std::log(4001.0)).epsilon(1e-10));

  const auto s = testkit::star3();
  const auto uniform = CountTable::from_counts(3, SubsetVector<Rational>(8, Rational(125)));
  CHECK(full_score(s, uniform).lambda == 2);

  const auto star4_uniform = CountTable::from_counts(4, SubsetVector<Rational>(16, Rational(10)));
  CHECK_THROWS_AS(full_score(testkit::star4(), star4_uniform), UnsupportedRegime);
}

TEST_CASE("full_score tags violated model membership") {
  const auto q = quartet();
  testkit::Rng rng(51);
  const auto p = model_probs(q, testkit::random_theta(q, rng));
  SubsetVector<Rational> c(16);
  for (std::size_t a = 0; a < 16; ++a) c[a] = 1000 * (p[a] + (a % 2 ? ratio(1, 1000) : ratio(-1, 1000)));
  const auto r = full_score(q, CountTable::from_counts(4, c));
  bool tagged = false;
  for (const auto& w : r.warnings) tagged = tagged || w.find("heuristic") != std::string::npos;
  CHECK(tagged);
  CHECK(r.lambda == ratio(11, 2));
}
