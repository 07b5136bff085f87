#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "sbic/moments.hpp"
#include "sbic/rational.hpp"
#include "sbic/tree.hpp"

namespace testkit {

using sbic::LeafSet;
using sbic::Rational;
using sbic::RootedTree;
using Rng = std::mt19937_64;
using EdgeList = std::vector<std::pair<std::string, std::string>>;

inline RootedTree quartet() {
  return RootedTree::build("a", {"1", "2", "3", "4"}, {{"a", "1"}, {"a", "2"}, {"a", "b"}, {"b", "3"}, {"b", "4"}});
}

inline RootedTree star3() { return RootedTree::build("h", {"1", "2", "3"}, {{"h", "1"}, {"h", "2"}, {"h", "3"}}); }

inline RootedTree star3_leaf_root() {
  return RootedTree::build("1", {"1", "2", "3"}, {{"1", "h"}, {"h", "2"}, {"h", "3"}});
}

inline RootedTree star4() {
  return RootedTree::build("r", {"1", "2", "3", "4"}, {{"r", "1"}, {"r", "2"}, {"r", "3"}, {"r", "4"}});
}

// Two leaves joined by one edge.
inline RootedTree cherry() { return RootedTree::build("1", {"1", "2"}, {{"1", "2"}}); }

// Leaves 1..n hanging off a path of inner nodes u1..u(n-2), rooted at u1.
inline RootedTree caterpillar(std::size_t n) {
  EdgeList e;
  std::vector<std::string> leaves;
  for (std::size_t i = 1; i <= n; ++i) leaves.push_back(std::to_string(i));
  e.push_back({"u1", "1"});
  e.push_back({"u1", "2"});
  for (std::size_t k = 1; k + 2 < n; ++k) {
    e.push_back({"u" + std::to_string(k), "u" + std::to_string(k + 1)});
    e.push_back({"u" + std::to_string(k + 1), std::to_string(k + 2)});
  }
  e.push_back({"u" + std::to_string(n - 2), std::to_string(n)});
  return RootedTree::build("u1", leaves, e);
}

// Undirected trivalent tree on leaves 1..n (inner nodes u*), grown by
// inserting each new leaf on a uniformly chosen edge.
inline EdgeList random_unrooted_trivalent(std::size_t n, Rng& rng) {
  EdgeList e{{"u1", "1"}, {"u1", "2"}, {"u1", "3"}};
  for (std::size_t leaf = 4; leaf <= n; ++leaf) {
    std::uniform_int_distribution<std::size_t> pick(0, e.size() - 1);
    const auto k = pick(rng);
    const auto [x, y] = e[k];
    const std::string mid = "u" + std::to_string(leaf - 2);
    e[k] = {x, mid};
    e.push_back({mid, y});
    e.push_back({mid, std::to_string(leaf)});
  }
  return e;
}

// Every labelled trivalent tree on leaves 1..n.
inline std::vector<EdgeList> all_unrooted_trivalent(std::size_t n) {
  std::vector<EdgeList> out{{{"u1", "1"}, {"u1", "2"}, {"u1", "3"}}};
  for (std::size_t leaf = 4; leaf <= n; ++leaf) {
    std::vector<EdgeList> next;
    for (const auto& t : out)
      for (std::size_t k = 0; k < t.size(); ++k) {
        auto e = t;
        const auto [x, y] = e[k];
        const std::string mid = "u" + std::to_string(leaf - 2);
        e[k] = {x, mid};
        e.push_back({mid, y});
        e.push_back({mid, std::to_string(leaf)});
        next.push_back(std::move(e));
      }
    out = std::move(next);
  }
  return out;
}

// Orients an undirected edge list away from root.
inline RootedTree root_at(const EdgeList& undirected, const std::string& root, std::size_t n) {
  std::map<std::string, std::vector<std::string>> adj;
  for (const auto& [x, y] : undirected) {
    adj[x].push_back(y);
    adj[y].push_back(x);
  }
  EdgeList directed;
  std::vector<std::string> stack{root};
  std::set<std::string> seen{root};
  while (!stack.empty()) {
    const auto v = stack.back();
    stack.pop_back();
    for (const auto& w : adj[v])
      if (seen.insert(w).second) {
        directed.push_back({v, w});
        stack.push_back(w);
      }
  }
  std::vector<std::string> leaves;
  for (std::size_t i = 1; i <= n; ++i) leaves.push_back(std::to_string(i));
  return RootedTree::build(root, leaves, directed);
}

inline std::vector<std::string> node_names(const EdgeList& e) {
  std::set<std::string> s;
  for (const auto& [x, y] : e) {
    s.insert(x);
    s.insert(y);
  }
  return {s.begin(), s.end()};
}

inline RootedTree random_trivalent(std::size_t n, Rng& rng) {
  const auto e = random_unrooted_trivalent(n, rng);
  const auto nodes = node_names(e);
  std::uniform_int_distribution<std::size_t> pick(0, nodes.size() - 1);
  return root_at(e, nodes[pick(rng)], n);
}

// Rooted unlabelled shape, used to drop isomorphic copies.
inline std::string shape_key(const RootedTree& t) {
  std::function<std::string(sbic::NodeId)> key = [&](sbic::NodeId v) {
    std::vector<std::string> parts;
    for (auto c : t.children(v)) parts.push_back(key(c));
    std::sort(parts.begin(), parts.end());
    std::string s = "(";
    for (const auto& p : parts) s += p;
    return s + ")";
  };
  return key(t.root());
}

// Rooted trivalent trees with n leaves up to isomorphism, every rooting.
inline std::vector<RootedTree> trivalent_shapes(std::size_t n) {
  std::vector<RootedTree> out;
  std::set<std::string> seen;
  for (const auto& e : all_unrooted_trivalent(n))
    for (const auto& r : node_names(e)) {
      auto t = root_at(e, r, n);
      if (seen.insert(shape_key(t)).second) out.push_back(std::move(t));
    }
  return out;
}

// Uniform on {1/q, ..., (q-1)/q} for q drawn from [2, max_den].
inline Rational random_unit_rational(Rng& rng, long max_den = 23) {
  std::uniform_int_distribution<long> den(2, max_den);
  const long q = den(rng);
  std::uniform_int_distribution<long> num(1, q - 1);
  return sbic::ratio(num(rng), q);
}

inline sbic::ThetaPoint<Rational> random_theta(const RootedTree& t, Rng& rng) {
  sbic::ThetaPoint<Rational> th;
  th.root_p1 = random_unit_rational(rng);
  for (std::size_t e = 0; e < t.edge_count(); ++e) {
    Rational a, b;
    do {
      a = random_unit_rational(rng);
      b = random_unit_rational(rng);
    } while (a == b);
    th.p1_given0.push_back(a);
    th.p1_given1.push_back(b);
  }
  return th;
}

// Random rational point of the simplex with 2^n entries, some possibly zero.
inline sbic::SubsetVector<Rational> random_distribution(std::size_t n, Rng& rng) {
  std::uniform_int_distribution<long> w(0, 9);
  sbic::SubsetVector<Rational> p(std::size_t{1} << n);
  Rational total = 0;
  for (auto& x : p) {
    x = w(rng);
    total += x;
  }
  if (total == 0) {
    p[0] = 1;
    total = 1;
  }
  for (auto& x : p) x /= total;
  return p;
}

// Oracles written straight from the definitions.

inline Rational brute_lambda(const sbic::SubsetVector<Rational>& p, LeafSet I) {
  Rational s = 0;
  for (std::size_t a = 0; a < p.size(); ++a)
    if ((a & I) == I) s += p[a];
  return s;
}

inline Rational brute_central(const sbic::SubsetVector<Rational>& p, std::size_t n, LeafSet I) {
  std::vector<Rational> mean(n);
  for (std::size_t i = 0; i < n; ++i) mean[i] = brute_lambda(p, LeafSet{1} << i);
  Rational s = 0;
  for (std::size_t a = 0; a < p.size(); ++a) {
    Rational term = p[a];
    for (std::size_t i = 0; i < n; ++i)
      if (I >> i & 1u) term *= Rational((a >> i) & 1u) - mean[i];
    s += term;
  }
  return s;
}

// Sum over every assignment of the hidden nodes.
inline sbic::SubsetVector<Rational> brute_model_probs(const RootedTree& t, const sbic::ThetaPoint<Rational>& th) {
  std::vector<sbic::NodeId> hidden;
  for (sbic::NodeId v = 0; v < t.node_count(); ++v)
    if (t.is_inner(v)) hidden.push_back(v);
  sbic::SubsetVector<Rational> p(std::size_t{1} << t.leaf_count(), Rational(0));
  std::vector<int> state(t.node_count());
  for (std::size_t a = 0; a < p.size(); ++a)
    for (std::size_t h = 0; h < (std::size_t{1} << hidden.size()); ++h) {
      for (std::size_t i = 0; i < t.leaf_count(); ++i) state[t.leaf(i)] = (a >> i) & 1u;
      for (std::size_t k = 0; k < hidden.size(); ++k) state[hidden[k]] = (h >> k) & 1u;
      Rational w = state[t.root()] ? th.root_p1 : Rational(1 - th.root_p1);
      for (std::size_t e = 0; e < t.edge_count(); ++e) {
        const auto& ed = t.edge(e);
        const Rational p1 = state[ed.parent] ? th.p1_given1[e] : th.p1_given0[e];
        w *= state[ed.child] ? p1 : Rational(1 - p1);
      }
      p[a] += w;
    }
  return p;
}

}  // namespace testkit
