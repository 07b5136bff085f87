#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "sbic/errors.hpp"
#include "sbic/partition_poset.hpp"
#include "sbic/rational.hpp"
#include "sbic/tree.hpp"

namespace sbic {

// Dense vectors over {0,1}^n (or subsets of [n]) indexed by bitmask, bit i =
// leaf i. Probabilities p, raw moments lambda and central moments mu all use
// this layout.
template <class S>
using SubsetVector = std::vector<S>;

inline std::size_t leaf_count_of(std::size_t size) {
  if (size == 0 || (size & (size - 1)) != 0) throw InputError("vector length is not a power of two");
  std::size_t n = 0;
  while ((std::size_t{1} << n) < size) ++n;
  if (n > kMaxLeaves) throw CapacityError("too many variables");
  return n;
}

// lambda_I = sum of p_beta over beta >= I (superset sums).
template <class S>
SubsetVector<S> probs_to_lambda(SubsetVector<S> p) {
  const std::size_t n = leaf_count_of(p.size());
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t m = 0; m < p.size(); ++m)
      if (!(m >> i & 1u)) p[m] += p[m | (std::size_t{1} << i)];
  return p;
}

template <class S>
SubsetVector<S> lambda_to_probs(SubsetVector<S> lam) {
  const std::size_t n = leaf_count_of(lam.size());
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t m = 0; m < lam.size(); ++m)
      if (!(m >> i & 1u)) lam[m] -= lam[m | (std::size_t{1} << i)];
  return lam;
}

// Nonnegative entries summing to one (exactly for rationals, to 1e-12 otherwise).
template <class S>
bool in_simplex(const SubsetVector<S>& p) {
  S total = 0;
  for (const auto& x : p) {
    if (x < 0) return false;
    total += x;
  }
  if constexpr (std::is_same_v<S, Rational>)
    return total == 1;
  else
    return std::abs(total - 1.0) < 1e-12;
}

// mu_I = sum_{K subset I} lambda_K prod_{i in I \ K} (-lambda_i). The map is a
// tensor product of 2x2 triangular factors, one per coordinate, so it and its
// inverse run in O(n 2^n). mu_{} = 1 and mu_{i} = 0.
template <class S>
SubsetVector<S> lambda_to_central(const SubsetVector<S>& lam) {
  const std::size_t n = leaf_count_of(lam.size());
  SubsetVector<S> mu = lam;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t bit = std::size_t{1} << i;
    const S mean = lam[bit];
    for (std::size_t m = 0; m < mu.size(); ++m)
      if (m & bit) mu[m] -= mean * mu[m ^ bit];
  }
  return mu;
}

// Inverse of lambda_to_central given the means lambda_i.
template <class S>
SubsetVector<S> central_to_lambda(const std::vector<S>& means, const SubsetVector<S>& mu) {
  const std::size_t n = leaf_count_of(mu.size());
  if (means.size() != n) throw InputError("means and central moments disagree in dimension");
  SubsetVector<S> lam = mu;
  for (std::size_t i = 0; i < n; ++i) lam[std::size_t{1} << i] = 0;
  for (std::size_t i = n; i-- > 0;) {
    const std::size_t bit = std::size_t{1} << i;
    for (std::size_t m = 0; m < lam.size(); ++m)
      if (m & bit) lam[m] += means[i] * lam[m ^ bit];
  }
  return lam;
}

template <class S>
struct CumulantVector {
  std::vector<S> means;   // lambda_i
  SubsetVector<S> kappa;  // kappa_I for |I| >= 2, zero elsewhere
};

// kappa_I = sum over the partition poset of T(I) of mu(pi, top) prod_B mu_B.
// Partitions with a singleton block contribute nothing since mu_{i} = 0.
template <class S>
CumulantVector<S> cumulants_from_moments(const RootedTree& tree, const SubsetVector<S>& lam,
                                         const SubsetVector<S>& mu) {
  const std::size_t n = tree.leaf_count();
  if (lam.size() != (std::size_t{1} << n) || mu.size() != lam.size())
    throw InputError("moment vectors do not match the tree's leaf count");
  CumulantVector<S> out;
  out.kappa.assign(lam.size(), S(0));
  for (std::size_t i = 0; i < n; ++i) out.means.push_back(lam[std::size_t{1} << i]);
  for (LeafSet I = 0; I < lam.size(); ++I) {
    if (popcount(I) < 2) continue;
    const auto poset = PartitionPoset::build(tree, spanning_subtree(tree, I));
    S total = 0;
    for (std::size_t k = 0; k < poset.size(); ++k) {
      const auto& blocks = poset.element(k);
      bool singleton = false;
      for (LeafSet b : blocks) singleton = singleton || popcount(b) == 1;
      if (singleton) continue;
      S term = S(static_cast<double>(poset.mobius(k, poset.top())));
      for (LeafSet b : blocks) term *= mu[b];
      total += term;
    }
    out.kappa[I] = total;
  }
  return out;
}

// Model parameters. Edge-indexed vectors follow the tree's edge order; the
// conditionals on edge (u, v) describe the child v given its parent u.
template <class S>
struct ThetaPoint {
  S root_p1{};
  std::vector<S> p1_given0;
  std::vector<S> p1_given1;
};

template <class S>
struct OmegaPoint {
  std::vector<S> s;    // per node, 1 - 2 E[Y_v]
  std::vector<S> eta;  // per edge, theta_{1|1} - theta_{1|0}
};

template <class S>
void check_theta(const RootedTree& tree, const ThetaPoint<S>& th) {
  auto unit = [](const S& x) { return x >= 0 && x <= 1; };
  if (th.p1_given0.size() != tree.edge_count() || th.p1_given1.size() != tree.edge_count())
    throw InputError("parameter point does not match the tree's edge count");
  if (!unit(th.root_p1)) throw InputError("root probability outside [0,1]");
  for (std::size_t e = 0; e < tree.edge_count(); ++e)
    if (!unit(th.p1_given0[e]) || !unit(th.p1_given1[e]))
      throw InputError("conditional probability outside [0,1] on edge " + tree.name(tree.edge(e).parent) + "->" +
                       tree.name(tree.edge(e).child));
}

// Node means lambda_v = P(Y_v = 1), propagated from the root.
template <class S>
std::vector<S> node_means(const RootedTree& tree, const ThetaPoint<S>& th) {
  std::vector<S> lam(tree.node_count(), S(0));
  const auto& order = tree.postorder();
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const NodeId v = *it;
    if (v == tree.root()) {
      lam[v] = th.root_p1;
    } else {
      const EdgeId e = tree.parent_edge(v);
      lam[v] = th.p1_given0[e] + (th.p1_given1[e] - th.p1_given0[e]) * lam[tree.parent(v)];
    }
  }
  return lam;
}

template <class S>
OmegaPoint<S> theta_to_omega(const RootedTree& tree, const ThetaPoint<S>& th) {
  check_theta(tree, th);
  OmegaPoint<S> om;
  for (const S& l : node_means(tree, th)) om.s.push_back(S(1) - S(2) * l);
  for (std::size_t e = 0; e < tree.edge_count(); ++e) om.eta.push_back(th.p1_given1[e] - th.p1_given0[e]);
  return om;
}

// Inverts theta_to_omega edge by edge from the root. Points violating
// -(1+s_v) <= (1-s_u) eta <= 1-s_v (or the companion pair for theta_{1|1})
// are rejected.
template <class S>
ThetaPoint<S> omega_to_theta(const RootedTree& tree, const OmegaPoint<S>& om) {
  if (om.s.size() != tree.node_count() || om.eta.size() != tree.edge_count())
    throw InputError("omega point does not match the tree");
  for (const S& s : om.s)
    if (s < -1 || s > 1) throw InputError("omega constraint violated: s outside [-1,1]");
  ThetaPoint<S> th;
  th.root_p1 = (S(1) - om.s[tree.root()]) / S(2);
  th.p1_given0.resize(tree.edge_count());
  th.p1_given1.resize(tree.edge_count());
  for (std::size_t e = 0; e < tree.edge_count(); ++e) {
    const auto [u, v] = tree.edge(e);
    const S lu = (S(1) - om.s[u]) / S(2);
    const S lv = (S(1) - om.s[v]) / S(2);
    th.p1_given0[e] = lv - om.eta[e] * lu;
    th.p1_given1[e] = th.p1_given0[e] + om.eta[e];
    auto unit = [](const S& x) { return x >= 0 && x <= 1; };
    if (!unit(th.p1_given0[e]) || !unit(th.p1_given1[e]))
      throw InputError("omega constraint violated on edge " + tree.name(u) + "->" + tree.name(v));
  }
  return th;
}

// Leaf marginal p_alpha by pruning over the hidden nodes, for every alpha.
template <class S>
SubsetVector<S> model_probs(const RootedTree& tree, const ThetaPoint<S>& th) {
  check_theta(tree, th);
  const std::size_t n = tree.leaf_count();
  SubsetVector<S> p(std::size_t{1} << n, S(0));
  std::vector<S> like0(tree.node_count()), like1(tree.node_count());
  for (std::size_t alpha = 0; alpha < p.size(); ++alpha) {
    for (NodeId v : tree.postorder()) {
      S l0 = 1, l1 = 1;
      if (tree.is_leaf(v)) {
        const bool one = alpha >> tree.leaf_index(v) & 1u;
        l0 = one ? S(0) : S(1);
        l1 = one ? S(1) : S(0);
      }
      for (NodeId c : tree.children(v)) {
        const EdgeId e = tree.parent_edge(c);
        l0 *= (S(1) - th.p1_given0[e]) * like0[c] + th.p1_given0[e] * like1[c];
        l1 *= (S(1) - th.p1_given1[e]) * like0[c] + th.p1_given1[e] * like1[c];
      }
      like0[v] = l0;
      like1[v] = l1;
    }
    const NodeId r = tree.root();
    p[alpha] = (S(1) - th.root_p1) * like0[r] + th.root_p1 * like1[r];
  }
  return p;
}

// kappa_I(omega) = 1/4 (1 - s_{r(I)}^2) prod_{v in V(I) \ I} s_v^{deg(v) - 2}
// prod_{e in E(I)} eta_e, degrees taken in T(I). Requires a trivalent tree.
template <class S>
S kappa_from_params(const RootedTree& tree, const OmegaPoint<S>& om, LeafSet I) {
  if (!is_trivalent(tree)) throw UnsupportedRegime("the monomial cumulant formula needs a trivalent tree");
  const Subtree sub = spanning_subtree(tree, I);
  const S sr = om.s[sub.root];
  S value = (S(1) - sr * sr) / S(4);
  for (NodeId v : sub.nodes) {
    const bool in_I = tree.is_leaf(v) && (I >> tree.leaf_index(v) & 1u);
    if (in_I) continue;
    for (std::size_t k = 2; k < sub.degree[v]; ++k) value *= om.s[v];
  }
  for (EdgeId e : sub.edges) value *= om.eta[e];
  return value;
}

// p -> (means, kappa) for every I with |I| >= 2.
template <class S>
CumulantVector<S> tree_cumulants(const RootedTree& tree, const SubsetVector<S>& p) {
  const auto lam = probs_to_lambda(p);
  return cumulants_from_moments(tree, lam, lambda_to_central(lam));
}

}  // namespace sbic
