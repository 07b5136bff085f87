#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sbic/moments.hpp"
#include "sbic/rational.hpp"
#include "sbic/tree.hpp"

namespace sbic {

// Counts indexed by pattern bitmask (bit i = leaf i). Counts may be fractional.
struct CountTable {
  std::size_t n = 0;
  SubsetVector<Rational> counts;
  Rational total;
  bool integral = true;  // every count is a whole number

  static CountTable from_counts(std::size_t n, SubsetVector<Rational> counts);
  SubsetVector<Rational> proportions() const;
  SubsetVector<double> proportions_double() const;
};

// Symmetric matrix of sample covariances, exact.
struct CovMatrix {
  std::size_t n = 0;
  std::vector<Rational> entries;  // row-major n x n

  const Rational& operator()(std::size_t i, std::size_t j) const { return entries[i * n + j]; }
};

CovMatrix sample_covariance(const CountTable& counts);
CovMatrix covariance_from_probs(const SubsetVector<Rational>& p);

// 1e-8 for fractional (synthetic) tables, sqrt(log n / N) for integral ones.
double default_zero_tolerance(const CountTable& counts);

// Edges whose supporting leaf pairs all have |mu_ij| <= tol. Sorted ascending.
std::vector<EdgeId> isolated_edges(const RootedTree& tree, const CovMatrix& cov, double tol);

// Largest |mu_ij| over the leaf pairs whose path uses the edge.
double edge_support(const RootedTree& tree, const CovMatrix& cov, EdgeId e);

// Repairs thresholding artefacts: while some inner node has exactly one
// non-isolated edge, that edge is made isolated (smallest support first).
// Returns one message per promoted edge.
std::vector<std::string> promote_isolated_edges(const RootedTree& tree, const CovMatrix& cov,
                                                std::vector<EdgeId>& isolated);

// Component of the forest (V, E \ E^) with at least one edge.
struct SmoothComponent {
  std::vector<EdgeId> edges;
  std::vector<NodeId> nodes;
  LeafSet leaves = 0;          // leaves of T inside the component
  std::size_t degree_two = 0;  // inner nodes of T with forest degree two
};

// Equivalence class of isolated edges: two isolated edges belong together when
// they meet at a degenerate node.
struct ZeroComponent {
  std::vector<EdgeId> edges;
  std::vector<NodeId> nodes;
  std::vector<NodeId> terminals;  // non-degenerate vertices, the set L_j
  bool root_is_inner = false;     // the global root is a degenerate node of this class
};

struct ZeroPattern {
  std::vector<char> isolated;         // per edge
  std::vector<EdgeId> isolated_edges;
  std::vector<std::size_t> forest_degree;  // per node
  std::vector<NodeId> degenerate;          // inner nodes of forest degree zero
  std::size_t l1 = 0;                      // number of degenerate inner nodes
  std::size_t l2 = 0;                      // inner nodes of forest degree two
  std::size_t l3 = 0;                      // inner nodes of forest degree three
  std::size_t degree_one = 0;              // all nodes (leaves included) of forest degree one
  std::vector<SmoothComponent> smooth_components;
  std::vector<ZeroComponent> zero_components;

  bool is_degenerate(NodeId v) const;
};

// Throws InputError when an inner node has forest degree one.
ZeroPattern classify_pattern(const RootedTree& tree, const std::vector<EdgeId>& isolated);

struct A2Report {
  bool positive = true;
  bool membership_checked = false;
  bool model_consistent = true;
  std::optional<double> fit_distance;  // sup norm between p^ and the fitted model point
  std::optional<double> fitted_loglik;  // sum N_alpha log p_fit_alpha
  std::vector<std::string> warnings;

  bool passed() const { return positive && model_consistent; }
};

struct A2Config {
  double fit_tolerance = 1e-5;
  std::size_t restarts = 8;
  std::uint64_t seed = 1;
};

A2Report check_A2(const CountTable& counts, const RootedTree& tree, const A2Config& config = {});

}  // namespace sbic
