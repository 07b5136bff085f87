#pragma once

#include <string>
#include <vector>

#include "sbic/lp.hpp"
#include "sbic/newton.hpp"
#include "sbic/tree.hpp"

namespace sbic {

// a.x >= b (or == b when equality).
struct Halfspace {
  std::vector<Rational> normal;
  Rational offset;
  bool equality = false;
  std::string label;
};

struct HullSummary {
  std::size_t dimension = 0;  // of the affine hull
  std::vector<Halfspace> facets;  // in the ambient coordinates, one per facet
};

// Facets of conv(points) by enumerating affinely independent subsets in
// affine-hull coordinates. Exponential; throws CapacityError past max_subsets.
HullSummary brute_force_hull(const Matrix& points, std::size_t max_subsets = 2'000'000);

struct PolytopeReport {
  Matrix vertices;  // path indicator vectors, edge order of the tree
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  std::size_t dimension = 0;
  std::size_t expected_dimension = 0;
  std::size_t facet_count = 0;  // from the brute-force hull, when computed
  std::size_t expected_facets = 0;
  bool hull_computed = false;
  bool terminal_sum_ok = false;    // every vertex has terminal coordinates summing to 2
  bool inequalities_valid = false;  // each x_e1 + x_e2 - x_e3 >= 0 holds on every vertex
  bool inequalities_facets = false;  // ... and is facet defining
  bool facets_match = false;       // hull facets are exactly the claimed inequalities
  std::vector<Halfspace> claimed;
  std::vector<std::string> failures;

  bool passed() const { return failures.empty(); }
};

// Pair-edge incidence polytope of a trivalent tree with n >= 4 leaves.
PolytopeReport pair_edge_polytope(const RootedTree& tree, std::size_t hull_leaf_cap = 6);

struct GammaReport {
  std::size_t points_checked = 0;
  std::vector<std::string> failures;
  bool passed() const { return failures.empty(); }
};

// Checks that Q_delta's points satisfy the structure equations
// 2 y_v = x_{v c1} + x_{v c2} - x_{pa(v) v} (root: sum of its three edges),
// sum over terminal edges x_e = 4, the doubled pair-edge inequalities, and
// that each point is the image of the doubled path indicator.
GammaReport gamma_Q_structure_check(const RootedTree& tree, const Degeneracy& delta);

// The same equations for a single point in Q_delta coordinates.
bool satisfies_gamma_equations(const RootedTree& tree, const QDelta& q, const std::vector<Rational>& point);

}  // namespace sbic
