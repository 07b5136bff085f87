#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "sbic/rational.hpp"
#include "sbic/score.hpp"
#include "sbic/tree.hpp"

namespace sbic {

// Exponent vectors of f = sum of squared monomials (already doubled), with an
// optional prior exponent vector h (phi = prod x_i^{h_i}).
struct ExponentSet {
  std::size_t dimension = 0;
  std::vector<std::vector<long>> points;
  std::vector<long> prior;  // empty means h = 0

  void validate() const;
};

struct NewtonResult {
  RlctPair rlct;
  Rational t_star;                      // the line t (1 + h) first meets the polyhedron at t_star
  std::vector<Rational> hit_point;      // t_star (1 + h)
  std::vector<Rational> convex_weights;  // primal certificate: sum_k w_k a_k <= hit_point
  std::vector<Rational> normal;          // dual certificate: c >= 0, c.(1 + h) = 1, c.a_k >= t_star
  std::size_t face_codimension = 0;
};

// Newton-diagram RLCT: threshold 1/t_star, multiplicity = codimension of the
// smallest face of the Newton polyhedron containing the hit point. The
// codimension is the dimension of the normal cone there, found by one exact LP
// per defining inequality.
NewtonResult monomial_rlct(const ExponentSet& exponents);

// Both certificates check out exactly.
bool verify_certificates(const ExponentSet& exponents, const NewtonResult& result);

// delta_v in {0,1} per node; leaves must be 0.
using Degeneracy = std::vector<char>;

struct QDelta {
  ExponentSet exponents;
  std::vector<NodeId> y_nodes;  // coordinates after the n_e edge coordinates
  std::vector<std::pair<std::size_t, std::size_t>> pairs;  // leaf pair of each point

  std::size_t y_coordinate(NodeId v) const;  // kNone when v has no y coordinate
};

// One point per leaf pair i < j: x_e = 2 on E(ij), y_{r(ij)} = 2 when delta is set there.
QDelta build_Q_delta(const RootedTree& tree, const Degeneracy& delta);

// monomial_rlct of Q_delta; defined for trivalent trees with n >= 4 and for the two-leaf tree.
RlctPair verify_score_via_newton(const RootedTree& tree, const Degeneracy& delta);

// Multiplicity one is proven when delta_r = 0 or the root and all its neighbours are set.
bool multiplicity_one_proven(const RootedTree& tree, const Degeneracy& delta);

struct PathNetwork {
  std::map<std::pair<std::size_t, std::size_t>, int> paths;  // leaf pair -> copies
  int path_count = 0;
  bool root_variant = false;  // n paths (delta_r = 1) rather than 2n
  std::pair<NodeId, NodeId> core{kNone, kNone};
  std::vector<Rational> barycenter;  // in Q_delta coordinates
};

// Networks of leaf-pair paths grown from a quartet core. Choices are made in
// lexicographic order of node ids.
PathNetwork build_path_network(const RootedTree& tree, const Degeneracy& delta);

// Always true for sums of squared monomials (all exponents even); false when
// some exponent is odd. Throws CapacityError above the dimension cap.
bool principal_part_nondegenerate(const ExponentSet& exponents, std::size_t max_dimension = 14);

// Every assignment of delta to inner nodes, leaves fixed at zero.
std::vector<Degeneracy> all_degeneracy_vectors(const RootedTree& tree);

}  // namespace sbic
