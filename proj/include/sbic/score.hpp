#pragma once

#include <compare>
#include <optional>
#include <string>
#include <vector>

#include "sbic/covariance.hpp"
#include "sbic/rational.hpp"
#include "sbic/tree.hpp"

namespace sbic {

// Learning coefficient with the order of its pole. An unknown multiplicity is
// carried as its lower bound 1 with exact = false. An infinite threshold means
// the zeta function has no pole.
struct RlctPair {
  Rational threshold;
  int multiplicity = 1;
  bool multiplicity_exact = true;
  bool infinite = false;
};

// (r1, m1) > (r2, m2) iff r1 > r2, or r1 == r2 and m1 < m2.
std::strong_ordering compare(const RlctPair& a, const RlctPair& b);
inline bool operator<(const RlctPair& a, const RlctPair& b) { return compare(a, b) < 0; }
inline bool operator==(const RlctPair& a, const RlctPair& b) { return compare(a, b) == 0; }

enum class Regime { Smooth, ThreeLeaf, CaseA, CaseB, CaseC };
std::string regime_name(Regime r);

struct Contribution {
  std::string kind;  // "means", "smooth" or "zero"
  Rational value;
  LeafSet leaves = 0;  // leaves of T in the component (smooth) or empty
  std::vector<NodeId> terminals;  // L_j for zero components
  std::vector<EdgeId> edges;
};

struct ScoreReport {
  Rational lambda;
  std::optional<int> multiplicity;  // nullopt: at least one, not determined
  bool loglog_known = true;
  Regime regime = Regime::Smooth;
  ZeroPattern pattern;
  std::vector<Contribution> components;
  std::optional<double> max_loglik;
  std::optional<double> log_evidence;  // max_loglik - lambda log N + (m - 1) log log N
  double sample_size = 0.0;
  double tolerance = 0.0;
  std::optional<double> fit_distance;
  std::vector<std::string> warnings;
};

// Smooth coefficient ((n_v + n_e - 2 l2)/2, 1); refuses patterns with degenerate nodes.
RlctPair smooth_score(const RootedTree& tree, const ZeroPattern& pattern);

// Three-leaf tree: 2, 5/2, 7/2 (inner root) and 9/4, (7 - 2 l2)/2 (leaf root).
RlctPair three_leaf_score(const RootedTree& tree, const ZeroPattern& pattern);

// Degenerate patterns on trivalent trees (n >= 4; n = 3 is delegated to
// three_leaf_score). Non-degenerate patterns go to smooth_score. Throws
// UnsupportedRegime for non-trivalent trees with degenerate nodes.
ScoreReport trivalent_singular_score(const RootedTree& tree, const ZeroPattern& pattern);

// Itemised n/2 + smooth parts + zero parts for a trivalent tree.
std::vector<Contribution> decompose_contributions(const RootedTree& tree, const ZeroPattern& pattern);

// Regime dispatch for any valid (tree, pattern).
ScoreReport score_pattern(const RootedTree& tree, const ZeroPattern& pattern);

struct ScoreConfig {
  std::optional<double> tolerance;  // zero threshold; default from the table
  bool check_model = true;          // run the A2 diagnostic
  std::uint64_t seed = 1;
};

// Counts -> covariance -> isolated edges -> pattern -> closed form, plus the
// maximised log-likelihood and the A2 diagnostic.
ScoreReport full_score(const RootedTree& tree, const CountTable& counts, const ScoreConfig& config = {});

}  // namespace sbic
