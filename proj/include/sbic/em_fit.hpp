#pragma once

#include <cstdint>

#include "sbic/moments.hpp"
#include "sbic/tree.hpp"

namespace sbic {

struct EmConfig {
  std::size_t restarts = 8;
  std::size_t max_iterations = 5000;
  double tolerance = 1e-13;  // stop when the log-likelihood gain per unit count falls below this
  std::uint64_t seed = 1;
};

struct EmResult {
  ThetaPoint<double> theta;
  SubsetVector<double> probs;
  double loglik = 0.0;  // sum N_alpha log p_alpha
  std::size_t iterations = 0;
};

// Maximum-likelihood fit of the tree model to (possibly fractional) counts by
// expectation-maximisation over the hidden nodes, best of several random starts.
EmResult fit_em(const RootedTree& tree, const SubsetVector<double>& counts, const EmConfig& config = {});

}  // namespace sbic
