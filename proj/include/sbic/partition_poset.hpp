#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "sbic/tree.hpp"

namespace sbic {

// A set partition of a leaf set, blocks sorted ascending by mask.
using Partition = std::vector<LeafSet>;

// Partitions of the leaf set I of T(I) obtained by deleting subsets of the
// inner edges of T(I) (edges not touching a leaf of I), ordered by refinement.
class PartitionPoset {
 public:
  static PartitionPoset build(const RootedTree& tree, const Subtree& sub);

  std::size_t size() const { return elements_.size(); }
  const Partition& element(std::size_t k) const { return elements_.at(k); }
  const std::vector<Partition>& elements() const { return elements_; }
  std::size_t top() const { return top_; }  // the one-block partition
  LeafSet ground() const { return ground_; }
  std::size_t inner_edge_count() const { return inner_edges_; }

  // pi refines nu.
  bool leq(std::size_t pi, std::size_t nu) const;
  std::optional<std::size_t> index_of(const Partition& p) const;

  // mu(pi, pi) = 1, mu(pi, nu) = -sum_{pi <= delta < nu} mu(pi, delta).
  // Throws InputError for incomparable pairs.
  long mobius(std::size_t pi, std::size_t nu) const;

 private:
  std::vector<Partition> elements_;
  std::size_t top_ = 0;
  LeafSet ground_ = 0;
  std::size_t inner_edges_ = 0;
  mutable std::map<std::pair<std::size_t, std::size_t>, long> cache_;
};

bool refines(const Partition& fine, const Partition& coarse);

}  // namespace sbic
