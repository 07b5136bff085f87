#include "sbic/partition_poset.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include "sbic/errors.hpp"

namespace sbic {

bool refines(const Partition& fine, const Partition& coarse) {
  for (LeafSet b : fine) {
    bool inside = false;
    for (LeafSet c : coarse)
      if ((b & ~c) == 0) {
        inside = true;
        break;
      }
    if (!inside) return false;
  }
  return true;
}

PartitionPoset PartitionPoset::build(const RootedTree& tree, const Subtree& sub) {
  PartitionPoset poset;
  poset.ground_ = sub.leaves;

  auto in_I = [&](NodeId v) { return tree.is_leaf(v) && (sub.leaves >> tree.leaf_index(v) & 1u); };
  std::vector<EdgeId> inner;
  for (EdgeId e : sub.edges)
    if (!in_I(tree.edge(e).parent) && !in_I(tree.edge(e).child)) inner.push_back(e);
  poset.inner_edges_ = inner.size();
  if (inner.size() > 20) throw CapacityError("too many inner edges for partition enumeration");

  std::set<Partition> found;
  std::vector<std::size_t> comp(tree.node_count());
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << inner.size()); ++mask) {
    // Union-find over subtree nodes using the kept edges.
    std::iota(comp.begin(), comp.end(), 0);
    auto find = [&](std::size_t x) {
      while (comp[x] != x) x = comp[x] = comp[comp[x]];
      return x;
    };
    for (EdgeId e : sub.edges) {
      auto pos = std::find(inner.begin(), inner.end(), e);
      if (pos != inner.end() && (mask >> (pos - inner.begin()) & 1u)) continue;
      comp[find(tree.edge(e).parent)] = find(tree.edge(e).child);
    }
    std::map<std::size_t, LeafSet> blocks;
    for (std::size_t i = 0; i < tree.leaf_count(); ++i)
      if (sub.leaves >> i & 1u) blocks[find(tree.leaf(i))] |= LeafSet{1} << i;
    Partition p;
    for (const auto& [root, b] : blocks) p.push_back(b);
    std::sort(p.begin(), p.end());
    found.insert(std::move(p));
  }
  poset.elements_.assign(found.begin(), found.end());
  auto top = poset.index_of(Partition{sub.leaves});
  poset.top_ = *top;
  return poset;
}

std::optional<std::size_t> PartitionPoset::index_of(const Partition& p) const {
  auto it = std::lower_bound(elements_.begin(), elements_.end(), p);
  if (it == elements_.end() || *it != p) return std::nullopt;
  return static_cast<std::size_t>(it - elements_.begin());
}

bool PartitionPoset::leq(std::size_t pi, std::size_t nu) const { return refines(element(pi), element(nu)); }

long PartitionPoset::mobius(std::size_t pi, std::size_t nu) const {
  if (!leq(pi, nu)) throw InputError("Mobius function requested for an incomparable pair");
  if (pi == nu) return 1;
  if (auto it = cache_.find({pi, nu}); it != cache_.end()) return it->second;
  long sum = 0;
  for (std::size_t d = 0; d < size(); ++d)
    if (d != nu && leq(pi, d) && leq(d, nu)) sum += mobius(pi, d);
  cache_[{pi, nu}] = -sum;
  return -sum;
}

}  // namespace sbic
