#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace sbic {

using NodeId = std::size_t;
using EdgeId = std::size_t;
inline constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

// Leaf subsets are bitmasks over the declared leaf order (bit i = leaf i).
using LeafSet = std::uint32_t;
inline constexpr std::size_t kMaxLeaves = 16;

struct Edge {
  NodeId parent;
  NodeId child;
};

// A rooted tree of binary variables. Node ids are the strings from the input
// document; internally nodes and edges are dense indices. Edge ids follow the
// declared edge order. Immutable after construction.
class RootedTree {
 public:
  // Validates and builds the tree. Throws InputError on cycles, disconnected
  // edge lists, duplicate edges, an unknown root, edges pointing towards the
  // root, inner nodes of degree two, or a leaf list that disagrees with the
  // degree-one nodes.
  static RootedTree build(const std::string& root, const std::vector<std::string>& leaves,
                          const std::vector<std::pair<std::string, std::string>>& edges);

  std::size_t node_count() const { return names_.size(); }
  std::size_t edge_count() const { return edges_.size(); }
  std::size_t leaf_count() const { return leaves_.size(); }
  std::size_t inner_count() const { return node_count() - leaf_count(); }

  NodeId root() const { return root_; }
  const std::string& name(NodeId v) const { return names_.at(v); }
  std::optional<NodeId> find(std::string_view name) const;
  NodeId node(std::string_view name) const;  // throws InputError when unknown

  const Edge& edge(EdgeId e) const { return edges_.at(e); }
  const std::vector<Edge>& edges() const { return edges_; }

  NodeId parent(NodeId v) const { return parent_.at(v); }
  EdgeId parent_edge(NodeId v) const { return parent_edge_.at(v); }
  const std::vector<NodeId>& children(NodeId v) const { return children_.at(v); }
  const std::vector<NodeId>& neighbors(NodeId v) const { return neighbors_.at(v); }
  const std::vector<EdgeId>& incident_edges(NodeId v) const { return incident_.at(v); }
  std::size_t degree(NodeId v) const { return neighbors_.at(v).size(); }
  std::size_t depth(NodeId v) const { return depth_.at(v); }

  // Leaves in declared order; leaf_index maps a node to its position or kNone.
  const std::vector<NodeId>& leaves() const { return leaves_; }
  NodeId leaf(std::size_t i) const { return leaves_.at(i); }
  std::size_t leaf_index(NodeId v) const { return leaf_index_.at(v); }
  bool is_leaf(NodeId v) const { return leaf_index_.at(v) != kNone; }
  bool is_inner(NodeId v) const { return !is_leaf(v); }
  bool is_terminal(EdgeId e) const { return is_leaf(edges_.at(e).parent) || is_leaf(edges_.at(e).child); }

  // Nodes with every child before its parent.
  const std::vector<NodeId>& postorder() const { return postorder_; }

  LeafSet all_leaves() const { return static_cast<LeafSet>((std::uint64_t{1} << leaf_count()) - 1); }

 private:
  std::vector<std::string> names_;
  std::vector<Edge> edges_;
  NodeId root_ = 0;
  std::vector<NodeId> parent_;
  std::vector<EdgeId> parent_edge_;
  std::vector<std::vector<NodeId>> children_;
  std::vector<std::vector<NodeId>> neighbors_;
  std::vector<std::vector<EdgeId>> incident_;
  std::vector<std::size_t> depth_;
  std::vector<NodeId> leaves_;
  std::vector<std::size_t> leaf_index_;
  std::vector<NodeId> postorder_;
};

struct EdgePath {
  NodeId from = 0;
  NodeId to = 0;
  std::vector<EdgeId> edges;  // sorted ascending
  std::vector<NodeId> nodes;  // from .. to, in walking order
};

// Unique simple path between two distinct nodes.
EdgePath path_edges(const RootedTree& tree, NodeId from, NodeId to);

// Node where the paths from u and v to the root meet.
NodeId lowest_common_ancestor(const RootedTree& tree, NodeId u, NodeId v);

// Minimal subtree T(I) spanning a leaf set, seen as a view into the parent
// tree. Its root r(I) is the node of T(I) closest to the global root.
struct Subtree {
  std::vector<NodeId> nodes;  // ascending
  std::vector<EdgeId> edges;  // ascending
  NodeId root = 0;
  std::vector<std::size_t> degree;  // degree inside the subtree, indexed by parent-tree node id (0 outside)
  LeafSet leaves = 0;

  bool contains(NodeId v) const { return degree[v] > 0; }
};

Subtree spanning_subtree(const RootedTree& tree, LeafSet leaves);

// True iff w is an interior node of the u–v path.
bool node_separates(const RootedTree& tree, NodeId w, NodeId u, NodeId v);

// Every inner node has degree three. Vacuously true without inner nodes.
bool is_trivalent(const RootedTree& tree);

// Root of the leaf-pair path T(ij), i.e. r(ij).
NodeId pair_root(const RootedTree& tree, std::size_t leaf_i, std::size_t leaf_j);

inline int popcount(LeafSet s) { return __builtin_popcount(s); }

}  // namespace sbic
