#include "sbic/tree.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <queue>
#include <set>

#include "sbic/errors.hpp"

namespace sbic {

namespace {

struct DisjointSets {
  std::vector<std::size_t> parent;
  explicit DisjointSets(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  bool unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent[a] = b;
    return true;
  }
};

}  // namespace

RootedTree RootedTree::build(const std::string& root, const std::vector<std::string>& leaves,
                             const std::vector<std::pair<std::string, std::string>>& edges) {
  RootedTree t;
  std::map<std::string, NodeId, std::less<>> index;
  auto intern = [&](const std::string& name) {
    auto [it, inserted] = index.try_emplace(name, t.names_.size());
    if (inserted) t.names_.push_back(name);
    return it->second;
  };

  std::set<std::pair<NodeId, NodeId>> seen;
  for (const auto& [p, c] : edges) {
    if (p == c) throw InputError("cycle detected: self-loop at '" + p + "'");
    NodeId u = intern(p);
    NodeId v = intern(c);
    if (!seen.insert({std::min(u, v), std::max(u, v)}).second)
      throw InputError("duplicate edge '" + p + "' - '" + c + "'");
    t.edges_.push_back({u, v});
  }
  auto root_it = index.find(root);
  if (root_it == index.end()) throw InputError("root not a node: '" + root + "'");
  t.root_ = root_it->second;

  const std::size_t nv = t.names_.size();
  DisjointSets sets(nv);
  for (const auto& e : t.edges_)
    if (!sets.unite(e.parent, e.child)) throw InputError("cycle detected");
  for (NodeId v = 0; v < nv; ++v)
    if (sets.find(v) != sets.find(t.root_)) throw InputError("disconnected: '" + t.names_[v] + "' is not reachable");

  t.parent_.assign(nv, kNone);
  t.parent_edge_.assign(nv, kNone);
  t.children_.assign(nv, {});
  t.neighbors_.assign(nv, {});
  t.incident_.assign(nv, {});
  for (EdgeId e = 0; e < t.edges_.size(); ++e) {
    const auto [u, v] = t.edges_[e];
    t.neighbors_[u].push_back(v);
    t.neighbors_[v].push_back(u);
    t.incident_[u].push_back(e);
    t.incident_[v].push_back(e);
  }

  // Orientation check: breadth-first from the root, every edge must point away.
  t.depth_.assign(nv, kNone);
  t.depth_[t.root_] = 0;
  std::queue<NodeId> queue;
  queue.push(t.root_);
  std::vector<NodeId> order;
  while (!queue.empty()) {
    NodeId u = queue.front();
    queue.pop();
    order.push_back(u);
    for (EdgeId e : t.incident_[u]) {
      const auto [p, c] = t.edges_[e];
      NodeId other = p == u ? c : p;
      if (t.depth_[other] != kNone) continue;
      if (p != u)
        throw InputError("edge '" + t.names_[p] + "' -> '" + t.names_[c] + "' is not directed away from the root");
      t.depth_[other] = t.depth_[u] + 1;
      t.parent_[other] = u;
      t.parent_edge_[other] = e;
      t.children_[u].push_back(other);
      queue.push(other);
    }
  }
  t.postorder_.assign(order.rbegin(), order.rend());

  // Leaves: declared order, must coincide with the degree-one nodes.
  t.leaf_index_.assign(nv, kNone);
  for (const auto& name : leaves) {
    auto it = index.find(name);
    if (it == index.end()) throw InputError("leaf '" + name + "' is not a node of the tree");
    if (t.leaf_index_[it->second] != kNone) throw InputError("leaf '" + name + "' listed twice");
    t.leaf_index_[it->second] = t.leaves_.size();
    t.leaves_.push_back(it->second);
  }
  for (NodeId v = 0; v < nv; ++v) {
    const bool degree_one = t.neighbors_[v].size() == 1;
    if (degree_one && t.leaf_index_[v] == kNone)
      throw InputError("node '" + t.names_[v] + "' has degree one but is not listed as a leaf");
    if (!degree_one && t.leaf_index_[v] != kNone)
      throw InputError("listed leaf '" + t.names_[v] + "' is not a degree-one node");
    if (t.neighbors_[v].size() == 2)
      throw InputError("inner node '" + t.names_[v] + "' has degree two; such nodes are not identifiable");
  }
  if (t.leaves_.size() < 2) throw InputError("a tree needs at least two leaves");
  if (t.leaves_.size() > kMaxLeaves)
    throw CapacityError("at most " + std::to_string(kMaxLeaves) + " leaves are supported");
  return t;
}

std::optional<NodeId> RootedTree::find(std::string_view name) const {
  auto it = std::find(names_.begin(), names_.end(), name);
  if (it == names_.end()) return std::nullopt;
  return static_cast<NodeId>(it - names_.begin());
}

NodeId RootedTree::node(std::string_view name) const {
  if (auto v = find(name)) return *v;
  throw InputError("unknown node id '" + std::string(name) + "'");
}

NodeId lowest_common_ancestor(const RootedTree& tree, NodeId u, NodeId v) {
  while (tree.depth(u) > tree.depth(v)) u = tree.parent(u);
  while (tree.depth(v) > tree.depth(u)) v = tree.parent(v);
  while (u != v) {
    u = tree.parent(u);
    v = tree.parent(v);
  }
  return u;
}

EdgePath path_edges(const RootedTree& tree, NodeId from, NodeId to) {
  if (from >= tree.node_count() || to >= tree.node_count()) throw InputError("unknown node id in path request");
  if (from == to) throw InputError("path endpoints must differ");
  const NodeId top = lowest_common_ancestor(tree, from, to);
  EdgePath path{from, to, {}, {}};
  std::vector<NodeId> tail;
  for (NodeId v = from; v != top; v = tree.parent(v)) {
    path.nodes.push_back(v);
    path.edges.push_back(tree.parent_edge(v));
  }
  path.nodes.push_back(top);
  for (NodeId v = to; v != top; v = tree.parent(v)) {
    tail.push_back(v);
    path.edges.push_back(tree.parent_edge(v));
  }
  path.nodes.insert(path.nodes.end(), tail.rbegin(), tail.rend());
  std::sort(path.edges.begin(), path.edges.end());
  return path;
}

Subtree spanning_subtree(const RootedTree& tree, LeafSet leaves) {
  if (leaves & ~tree.all_leaves()) throw InputError("leaf set refers to unknown leaves");
  if (popcount(leaves) < 2) throw InputError("a spanning subtree needs at least two leaves");

  std::vector<NodeId> members;
  for (std::size_t i = 0; i < tree.leaf_count(); ++i)
    if (leaves >> i & 1u) members.push_back(tree.leaf(i));
  NodeId top = members.front();
  for (NodeId v : members) top = lowest_common_ancestor(tree, top, v);

  Subtree sub;
  sub.root = top;
  sub.leaves = leaves;
  sub.degree.assign(tree.node_count(), 0);
  std::vector<char> on(tree.node_count(), 0);
  on[top] = 1;
  for (NodeId v : members) {
    for (NodeId u = v; u != top && !on[u]; u = tree.parent(u)) {
      on[u] = 1;
      sub.edges.push_back(tree.parent_edge(u));
    }
  }
  for (EdgeId e : sub.edges) {
    ++sub.degree[tree.edge(e).parent];
    ++sub.degree[tree.edge(e).child];
  }
  for (NodeId v = 0; v < tree.node_count(); ++v)
    if (on[v]) sub.nodes.push_back(v);
  std::sort(sub.edges.begin(), sub.edges.end());
  return sub;
}

bool node_separates(const RootedTree& tree, NodeId w, NodeId u, NodeId v) {
  if (w >= tree.node_count()) throw InputError("unknown node id");
  const auto path = path_edges(tree, u, v);
  return std::find(path.nodes.begin() + 1, path.nodes.end() - 1, w) != path.nodes.end() - 1;
}

bool is_trivalent(const RootedTree& tree) {
  for (NodeId v = 0; v < tree.node_count(); ++v)
    if (tree.is_inner(v) && tree.degree(v) != 3) return false;
  return true;
}

NodeId pair_root(const RootedTree& tree, std::size_t leaf_i, std::size_t leaf_j) {
  return lowest_common_ancestor(tree, tree.leaf(leaf_i), tree.leaf(leaf_j));
}

}  // namespace sbic
