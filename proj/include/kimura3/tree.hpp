#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "kimura3/group.hpp"

namespace kimura3 {

// A cherry: two leaves attached to the same interior node.
struct Cherry {
  int leaf_a = 0;  // smaller label
  int leaf_b = 0;  // larger label
  int node = -1;   // the shared interior node id
};

// Unrooted trivalent tree with integer-labelled leaves.
//
// Immutable after construction. A tree with n leaves has n-2 interior nodes
// and 2n-3 edges. Edges and interior nodes carry a canonical order fixed by
// the labelled shape alone: a DFS rooted at the smallest-label leaf that
// visits subtrees in order of their minimal leaf label. Parameter files,
// edge assignments and group actions all index into that order.
//
// leaf_order() maps index positions (0-based) to leaf labels. Patterns fed
// to edge_assignment are indexed by position; freshly parsed or enumerated
// trees have label-sorted order, so position i holds label i+1.
class Tree {
 public:
  // Empty placeholder; every named constructor returns a validated tree.
  Tree() = default;

  // Accepts rooted or unrooted Newick; a degree-2 root is smoothed away.
  // Branch lengths are parsed but ignored (a note is appended to *warnings).
  // Leaf labels must be exactly 1..n with n >= 3 and every interior node
  // trivalent.
  static Tree parse_newick(const std::string& text,
                           std::string* warnings = nullptr);

  static Tree claw(int a, int b, int c);

  int leaf_count() const { return n_; }
  int edge_count() const { return static_cast<int>(edges_.size()); }
  int interior_count() const { return n_ - 2; }

  // Canonical edge order; each edge is an (u, v) node pair as traversed.
  const std::vector<std::pair<int, int>>& edges() const { return edges_; }
  // Canonical interior-node order.
  const std::vector<int>& interior_nodes() const { return interior_; }
  const std::vector<int>& leaf_order() const { return leaf_order_; }
  const std::vector<int>& leaf_labels_sorted() const { return sorted_labels_; }

  bool is_leaf_node(int node) const;
  int label_of_node(int node) const;
  int node_of_label(int label) const;
  int position_of_label(int label) const;  // 0-based index into leaf_order
  int edge_index(int u, int v) const;
  // Index of the terminal edge ending at the given leaf label.
  int terminal_edge_index(int label) const;
  const std::vector<int>& neighbors(int node) const;

  std::string newick() const;

  // All cherries, ordered by (leaf_a, leaf_b). Every trivalent tree has at
  // least one; the 3-leaf claw reports all three leaf pairs.
  std::vector<Cherry> cherries() const;

  // The cherry containing the highest leaf label.
  Cherry canonical_cherry() const;

  // Same tree, with leaf_order rearranged so the cherry occupies the last
  // two positions (ascending); other leaves keep their relative order.
  Tree with_cherry_last(const Cherry& c) const;

  // Replace the cherry by a new leaf at its attachment node. The new leaf
  // gets label max(labels)+1 and the last position of the result's
  // leaf_order; other leaves keep their relative order. Requires n >= 4.
  Tree collapse_cherry(const Cherry& c) const;

  // Edge labels x_e determined by a leaf pattern: terminal edges take the
  // leaf's state, and the three labels at every interior node sum to A.
  // Pattern entry i = state at leaf_order position i. Returns labels in
  // canonical edge order, or nullopt when the pattern sum is not A.
  std::optional<std::vector<Nuc>> edge_assignment(const Pattern& p) const;

  // Label set of the half of the tree on the far side of edge e (the side
  // not containing the canonical root leaf), sorted.
  std::vector<int> edge_split(int e) const;

  // Equality as leaf-labelled topologies.
  bool same_topology(const Tree& other) const;

 private:
  // adj: adjacency over node ids 0..2n-3; labels: per-node label, -1 for
  // interior nodes; order: leaf labels by position.
  static Tree build(std::vector<std::vector<int>> adj, std::vector<int> labels,
                    std::vector<int> order);
  void normalize();

  int n_ = 0;
  std::vector<std::vector<int>> adj_;
  std::vector<int> node_label_;
  std::vector<int> leaf_order_;
  std::vector<int> sorted_labels_;
  std::vector<std::pair<int, int>> edges_;
  std::vector<int> interior_;
  std::vector<int> edge_of_pair_;  // dense (u * nodes + v) -> edge index

  friend std::vector<Tree> enumerate_topologies(int n, int max_n);
};

// All distinct unrooted trivalent topologies on leaf labels 1..n, in the
// deterministic order produced by inserting leaf k+1 into every edge of
// every k-leaf topology. There are (2n-5)!! of them.
std::vector<Tree> enumerate_topologies(int n, int max_n = 8);

}  // namespace kimura3
