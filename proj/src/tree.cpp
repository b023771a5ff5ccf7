#include "kimura3/tree.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <limits>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

namespace kimura3 {

namespace {

// Newick token scanner: labels, punctuation, optional ":length" suffixes.
struct NewickScanner {
  const std::string& text;
  std::size_t pos = 0;
  bool saw_branch_length = false;

  explicit NewickScanner(const std::string& t) : text(t) {}

  void skip_ws() {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  }

  char peek() {
    skip_ws();
    if (pos >= text.size()) throw std::invalid_argument("newick: unexpected end of input");
    return text[pos];
  }

  char take() {
    char c = peek();
    ++pos;
    return c;
  }

  void expect(char c) {
    char got = take();
    if (got != c) {
      throw std::invalid_argument(std::string("newick: expected '") + c + "', got '" + got + "'");
    }
  }

  int read_label() {
    skip_ws();
    std::size_t start = pos;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
    if (pos == start) {
      throw std::invalid_argument("newick: expected an integer leaf label at position " +
                                  std::to_string(start));
    }
    return std::stoi(text.substr(start, pos - start));
  }

  void maybe_branch_length() {
    skip_ws();
    if (pos < text.size() && text[pos] == ':') {
      ++pos;
      skip_ws();
      std::size_t start = pos;
      while (pos < text.size() &&
             (std::isdigit(static_cast<unsigned char>(text[pos])) || text[pos] == '.' ||
              text[pos] == '-' || text[pos] == '+' || text[pos] == 'e' || text[pos] == 'E')) {
        ++pos;
      }
      if (pos == start) throw std::invalid_argument("newick: ':' without a branch length");
      saw_branch_length = true;
    }
  }
};

}  // namespace

Tree Tree::build(std::vector<std::vector<int>> adj, std::vector<int> labels,
                 std::vector<int> order) {
  Tree t;
  t.adj_ = std::move(adj);
  t.node_label_ = std::move(labels);
  t.leaf_order_ = std::move(order);
  t.n_ = static_cast<int>(t.leaf_order_.size());
  t.normalize();
  return t;
}

void Tree::normalize() {
  const int nodes = static_cast<int>(adj_.size());
  if (n_ < 3) throw std::invalid_argument("tree: need at least 3 leaves");
  int leaf_nodes = 0;
  for (int v = 0; v < nodes; ++v) {
    const std::size_t deg = adj_[v].size();
    if (deg == 1) {
      ++leaf_nodes;
      if (node_label_[v] < 0) throw std::invalid_argument("tree: unlabelled leaf");
    } else if (deg != 3) {
      throw std::invalid_argument("tree: interior node of degree " + std::to_string(deg) +
                                  " (trivalent required)");
    }
  }
  if (leaf_nodes != n_ || nodes != 2 * n_ - 2) {
    throw std::invalid_argument("tree: inconsistent node counts");
  }

  sorted_labels_.clear();
  for (int v = 0; v < nodes; ++v) {
    if (adj_[v].size() == 1) sorted_labels_.push_back(node_label_[v]);
  }
  std::sort(sorted_labels_.begin(), sorted_labels_.end());
  for (std::size_t i = 1; i < sorted_labels_.size(); ++i) {
    if (sorted_labels_[i] == sorted_labels_[i - 1]) {
      throw std::invalid_argument("tree: duplicate leaf label " + std::to_string(sorted_labels_[i]));
    }
  }

  // Min leaf label reachable within each subtree, directed away from the
  // root leaf; used to order the canonical traversal.
  const int root = node_of_label(sorted_labels_.front());
  std::vector<int> min_label(nodes, std::numeric_limits<int>::max());
  std::function<int(int, int)> scan = [&](int v, int parent) -> int {
    int m = adj_[v].size() == 1 ? node_label_[v] : std::numeric_limits<int>::max();
    for (int w : adj_[v]) {
      if (w != parent) m = std::min(m, scan(w, v));
    }
    min_label[v] = m;
    return m;
  };
  scan(root, -1);

  edges_.clear();
  interior_.clear();
  std::function<void(int, int)> walk = [&](int v, int parent) {
    if (adj_[v].size() > 1) interior_.push_back(v);
    std::vector<int> children;
    for (int w : adj_[v]) {
      if (w != parent) children.push_back(w);
    }
    std::sort(children.begin(), children.end(),
              [&](int a, int b) { return min_label[a] < min_label[b]; });
    for (int w : children) {
      edges_.emplace_back(v, w);
      walk(w, v);
    }
  };
  edges_.emplace_back(root, adj_[root][0]);
  walk(adj_[root][0], root);

  edge_of_pair_.assign(static_cast<std::size_t>(nodes) * nodes, -1);
  for (std::size_t e = 0; e < edges_.size(); ++e) {
    auto [u, v] = edges_[e];
    edge_of_pair_[static_cast<std::size_t>(u) * nodes + v] = static_cast<int>(e);
    edge_of_pair_[static_cast<std::size_t>(v) * nodes + u] = static_cast<int>(e);
  }
}

bool Tree::is_leaf_node(int node) const { return adj_[node].size() == 1; }

int Tree::label_of_node(int node) const {
  if (!is_leaf_node(node)) throw std::invalid_argument("label_of_node: interior node");
  return node_label_[node];
}

int Tree::node_of_label(int label) const {
  for (int v = 0; v < static_cast<int>(adj_.size()); ++v) {
    if (adj_[v].size() == 1 && node_label_[v] == label) return v;
  }
  throw std::invalid_argument("no leaf labelled " + std::to_string(label));
}

int Tree::position_of_label(int label) const {
  for (int i = 0; i < n_; ++i) {
    if (leaf_order_[i] == label) return i;
  }
  throw std::invalid_argument("label " + std::to_string(label) + " not in leaf order");
}

int Tree::edge_index(int u, int v) const {
  int e = edge_of_pair_[static_cast<std::size_t>(u) * adj_.size() + v];
  if (e < 0) throw std::invalid_argument("no such edge");
  return e;
}

int Tree::terminal_edge_index(int label) const {
  int leaf = node_of_label(label);
  return edge_index(leaf, adj_[leaf][0]);
}

const std::vector<int>& Tree::neighbors(int node) const { return adj_[node]; }

Tree Tree::parse_newick(const std::string& text, std::string* warnings) {
  NewickScanner sc(text);

  std::vector<std::vector<int>> adj;
  std::vector<int> labels;
  auto new_node = [&](int label) {
    adj.emplace_back();
    labels.push_back(label);
    return static_cast<int>(adj.size()) - 1;
  };
  auto link = [&](int u, int v) {
    adj[u].push_back(v);
    adj[v].push_back(u);
  };

  // Recursive descent; returns the node id of the clade just read.
  std::function<int()> read_clade = [&]() -> int {
    if (sc.peek() == '(') {
      sc.take();
      int me = new_node(-1);
      int children = 0;
      while (true) {
        int child = read_clade();
        link(me, child);
        ++children;
        char c = sc.take();
        if (c == ')') break;
        if (c != ',') throw std::invalid_argument("newick: expected ',' or ')'");
      }
      if (children < 2) throw std::invalid_argument("newick: clade with fewer than 2 children");
      sc.maybe_branch_length();
      return me;
    }
    int label = sc.read_label();
    sc.maybe_branch_length();
    return new_node(label);
  };

  if (sc.peek() != '(') throw std::invalid_argument("newick: input must start with '('");
  int root = read_clade();
  sc.expect(';');
  sc.skip_ws();
  if (sc.pos != text.size()) throw std::invalid_argument("newick: trailing characters after ';'");
  if (sc.saw_branch_length && warnings != nullptr) {
    *warnings += "branch lengths present in Newick input were ignored\n";
  }

  // Smooth a degree-2 root so rooted inputs become unrooted.
  if (adj[root].size() == 2) {
    int a = adj[root][0], b = adj[root][1];
    adj[a].erase(std::find(adj[a].begin(), adj[a].end(), root));
    adj[b].erase(std::find(adj[b].begin(), adj[b].end(), root));
    adj[a].push_back(b);
    adj[b].push_back(a);
    adj[root].clear();
  }

  // Compact node ids (drop the smoothed root if any).
  std::vector<int> remap(adj.size(), -1);
  std::vector<std::vector<int>> cadj;
  std::vector<int> clabels;
  for (std::size_t v = 0; v < adj.size(); ++v) {
    if (!adj[v].empty()) {
      remap[v] = static_cast<int>(cadj.size());
      cadj.emplace_back();
      clabels.push_back(labels[v]);
    }
  }
  for (std::size_t v = 0; v < adj.size(); ++v) {
    if (remap[v] < 0) continue;
    for (int w : adj[v]) cadj[remap[v]].push_back(remap[w]);
  }

  std::vector<int> order;
  for (std::size_t v = 0; v < cadj.size(); ++v) {
    if (cadj[v].size() == 1) {
      if (clabels[v] < 1) throw std::invalid_argument("newick: leaf labels must be positive integers");
      order.push_back(clabels[v]);
    }
  }
  std::sort(order.begin(), order.end());
  const int n = static_cast<int>(order.size());
  for (int i = 0; i < n; ++i) {
    if (order[i] != i + 1) {
      throw std::invalid_argument("newick: leaf labels must be exactly 1.." + std::to_string(n));
    }
  }

  return build(std::move(cadj), std::move(clabels), std::move(order));
}

Tree Tree::claw(int a, int b, int c) {
  std::vector<std::vector<int>> adj(4);
  std::vector<int> labels = {a, b, c, -1};
  for (int v = 0; v < 3; ++v) {
    adj[v].push_back(3);
    adj[3].push_back(v);
  }
  std::vector<int> order = {a, b, c};
  std::sort(order.begin(), order.end());
  return build(std::move(adj), std::move(labels), std::move(order));
}

std::string Tree::newick() const {
  // Print from the interior node next to the smallest leaf, subtrees in
  // order of minimal leaf label; this is the same orientation that fixes
  // the canonical edge order.
  const int root_leaf = node_of_label(sorted_labels_.front());
  const int hub = adj_[root_leaf][0];

  std::function<int(int, int)> min_label = [&](int v, int parent) -> int {
    if (is_leaf_node(v)) return node_label_[v];
    int m = std::numeric_limits<int>::max();
    for (int w : adj_[v]) {
      if (w != parent) m = std::min(m, min_label(w, v));
    }
    return m;
  };
  std::function<std::string(int, int)> print = [&](int v, int parent) -> std::string {
    if (is_leaf_node(v)) return std::to_string(node_label_[v]);
    std::vector<int> children;
    for (int w : adj_[v]) {
      if (w != parent) children.push_back(w);
    }
    std::sort(children.begin(), children.end(),
              [&](int a, int b) { return min_label(a, v) < min_label(b, v); });
    std::string s = "(";
    for (std::size_t i = 0; i < children.size(); ++i) {
      if (i > 0) s += ",";
      s += print(children[i], v);
    }
    s += ")";
    return s;
  };

  std::vector<int> tops;
  for (int w : adj_[hub]) tops.push_back(w);
  std::sort(tops.begin(), tops.end(),
            [&](int a, int b) { return min_label(a, hub) < min_label(b, hub); });
  std::string s = "(";
  for (std::size_t i = 0; i < tops.size(); ++i) {
    if (i > 0) s += ",";
    s += print(tops[i], hub);
  }
  s += ");";
  return s;
}

std::vector<Cherry> Tree::cherries() const {
  std::vector<Cherry> out;
  for (int v : interior_) {
    std::vector<int> leaf_nbrs;
    for (int w : adj_[v]) {
      if (is_leaf_node(w)) leaf_nbrs.push_back(node_label_[w]);
    }
    std::sort(leaf_nbrs.begin(), leaf_nbrs.end());
    for (std::size_t i = 0; i < leaf_nbrs.size(); ++i) {
      for (std::size_t j = i + 1; j < leaf_nbrs.size(); ++j) {
        out.push_back(Cherry{leaf_nbrs[i], leaf_nbrs[j], v});
      }
    }
  }
  std::sort(out.begin(), out.end(), [](const Cherry& a, const Cherry& b) {
    return std::pair(a.leaf_a, a.leaf_b) < std::pair(b.leaf_a, b.leaf_b);
  });
  return out;
}

Cherry Tree::canonical_cherry() const {
  auto all = cherries();
  if (all.empty()) throw std::logic_error("trivalent tree without a cherry");
  const Cherry* best = &all.front();
  for (const Cherry& c : all) {
    if (c.leaf_b > best->leaf_b) best = &c;
  }
  return *best;
}

Tree Tree::with_cherry_last(const Cherry& c) const {
  std::vector<int> order;
  for (int label : leaf_order_) {
    if (label != c.leaf_a && label != c.leaf_b) order.push_back(label);
  }
  if (order.size() != static_cast<std::size_t>(n_ - 2)) {
    throw std::invalid_argument("with_cherry_last: cherry leaves not in this tree");
  }
  order.push_back(c.leaf_a);
  order.push_back(c.leaf_b);
  return build(adj_, node_label_, std::move(order));
}

Tree Tree::collapse_cherry(const Cherry& c) const {
  if (n_ < 4) {
    throw std::invalid_argument("collapse_cherry: would drop below the 3-leaf minimum");
  }
  const int na = node_of_label(c.leaf_a);
  const int nb = node_of_label(c.leaf_b);
  if (adj_[na][0] != c.node || adj_[nb][0] != c.node) {
    throw std::invalid_argument("collapse_cherry: not a cherry of this tree");
  }

  std::vector<std::vector<int>> adj = adj_;
  std::vector<int> labels = node_label_;
  adj[na].clear();
  adj[nb].clear();
  auto& mn = adj[c.node];
  mn.erase(std::find(mn.begin(), mn.end(), na));
  mn.erase(std::find(mn.begin(), mn.end(), nb));
  const int m_label = sorted_labels_.back() + 1;
  labels[c.node] = m_label;

  // Compact ids.
  std::vector<int> remap(adj.size(), -1);
  std::vector<std::vector<int>> cadj;
  std::vector<int> clabels;
  for (std::size_t v = 0; v < adj.size(); ++v) {
    if (!adj[v].empty()) {
      remap[v] = static_cast<int>(cadj.size());
      cadj.emplace_back();
      clabels.push_back(labels[v]);
    }
  }
  for (std::size_t v = 0; v < adj.size(); ++v) {
    if (remap[v] < 0) continue;
    for (int w : adj[v]) cadj[remap[v]].push_back(remap[w]);
  }

  std::vector<int> order;
  for (int label : leaf_order_) {
    if (label != c.leaf_a && label != c.leaf_b) order.push_back(label);
  }
  order.push_back(m_label);
  return build(std::move(cadj), std::move(clabels), std::move(order));
}

std::optional<std::vector<Nuc>> Tree::edge_assignment(const Pattern& p) const {
  if (p.size() != n_) throw std::invalid_argument("edge_assignment: pattern length mismatch");
  if (p.sum() != Nuc::A) return std::nullopt;

  const int E = edge_count();
  std::vector<Nuc> label(E, Nuc::A);
  std::vector<bool> known(E, false);
  std::vector<int> unknown_at(adj_.size(), 0);
  for (int v : interior_) unknown_at[v] = 3;

  auto set_edge = [&](int e, Nuc x, std::vector<int>& ready) {
    label[e] = x;
    known[e] = true;
    auto [u, v] = edges_[e];
    for (int w : {u, v}) {
      if (!is_leaf_node(w) && --unknown_at[w] == 1) ready.push_back(w);
    }
  };

  std::vector<int> ready;
  for (int i = 0; i < n_; ++i) {
    set_edge(terminal_edge_index(leaf_order_[i]), p[i], ready);
  }
  // Peel inward: an interior node with one unknown incident edge forces it.
  while (!ready.empty()) {
    int v = ready.back();
    ready.pop_back();
    Nuc acc = Nuc::A;
    int missing = -1;
    for (int w : adj_[v]) {
      int e = edge_index(v, w);
      if (known[e]) {
        acc = add(acc, label[e]);
      } else {
        missing = e;
      }
    }
    if (missing >= 0) set_edge(missing, acc, ready);
  }

  for (int v : interior_) {
    Nuc acc = Nuc::A;
    for (int w : adj_[v]) acc = add(acc, label[edge_index(v, w)]);
    if (acc != Nuc::A) throw std::logic_error("edge_assignment: propagation inconsistency");
  }
  return label;
}

std::vector<int> Tree::edge_split(int e) const {
  auto [u, v] = edges_[e];
  // Collect leaf labels on the v side (v is the child in the canonical DFS).
  std::vector<int> out;
  std::function<void(int, int)> collect = [&](int x, int parent) {
    if (is_leaf_node(x)) {
      out.push_back(node_label_[x]);
      return;
    }
    for (int w : adj_[x]) {
      if (w != parent) collect(w, x);
    }
  };
  collect(v, u);
  std::sort(out.begin(), out.end());
  return out;
}

bool Tree::same_topology(const Tree& other) const {
  if (n_ != other.n_ || sorted_labels_ != other.sorted_labels_) return false;
  auto splits = [](const Tree& t) {
    std::set<std::vector<int>> s;
    for (int e = 0; e < t.edge_count(); ++e) s.insert(t.edge_split(e));
    return s;
  };
  return splits(*this) == splits(other);
}

std::vector<Tree> enumerate_topologies(int n, int max_n) {
  if (n < 3 || n > max_n) {
    throw std::invalid_argument("enumerate_topologies: leaf count " + std::to_string(n) +
                                " outside [3, " + std::to_string(max_n) + "]");
  }
  std::vector<Tree> current = {Tree::claw(1, 2, 3)};
  for (int k = 4; k <= n; ++k) {
    std::vector<Tree> next;
    next.reserve(current.size() * (2 * (k - 1) - 3));
    for (const Tree& t : current) {
      for (int e = 0; e < t.edge_count(); ++e) {
        // Subdivide edge e and hang leaf k off the new node.
        auto [u, v] = t.edges()[e];
        std::vector<std::vector<int>> adj = t.adj_;
        std::vector<int> labels = t.node_label_;
        int mid = static_cast<int>(adj.size());
        adj.emplace_back();
        labels.push_back(-1);
        int leaf = static_cast<int>(adj.size());
        adj.emplace_back();
        labels.push_back(k);
        *std::find(adj[u].begin(), adj[u].end(), v) = mid;
        *std::find(adj[v].begin(), adj[v].end(), u) = mid;
        adj[mid] = {u, v, leaf};
        adj[leaf] = {mid};
        std::vector<int> order = t.leaf_order_;
        order.push_back(k);
        std::sort(order.begin(), order.end());
        next.push_back(Tree::build(std::move(adj), std::move(labels), std::move(order)));
      }
    }
    current = std::move(next);
  }
  return current;
}

}  // namespace kimura3
