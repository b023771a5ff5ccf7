#include "kimura3/model.hpp"

#include <cmath>
#include <functional>

namespace kimura3 {

QVector phi(const ModelParams& params) {
  return QVector{params.tree.leaf_count(), phi_values(params)};
}

PatternDistribution joint_probability(const ModelParams& params) {
  params.check();
  const Tree& t = params.tree;
  const int n = t.leaf_count();
  const int k = t.interior_count();

  // Substitution matrix entries depend only on the group difference of the
  // endpoint states: S^e[x][y] = f^e(x + y).
  std::vector<std::array<double, 4>> f(t.edge_count());
  for (int e = 0; e < t.edge_count(); ++e) f[e] = params_to_prob(params.edge[e]);

  // State per node: leaves fixed by the pattern, interior nodes enumerated.
  const auto& interior = t.interior_nodes();
  std::vector<double> p(pattern_space_size(n), 0.0);
  std::vector<Nuc> state(interior.size() + static_cast<std::size_t>(2 * n - 2), Nuc::A);

  for (std::uint64_t id = 0; id < p.size(); ++id) {
    for (int i = 0; i < n; ++i) {
      state[static_cast<std::size_t>(t.node_of_label(t.leaf_order()[i]))] =
          pattern_id_digit(id, i);
    }
    double total = 0.0;
    for (std::uint64_t combo = 0; combo < pattern_space_size(k); ++combo) {
      for (int v = 0; v < k; ++v) {
        state[static_cast<std::size_t>(interior[v])] = pattern_id_digit(combo, v);
      }
      double prod = 1.0;
      for (int e = 0; e < t.edge_count(); ++e) {
        auto [u, v] = t.edges()[e];
        prod *= f[e][static_cast<int>(add(state[u], state[v]))];
      }
      total += prod;
    }
    p[id] = 0.25 * total;
  }
  return PatternDistribution{n, std::move(p)};
}

GroupAction GroupAction::identity(const Tree& t) {
  return GroupAction{std::vector<std::pair<int, int>>(t.interior_count(), {1, 1})};
}

GroupAction GroupAction::from_index(const Tree& t, std::uint64_t index) {
  GroupAction g = identity(t);
  for (int v = 0; v < t.interior_count(); ++v) {
    g.node_signs[v].first = (index >> (2 * v)) & 1 ? -1 : 1;
    g.node_signs[v].second = (index >> (2 * v + 1)) & 1 ? -1 : 1;
  }
  return g;
}

std::vector<std::pair<int, int>> edge_signs(const Tree& t, const GroupAction& g) {
  std::vector<std::pair<int, int>> node_sign(2 * t.leaf_count() - 2, {1, 1});
  for (int v = 0; v < t.interior_count(); ++v) {
    node_sign[static_cast<std::size_t>(t.interior_nodes()[v])] = g.node_signs[v];
  }
  std::vector<std::pair<int, int>> out(t.edge_count(), {1, 1});
  for (int e = 0; e < t.edge_count(); ++e) {
    auto [u, v] = t.edges()[e];
    for (int w : {u, v}) {
      if (!t.is_leaf_node(w)) {
        out[e].first *= node_sign[static_cast<std::size_t>(w)].first;
        out[e].second *= node_sign[static_cast<std::size_t>(w)].second;
      }
    }
  }
  return out;
}

bool is_singular_parameter(const ModelParams& params, double eps) {
  params.check();
  for (const auto& e : params.edge) {
    if (std::abs(e[1] * e[2] * e[3]) <= eps) return true;
  }
  return false;
}

bool is_singular_parameter(const RationalModelParams& params) {
  params.check();
  for (const auto& e : params.edge) {
    if (e[1] * e[2] * e[3] == 0) return true;
  }
  return false;
}

bool is_biologically_meaningful(const ModelParams& params) {
  params.check();
  for (const auto& e : params.edge) {
    if (!(e[1] > 0.0 && e[2] > 0.0 && e[3] > 0.0)) return false;
    auto abcd = params_to_prob(e);
    double sum = 0.0;
    for (double x : abcd) {
      if (x < 0.0) return false;
      sum += x;
    }
    if (std::abs(sum - 1.0) > 1e-12) return false;
  }
  return true;
}

}  // namespace kimura3
