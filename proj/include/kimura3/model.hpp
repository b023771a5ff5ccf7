#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include <gmpxx.h>

#include "kimura3/fourier.hpp"
#include "kimura3/group.hpp"
#include "kimura3/tree.hpp"

namespace kimura3 {

// Per-edge Fourier-frame parameters (P_A, P_C, P_G, P_T), one entry per
// canonical edge index. Scalar is double for numeric work and mpq_class for
// exact work.
template <typename S>
struct ModelParamsT {
  Tree tree;
  std::vector<std::array<S, 4>> edge;

  void check() const {
    if (edge.size() != static_cast<std::size_t>(tree.edge_count())) {
      throw std::invalid_argument("model params: need one 4-vector per edge");
    }
  }
};

using ModelParams = ModelParamsT<double>;
using RationalModelParams = ModelParamsT<mpq_class>;

// q = prod_e P^e_{x_e} on the slice, 0 elsewhere; x_e from the tree's edge
// assignment of each slice pattern.
template <typename S>
std::vector<S> phi_values(const ModelParamsT<S>& params) {
  params.check();
  const Tree& t = params.tree;
  const int n = t.leaf_count();
  std::vector<S> q(pattern_space_size(n), S(0));
  for (std::uint64_t id = 0; id < q.size(); ++id) {
    auto labels = t.edge_assignment(Pattern::from_id(n, id));
    if (!labels) continue;
    S prod(1);
    for (int e = 0; e < t.edge_count(); ++e) {
      prod *= params.edge[e][static_cast<int>((*labels)[e])];
    }
    q[id] = prod;
  }
  return q;
}

QVector phi(const ModelParams& params);

// Joint pattern distribution of the substitution process: the direct sum of
// edge-matrix products over all interior-node states, rooted at leaf 1 with
// the uniform 1/4 root factor. An algebraic route independent of the
// Fourier one; edge matrices come from the Fourier-frame params via the
// exact inverse frame change. Cost grows as 16^(n-1).
PatternDistribution joint_probability(const ModelParams& params);

// Sign pair per interior node, canonical interior order; +-1 entries.
struct GroupAction {
  std::vector<std::pair<int, int>> node_signs;

  static GroupAction identity(const Tree& t);
  // Decode 2 bits per interior node from an index in [0, 4^(n-2)).
  static GroupAction from_index(const Tree& t, std::uint64_t index);
};

// Induced edge signs: the product of node signs over the interior endpoints
// of each edge. (eps, delta) multiplies (P_C, P_G, P_T) by
// (eps, delta, eps*delta); P_A is untouched.
std::vector<std::pair<int, int>> edge_signs(const Tree& t, const GroupAction& g);

template <typename S>
ModelParamsT<S> act(const GroupAction& g, const ModelParamsT<S>& params) {
  params.check();
  if (g.node_signs.size() != static_cast<std::size_t>(params.tree.interior_count())) {
    throw std::invalid_argument("act: node sign count mismatch");
  }
  auto signs = edge_signs(params.tree, g);
  ModelParamsT<S> out = params;
  for (int e = 0; e < params.tree.edge_count(); ++e) {
    auto [eps, del] = signs[e];
    if (eps < 0) out.edge[e][1] = -out.edge[e][1];
    if (del < 0) out.edge[e][2] = -out.edge[e][2];
    if (eps * del < 0) out.edge[e][3] = -out.edge[e][3];
  }
  return out;
}

namespace detail {
inline bool params_coord_equal(const mpq_class& a, const mpq_class& b) { return a == b; }
inline bool params_coord_equal(double a, double b) { return std::abs(a - b) <= 1e-12; }
}  // namespace detail

template <typename S>
bool params_equal(const ModelParamsT<S>& a, const ModelParamsT<S>& b) {
  if (a.edge.size() != b.edge.size()) return false;
  for (std::size_t e = 0; e < a.edge.size(); ++e) {
    for (int x = 0; x < 4; ++x) {
      if (!detail::params_coord_equal(a.edge[e][x], b.edge[e][x])) return false;
    }
  }
  return true;
}

// Orbit of the parameter point under all 4^(n-2) sign assignments,
// deduplicated; phi is constant on it.
template <typename S>
std::vector<ModelParamsT<S>> fiber(const ModelParamsT<S>& params) {
  const std::uint64_t count = pattern_space_size(params.tree.interior_count());  // 4^(n-2)
  std::vector<ModelParamsT<S>> orbit;
  for (std::uint64_t idx = 0; idx < count; ++idx) {
    auto moved = act(GroupAction::from_index(params.tree, idx), params);
    bool fresh = true;
    for (const auto& seen : orbit) {
      if (params_equal(seen, moved)) {
        fresh = false;
        break;
      }
    }
    if (fresh) orbit.push_back(std::move(moved));
  }
  return orbit;
}

// True iff some edge has P_C * P_G * P_T within eps of zero (exact test at
// the default eps = 0).
bool is_singular_parameter(const ModelParams& params, double eps = 0.0);
bool is_singular_parameter(const RationalModelParams& params);

// True iff every edge has P_C, P_G, P_T > 0 and its probability-frame image
// lies in the closed simplex (which forces P_A = 1).
bool is_biologically_meaningful(const ModelParams& params);

}  // namespace kimura3
