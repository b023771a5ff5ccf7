#include <doctest.h>

#include <cmath>
#include <functional>

#include <Eigen/Dense>
#include <Eigen/SVD>

#include "kimura3/model.hpp"
#include "kimura3/sampling.hpp"

using namespace kimura3;

namespace {

ModelParams constant_params(const Tree& t, std::array<double, 4> edge) {
  ModelParams p{t, {}};
  for (int e = 0; e < t.edge_count(); ++e) p.edge.push_back(edge);
  return p;
}

}  // namespace

TEST_CASE("phi on the all-ones point") {
  for (int n : {3, 4, 5}) {
    const Tree t = enumerate_topologies(n).front();
    const QVector q = phi(constant_params(t, {1, 1, 1, 1}));
    for (std::uint64_t id = 0; id < q.values.size(); ++id) {
      CHECK(q.values[id] == (pattern_id_sum(id) == Nuc::A ? 1.0 : 0.0));
    }
  }
}

TEST_CASE("phi factors over edge assignments") {
  const Tree claw = Tree::parse_newick("(1,2,3);");
  const QVector q = phi(constant_params(claw, {1.0, 0.5, 0.5, 0.25}));
  CHECK(q.values[Pattern::parse("TCG").id()] == doctest::Approx(0.0625).epsilon(1e-15));
  CHECK(q.values[Pattern::parse("AAA").id()] == 1.0);
  CHECK(q.values[Pattern::parse("CAA").id()] == 0.0);  // off slice

  const Tree quartet = Tree::parse_newick("((1,2),(3,4));");
  ModelParams params{quartet, {}};
  for (int e = 0; e < 5; ++e) {
    params.edge.push_back({1.0, 0.2 + 0.1 * e, 0.3 + 0.05 * e, 0.4 - 0.02 * e});
  }
  // Pattern (C,G,T,A): interior edge carries C+G = T.
  const double expected = params.edge[0][1] * params.edge[1][2] * params.edge[2][3] *
                          params.edge[3][3] * params.edge[4][0];
  CHECK(phi(params).values[Pattern::parse("CGTA").id()] ==
        doctest::Approx(expected).epsilon(1e-15));
}

TEST_CASE("joint probability of the identity channel") {
  const Tree quartet = Tree::parse_newick("((1,2),(3,4));");
  const PatternDistribution p = joint_probability(constant_params(quartet, {1, 1, 1, 1}));
  for (std::uint64_t id = 0; id < p.values.size(); ++id) {
    const Pattern pat = Pattern::from_id(4, id);
    const bool constant = pat[0] == pat[1] && pat[1] == pat[2] && pat[2] == pat[3];
    CHECK(p.values[id] == doctest::Approx(constant ? 0.25 : 0.0).epsilon(1e-15));
  }
}

TEST_CASE("joint probability sums to one for stochastic edges") {
  for (int n : {3, 4, 5}) {
    const Tree t = enumerate_topologies(n).back();
    const ModelParams params = draw_stochastic(t, 77 + n, 0.3, 0.9);
    const PatternDistribution p = joint_probability(params);
    double total = 0.0;
    for (double x : p.values) total += x;
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("two routes through the coordinate change agree") {
  for (int n : {3, 4}) {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      const Tree t = enumerate_topologies(n)[seed % enumerate_topologies(n).size()];
      const ModelParams params = draw_stochastic(t, 100 + seed, 0.3, 0.9);
      const PatternDistribution via_fourier = q_to_p(phi(params));
      const PatternDistribution direct = joint_probability(params);
      for (std::size_t i = 0; i < direct.values.size(); ++i) {
        CHECK(std::abs(via_fourier.values[i] - direct.values[i]) < 1e-10);
      }
    }
  }
}

TEST_CASE("group action on a claw flips signs on every edge") {
  const Tree claw = Tree::parse_newick("(1,2,3);");
  const ModelParams params = constant_params(claw, {1.0, 0.5, 0.25, 0.125});
  GroupAction g = GroupAction::identity(claw);

  CHECK(params_equal(act(g, params), params));

  g.node_signs[0] = {-1, 1};
  const ModelParams flipped = act(g, params);
  for (int e = 0; e < 3; ++e) {
    CHECK(flipped.edge[e][0] == 1.0);
    CHECK(flipped.edge[e][1] == -0.5);
    CHECK(flipped.edge[e][2] == 0.25);
    CHECK(flipped.edge[e][3] == -0.125);
  }
}

TEST_CASE("phi is invariant under the sign action") {
  for (int n : {3, 4, 5}) {
    const auto topologies = enumerate_topologies(n);
    const std::uint64_t order = pattern_space_size(n - 2);

    // Exact, in rational arithmetic.
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
      const Tree& t = topologies[seed % topologies.size()];
      const RationalModelParams params = draw_generic_rational(t, 300 + seed);
      const GroupAction g = GroupAction::from_index(t, (7 * seed + 1) % order);
      REQUIRE(phi_values(act(g, params)) == phi_values(params));
    }

    // And in floating point.
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
      const Tree& t = topologies[seed % topologies.size()];
      const ModelParams params = draw_box(t, 700 + seed, -0.9, 0.9);
      const GroupAction g = GroupAction::from_index(t, (3 * seed + 2) % order);
      const auto moved = phi_values(act(g, params));
      const auto reference = phi_values(params);
      double worst = 0.0;
      for (std::size_t i = 0; i < reference.size(); ++i) {
        worst = std::max(worst, std::abs(moved[i] - reference[i]));
      }
      REQUIRE(worst < 1e-12);
    }
  }
}

TEST_CASE("induced edge signs multiply to one along leaf-to-leaf paths") {
  const Tree t = Tree::parse_newick("(((1,2),3),4,5);");
  for (std::uint64_t idx = 0; idx < pattern_space_size(t.interior_count()); ++idx) {
    const auto signs = edge_signs(t, GroupAction::from_index(t, idx));
    for (int a = 1; a <= 5; ++a) {
      for (int b = a + 1; b <= 5; ++b) {
        // Walk from leaf a to leaf b.
        int prev = -1;
        int node = t.node_of_label(a);
        const int target = t.node_of_label(b);
        int eps = 1, del = 1;
        std::function<bool(int, int)> walk = [&](int v, int parent) -> bool {
          if (v == target) return true;
          for (int w : t.neighbors(v)) {
            if (w == parent) continue;
            if (walk(w, v)) {
              eps *= signs[t.edge_index(v, w)].first;
              del *= signs[t.edge_index(v, w)].second;
              return true;
            }
          }
          return false;
        };
        REQUIRE(walk(node, prev));
        CHECK(eps == 1);
        CHECK(del == 1);
      }
    }
  }
}

TEST_CASE("the sign action is an involution") {
  const Tree t = Tree::parse_newick("((1,2),(3,4));");
  const RationalModelParams params = draw_generic_rational(t, 123);
  for (std::uint64_t idx = 0; idx < 16; ++idx) {
    const GroupAction g = GroupAction::from_index(t, idx);
    CHECK(params_equal(act(g, act(g, params)), params));
  }
}

TEST_CASE("fiber of a generic point has full size") {
  for (int n : {3, 4, 5}) {
    const Tree t = enumerate_topologies(n).front();
    const RationalModelParams params = draw_generic_rational(t, 42 + n);
    const auto orbit = fiber(params);
    CHECK(orbit.size() == pattern_space_size(n - 2));
  }
}

TEST_CASE("fiber of the all-ones point") {
  const Tree quartet = Tree::parse_newick("((1,2),(3,4));");
  RationalModelParams ones{quartet, {}};
  for (int e = 0; e < 5; ++e) ones.edge.push_back({1, 1, 1, 1});
  const auto orbit = fiber(ones);
  CHECK(orbit.size() == 16);
  const auto reference = phi_values(ones);
  for (const auto& member : orbit) {
    CHECK(phi_values(member) == reference);
  }
}

TEST_CASE("zeroing coordinates shrinks the fiber only at reflection-fixed points") {
  const Tree quartet = Tree::parse_newick("((1,2),(3,4));");
  RationalModelParams params = draw_generic_rational(quartet, 9);

  // A single zeroed coordinate leaves the stabilizer trivial: no nontrivial
  // sign assignment flips exactly one edge, so the orbit stays full.
  RationalModelParams one_zero = params;
  one_zero.edge[0][1] = 0;
  CHECK(is_singular_parameter(one_zero));
  CHECK(fiber(one_zero).size() == 16);

  // Zeroing the reflected pair (P_C, P_T) on the three edges at one
  // interior node produces a point fixed by that node's (-1, +1) sign and
  // the orbit collapses.
  RationalModelParams axis = params;
  const int v = quartet.interior_nodes()[0];
  for (int w : quartet.neighbors(v)) {
    const int e = quartet.edge_index(v, w);
    axis.edge[e][1] = 0;
    axis.edge[e][3] = 0;
  }
  CHECK(is_singular_parameter(axis));
  CHECK(fiber(axis).size() < 16);
  CHECK(fiber(axis).size() == 8);
}

TEST_CASE("singular parameter predicate") {
  const Tree claw = Tree::parse_newick("(1,2,3);");
  CHECK(!is_singular_parameter(constant_params(claw, {1.0, 0.5, 0.5, 0.25})));
  CHECK(!is_singular_parameter(constant_params(claw, {1, 1, 1, 1})));

  ModelParams one_zero = constant_params(claw, {1.0, 0.5, 0.5, 0.25});
  one_zero.edge[1] = {1.0, 0.0, 0.5, 0.5};
  CHECK(is_singular_parameter(one_zero));

  ModelParams near_zero = constant_params(claw, {1.0, 0.5, 0.5, 0.25});
  near_zero.edge[2][3] = 1e-12;
  CHECK(!is_singular_parameter(near_zero));
  CHECK(is_singular_parameter(near_zero, 1e-9));
}

TEST_CASE("biologically meaningful parameter predicate") {
  const Tree claw = Tree::parse_newick("(1,2,3);");
  CHECK(is_biologically_meaningful(constant_params(claw, {1, 1, 1, 1})));
  CHECK(is_biologically_meaningful(
      constant_params(claw, {1.0, 2.0 / 3, 2.0 / 3, 2.0 / 3})));
  CHECK(!is_biologically_meaningful(constant_params(claw, {1.0, -0.5, 0.5, 0.5})));
  // Positive Fourier coordinates are not enough: the probability image must
  // stay in the simplex.
  CHECK(!is_biologically_meaningful(constant_params(claw, {1.0, 0.9, 0.05, 0.9})));
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    CHECK(is_biologically_meaningful(draw_biologically_meaningful(claw, seed)));
  }
}

TEST_CASE("numeric rank of the parameterization jacobian is 3(2n-3)") {
  for (int n : {3, 4}) {
    const Tree t = enumerate_topologies(n).front();
    const ModelParams params = draw_biologically_meaningful(t, 17 + n);
    const int coords = 3 * t.edge_count();
    const std::uint64_t dim = pattern_space_size(n);

    Eigen::MatrixXd jac(static_cast<Eigen::Index>(dim), coords);
    const double step = 1e-5;
    for (int c = 0; c < coords; ++c) {
      ModelParams hi = params;
      ModelParams lo = params;
      hi.edge[c / 3][c % 3 + 1] += step;
      lo.edge[c / 3][c % 3 + 1] -= step;
      const auto qhi = phi(hi);
      const auto qlo = phi(lo);
      for (std::uint64_t r = 0; r < dim; ++r) {
        jac(static_cast<Eigen::Index>(r), c) = (qhi.values[r] - qlo.values[r]) / (2 * step);
      }
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(jac);
    const auto& sv = svd.singularValues();
    int rank = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i) {
      if (sv(i) > 1e-7 * sv(0)) ++rank;
    }
    CHECK(rank == 3 * (2 * n - 3));
  }
}
