#include "kimura3/verify.hpp"

#include <algorithm>
#include <stdexcept>

#include <Eigen/Dense>
#include <Eigen/SVD>

namespace kimura3 {

ThetaMonomial theta_expand(const Tree& t, const Monomial& m) {
  const int n = t.leaf_count();
  ThetaMonomial out;
  out.reserve(m.ids.size() * static_cast<std::size_t>(t.edge_count()));
  for (std::uint32_t id : m.ids) {
    auto labels = t.edge_assignment(Pattern::from_id(n, id));
    if (!labels) {
      throw std::invalid_argument("theta_expand: off-slice pattern " + pattern_id_str(n, id));
    }
    for (int e = 0; e < t.edge_count(); ++e) out.emplace_back(e, (*labels)[e]);
  }
  std::sort(out.begin(), out.end());
  return out;
}

bool vanishes_on_model(const Tree& t, const Binomial& b) {
  if (b.is_hyperplane()) {
    throw std::invalid_argument("vanishes_on_model: hyperplane element is certified separately");
  }
  return theta_expand(t, b.plus) == theta_expand(t, b.minus);
}

namespace {

// d(prod)/dq_c = multiplicity * product of the remaining factors.
double monomial_partial(const Monomial& m, std::uint32_t c, const QVector& q) {
  int mult = 0;
  double rest = 1.0;
  bool skipped = false;
  for (std::uint32_t id : m.ids) {
    if (id == c) {
      ++mult;
      if (!skipped) {
        skipped = true;
        continue;  // leave one factor out
      }
    }
    rest *= q.values[id];
  }
  return mult == 0 ? 0.0 : static_cast<double>(mult) * rest;
}

}  // namespace

std::vector<std::uint32_t> slice_coordinates(int n) {
  std::vector<std::uint32_t> slice;
  slice.reserve(pattern_space_size(n) / 4);
  for (std::uint64_t id = 0; id < pattern_space_size(n); ++id) {
    if (pattern_id_sum(id) == Nuc::A) slice.push_back(static_cast<std::uint32_t>(id));
  }
  return slice;
}

std::vector<std::vector<double>> jacobian_matrix(const InvariantSet& set, const QVector& q) {
  const int n = set.leaf_count();
  if (q.n != n) throw std::invalid_argument("jacobian_matrix: leaf count mismatch");
  const auto slice = slice_coordinates(n);
  std::vector<std::vector<double>> jac(set.generators.size(),
                                       std::vector<double>(slice.size(), 0.0));
  for (std::size_t r = 0; r < set.generators.size(); ++r) {
    const Binomial& b = set.generators[r];
    for (std::size_t c = 0; c < slice.size(); ++c) {
      jac[r][c] = monomial_partial(b.plus, slice[c], q) - monomial_partial(b.minus, slice[c], q);
    }
  }
  return jac;
}

std::vector<double> jacobian_singular_values(const InvariantSet& set, const QVector& q) {
  const auto jac = jacobian_matrix(set, q);
  Eigen::MatrixXd m(static_cast<Eigen::Index>(jac.size()),
                    static_cast<Eigen::Index>(jac.empty() ? 0 : jac.front().size()));
  for (std::size_t r = 0; r < jac.size(); ++r) {
    for (std::size_t c = 0; c < jac[r].size(); ++c) {
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = jac[r][c];
    }
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  const auto& sv = svd.singularValues();
  return std::vector<double>(sv.data(), sv.data() + sv.size());
}

int jacobian_rank(const InvariantSet& set, const QVector& q, double svd_cutoff) {
  const auto sv = jacobian_singular_values(set, q);
  if (sv.empty()) return 0;
  const double cutoff = svd_cutoff * sv.front();
  int rank = 0;
  for (double s : sv) {
    if (s > cutoff) ++rank;
  }
  return rank;
}

std::vector<mpq_class> rational_evaluate(const InvariantSet& set,
                                         const RationalModelParams& params) {
  if (!set.tree.same_topology(params.tree) ||
      set.tree.leaf_order() != params.tree.leaf_order()) {
    throw std::invalid_argument("rational_evaluate: params are for a different topology");
  }
  const std::vector<mpq_class> q = phi_values(params);
  std::vector<mpq_class> out;
  out.reserve(set.generators.size());
  for (const Binomial& b : set.generators) {
    auto product = [&](const Monomial& m) {
      mpq_class prod(1);
      for (std::uint32_t id : m.ids) prod *= q[id];
      return prod;
    };
    out.push_back(product(b.plus) - product(b.minus));
  }
  return out;
}

}  // namespace kimura3
