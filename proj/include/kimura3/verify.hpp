#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "kimura3/invariants.hpp"
#include "kimura3/model.hpp"
#include "kimura3/tree.hpp"

namespace kimura3 {

// Exponent multiset of a q-monomial pushed through the parameterization:
// sorted (edge index, state) pairs, one per edge per factor. A degree-d
// monomial expands to exactly d entries on every edge.
using ThetaMonomial = std::vector<std::pair<int, Nuc>>;

// Throws if some factor lies off the slice (no consistent edge labelling).
ThetaMonomial theta_expand(const Tree& t, const Monomial& m);

// Arithmetic-free membership certificate: a binomial vanishes on every
// model point of the topology iff both sides expand to the same edge-state
// multiset. The hyperplane element is not a binomial in this sense and is
// rejected (it vanishes because every edge contributes P^e_A = 1).
bool vanishes_on_model(const Tree& t, const Binomial& b);

// Slice coordinates (pattern ids with sum A) in ascending order; the
// column order of the Jacobian below.
std::vector<std::uint32_t> slice_coordinates(int n);

// Analytic |set| x 4^(n-1) matrix of partial derivatives with respect to
// the slice coordinates at q; the derivative of a monomial is its cofactor
// times the multiplicity.
std::vector<std::vector<double>> jacobian_matrix(const InvariantSet& set, const QVector& q);

// Singular values of the Jacobian, descending.
std::vector<double> jacobian_singular_values(const InvariantSet& set, const QVector& q);

// Rank of the Jacobian: singular values below svd_cutoff * sigma_max are
// treated as zero.
int jacobian_rank(const InvariantSet& set, const QVector& q,
                  double svd_cutoff = 1e-8);

// Exact value of every generator at phi(params); all zero when params define
// a model point of the set's topology.
std::vector<mpq_class> rational_evaluate(const InvariantSet& set,
                                         const RationalModelParams& params);

}  // namespace kimura3
