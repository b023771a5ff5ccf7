#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "kimura3/group.hpp"

namespace kimura3 {

// Dense vector over all 4^n patterns, probability coordinates. Raw
// transforms accept arbitrary real vectors; distribution-only operations
// state their own preconditions.
struct PatternDistribution {
  int n = 0;
  std::vector<double> values;  // indexed by pattern id
};

// Dense vector over all 4^n patterns, Fourier coordinates. Vectors produced
// by the model parameterization vanish off the slice {pattern sum = A};
// empirical vectors need not, and off_slice_mass reports that misfit.
struct QVector {
  int n = 0;
  std::vector<double> values;  // indexed by pattern id

  double off_slice_mass() const;
};

// One transform pass of the 4x4 character matrix along every tensor axis,
// in place, axis 0 through axis n-1. Unit-stride inner loops, 4^n * n
// scalar adds. Applied once this is the forward transform; the matrix
// squares to 4*I, so applying it again and dividing by 4^n inverts it.
void hadamard4_in_place(std::vector<double>& v, int n);

// q_{g1..gn} = sum_j chi^{g1}(j1) ... chi^{gn}(jn) p_{j1..jn}.
QVector p_to_q(const PatternDistribution& p);

// Exact inverse of p_to_q (same pass, then division by 4^n).
PatternDistribution q_to_p(const QVector& q);

// Per-edge parameter change between the probability frame (a,b,c,d) and the
// Fourier frame (P_A, P_C, P_G, P_T):
//   P_A = a+b+c+d, P_C = a-b+c-d, P_G = a+b-c-d, P_T = a-b-c+d.
std::array<double, 4> params_to_fourier(const std::array<double, 4>& abcd);
std::array<double, 4> params_to_prob(const std::array<double, 4>& fourier);

}  // namespace kimura3
