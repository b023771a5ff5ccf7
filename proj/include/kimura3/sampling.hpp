#pragma once

#include <cstdint>

#include "kimura3/model.hpp"
#include "kimura3/tree.hpp"

namespace kimura3 {

// Seeded parameter draws shared by the verification CLI and the test
// suites. All have P_A = 1 on every edge and consume exactly one seed.

// Exact rationals k/64 with k in [1, 63] for P_C, P_G, P_T; all coordinates
// nonzero, so the sign-flip action is free.
RationalModelParams draw_generic_rational(const Tree& t, std::uint64_t seed);

// Small off-diagonal probabilities b, c, d in (0.01, 0.08); the Fourier
// image is strictly positive and the probability row lies in the simplex.
ModelParams draw_biologically_meaningful(const Tree& t, std::uint64_t seed);

// P_C, P_G, P_T uniform in [lo, hi].
ModelParams draw_box(const Tree& t, std::uint64_t seed, double lo, double hi);

// Like draw_box but redrawn per edge until the probability-frame image is a
// simplex point, so simulate() accepts it.
ModelParams draw_stochastic(const Tree& t, std::uint64_t seed, double lo, double hi);

std::vector<std::array<double, 4>> to_prob_rows(const ModelParams& params);

}  // namespace kimura3
