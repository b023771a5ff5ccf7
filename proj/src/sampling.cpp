#include "kimura3/sampling.hpp"

#include "kimura3/rng.hpp"

namespace kimura3 {

RationalModelParams draw_generic_rational(const Tree& t, std::uint64_t seed) {
  Rng rng(seed);
  RationalModelParams params{t, {}};
  for (int e = 0; e < t.edge_count(); ++e) {
    std::array<mpq_class, 4> row;
    row[0] = 1;
    for (int x = 1; x < 4; ++x) {
      row[x] = mpq_class(static_cast<long>(1 + rng.uniform_int(63)), 64);
    }
    params.edge.push_back(std::move(row));
  }
  return params;
}

ModelParams draw_biologically_meaningful(const Tree& t, std::uint64_t seed) {
  Rng rng(seed);
  ModelParams params{t, {}};
  for (int e = 0; e < t.edge_count(); ++e) {
    const double b = rng.uniform(0.01, 0.08);
    const double c = rng.uniform(0.01, 0.08);
    const double d = rng.uniform(0.01, 0.08);
    params.edge.push_back(params_to_fourier({1.0 - b - c - d, b, c, d}));
  }
  return params;
}

ModelParams draw_box(const Tree& t, std::uint64_t seed, double lo, double hi) {
  Rng rng(seed);
  ModelParams params{t, {}};
  for (int e = 0; e < t.edge_count(); ++e) {
    params.edge.push_back({1.0, rng.uniform(lo, hi), rng.uniform(lo, hi), rng.uniform(lo, hi)});
  }
  return params;
}

ModelParams draw_stochastic(const Tree& t, std::uint64_t seed, double lo, double hi) {
  Rng rng(seed);
  ModelParams params{t, {}};
  for (int e = 0; e < t.edge_count(); ++e) {
    while (true) {
      std::array<double, 4> f = {1.0, rng.uniform(lo, hi), rng.uniform(lo, hi),
                                 rng.uniform(lo, hi)};
      auto abcd = params_to_prob(f);
      if (abcd[0] >= 0.0 && abcd[1] >= 0.0 && abcd[2] >= 0.0 && abcd[3] >= 0.0) {
        params.edge.push_back(f);
        break;
      }
    }
  }
  return params;
}

std::vector<std::array<double, 4>> to_prob_rows(const ModelParams& params) {
  std::vector<std::array<double, 4>> rows;
  rows.reserve(params.edge.size());
  for (const auto& e : params.edge) rows.push_back(params_to_prob(e));
  return rows;
}

}  // namespace kimura3
