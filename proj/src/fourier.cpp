#include "kimura3/fourier.hpp"

#include <cmath>
#include <stdexcept>

namespace kimura3 {

double QVector::off_slice_mass() const {
  double mass = 0.0;
  for (std::uint64_t id = 0; id < values.size(); ++id) {
    if (pattern_id_sum(id) != Nuc::A) mass += std::abs(values[id]);
  }
  return mass;
}

void hadamard4_in_place(std::vector<double>& v, int n) {
  if (v.size() != pattern_space_size(n)) {
    throw std::invalid_argument("hadamard4: vector length is not 4^n");
  }
  const std::uint64_t total = v.size();
  for (int axis = 0; axis < n; ++axis) {
    const std::uint64_t stride = std::uint64_t{1} << (2 * axis);
    const std::uint64_t block = stride * 4;
    for (std::uint64_t base = 0; base < total; base += block) {
      for (std::uint64_t off = 0; off < stride; ++off) {
        const std::uint64_t i = base + off;
        const double xa = v[i];
        const double xc = v[i + stride];
        const double xg = v[i + 2 * stride];
        const double xt = v[i + 3 * stride];
        v[i] = xa + xc + xg + xt;
        v[i + stride] = xa - xc + xg - xt;
        v[i + 2 * stride] = xa + xc - xg - xt;
        v[i + 3 * stride] = xa - xc - xg + xt;
      }
    }
  }
}

QVector p_to_q(const PatternDistribution& p) {
  QVector q{p.n, p.values};
  hadamard4_in_place(q.values, q.n);
  return q;
}

PatternDistribution q_to_p(const QVector& q) {
  PatternDistribution p{q.n, q.values};
  hadamard4_in_place(p.values, p.n);
  const double scale = 1.0 / static_cast<double>(pattern_space_size(p.n));
  for (double& x : p.values) x *= scale;
  return p;
}

std::array<double, 4> params_to_fourier(const std::array<double, 4>& e) {
  const auto [a, b, c, d] = e;
  return {a + b + c + d, a - b + c - d, a + b - c - d, a - b - c + d};
}

std::array<double, 4> params_to_prob(const std::array<double, 4>& f) {
  const auto [pa, pc, pg, pt] = f;
  return {(pa + pc + pg + pt) / 4.0, (pa - pc + pg - pt) / 4.0,
          (pa + pc - pg - pt) / 4.0, (pa - pc - pg + pt) / 4.0};
}

}  // namespace kimura3
