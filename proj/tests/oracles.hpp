#pragma once
// Test-only reference computations, coded independently of the library.

#include "ssrqec/scatter.hpp"

#include <array>
#include <vector>

namespace oracle {

using ssrqec::scatter::cplx;
using ssrqec::scatter::FourMomentum;
using ssrqec::scatter::Matrix4;

// Chiral (Weyl) representation; traces do not depend on the basis.
struct Chiral {
  std::array<Matrix4, 4> g;
  Matrix4 g5;

  Chiral() {
    const cplx i(0.0, 1.0);
    const Eigen::Matrix2cd id = Eigen::Matrix2cd::Identity(), z = Eigen::Matrix2cd::Zero();
    const std::array<Eigen::Matrix2cd, 3> s{Eigen::Matrix2cd{{0, 1}, {1, 0}}, Eigen::Matrix2cd{{0, -i}, {i, 0}},
                                            Eigen::Matrix2cd{{1, 0}, {0, -1}}};
    auto block = [](const Eigen::Matrix2cd& a, const Eigen::Matrix2cd& b, const Eigen::Matrix2cd& c,
                    const Eigen::Matrix2cd& d) {
      Matrix4 m;
      m << a, b, c, d;
      return m;
    };
    g[0] = block(z, id, id, z);
    for (std::size_t k = 0; k < 3; ++k) g[k + 1] = block(z, s[k], -s[k], z);
    g5 = block(-id, z, z, id);
  }

  Matrix4 slash(const FourMomentum& p) const { return g[0] * p.e - g[1] * p.px - g[2] * p.py - g[3] * p.pz; }
};

// (1/2) Tr[(k3slash + m_n) G (k1slash + m_p) Gbar] with Gbar = g0 G^dag g0.
inline double spin_summed_trace(const ssrqec::scatter::Kinematics& k, const ssrqec::scatter::Couplings& c) {
  const cplx i(0.0, 1.0);
  const Chiral ch;
  const Matrix4 id = Matrix4::Identity();
  const FourMomentum q = k.k1 + k.k2;
  const double denom = q.mass_squared() - k.m_p * k.m_p;
  const Matrix4 vertex = -i * c.g1 * ch.slash(k.k4) * ch.g5 - c.g2 * ch.g5;
  const Matrix4 gamma = (-i * c.lambda) * vertex * (i * (ch.slash(q) + k.m_p * id) / denom);
  const Matrix4 gamma_bar = ch.g[0] * gamma.adjoint() * ch.g[0];
  return 0.5 * ((ch.slash(k.k3) + k.m_n * id) * gamma * (ch.slash(k.k1) + k.m_p * id) * gamma_bar).trace().real();
}

// Probability that at least ceil(n/2) of n independent flips occur, by Pascal's triangle.
inline double majority_flip_tail(int n, double p) {
  std::vector<double> row{1.0};
  for (int k = 0; k < n; ++k) {
    std::vector<double> next(row.size() + 1, 0.0);
    for (std::size_t j = 0; j < row.size(); ++j) {
      next[j] += row[j] * (1.0 - p);
      next[j + 1] += row[j] * p;
    }
    row = next;
  }
  double tail = 0.0;
  for (int j = (n + 1) / 2; j <= n; ++j) tail += row[static_cast<std::size_t>(j)];
  return tail;
}

}  // namespace oracle
