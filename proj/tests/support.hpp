#pragma once

#include "ssrqec/hilbert.hpp"
#include "ssrqec/random.hpp"

#include <Eigen/QR>

#include <random>

namespace testing {

using ssrqec::cplx;

inline cplx random_cplx(std::mt19937_64& rng) {
  const double re = 2.0 * ssrqec::uniform01(rng) - 1.0;
  return {re, 2.0 * ssrqec::uniform01(rng) - 1.0};
}

inline Eigen::MatrixXcd random_matrix(std::mt19937_64& rng, Eigen::Index rows, Eigen::Index cols) {
  Eigen::MatrixXcd m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = random_cplx(rng);
  return m;
}

inline ssrqec::StateVector random_state(std::mt19937_64& rng, const ssrqec::ProductSpace& space) {
  Eigen::VectorXcd v = random_matrix(rng, static_cast<Eigen::Index>(space.dim()), 1);
  return {space, v.normalized()};
}

inline Eigen::MatrixXcd random_unitary(std::mt19937_64& rng, Eigen::Index d) {
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(random_matrix(rng, d, d));
  return qr.householderQ() * Eigen::MatrixXcd::Identity(d, d);
}

inline Eigen::MatrixXcd random_density(std::mt19937_64& rng, Eigen::Index d) {
  const Eigen::MatrixXcd a = random_matrix(rng, d, d);
  const Eigen::MatrixXcd rho = a * a.adjoint();
  return rho / rho.trace().real();
}

inline double max_abs(const Eigen::MatrixXcd& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

}  // namespace testing
