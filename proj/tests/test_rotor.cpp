#include "ssrqec/klcore.hpp"
#include "ssrqec/rotor.hpp"
#include "support.hpp"

#include <doctest.h>
#include <unsupported/Eigen/KroneckerProduct>

#include <cmath>

using namespace ssrqec;
using namespace ssrqec::rotor;
using testing::max_abs;

namespace {

Operator on_b(const RotorSpace& a, const Operator& op) {
  return tensor_product(Operator::identity(a.product_space()), op);
}

Operator on_a(const RotorSpace& b, const Operator& op) {
  return tensor_product(op, Operator::identity(b.product_space()));
}

StateVector logical_state(const RotorSpace& a, const RotorSpace& b, int q1, int q2, cplx alpha,
                          cplx beta, const CoefficientProfile& profile, int window) {
  return build_codeword(a, b, q1, profile, window).state * alpha +
         build_codeword(a, b, q2, profile, window).state * beta;
}

// Operator supported on charges |q - q'| <= band.
Eigen::MatrixXcd banded(std::mt19937_64& rng, Eigen::Index d, Eigen::Index band) {
  Eigen::MatrixXcd m = testing::random_matrix(rng, d, d);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j)
      if (std::abs(i - j) > band) m(i, j) = 0.0;
  return m;
}

}  // namespace

TEST_CASE("charge states and the charge operator") {
  const RotorSpace r(2);
  CHECK(r.dim() == 5);
  CHECK(r.index_of(0) == 2);
  CHECK(charge_state(r, 0)[2] == cplx(1.0));
  CHECK(inner(charge_state(r, 1), charge_state(r, -1)) == cplx(0.0));
  const Operator q = charge_operator(r);
  for (int c = -2; c <= 2; ++c) {
    const StateVector s = charge_state(r, c);
    CHECK(max_abs(apply(q, s).amplitudes() - (s * static_cast<double>(c)).amplitudes()) == 0.0);
  }
  CHECK_THROWS_AS(charge_state(r, 3), std::out_of_range);
}

TEST_CASE("shift up acts as the raising operator and truncates at the top") {
  const RotorSpace r(2);
  const Operator up = shift_up(r);
  CHECK(max_abs(apply(up, charge_state(r, 0)).amplitudes() - charge_state(r, 1).amplitudes()) == 0.0);
  CHECK(apply(up, charge_state(r, 2)).norm() == 0.0);
  CHECK_FALSE(is_unitary(up));

  const std::vector<CodeSpace> sectors{CodeSpace({charge_state(r, 0)}), CodeSpace({charge_state(r, 1)})};
  const SectorCheck check = ssr_sector_check(sectors, ErrorSet({up}));
  CHECK_FALSE(check.respected);
  CHECK(check.worst_element == 1.0);
}

TEST_CASE("phase flips") {
  const RotorSpace r(3);
  for (int q = -3; q <= 3; ++q) {
    const Operator z = phase_flip(r, q);
    CHECK(is_unitary(z));
    CHECK(is_hermitian(z));
    CHECK(max_abs((z * z).to_dense() - Eigen::MatrixXcd::Identity(7, 7)) == 0.0);
    for (int p = -3; p <= 3; ++p)
      CHECK(apply(z, charge_state(r, p))[r.index_of(p)] == cplx(p == q ? -1.0 : 1.0));
  }
  CHECK_THROWS_AS(phase_flip(r, 4), std::out_of_range);
}

TEST_CASE("codeword expansion") {
  const RotorSpace a(2), b(2);
  const Codeword trivial = build_codeword(a, b, 0, CoefficientProfile::uniform(), 0);
  CHECK(max_abs(trivial.state.amplitudes() -
                tensor_product(charge_state(a, 0), charge_state(b, 0)).amplitudes()) == 0.0);

  const Codeword cw = build_codeword(a, b, 1, CoefficientProfile::uniform(), 1);
  const StateVector expected =
      (tensor_product(charge_state(a, 2), charge_state(b, -1)) +
       tensor_product(charge_state(a, 1), charge_state(b, 0)) +
       tensor_product(charge_state(a, 0), charge_state(b, 1))) *
      (1.0 / std::sqrt(3.0));
  CHECK(max_abs(cw.state.amplitudes() - expected.amplitudes()) < 1e-15);
  CHECK(cw.record.coeffs.size() == 3);

  CHECK_THROWS_AS(build_codeword(a, b, 1, CoefficientProfile::uniform(), 2), std::out_of_range);
}

TEST_CASE("gaussian profile is normalized and nonvanishing") {
  for (int w : {1, 3, 6}) {
    const auto c = profile_coefficients(CoefficientProfile::gaussian(), w);
    double norm = 0.0;
    for (double x : c) {
      CHECK(x > 0.0);
      norm += x * x;
    }
    CHECK(norm == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(c[static_cast<std::size_t>(w)] > c.front());
  }
}

TEST_CASE("property: codewords have definite total charge") {
  const RotorSpace a(6), b(4);
  const Operator total = total_charge(a, b);
  for (int q = -2; q <= 2; ++q)
    for (int w = 0; w <= 4; ++w) {
      const StateVector s = build_codeword(a, b, q, CoefficientProfile::gaussian(), w).state;
      CHECK(s.is_normalized(1e-12));
      CHECK(max_abs(apply(total, s).amplitudes() - (s * static_cast<double>(q)).amplitudes()) < 1e-12);
    }
}

TEST_CASE("property: charge-conserving operators never connect distinct charge codewords") {
  const RotorSpace a(4), b(3);
  std::mt19937_64 rng(21);
  const CodeSpace code({build_codeword(a, b, 0, CoefficientProfile::gaussian(), 2).state,
                        build_codeword(a, b, 1, CoefficientProfile::gaussian(), 2).state});
  std::vector<Operator> ops;
  for (int trial = 0; trial < 5; ++trial) {
    Eigen::VectorXcd diag_a(9), diag_b(7);
    for (auto& x : diag_a) x = testing::random_cplx(rng);
    for (auto& x : diag_b) x = testing::random_cplx(rng);
    ops.push_back(tensor_product(Operator::diagonal(a.product_space(), diag_a),
                                 Operator::diagonal(b.product_space(), diag_b)));
  }
  const KLReport r = kl_check(code, ErrorSet(ops));
  CHECK(r.max_offdiagonal == 0.0);
}

TEST_CASE("no error: every outcome recovers the logical state") {
  const RotorSpace a(5), b(3);
  const cplx alpha(0.6, 0.0), beta(0.0, 0.8);
  const StateVector psi = logical_state(a, b, 0, 1, alpha, beta, CoefficientProfile::gaussian(), 3);
  const auto outcomes = enumerate_recovery(psi, 0, 1);
  CHECK(outcomes.size() == 7);
  double total = 0.0;
  for (const auto& o : outcomes) {
    total += o.probability;
    CHECK(logical_fidelity(alpha, beta, o.alpha, o.beta) == doctest::Approx(1.0).epsilon(1e-12));
  }
  CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(logical_error_probability(outcomes, alpha, beta) == 0.0);
}

TEST_CASE("property: any product of up to three B-side phase flips is corrected for every outcome") {
  const RotorSpace a(6), b(3);
  const cplx alpha(0.6, 0.0), beta(0.0, 0.8);
  for (const auto& profile : {CoefficientProfile::uniform(), CoefficientProfile::gaussian()}) {
    const StateVector psi = logical_state(a, b, -1, 2, alpha, beta, profile, 3);
    for (int f1 = -3; f1 <= 3; ++f1)
      for (int f2 = f1; f2 <= 3; ++f2)
        for (int f3 = f2; f3 <= 3; ++f3) {
          const Operator e = on_b(a, phase_flip(b, f1) * phase_flip(b, f2) * phase_flip(b, f3));
          const StateVector corrupted = apply(e, psi);
          for (const auto& o : enumerate_recovery(corrupted, -1, 2))
            CHECK(logical_fidelity(alpha, beta, o.alpha, o.beta) == doctest::Approx(1.0).epsilon(1e-12));
        }
  }
}

TEST_CASE("sampled recovery is seeded and lands on a valid outcome") {
  const RotorSpace a(4), b(2);
  const StateVector psi = apply(on_b(a, phase_flip(b, 1)),
                                logical_state(a, b, 0, 1, 0.6, 0.8, CoefficientProfile::uniform(), 2));
  std::mt19937_64 r1(5), r2(5);
  const RecoveryOutcome o1 = recover_by_measuring_B(psi, 0, 1, r1);
  const RecoveryOutcome o2 = recover_by_measuring_B(psi, 0, 1, r2);
  CHECK(o1.outcome == o2.outcome);
  CHECK(std::abs(o1.outcome) <= 2);
  CHECK(logical_fidelity(0.6, 0.8, o1.alpha, o1.beta) == doctest::Approx(1.0));
  CHECK_THROWS_AS(recover_for_outcome(logical_state(a, b, 0, 1, 0.6, 0.8, CoefficientProfile::uniform(), 0), 0, 1, 2),
                  std::domain_error);
}

TEST_CASE("property: wrong-guess error probability is bounded and shrinks with the window") {
  const cplx alpha(0.6), beta(0.8);
  double previous = 1.0;
  for (int w : {1, 2, 4, 8}) {
    const RotorSpace a(w + 2), b(w);
    const StateVector psi = logical_state(a, b, 0, 1, alpha, beta, CoefficientProfile::uniform(), w);
    const StateVector corrupted = apply(on_a(b, phase_flip(a, 0)), psi);
    const auto outcomes = enumerate_recovery(corrupted, 0, 1);
    int bad = 0;
    for (const auto& o : outcomes)
      if (logical_fidelity(alpha, beta, o.alpha, o.beta) < 1.0 - 1e-10) ++bad;
    CHECK(bad == 2);
    const double p = logical_error_probability(outcomes, alpha, beta);
    CHECK(p > 0.0);
    CHECK(p <= 2.0 / (2 * w + 1) + 1e-12);
    // Uniform profile: each of the two flipped branches carries weight 1/(2W+1).
    CHECK(p == doctest::Approx(2.0 / (2 * w + 1)).epsilon(1e-12));
    CHECK(p <= previous);
    previous = p;
  }
}

TEST_CASE("m_inv of the raising operator on the vacuum") {
  const RotorSpace r(2);
  const GroupDiscretization disc(5);
  const Operator minv = m_inv(shift_up(r), disc);
  const StateVector vac = tensor_product(charge_state(r, 0), charge_state(r, 0));
  const StateVector expected = tensor_product(charge_state(r, -1), charge_state(r, 1));
  CHECK(max_abs(apply(minv, vac).amplitudes() - expected.amplitudes()) < 1e-12);
  CHECK_THROWS_AS(m_inv(shift_up(r), GroupDiscretization(4)), std::invalid_argument);
}

TEST_CASE("discrete phase states are orthonormal at n_g = dim") {
  const RotorSpace r(3);
  const GroupDiscretization disc(7);
  for (int m = 0; m < 7; ++m)
    for (int k = 0; k < 7; ++k)
      CHECK(std::abs(inner(discrete_phase_state(r, disc, m), discrete_phase_state(r, disc, k)) -
                     (m == k ? 1.0 : 0.0)) < 1e-12);
}

TEST_CASE("property: m_inv reproduces expectation values") {
  std::mt19937_64 rng(22);
  const RotorSpace r(2);
  const ProductSpace s = r.product_space();
  for (int n_g : {5, 6, 9, 16}) {
    const GroupDiscretization disc(n_g);
    for (int trial = 0; trial < 100; ++trial) {
      const Eigen::MatrixXcd m = testing::random_matrix(rng, 5, 5);
      const Operator minv = m_inv(Operator::dense(s, m), disc);

      // Charge-diagonal state with an arbitrary reference.
      Eigen::VectorXd w(5);
      for (auto& x : w) x = ssrqec::uniform01(rng) + 0.01;
      const Eigen::MatrixXcd rho_phys = (w / w.sum()).cast<cplx>().asDiagonal();
      const Eigen::MatrixXcd rho_r = testing::random_density(rng, 5);
      const cplx lhs = (minv.to_dense() * Eigen::kroneckerProduct(rho_r, rho_phys)).trace();
      CHECK(std::abs(lhs - (m * rho_phys).trace()) < 1e-9);

      // Reference aligned with theta_0 and an arbitrary state.
      const Eigen::VectorXcd t0 = discrete_phase_state(r, disc, 0).amplitudes();
      const Eigen::MatrixXcd rho_any = testing::random_density(rng, 5);
      if (n_g == 5) {
        const cplx lhs0 = (minv.to_dense() * Eigen::kroneckerProduct(t0 * t0.adjoint(), rho_any)).trace();
        CHECK(std::abs(lhs0 - (m * rho_any).trace()) < 1e-12 * std::max(1.0, m.norm()));
      }
    }
  }
}

TEST_CASE("property: m_inv is a homomorphism") {
  std::mt19937_64 rng(23);
  const RotorSpace r(3);
  const ProductSpace s = r.product_space();
  const GroupDiscretization disc(7);
  for (int trial = 0; trial < 100; ++trial) {
    const Operator m1 = Operator::dense(s, banded(rng, 7, 2));
    const Operator m2 = Operator::dense(s, banded(rng, 7, 2));
    const Eigen::MatrixXcd lhs = (m_inv(m1, disc) * m_inv(m2, disc)).to_dense();
    const Eigen::MatrixXcd rhs = m_inv(m1 * m2, disc).to_dense();
    CHECK(max_abs(lhs - rhs) < 1e-9);
  }
}

TEST_CASE("simulated superposition") {
  const SimulationLayout single{RotorSpace(2), RotorSpace(2), RotorSpace(1), CoefficientProfile::uniform(), 0};
  const StateVector s = prepare_simulated_superposition({{1, 1.0}}, single);
  const StateVector expected = tensor_product(
      tensor_product(charge_state(single.reference, -1), charge_state(single.a, 1)), charge_state(single.b, 0));
  CHECK(max_abs(s.amplitudes() - expected.amplitudes()) == 0.0);
  CHECK_THROWS_AS(prepare_simulated_superposition({{1, 0.5}}, single), std::invalid_argument);

  const SimulationLayout layout{RotorSpace(2), RotorSpace(5), RotorSpace(3), CoefficientProfile::gaussian(), 3};
  const cplx alpha(0.6), beta(0.0, 0.8);
  const StateVector psi = prepare_simulated_superposition({{0, alpha}, {1, beta}}, layout);
  CHECK(psi.is_normalized(1e-12));

  // Total charge across R, A and B vanishes.
  Eigen::VectorXcd qtot(static_cast<Eigen::Index>(psi.dim()));
  const ProductSpace& space = psi.space();
  for (Index i = 0; i < psi.dim(); ++i) {
    const auto d = space.digits(i);
    qtot[static_cast<Eigen::Index>(i)] = layout.reference.charge_at(d[0]) + layout.a.charge_at(d[1]) +
                                         layout.b.charge_at(d[2]);
  }
  CHECK(max_abs(qtot.cwiseProduct(psi.amplitudes())) == 0.0);

  const Operator flips = tensor_product(Operator::identity(ProductSpace({5, 11})),
                                        phase_flip(layout.b, -2) * phase_flip(layout.b, 1));
  for (const auto& o : enumerate_recovery(apply(flips, psi), 0, 1))
    CHECK(logical_fidelity(alpha, beta, o.alpha, o.beta) == doctest::Approx(1.0).epsilon(1e-12));
}
