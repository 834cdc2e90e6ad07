#include "ssrqec/hilbert.hpp"
#include "ssrqec/hilbert_io.hpp"
#include "ssrqec/rotor.hpp"
#include "support.hpp"

#include <doctest.h>

#include <cmath>

using namespace ssrqec;
using testing::max_abs;

namespace {

const ProductSpace kQubit({2});

Operator pauli_z() { return Operator::diagonal(kQubit, Eigen::Vector2cd(1, -1)); }

StateVector plus() { return {kQubit, Eigen::Vector2cd(1, 1) / std::sqrt(2.0)}; }

}  // namespace

TEST_CASE("index convention puts the first factor most significant") {
  const ProductSpace s({2, 3, 4});
  CHECK(s.dim() == 24);
  const std::vector<Index> d{1, 2, 3};
  CHECK(s.flat(d) == 1 * 12 + 2 * 4 + 3);
  CHECK(s.digits(23) == d);
}

TEST_CASE("tensor products of identities and basis states") {
  const Operator i4 = tensor_product(Operator::identity(kQubit), Operator::identity(kQubit));
  CHECK(max_abs(i4.to_dense() - Eigen::MatrixXcd::Identity(4, 4)) == 0.0);

  const StateVector v = tensor_product(StateVector::basis(kQubit, 0), StateVector::basis(kQubit, 1));
  CHECK(v.dim() == 4);
  CHECK(v[1] == cplx(1.0));
  CHECK(v.norm_squared() == doctest::Approx(1.0));
}

TEST_CASE("Z tensor Z on |11> returns +|11>") {
  const Operator zz = tensor_product(pauli_z(), pauli_z());
  const StateVector s11 = StateVector::basis(ProductSpace({2, 2}), 3);
  const StateVector out = apply(zz, s11);
  CHECK(max_abs(out.amplitudes() - s11.amplitudes()) == 0.0);
}

TEST_CASE("mixed tensor product kinds are rejected") {
  const HilbertObject a = StateVector::basis(kQubit, 0);
  const HilbertObject b = Operator::identity(kQubit);
  CHECK_THROWS_AS(tensor_product(a, b), std::invalid_argument);
  CHECK(std::holds_alternative<StateVector>(tensor_product(a, a)));
}

TEST_CASE("apply: identity and the truncated shift") {
  std::mt19937_64 rng(1);
  const StateVector psi = testing::random_state(rng, ProductSpace({3, 2}));
  CHECK(max_abs(apply(Operator::identity(psi.space()), psi).amplitudes() - psi.amplitudes()) == 0.0);

  const rotor::RotorSpace r(2);
  const StateVector out = apply(rotor::shift_up(r), rotor::charge_state(r, 1));
  CHECK(max_abs(out.amplitudes() - rotor::charge_state(r, 2).amplitudes()) == 0.0);
}

TEST_CASE("sparse and dense paths agree") {
  std::mt19937_64 rng(2);
  const ProductSpace s({3, 4});
  for (int trial = 0; trial < 5; ++trial) {
    Eigen::MatrixXcd m = testing::random_matrix(rng, 12, 12);
    for (Eigen::Index i = 0; i < 12; ++i)
      for (Eigen::Index j = 0; j < 12; ++j)
        if (ssrqec::uniform01(rng) < 0.7) m(i, j) = 0.0;
    const Operator d = Operator::dense(s, m), sp = d.as_sparse();
    const Operator d2 = Operator::dense(s, testing::random_matrix(rng, 12, 12));
    const StateVector psi = testing::random_state(rng, s);
    CHECK(max_abs(apply(d, psi).amplitudes() - apply(sp, psi).amplitudes()) < 1e-12);
    CHECK(max_abs((d * d2).to_dense() - (sp * d2.as_sparse()).to_dense()) < 1e-12);
    CHECK(max_abs((d + d2).to_dense() - (sp + d2).to_dense()) < 1e-12);
    CHECK(max_abs(d.adjoint().to_dense() - sp.adjoint().to_dense()) < 1e-12);
    CHECK(max_abs(tensor_product(d, d2).to_dense() - tensor_product(sp, d2.as_sparse()).to_dense()) < 1e-12);
    CHECK(std::abs(expectation(d, psi) - expectation(sp, psi)) < 1e-12);
  }
}

TEST_CASE("auto_from_triplets stores sparse at low fill") {
  const ProductSpace big(std::vector<Index>(8, 2));
  std::vector<Operator::Triplet> t;
  for (Index i = 0; i < big.dim(); ++i) t.emplace_back(i, i, 1.0);
  CHECK(Operator::auto_from_triplets(big, t).is_sparse());
  CHECK_FALSE(Operator::auto_from_triplets(kQubit, std::vector<Operator::Triplet>{{0, 0, 1.0}}).is_sparse());
}

TEST_CASE("inner products") {
  std::mt19937_64 rng(3);
  const StateVector psi = testing::random_state(rng, ProductSpace({5}));
  CHECK(std::abs(inner(psi, psi) - 1.0) < 1e-12);
  CHECK(inner(StateVector::basis(kQubit, 0), StateVector::basis(kQubit, 1)) == cplx(0.0));
  CHECK(std::abs(inner(plus(), StateVector::basis(kQubit, 0)) - 1.0 / std::sqrt(2.0)) < 1e-15);
}

TEST_CASE("fidelity") {
  std::mt19937_64 rng(4);
  const StateVector psi = testing::random_state(rng, ProductSpace({4}));
  CHECK(fidelity(psi, psi) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(fidelity(StateVector::basis(kQubit, 0), StateVector::basis(kQubit, 1)) == 0.0);
  CHECK(fidelity(plus(), StateVector::basis(kQubit, 0)) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK_THROWS_AS(fidelity(psi * 2.0, psi), std::domain_error);
}

TEST_CASE("partial trace") {
  std::mt19937_64 rng(5);
  const ProductSpace a({2}), b({3});
  const DensityMatrix ra(a, testing::random_density(rng, 2)), rb(b, testing::random_density(rng, 3));
  const std::vector<std::size_t> keep_a{0}, keep_b{1};
  CHECK(max_abs(partial_trace(tensor_product(ra, rb), keep_a).entries() - ra.entries()) < 1e-12);
  CHECK(max_abs(partial_trace(tensor_product(ra, rb), keep_b).entries() - rb.entries()) < 1e-12);

  const StateVector bell(ProductSpace({2, 2}), Eigen::Vector4cd(1, 0, 0, 1) / std::sqrt(2.0));
  const DensityMatrix reduced = partial_trace(DensityMatrix::pure(bell), keep_a);
  CHECK(max_abs(reduced.entries() - 0.5 * Eigen::Matrix2cd::Identity()) < 1e-15);

  const ProductSpace s3({2, 3, 2});
  const DensityMatrix rho(s3, testing::random_density(rng, 12));
  for (const std::vector<std::size_t>& keep :
       {std::vector<std::size_t>{0}, {1}, {2}, {0, 2}, {2, 1}, {0, 1, 2}})
    CHECK(std::abs(partial_trace(rho, keep).trace() - 1.0) < 1e-12);
  CHECK_THROWS_AS(partial_trace(rho, std::vector<std::size_t>{}), std::invalid_argument);
}

TEST_CASE("density matrix validation") {
  CHECK_THROWS(DensityMatrix(kQubit, Eigen::Matrix2cd::Identity()));
  Eigen::Matrix2cd neg;
  neg << 1.5, 0, 0, -0.5;
  CHECK_THROWS(DensityMatrix(kQubit, neg));
  Eigen::Matrix2cd nonherm;
  nonherm << 0.5, 0.1, 0.0, 0.5;
  CHECK_THROWS(DensityMatrix(kQubit, nonherm));
}

TEST_CASE("property: Kronecker product is associative") {
  std::mt19937_64 rng(6);
  for (int trial = 0; trial < 10; ++trial) {
    const Operator a = Operator::dense(ProductSpace({2}), testing::random_matrix(rng, 2, 2));
    const Operator b = Operator::dense(ProductSpace({3}), testing::random_matrix(rng, 3, 3));
    const Operator c = Operator::dense(ProductSpace({2}), testing::random_matrix(rng, 2, 2));
    CHECK(max_abs(tensor_product(tensor_product(a, b), c).to_dense() -
                  tensor_product(a, tensor_product(b, c)).to_dense()) < 1e-12);
  }
}

TEST_CASE("property: Gram forms are positive") {
  std::mt19937_64 rng(7);
  const ProductSpace s({6});
  for (int trial = 0; trial < 20; ++trial) {
    const Operator a = Operator::dense(s, testing::random_matrix(rng, 6, 6));
    const StateVector psi = testing::random_state(rng, s);
    CHECK(inner(psi, apply(a.adjoint() * a, psi)).real() >= -1e-12);
  }
}

TEST_CASE("unitarity and hermiticity checks, both representations") {
  std::mt19937_64 rng(8);
  const Operator u = Operator::dense(ProductSpace({4}), testing::random_unitary(rng, 4));
  CHECK(is_unitary(u));
  CHECK(is_unitary(u.as_sparse()));
  CHECK_FALSE(is_unitary(u * 2.0));
  CHECK_FALSE(is_unitary((u * 2.0).as_sparse()));
  CHECK(is_hermitian(pauli_z()));
  CHECK_FALSE(is_hermitian(Operator::dense(kQubit, Eigen::Matrix2cd{{0, 1}, {0, 0}})));
}

TEST_CASE("normalization") {
  CHECK_THROWS_AS(StateVector::zero(kQubit).normalized(), std::domain_error);
  const StateVector v(kQubit, Eigen::Vector2cd(3, 4));
  CHECK_FALSE(v.is_normalized());
  CHECK(v.normalized().is_normalized());
}

TEST_CASE("JSON interchange round trip") {
  std::mt19937_64 rng(9);
  const ProductSpace s({2, 3}, {"a", "b"});
  const StateVector psi = testing::random_state(rng, s);
  const StateVector back = state_from_json(to_json(psi));
  CHECK(back.space() == s);
  CHECK(max_abs(back.amplitudes() - psi.amplitudes()) == 0.0);

  const Operator op = Operator::dense(s, testing::random_matrix(rng, 6, 6));
  const Operator op_back = operator_from_json(to_json(op));
  CHECK(max_abs(op_back.to_dense() - op.to_dense()) == 0.0);
  CHECK(std::holds_alternative<Operator>(hilbert_from_json(to_json(op.as_sparse()))));

  CHECK_THROWS_AS(state_from_json(nlohmann::json{{"dims", {2}}, {"re", {1, 0, 0}}, {"im", {0, 0, 0}}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(state_from_json(nlohmann::json{{"dims", {2}}, {"re", {1, 0}}}), std::invalid_argument);
}
