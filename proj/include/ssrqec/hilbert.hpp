#pragma once

// Complex linear algebra over labeled finite-dimensional product spaces.
//
// Index convention: row-major over factors, the first factor is the most
// significant digit. A basis state |d0 d1 ... d_{n-1}> on dims (D0, ..., D_{n-1})
// sits at flat index ((d0 * D1 + d1) * D2 + d2) ...

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace ssrqec {

using cplx = std::complex<double>;
using Index = std::size_t;

inline constexpr double kNormTol = 1e-9;
// Operators built from Pauli-type strings are stored sparse at or below
// this fill fraction.
inline constexpr double kSparseFillFraction = 0.01;

class ProductSpace {
 public:
  ProductSpace() = default;
  explicit ProductSpace(std::vector<Index> dims, std::vector<std::string> labels = {});

  Index dim() const { return dim_; }
  std::size_t num_factors() const { return dims_.size(); }
  const std::vector<Index>& dims() const { return dims_; }
  Index factor_dim(std::size_t k) const { return dims_.at(k); }
  const std::vector<std::string>& labels() const { return labels_; }

  ProductSpace concat(const ProductSpace& other) const;
  ProductSpace select(std::span<const std::size_t> factors) const;

  std::vector<Index> digits(Index flat) const;
  Index flat(std::span<const Index> digits) const;

  // Labels are cosmetic; two spaces are equal iff their factor dims agree.
  bool operator==(const ProductSpace& other) const { return dims_ == other.dims_; }

 private:
  std::vector<Index> dims_;
  std::vector<std::string> labels_;
  Index dim_ = 1;
};

class StateVector {
 public:
  StateVector() = default;
  StateVector(ProductSpace space, Eigen::VectorXcd amplitudes);

  static StateVector basis(const ProductSpace& space, Index index);
  static StateVector zero(const ProductSpace& space);

  const ProductSpace& space() const { return space_; }
  const Eigen::VectorXcd& amplitudes() const { return amps_; }
  Index dim() const { return space_.dim(); }
  cplx operator[](Index i) const { return amps_[static_cast<Eigen::Index>(i)]; }

  double norm_squared() const { return amps_.squaredNorm(); }
  double norm() const { return amps_.norm(); }
  bool is_normalized(double tol = kNormTol) const;
  // Throws std::domain_error on the zero vector.
  StateVector normalized() const;

  StateVector operator+(const StateVector& other) const;
  StateVector operator-(const StateVector& other) const;
  StateVector operator*(cplx s) const;

 private:
  ProductSpace space_;
  Eigen::VectorXcd amps_;
};

inline StateVector operator*(cplx s, const StateVector& v) { return v * s; }

class Operator {
 public:
  using Dense = Eigen::MatrixXcd;
  using Sparse = Eigen::SparseMatrix<cplx, Eigen::RowMajor>;
  using Triplet = Eigen::Triplet<cplx>;

  Operator() = default;
  static Operator dense(ProductSpace space, Dense entries);
  static Operator sparse(ProductSpace space, Sparse entries);
  static Operator from_triplets(ProductSpace space, std::span<const Triplet> triplets);
  // Sparse when the fill fraction is at most kSparseFillFraction, dense otherwise.
  static Operator auto_from_triplets(ProductSpace space, std::span<const Triplet> triplets);
  static Operator identity(const ProductSpace& space, bool sparse = false);
  static Operator diagonal(const ProductSpace& space, const Eigen::VectorXcd& diag);

  const ProductSpace& space() const { return space_; }
  Index dim() const { return space_.dim(); }
  bool is_sparse() const { return std::holds_alternative<Sparse>(entries_); }
  std::size_t nonzeros() const;

  Dense to_dense() const;
  Sparse to_sparse() const;
  Operator as_dense() const { return dense(space_, to_dense()); }
  Operator as_sparse() const { return sparse(space_, to_sparse()); }
  const Dense& dense_entries() const { return std::get<Dense>(entries_); }
  const Sparse& sparse_entries() const { return std::get<Sparse>(entries_); }

  cplx entry(Index row, Index col) const;
  Operator adjoint() const;

  Operator operator*(const Operator& rhs) const;
  Operator operator+(const Operator& rhs) const;
  Operator operator-(const Operator& rhs) const;
  Operator operator*(cplx s) const;

 private:
  ProductSpace space_;
  std::variant<Dense, Sparse> entries_;
};

inline Operator operator*(cplx s, const Operator& op) { return op * s; }

class DensityMatrix {
 public:
  DensityMatrix() = default;
  // Validates Hermiticity, unit trace and positivity within tol.
  DensityMatrix(ProductSpace space, Eigen::MatrixXcd entries, double tol = kNormTol);

  static DensityMatrix pure(const StateVector& psi);

  const ProductSpace& space() const { return space_; }
  const Eigen::MatrixXcd& entries() const { return rho_; }
  cplx trace() const { return rho_.trace(); }

 private:
  struct Unchecked {};
  DensityMatrix(Unchecked, ProductSpace space, Eigen::MatrixXcd entries);
  friend DensityMatrix partial_trace(const DensityMatrix&, std::span<const std::size_t>);
  friend DensityMatrix tensor_product(const DensityMatrix&, const DensityMatrix&);

  ProductSpace space_;
  Eigen::MatrixXcd rho_;
};

// Kronecker products; factors of `a` come first.
Operator tensor_product(const Operator& a, const Operator& b);
StateVector tensor_product(const StateVector& a, const StateVector& b);
DensityMatrix tensor_product(const DensityMatrix& a, const DensityMatrix& b);

// Dynamically typed operand, as read from the JSON interchange format.
using HilbertObject = std::variant<StateVector, Operator>;
// Throws std::invalid_argument when the operands are of different kinds.
HilbertObject tensor_product(const HilbertObject& a, const HilbertObject& b);

StateVector apply(const Operator& op, const StateVector& psi);
// Conjugate-linear in phi.
cplx inner(const StateVector& phi, const StateVector& psi);
cplx expectation(const Operator& op, const StateVector& psi);

// Reduced state on the kept factors (any order; the result follows the
// original factor order). Throws std::invalid_argument on an empty or
// out-of-range keep set.
DensityMatrix partial_trace(const DensityMatrix& rho, std::span<const std::size_t> keep);

// |<phi|psi>|^2; both arguments must be normalized within tol.
double fidelity(const StateVector& phi, const StateVector& psi, double tol = kNormTol);

bool is_unitary(const Operator& op, double tol = kNormTol);
bool is_hermitian(const Operator& op, double tol = kNormTol);

}  // namespace ssrqec
