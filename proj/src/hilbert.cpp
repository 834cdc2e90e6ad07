#include "ssrqec/hilbert.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace ssrqec {

namespace {

void require_same_space(const ProductSpace& a, const ProductSpace& b, const char* what) {
  if (!(a == b)) throw std::invalid_argument(std::string(what) + ": dimension mismatch");
}

Eigen::MatrixXcd kron(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  Eigen::MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

Operator::Sparse kron(const Operator::Sparse& a, const Operator::Sparse& b) {
  std::vector<Operator::Triplet> triplets;
  triplets.reserve(static_cast<std::size_t>(a.nonZeros() * b.nonZeros()));
  for (Eigen::Index i = 0; i < a.outerSize(); ++i)
    for (Operator::Sparse::InnerIterator ia(a, i); ia; ++ia)
      for (Eigen::Index k = 0; k < b.outerSize(); ++k)
        for (Operator::Sparse::InnerIterator ib(b, k); ib; ++ib)
          triplets.emplace_back(ia.row() * b.rows() + ib.row(), ia.col() * b.cols() + ib.col(),
                                ia.value() * ib.value());
  Operator::Sparse out(a.rows() * b.rows(), a.cols() * b.cols());
  out.setFromTriplets(triplets.begin(), triplets.end());
  return out;
}

}  // namespace

// ---------------------------------------------------------------- ProductSpace

ProductSpace::ProductSpace(std::vector<Index> dims, std::vector<std::string> labels)
    : dims_(std::move(dims)), labels_(std::move(labels)) {
  if (!labels_.empty() && labels_.size() != dims_.size())
    throw std::invalid_argument("ProductSpace: one label per factor required");
  if (labels_.empty()) labels_.resize(dims_.size());
  dim_ = 1;
  for (Index d : dims_) {
    if (d < 1) throw std::invalid_argument("ProductSpace: factor dimension must be >= 1");
    dim_ *= d;
  }
}

ProductSpace ProductSpace::concat(const ProductSpace& other) const {
  auto dims = dims_;
  auto labels = labels_;
  dims.insert(dims.end(), other.dims_.begin(), other.dims_.end());
  labels.insert(labels.end(), other.labels_.begin(), other.labels_.end());
  return ProductSpace(std::move(dims), std::move(labels));
}

ProductSpace ProductSpace::select(std::span<const std::size_t> factors) const {
  std::vector<Index> dims;
  std::vector<std::string> labels;
  for (std::size_t k : factors) {
    dims.push_back(dims_.at(k));
    labels.push_back(labels_.at(k));
  }
  return ProductSpace(std::move(dims), std::move(labels));
}

std::vector<Index> ProductSpace::digits(Index flat) const {
  std::vector<Index> out(dims_.size());
  for (std::size_t k = dims_.size(); k-- > 0;) {
    out[k] = flat % dims_[k];
    flat /= dims_[k];
  }
  return out;
}

Index ProductSpace::flat(std::span<const Index> digits) const {
  if (digits.size() != dims_.size()) throw std::invalid_argument("ProductSpace::flat: arity");
  Index out = 0;
  for (std::size_t k = 0; k < dims_.size(); ++k) {
    if (digits[k] >= dims_[k]) throw std::out_of_range("ProductSpace::flat: digit");
    out = out * dims_[k] + digits[k];
  }
  return out;
}

// ----------------------------------------------------------------- StateVector

StateVector::StateVector(ProductSpace space, Eigen::VectorXcd amplitudes)
    : space_(std::move(space)), amps_(std::move(amplitudes)) {
  if (static_cast<Index>(amps_.size()) != space_.dim())
    throw std::invalid_argument("StateVector: amplitude count does not match space dimension");
}

StateVector StateVector::basis(const ProductSpace& space, Index index) {
  if (index >= space.dim()) throw std::out_of_range("StateVector::basis: index");
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(space.dim()));
  v[static_cast<Eigen::Index>(index)] = 1.0;
  return {space, std::move(v)};
}

StateVector StateVector::zero(const ProductSpace& space) {
  return {space, Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(space.dim()))};
}

bool StateVector::is_normalized(double tol) const {
  return std::abs(norm_squared() - 1.0) <= tol;
}

StateVector StateVector::normalized() const {
  const double n = norm();
  if (n == 0.0) throw std::domain_error("StateVector::normalized: zero vector");
  return {space_, amps_ / n};
}

StateVector StateVector::operator+(const StateVector& other) const {
  require_same_space(space_, other.space_, "StateVector::operator+");
  return {space_, amps_ + other.amps_};
}

StateVector StateVector::operator-(const StateVector& other) const {
  require_same_space(space_, other.space_, "StateVector::operator-");
  return {space_, amps_ - other.amps_};
}

StateVector StateVector::operator*(cplx s) const { return {space_, amps_ * s}; }

// -------------------------------------------------------------------- Operator

Operator Operator::dense(ProductSpace space, Dense entries) {
  const auto d = static_cast<Eigen::Index>(space.dim());
  if (entries.rows() != d || entries.cols() != d)
    throw std::invalid_argument("Operator: matrix must be square with the space dimension");
  Operator op;
  op.space_ = std::move(space);
  op.entries_ = std::move(entries);
  return op;
}

Operator Operator::sparse(ProductSpace space, Sparse entries) {
  const auto d = static_cast<Eigen::Index>(space.dim());
  if (entries.rows() != d || entries.cols() != d)
    throw std::invalid_argument("Operator: matrix must be square with the space dimension");
  entries.makeCompressed();
  Operator op;
  op.space_ = std::move(space);
  op.entries_ = std::move(entries);
  return op;
}

Operator Operator::from_triplets(ProductSpace space, std::span<const Triplet> triplets) {
  const auto d = static_cast<Eigen::Index>(space.dim());
  Sparse m(d, d);
  m.setFromTriplets(triplets.begin(), triplets.end());
  return sparse(std::move(space), std::move(m));
}

Operator Operator::auto_from_triplets(ProductSpace space, std::span<const Triplet> triplets) {
  const double dim = static_cast<double>(space.dim());
  Operator op = from_triplets(std::move(space), triplets);
  const double fill = static_cast<double>(op.nonzeros()) / (dim * dim);
  return fill <= kSparseFillFraction ? op : op.as_dense();
}

Operator Operator::identity(const ProductSpace& space, bool sparse_form) {
  const auto d = static_cast<Eigen::Index>(space.dim());
  if (sparse_form) {
    Sparse m(d, d);
    m.setIdentity();
    return sparse(space, std::move(m));
  }
  return dense(space, Dense::Identity(d, d));
}

Operator Operator::diagonal(const ProductSpace& space, const Eigen::VectorXcd& diag) {
  if (static_cast<Index>(diag.size()) != space.dim())
    throw std::invalid_argument("Operator::diagonal: length mismatch");
  return dense(space, diag.asDiagonal());
}

std::size_t Operator::nonzeros() const {
  if (is_sparse()) return static_cast<std::size_t>(sparse_entries().nonZeros());
  return static_cast<std::size_t>((dense_entries().array() != cplx(0.0)).count());
}

Operator::Dense Operator::to_dense() const {
  if (is_sparse()) return Dense(sparse_entries());
  return dense_entries();
}

Operator::Sparse Operator::to_sparse() const {
  if (is_sparse()) return sparse_entries();
  return dense_entries().sparseView(cplx(0.0), 0.0);
}

cplx Operator::entry(Index row, Index col) const {
  const auto r = static_cast<Eigen::Index>(row), c = static_cast<Eigen::Index>(col);
  if (is_sparse()) return sparse_entries().coeff(r, c);
  return dense_entries()(r, c);
}

Operator Operator::adjoint() const {
  if (is_sparse()) return sparse(space_, Sparse(sparse_entries().adjoint()));
  return dense(space_, dense_entries().adjoint());
}

Operator Operator::operator*(const Operator& rhs) const {
  require_same_space(space_, rhs.space_, "Operator::operator*");
  if (is_sparse() && rhs.is_sparse())
    return sparse(space_, Sparse(sparse_entries() * rhs.sparse_entries()));
  if (is_sparse()) return dense(space_, sparse_entries() * rhs.dense_entries());
  if (rhs.is_sparse()) return dense(space_, dense_entries() * rhs.sparse_entries());
  return dense(space_, dense_entries() * rhs.dense_entries());
}

Operator Operator::operator+(const Operator& rhs) const {
  require_same_space(space_, rhs.space_, "Operator::operator+");
  if (is_sparse() && rhs.is_sparse())
    return sparse(space_, Sparse(sparse_entries() + rhs.sparse_entries()));
  return dense(space_, to_dense() + rhs.to_dense());
}

Operator Operator::operator-(const Operator& rhs) const { return *this + rhs * cplx(-1.0); }

Operator Operator::operator*(cplx s) const {
  if (is_sparse()) return sparse(space_, Sparse(sparse_entries() * s));
  return dense(space_, dense_entries() * s);
}

// --------------------------------------------------------------- DensityMatrix

DensityMatrix::DensityMatrix(ProductSpace space, Eigen::MatrixXcd entries, double tol)
    : space_(std::move(space)), rho_(std::move(entries)) {
  const auto d = static_cast<Eigen::Index>(space_.dim());
  if (rho_.rows() != d || rho_.cols() != d)
    throw std::invalid_argument("DensityMatrix: shape mismatch");
  if ((rho_ - rho_.adjoint()).cwiseAbs().maxCoeff() > tol)
    throw std::domain_error("DensityMatrix: not Hermitian");
  if (std::abs(rho_.trace() - cplx(1.0)) > tol)
    throw std::domain_error("DensityMatrix: trace is not 1");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho_, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -tol)
    throw std::domain_error("DensityMatrix: negative eigenvalue");
}

DensityMatrix::DensityMatrix(Unchecked, ProductSpace space, Eigen::MatrixXcd entries)
    : space_(std::move(space)), rho_(std::move(entries)) {}

DensityMatrix DensityMatrix::pure(const StateVector& psi) {
  if (!psi.is_normalized()) throw std::domain_error("DensityMatrix::pure: state not normalized");
  return {Unchecked{}, psi.space(), psi.amplitudes() * psi.amplitudes().adjoint()};
}

// ------------------------------------------------------------ free functions

Operator tensor_product(const Operator& a, const Operator& b) {
  ProductSpace space = a.space().concat(b.space());
  if (a.is_sparse() && b.is_sparse())
    return Operator::sparse(std::move(space), kron(a.sparse_entries(), b.sparse_entries()));
  return Operator::dense(std::move(space), kron(a.to_dense(), b.to_dense()));
}

StateVector tensor_product(const StateVector& a, const StateVector& b) {
  Eigen::VectorXcd out(a.amplitudes().size() * b.amplitudes().size());
  for (Eigen::Index i = 0; i < a.amplitudes().size(); ++i)
    out.segment(i * b.amplitudes().size(), b.amplitudes().size()) =
        a.amplitudes()[i] * b.amplitudes();
  return {a.space().concat(b.space()), std::move(out)};
}

DensityMatrix tensor_product(const DensityMatrix& a, const DensityMatrix& b) {
  return {DensityMatrix::Unchecked{}, a.space().concat(b.space()), kron(a.entries(), b.entries())};
}

HilbertObject tensor_product(const HilbertObject& a, const HilbertObject& b) {
  if (a.index() != b.index())
    throw std::invalid_argument("tensor_product: operands must be of the same kind");
  if (const auto* sa = std::get_if<StateVector>(&a))
    return tensor_product(*sa, std::get<StateVector>(b));
  return tensor_product(std::get<Operator>(a), std::get<Operator>(b));
}

StateVector apply(const Operator& op, const StateVector& psi) {
  require_same_space(op.space(), psi.space(), "apply");
  if (op.is_sparse()) return {psi.space(), op.sparse_entries() * psi.amplitudes()};
  return {psi.space(), op.dense_entries() * psi.amplitudes()};
}

cplx inner(const StateVector& phi, const StateVector& psi) {
  require_same_space(phi.space(), psi.space(), "inner");
  return phi.amplitudes().dot(psi.amplitudes());
}

cplx expectation(const Operator& op, const StateVector& psi) { return inner(psi, apply(op, psi)); }

DensityMatrix partial_trace(const DensityMatrix& rho, std::span<const std::size_t> keep) {
  const ProductSpace& space = rho.space();
  if (keep.empty()) throw std::invalid_argument("partial_trace: empty keep set");
  std::vector<bool> kept(space.num_factors(), false);
  for (std::size_t k : keep) {
    if (k >= space.num_factors()) throw std::invalid_argument("partial_trace: factor index");
    kept[k] = true;
  }
  std::vector<std::size_t> keep_sorted, traced;
  for (std::size_t k = 0; k < space.num_factors(); ++k) (kept[k] ? keep_sorted : traced).push_back(k);

  const ProductSpace kept_space = space.select(keep_sorted);
  const ProductSpace traced_space = space.select(traced);

  // Full index of (kept digits, traced digits) for every combination.
  const Index dk = kept_space.dim(), dt = traced_space.dim();
  std::vector<Index> full(dk * dt);
  std::vector<Index> digits(space.num_factors());
  for (Index ik = 0; ik < dk; ++ik) {
    const auto kd = kept_space.digits(ik);
    for (std::size_t n = 0; n < keep_sorted.size(); ++n) digits[keep_sorted[n]] = kd[n];
    for (Index it = 0; it < dt; ++it) {
      const auto td = traced_space.digits(it);
      for (std::size_t n = 0; n < traced.size(); ++n) digits[traced[n]] = td[n];
      full[ik * dt + it] = space.flat(digits);
    }
  }

  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(dk),
                                                static_cast<Eigen::Index>(dk));
  const auto& m = rho.entries();
  for (Index r = 0; r < dk; ++r)
    for (Index c = 0; c < dk; ++c) {
      cplx sum = 0.0;
      for (Index t = 0; t < dt; ++t)
        sum += m(static_cast<Eigen::Index>(full[r * dt + t]),
                 static_cast<Eigen::Index>(full[c * dt + t]));
      out(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = sum;
    }
  return {DensityMatrix::Unchecked{}, kept_space, std::move(out)};
}

double fidelity(const StateVector& phi, const StateVector& psi, double tol) {
  if (!phi.is_normalized(tol) || !psi.is_normalized(tol))
    throw std::domain_error("fidelity: input not normalized");
  return std::min(1.0, std::norm(inner(phi, psi)));
}

bool is_unitary(const Operator& op, double tol) {
  const auto d = static_cast<Eigen::Index>(op.dim());
  if (op.is_sparse()) {
    Operator::Sparse eye(d, d);
    eye.setIdentity();
    const Operator::Sparse adj = op.sparse_entries().adjoint();
    const Operator::Sparse prod = adj * op.sparse_entries();
    const Operator::Sparse diff = prod - eye;
    double worst = 0.0;
    for (Eigen::Index k = 0; k < diff.outerSize(); ++k)
      for (Operator::Sparse::InnerIterator it(diff, k); it; ++it)
        worst = std::max(worst, std::abs(it.value()));
    return worst <= tol;
  }
  const Eigen::MatrixXcd u = op.to_dense();
  return (u.adjoint() * u - Eigen::MatrixXcd::Identity(d, d)).cwiseAbs().maxCoeff() <= tol;
}

bool is_hermitian(const Operator& op, double tol) {
  const Eigen::MatrixXcd m = op.to_dense();
  return (m - m.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

}  // namespace ssrqec
