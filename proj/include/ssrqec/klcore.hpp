#pragma once

// Knill-Laflamme verification, superselection-sector checks and Kraus
// extraction from a joint system/environment unitary.

#include "ssrqec/hilbert.hpp"

#include <span>
#include <string>
#include <vector>

namespace ssrqec {

inline constexpr double kDefaultKLTol = 1e-10;

/// Ordered orthonormal codewords on a common space. Construction fails
/// with std::invalid_argument unless the Gram matrix is within `tol` of
/// the identity.
class CodeSpace {
 public:
  explicit CodeSpace(std::vector<StateVector> codewords, double tol = kNormTol);

  std::size_t size() const { return codewords_.size(); }
  const StateVector& operator[](std::size_t i) const { return codewords_.at(i); }
  const std::vector<StateVector>& codewords() const { return codewords_; }
  const ProductSpace& space() const { return codewords_.front().space(); }

 private:
  std::vector<StateVector> codewords_;
};

/// Error operators on a common space. Operators need not be unitary.
class ErrorSet {
 public:
  explicit ErrorSet(std::vector<Operator> operators, std::vector<std::string> labels = {});

  std::size_t size() const { return ops_.size(); }
  const Operator& operator[](std::size_t a) const { return ops_.at(a); }
  const std::vector<Operator>& operators() const { return ops_; }
  const std::string& label(std::size_t a) const { return labels_.at(a); }
  const std::vector<std::string>& labels() const { return labels_; }
  const ProductSpace& space() const { return ops_.front().space(); }

  /// {sum_a u(b, a) E_a}_b for a square mixing matrix u.
  ErrorSet mixed(const Eigen::MatrixXcd& u) const;

 private:
  std::vector<Operator> ops_;
  std::vector<std::string> labels_;
};

enum class Verdict { satisfied, violated };

struct KLViolation {
  std::size_t a, b, i, j;
  cplx deviation;
};

/// M^{ab}_{ij} = <j|E_b^dag E_a|i>, C_ab = (1/K) sum_i M^{ab}_{ii},
/// deviation^{ab}_{ij} = M^{ab}_{ij} - C_ab delta_ij.
struct KLReport {
  Eigen::MatrixXcd c_matrix;
  double max_violation = 0.0;
  // Largest |M^{ab}_{ij}| over i != j (the part the superselection rule kills).
  double max_offdiagonal = 0.0;
  // Entries with |deviation| > tol, in (a, b, i, j) order, capped at
  // kMaxRecordedViolations; violation_count is the uncapped total.
  std::vector<KLViolation> violations;
  std::size_t violation_count = 0;
  Verdict verdict = Verdict::satisfied;
  double tol = kDefaultKLTol;

  static constexpr std::size_t kMaxRecordedViolations = 10000;
  bool satisfied() const { return verdict == Verdict::satisfied; }
};

KLReport kl_check(const CodeSpace& code, const ErrorSet& errors, double tol = kDefaultKLTol);

/// Detection-only form: checks <j|E_a|i> = c_a delta_ij for each error,
/// i.e. the pairs (identity, E_a). Reported c_matrix is a column (c_a).
KLReport detection_check(const CodeSpace& code, const ErrorSet& errors,
                         double tol = kDefaultKLTol);

struct SectorCheck {
  bool respected = true;
  double worst_element = 0.0;
  // Location of the worst element: operator and the two sectors.
  std::size_t op = 0, sector_a = 0, sector_b = 0;
};

/// True iff |<psi|A|phi>| <= tol for every operator and every pair of
/// basis vectors taken from distinct sectors.
SectorCheck ssr_sector_check(std::span<const CodeSpace> sectors, const ErrorSet& local_ops,
                             double tol = kDefaultKLTol);

/// E_k = (I_sys (x) <e_k|) U (I_sys (x) |phi>). The environment occupies
/// the trailing factors of u's space and env_basis must be a complete
/// orthonormal basis of it. Operators with no nonzero entry are dropped.
ErrorSet kraus_extract(const Operator& u, const StateVector& env_state,
                       std::span<const StateVector> env_basis, double tol = kNormTol);

}  // namespace ssrqec
