#pragma once

// Truncated U(1) rotor: charge basis, two-mode codewords with phase-flip
// recovery by measuring one register, and the charge-invariant simulation
// of charge-violating operators on a reference-plus-system pair.

#include "ssrqec/hilbert.hpp"

#include <map>
#include <random>
#include <vector>

namespace ssrqec::rotor {

/// Charges -q_max..q_max; charge q sits at index q + q_max.
class RotorSpace {
 public:
  explicit RotorSpace(int q_max);

  int q_max() const { return q_max_; }
  Index dim() const { return static_cast<Index>(2 * q_max_ + 1); }
  bool contains(int q) const { return q >= -q_max_ && q <= q_max_; }
  Index index_of(int q) const;
  int charge_at(Index i) const { return static_cast<int>(i) - q_max_; }
  ProductSpace product_space(std::string label = "rotor") const;

  // Inverse of product_space for a single odd-dimensional factor.
  static RotorSpace from_dim(Index dim);

 private:
  int q_max_;
};

StateVector charge_state(const RotorSpace& space, int q);
Operator charge_operator(const RotorSpace& space);
/// |q> -> |q+1>; the top charge is annihilated (no wraparound).
Operator shift_up(const RotorSpace& space);
/// Z_q = I - 2|q><q|.
Operator phase_flip(const RotorSpace& space, int q);
/// Q_A (x) I + I (x) Q_B on the two-register space.
Operator total_charge(const RotorSpace& a, const RotorSpace& b);

struct CoefficientProfile {
  enum class Kind { gaussian, uniform };
  Kind kind = Kind::gaussian;
  double sigma = 0.0;  // gaussian width; <= 0 selects window / 3

  static CoefficientProfile gaussian(double sigma = 0.0) { return {Kind::gaussian, sigma}; }
  static CoefficientProfile uniform() { return {Kind::uniform, 0.0}; }
};

/// Normalized c(q~) for q~ = -window..window.
std::vector<double> profile_coefficients(const CoefficientProfile& profile, int window);

struct TwoModeCodeword {
  int logical_charge = 0;
  int window = 0;
  std::map<int, cplx> coeffs;  // q~ -> c_{q, q~}
};

struct Codeword {
  StateVector state;  // on A (x) B
  TwoModeCodeword record;
};

/// sum_{|q~| <= W} c_{q,q~} |q - q~>_A |q~>_B. Throws std::out_of_range if
/// any component leaves either truncation.
Codeword build_codeword(const RotorSpace& a, const RotorSpace& b, int q,
                        const CoefficientProfile& profile, int window);

struct RecoveryOutcome {
  int outcome = 0;           // measured B charge q~
  double probability = 0.0;  // Born probability of the outcome
  cplx alpha, beta;          // normalized logical amplitudes read off A
  StateVector post_state;    // normalized post-measurement state
};

/// Measures B in the charge basis and reads the logical amplitudes off the
/// A branch by projecting onto |q1 - q~>_A and |q2 - q~>_A. The relabeling
/// is the minimal one: the A register is left as is and reinterpreted
/// according to the outcome. psi lives on A (x) B, or on R (x) A (x) B for
/// a simulated superposition, in which case the reference is projected onto
/// |-q1>_R, |-q2>_R alongside.
RecoveryOutcome recover_for_outcome(const StateVector& psi, int q1, int q2, int outcome);
/// Same with the outcome drawn from the Born distribution.
RecoveryOutcome recover_by_measuring_B(const StateVector& psi, int q1, int q2,
                                       std::mt19937_64& rng);
/// Every outcome with probability above 1e-15, in increasing q~.
std::vector<RecoveryOutcome> enumerate_recovery(const StateVector& psi, int q1, int q2);

/// |<(a0, b0)|(a, b)>|^2 for normalized logical amplitude pairs.
double logical_fidelity(cplx a0, cplx b0, cplx a, cplx b);

/// Total probability of outcomes whose recovered logical state has
/// fidelity below 1 - tol with (a0, b0).
double logical_error_probability(const std::vector<RecoveryOutcome>& outcomes, cplx a0, cplx b0,
                                 double tol = 1e-10);

/// theta_m = 2 pi m / n_g.
class GroupDiscretization {
 public:
  explicit GroupDiscretization(int n_g);
  int n_g() const { return n_g_; }
  double theta(int m) const;

 private:
  int n_g_;
};

/// (1/sqrt(n_g)) sum_q exp(-i q theta_m) |q>.
StateVector discrete_phase_state(const RotorSpace& space, const GroupDiscretization& disc, int m);

/// sum_m |theta_m><theta_m|_R (x) (e^{-i theta_m Q} M e^{i theta_m Q})_S with
/// the reference R a copy of the rotor space of M. Throws
/// std::invalid_argument when n_g is below the rotor dimension.
Operator m_inv(const Operator& m, const GroupDiscretization& disc);

struct SimulationLayout {
  RotorSpace reference, a, b;
  CoefficientProfile profile;
  int window = 0;
};

/// sum_{q, q~} alpha_q c_{q,q~} |-q>_R |q - q~>_A |q~>_B.
StateVector prepare_simulated_superposition(const std::map<int, cplx>& alphas,
                                            const SimulationLayout& layout);

}  // namespace ssrqec::rotor
