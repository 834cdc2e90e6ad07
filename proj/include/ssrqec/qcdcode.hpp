#pragma once

// Proton/neutron code: bit-flip suppression rate models, scattering
// amplitude error channels, and the repetition code in the +/- basis that
// protects against the phase errors those channels induce.
//
// Energies are in MeV. Particles are indexed from 0. In a RepetitionState
// the digit of particle k is 0 for |+> and 1 for |->, first particle most
// significant.

#include "ssrqec/hilbert.hpp"
#include "ssrqec/klcore.hpp"

#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

namespace ssrqec::qcd {

struct PhysicalConstants {
  double lambda_qcd = 330.0;
  double m_pi = 140.0;
  double m_w = 80400.0;
  double b_scale = 3000.0;
  double m_u = 3.0;
  double m_d = 3.0;
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  double epsilon = 3.0;
  double f_pi = 100.0;

  // Throws std::invalid_argument if any energy scale is not positive.
  void validate() const;
};

// Metadata carried into run reports.
inline constexpr const char* kEnvironmentDiscardNote =
    "environment particle is assumed separable and is discarded after the momentum "
    "projection; this idealization is not expected to hold for real scattering";
inline constexpr const char* kNeutronDecayNote =
    "free-neutron beta decay (~15 min lifetime) is not simulated; coherence times are "
    "assumed much shorter than that";

/// sqrt(B (m_u + m_d)).
double pion_mass(double m_u, double m_d, double b_scale);
/// exp(-m_pi / T).
double thermal_flip_suppression(double temperature, const PhysicalConstants& c = {});
/// max(exp(-Lambda/E), (E/m_W)^2).
double sm_flip_suppression(double energy, const PhysicalConstants& c = {});
/// Energy where exp(-Lambda/E) = (E/m_W)^2, i.e. where the electroweak
/// channel stops dominating.
double sm_crossover_energy(const PhysicalConstants& c = {});
/// exp(-epsilon / T): the per-quantum error probability.
double single_quantum_error_probability(double temperature, double epsilon);
/// Lambda / epsilon.
double effective_distance(double lambda, double epsilon);

enum class Species { phi1 = 0, phi2 = 1 };
enum class Logical { p = 0, n = 1 };

std::string to_string(Species s);

/// Scattering amplitudes A^{s,i}_{k,k'} on the grid k, k' in [-K, K].
class AmplitudeTable {
 public:
  explicit AmplitudeTable(int grid);

  int grid() const { return grid_; }
  bool in_grid(int k) const { return k >= -grid_ && k <= grid_; }
  cplx at(Species s, Logical i, int k, int k_prime) const;
  void set(Species s, Logical i, int k, int k_prime, cplx value);
  double row_norm_squared(Species s, Logical i, int k) const;
  // Throws std::domain_error if any row exceeds 1 + 1e-9.
  void validate() const;

 private:
  std::size_t offset(Species s, Logical i, int k, int k_prime) const;
  int grid_;
  std::vector<cplx> entries_;
};

/// Relative weight w(k') of the k' != 0 amplitudes.
using MomentumProfile = std::function<double(int)>;
MomentumProfile exponential_profile(double r);

/// Forward (k' = 0) entries from the toy couplings:
///   A^{phi1,p} = 1 - l1^2/2, A^{phi1,n} = 1, A^{phi2,p} = 1, A^{phi2,n} = 1 - l2^2/2.
/// The k' != 0 entries are A_{k,0} * s * w(k') with s chosen so each row
/// sums to exactly one when the profile has support; rows with A_{k,0} = 1
/// get no off-forward scattering.
AmplitudeTable toy_amplitude_table(double lambda1, double lambda2, int grid,
                                   const MomentumProfile& profile = exponential_profile(0.5));

struct AlphaPair {
  cplx identity;  // alpha_1
  cplx z;         // alpha_2
};

/// alpha_1 = (A^p + A^n)/2, alpha_2 = (A^p - A^n)/2.
AlphaPair alpha_decomposition(const AmplitudeTable& table, Species s, int k, int k_prime);

/// Kraus operators diag(A^p_{k,k'}, A^n_{k,k'}) on the 2-dim {p, n} space,
/// one per k' with a nonzero entry.
ErrorSet channel_error_set(const AmplitudeTable& table, Species s, int k);

/// Unitary on {p, n} (x) (momentum-transfer register, 2K+1 levels) whose
/// column |i>|k'=0> is sum_k' A^{s,i}_{k,k'} |i>|k'>. Requires rows
/// normalized to 1 within 1e-9.
Operator scattering_dilation(const AmplitudeTable& table, Species s, int k);

class RepetitionState {
 public:
  RepetitionState(StateVector amplitudes, std::vector<int> momenta);

  int n() const { return static_cast<int>(momenta_.size()); }
  const StateVector& amplitudes() const { return amps_; }
  const std::vector<int>& momenta() const { return momenta_; }
  bool common_momentum() const;

  // Amplitudes re-expressed in the |p>/|n> basis (digit 0 = p).
  StateVector species_basis() const;

 private:
  StateVector amps_;
  std::vector<int> momenta_;
};

ProductSpace repetition_space(int n);

/// c+ |+...+> + c- |-...->, all momenta 0. Even n is rejected.
RepetitionState encode_repetition(cplx c_plus, cplx c_minus, int n);

/// Applies alpha_1 I + alpha_2 Z to one particle; Z exchanges |+> and |->.
StateVector apply_effective_error(const StateVector& amps, int particle, cplx alpha1, cplx alpha2);
/// Effective flips (|+> <-> |->) on the listed particles.
RepetitionState apply_flips(const RepetitionState& state, const std::vector<int>& particles);
/// Electromagnetic phase diag(e^{-i theta}, 1) in the {p, n} basis on one particle.
RepetitionState apply_phase_error(const RepetitionState& state, int particle, double theta);

struct Branch {
  int k_prime = 0;
  int env_momentum = 0;  // k - k'
  StateVector amplitudes;  // unnormalized
};

struct BranchedState {
  int particle = 0;
  Species species = Species::phi1;
  std::vector<int> momenta;  // before scattering
  std::vector<Branch> branches;
};

/// Branch k': the targeted particle suffers alpha_1(k') I + alpha_2(k') Z,
/// its momentum becomes k', the environment carries k - k'. Only branches
/// with nonzero weight are kept.
BranchedState apply_scattering_error(const RepetitionState& state, int particle,
                                     const AmplitudeTable& table, Species s, int k);

struct ProjectedBranch {
  int k_prime = 0;
  double probability = 0.0;
  RepetitionState state;
};

/// Projects onto branch k', returns the scattered particle to momentum 0
/// and drops the environment. Throws std::domain_error on a branch of zero
/// weight.
ProjectedBranch momentum_project_and_boost(const BranchedState& branched, int k_prime);
ProjectedBranch momentum_project_and_boost(const BranchedState& branched, std::mt19937_64& rng);
std::vector<ProjectedBranch> enumerate_branches(const BranchedState& branched);

struct SyndromeResult {
  std::vector<int> pattern;  // +1/-1 for X_k X_{k+1}, k = 0..n-2
  bool operator==(const SyndromeResult&) const = default;
};

struct SyndromeOutcome {
  SyndromeResult syndrome;
  double probability = 0.0;
  RepetitionState post_state;
};

/// Syndrome of a definite flip pattern.
SyndromeResult syndrome_of(const std::vector<int>& flip_bits);
/// Every syndrome outcome with nonzero probability and its collapsed state.
std::vector<SyndromeOutcome> enumerate_syndromes(const RepetitionState& state);
SyndromeOutcome measure_syndrome(const RepetitionState& state, std::mt19937_64& rng);
/// Minimum-weight flip pattern consistent with the syndrome.
std::vector<int> minimal_correction(const SyndromeResult& syndrome);
RepetitionState decode_phase_flip(const RepetitionState& state, const SyndromeResult& syndrome);

/// |<a|b>|^2 over the isospin amplitudes; momenta must agree.
double fidelity(const RepetitionState& a, const RepetitionState& b);

struct RateEstimate {
  double rate = 0.0;
  double standard_error = 0.0;
  std::uint64_t failures = 0;
  std::uint64_t trials = 0;
};

/// Monte Carlo over i.i.d. effective flips with probability p per particle
/// followed by syndrome measurement and decoding. Trial t draws from an
/// engine seeded with derive_seed(seed, n, t), so estimates do not depend
/// on how trials are split over workers.
RateEstimate logical_error_rate(int n, double p, std::uint64_t trials, std::uint64_t seed);

}  // namespace ssrqec::qcd
