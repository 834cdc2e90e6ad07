#pragma once

// Z_N toric code on an l x l torus: qudit Paulis in symplectic form,
// star/plaquette stabilizers, the brute-forced ground space in the
// Wilson-loop sector basis, and KL/SSR checks for low-weight errors.
//
// Edge e = dir * l^2 + y * l + x, dir 0 = horizontal (x,y)->(x+1,y),
// dir 1 = vertical (x,y)->(x,y+1). Edge 0 is the most significant digit.

#include "ssrqec/hilbert.hpp"
#include "ssrqec/klcore.hpp"

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace ssrqec::toric {

enum class Direction { horizontal = 0, vertical = 1 };

class TorusLattice {
 public:
  TorusLattice(int l, int n);

  int l() const { return l_; }
  int n() const { return n_; }
  int num_edges() const { return 2 * l_ * l_; }
  int edge(Direction dir, int x, int y) const;
  ProductSpace space() const;
  // N^{2 l^2}, or 0 if it does not fit in 64 bits.
  std::uint64_t hilbert_dim() const;

 private:
  int l_, n_;
};

/// e^{i pi phase / N} prod_e X_e^{x_e} Z_e^{z_e}, X|j> = |j+1>, Z|j> = w^j |j>.
struct QuditPauli {
  int n = 2;
  std::vector<int> x, z;
  int phase = 0;  // mod 2N

  static QuditPauli identity(int num_edges, int n);
  static QuditPauli single(int num_edges, int n, int edge, int x_power, int z_power);

  int weight() const;
  std::vector<int> support() const;
  bool is_identity_up_to_phase() const;
  QuditPauli adjoint() const;
  QuditPauli pow(int m) const;
  bool operator==(const QuditPauli&) const = default;

  /// Amplitudes of P|psi> on the N^{edges} space.
  Eigen::VectorXcd apply(const Eigen::VectorXcd& psi) const;
  Operator to_operator(const ProductSpace& space) const;
};

/// P Q.
QuditPauli operator*(const QuditPauli& p, const QuditPauli& q);
/// k in PQ = w^k QP, reduced mod N.
int commutation_exponent(const QuditPauli& p, const QuditPauli& q);

/// l^2 stars followed by l^2 plaquettes, each indexed y * l + x.
std::vector<QuditPauli> build_stabilizers(const TorusLattice& lat);
/// Rank over Z_N of the symplectic vectors; requires prime N.
int symplectic_rank(const std::vector<QuditPauli>& ops);

enum class Cycle { x, y };
enum class LoopKind { electric, magnetic };

/// Electric: Z^a on the edges of a primal loop (x: horizontal edges at y = 0,
/// y: vertical edges at x = 0). Magnetic: X^a on the edges crossed by a dual
/// loop (x: vertical edges at y = 0, y: horizontal edges at x = 0).
QuditPauli wilson_loop(const TorusLattice& lat, Cycle cycle, int a, LoopKind kind);

struct GroundSpace {
  std::vector<StateVector> basis;
  // (a, b): eigenvalues w^a of the electric and w^b of the magnetic x-loop.
  std::vector<std::pair<int, int>> sector_labels;
};

inline constexpr std::uint64_t kGroundSpaceDimGuard = std::uint64_t{1} << 20;

/// Projects seeded random product states onto the stabilizer +1 space and
/// orthonormalizes, then rotates to the sector basis. Throws GuardExceeded
/// above kGroundSpaceDimGuard and InvariantBreach if the rank is not N^2.
GroundSpace ground_space(const TorusLattice& lat, std::uint64_t seed = 0x70121c);
/// Relabels an orthonormal ground-space basis by the eigenvalues of the
/// commuting electric and magnetic x-loops.
GroundSpace sector_basis(const GroundSpace& gs, const TorusLattice& lat);

/// Identity followed by every Pauli of weight 1..max_weight, ordered by
/// support then powers.
std::vector<QuditPauli> enumerate_paulis(const TorusLattice& lat, int max_weight);
/// Size of enumerate_paulis without building it (saturates at UINT64_MAX).
std::uint64_t count_paulis(const TorusLattice& lat, int max_weight);

struct ToricKLOptions {
  double tol = 1e-9;
  std::size_t max_errors = 10000;
  // Bound on errors * Hilbert dimension (stored sparse entries).
  std::uint64_t max_entries = std::uint64_t{1} << 27;
  std::vector<QuditPauli> extra_errors;
  bool detection_only = false;
};

KLReport kl_check_toric(const TorusLattice& lat, const GroundSpace& gs, int max_weight,
                        const ToricKLOptions& options = {});

enum class PauliClass { detectable, trivial, logical };
std::string to_string(PauliClass c);

/// Detectable: fails to commute with a stabilizer. Trivial: commutes with
/// every stabilizer and every Wilson loop, hence a stabilizer up to phase.
/// Logical: otherwise.
PauliClass classify(const TorusLattice& lat, const QuditPauli& p);

struct SSRCheck {
  std::size_t operators = 0;
  std::size_t detectable = 0, trivial = 0, logical = 0;
  bool symbolic_zero = true;        // no logical operator below weight l
  double numeric_max = 0.0;         // max |<a|A|a'>| over a != a'
};

/// Every Pauli of weight < l against the sector basis.
SSRCheck ssr_check_toric(const TorusLattice& lat, const GroundSpace& gs);

}  // namespace ssrqec::toric
