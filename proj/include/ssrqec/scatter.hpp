#pragma once

// Tree-level p + phi -> n + pi scattering: Dirac algebra, the amplitude
// with a nucleon propagator, two-body phase space and the total
// cross-section with its threshold step. Energies in MeV, metric (+,-,-,-).

#include <Eigen/Dense>

#include <array>
#include <complex>
#include <functional>
#include <vector>

namespace ssrqec::scatter {

using cplx = std::complex<double>;
using Matrix4 = Eigen::Matrix<cplx, 4, 4>;
using DiracSpinor = Eigen::Matrix<cplx, 4, 1>;

struct FourMomentum {
  double e = 0.0, px = 0.0, py = 0.0, pz = 0.0;

  static FourMomentum on_shell(double m, double px, double py, double pz);

  double dot(const FourMomentum& o) const { return e * o.e - px * o.px - py * o.py - pz * o.pz; }
  double mass_squared() const { return dot(*this); }
  double p3() const;

  FourMomentum operator+(const FourMomentum& o) const { return {e + o.e, px + o.px, py + o.py, pz + o.pz}; }
  FourMomentum operator-(const FourMomentum& o) const { return {e - o.e, px - o.px, py - o.py, pz - o.pz}; }

  FourMomentum boost_z(double rapidity) const;
  // Rotation by angle about the unit axis (ax, ay, az).
  FourMomentum rotate(double ax, double ay, double az, double angle) const;
};

/// Dirac representation: gamma^0 = diag(I, -I), gamma^k = [[0, s_k], [-s_k, 0]],
/// gamma^5 = [[0, I], [I, 0]].
struct GammaBasis {
  std::array<Matrix4, 4> mu;
  Matrix4 five;

  static const GammaBasis& dirac();
  /// gamma^mu p_mu = gamma^0 E - gamma . p
  Matrix4 slash(const FourMomentum& p) const;
};

enum class Spin { up, down };

/// Positive-energy spinor normalized to ubar u = 2m. Throws
/// std::invalid_argument when p is off-shell by more than 1e-6 relative.
DiracSpinor dirac_u(const FourMomentum& p, double m, Spin s);
/// u^dagger gamma^0.
Eigen::Matrix<cplx, 1, 4> dirac_bar(const DiracSpinor& u);

struct Kinematics {
  FourMomentum k1, k2, k3, k4;  // p, phi in; n, pi out
  double m_p = 938.3, m_phi = 0.0, m_n = 938.3, m_pi = 139.6;
};

struct Couplings {
  double g1 = 0.0, g2 = 0.0, lambda = 1.0;
  double pole_guard = 1.0;  // MeV^2
};

/// (-i lambda) ubar_n(k3) (-i g1 k4slash g5 - g2 g5) i (kslash + m_p)/(k^2 - m_p^2) u_p(k1),
/// k = k1 + k2. Throws std::invalid_argument on broken shells or momentum
/// conservation and SingularityError within pole_guard of the pole.
cplx amplitude_p_to_n(const Kinematics& kin, const Couplings& c, Spin s1, Spin s3);
/// (1/2) sum over both spins of |A|^2.
double spin_summed_amp2(const Kinematics& kin, const Couplings& c);

/// Magnitude of either CM three-momentum; 0 at or below threshold.
double cm_momentum(double e_cm, double m_a, double m_b);

struct ThresholdEnergy {
  double exact = 0.0;        // (2 m_p m_pi + m_pi^2 - m_phi^2) / (2 m_p)
  double approximate = 0.0;  // m_pi + m_pi^2 / (2 m_p)
};
ThresholdEnergy threshold_incident_energy(double m_p, double m_pi, double m_phi);

struct Masses {
  double m1 = 938.3, m2 = 0.0, m3 = 938.3, m4 = 139.6;
};

/// CM-frame kinematics with k1 along +z and k3 at polar angle theta in the
/// x-z plane. Requires e_cm above both thresholds.
Kinematics cm_kinematics(double e_cm, const Masses& m, double cos_theta);

struct QuadratureRule {
  std::vector<double> nodes, weights;
};
/// n-point Gauss-Legendre rule on [-1, 1].
QuadratureRule gauss_legendre(int n);

struct CrossSectionResult {
  double sigma = 0.0;  // MeV^-2
  bool above_threshold = false;
  double e_cm = 0.0;
};

using AngularAmp2 = std::function<double(double cos_theta)>;

/// (1/(64 pi^2 E^2)) (|k3|/|k1|) 2 pi int dcos |A|^2, zero at or below
/// m3 + m4. Throws std::invalid_argument when e_cm <= m1 + m2.
CrossSectionResult sigma_tot(double e_cm, const Masses& m, const AngularAmp2& amp2, int n_theta = 64);
/// sigma_tot with spin_summed_amp2 evaluated in the CM frame.
CrossSectionResult sigma_tot(double e_cm, const Masses& m, const Couplings& c, int n_theta = 64);

}  // namespace ssrqec::scatter
