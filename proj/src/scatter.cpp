#include "ssrqec/scatter.hpp"

#include "ssrqec/errors.hpp"

#include <boost/math/special_functions/legendre.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace ssrqec::scatter {

namespace {

constexpr double kShellTol = 1e-6;
constexpr double kConservationTol = 1e-6;

void require_on_shell(const FourMomentum& p, double m, const char* what) {
  const double scale = std::max(1.0, p.e * p.e);
  if (std::abs(p.mass_squared() - m * m) > kShellTol * scale || p.e < 0.0)
    throw std::invalid_argument(std::string(what) + " is off-shell");
}

}  // namespace

FourMomentum FourMomentum::on_shell(double m, double px, double py, double pz) {
  if (m < 0.0) throw std::invalid_argument("FourMomentum::on_shell: negative mass");
  return {std::sqrt(m * m + px * px + py * py + pz * pz), px, py, pz};
}

double FourMomentum::p3() const { return std::sqrt(px * px + py * py + pz * pz); }

FourMomentum FourMomentum::boost_z(double rapidity) const {
  const double ch = std::cosh(rapidity), sh = std::sinh(rapidity);
  return {ch * e + sh * pz, px, py, sh * e + ch * pz};
}

FourMomentum FourMomentum::rotate(double ax, double ay, double az, double angle) const {
  const double n = std::sqrt(ax * ax + ay * ay + az * az);
  if (n == 0.0) throw std::invalid_argument("FourMomentum::rotate: zero axis");
  ax /= n, ay /= n, az /= n;
  const double c = std::cos(angle), s = std::sin(angle);
  const double d = ax * px + ay * py + az * pz;
  // Rodrigues' formula
  return {e,
          px * c + (ay * pz - az * py) * s + ax * d * (1 - c),
          py * c + (az * px - ax * pz) * s + ay * d * (1 - c),
          pz * c + (ax * py - ay * px) * s + az * d * (1 - c)};
}

const GammaBasis& GammaBasis::dirac() {
  static const GammaBasis basis = [] {
    const cplx i(0.0, 1.0);
    Eigen::Matrix2cd id = Eigen::Matrix2cd::Identity(), zero = Eigen::Matrix2cd::Zero();
    std::array<Eigen::Matrix2cd, 3> sigma;
    sigma[0] << 0, 1, 1, 0;
    sigma[1] << 0, -i, i, 0;
    sigma[2] << 1, 0, 0, -1;
    auto blocks = [](const Eigen::Matrix2cd& a, const Eigen::Matrix2cd& b, const Eigen::Matrix2cd& c,
                     const Eigen::Matrix2cd& d) {
      Matrix4 m;
      m << a, b, c, d;
      return m;
    };
    GammaBasis g;
    g.mu[0] = blocks(id, zero, zero, -id);
    for (int k = 0; k < 3; ++k) g.mu[static_cast<std::size_t>(k + 1)] = blocks(zero, sigma[k], -sigma[k], zero);
    g.five = blocks(zero, id, id, zero);
    return g;
  }();
  return basis;
}

Matrix4 GammaBasis::slash(const FourMomentum& p) const {
  return mu[0] * p.e - mu[1] * p.px - mu[2] * p.py - mu[3] * p.pz;
}

DiracSpinor dirac_u(const FourMomentum& p, double m, Spin s) {
  require_on_shell(p, m, "dirac_u momentum");
  const Eigen::Vector2cd chi = s == Spin::up ? Eigen::Vector2cd(1, 0) : Eigen::Vector2cd(0, 1);
  const cplx i(0.0, 1.0);
  Eigen::Matrix2cd sp;
  sp << p.pz, p.px - i * p.py, p.px + i * p.py, -p.pz;
  const double root = std::sqrt(p.e + m);
  DiracSpinor u;
  u << root * chi, (sp * chi) / root;
  return u;
}

Eigen::Matrix<cplx, 1, 4> dirac_bar(const DiracSpinor& u) {
  return u.adjoint() * GammaBasis::dirac().mu[0];
}

cplx amplitude_p_to_n(const Kinematics& kin, const Couplings& c, Spin s1, Spin s3) {
  require_on_shell(kin.k1, kin.m_p, "k1");
  require_on_shell(kin.k2, kin.m_phi, "k2");
  require_on_shell(kin.k3, kin.m_n, "k3");
  require_on_shell(kin.k4, kin.m_pi, "k4");
  const FourMomentum miss = kin.k1 + kin.k2 - kin.k3 - kin.k4;
  if (std::max({std::abs(miss.e), std::abs(miss.px), std::abs(miss.py), std::abs(miss.pz)}) > kConservationTol)
    throw std::invalid_argument("amplitude_p_to_n: four-momentum not conserved");

  const FourMomentum k = kin.k1 + kin.k2;
  const double denom = k.mass_squared() - kin.m_p * kin.m_p;
  if (std::abs(denom) < c.pole_guard) throw SingularityError("amplitude_p_to_n: propagator pole");

  const GammaBasis& g = GammaBasis::dirac();
  const cplx i(0.0, 1.0);
  const Matrix4 vertex = -i * c.g1 * g.slash(kin.k4) * g.five - c.g2 * g.five;
  const Matrix4 propagator = i * (g.slash(k) + kin.m_p * Matrix4::Identity()) / denom;
  const cplx value = (dirac_bar(dirac_u(kin.k3, kin.m_n, s3)) * vertex * propagator * dirac_u(kin.k1, kin.m_p, s1))(0, 0);
  return -i * c.lambda * value;
}

double spin_summed_amp2(const Kinematics& kin, const Couplings& c) {
  double sum = 0.0;
  for (Spin s1 : {Spin::up, Spin::down})
    for (Spin s3 : {Spin::up, Spin::down}) sum += std::norm(amplitude_p_to_n(kin, c, s1, s3));
  return 0.5 * sum;
}

double cm_momentum(double e_cm, double m_a, double m_b) {
  if (e_cm <= m_a + m_b) return 0.0;
  const double sum = m_a + m_b, diff = m_a - m_b;
  return std::sqrt((e_cm * e_cm - sum * sum) * (e_cm * e_cm - diff * diff)) / (2.0 * e_cm);
}

ThresholdEnergy threshold_incident_energy(double m_p, double m_pi, double m_phi) {
  if (!(m_p > 0.0) || m_pi < 0.0 || m_phi < 0.0)
    throw std::invalid_argument("threshold_incident_energy: masses must be positive");
  return {(2.0 * m_p * m_pi + m_pi * m_pi - m_phi * m_phi) / (2.0 * m_p), m_pi + m_pi * m_pi / (2.0 * m_p)};
}

Kinematics cm_kinematics(double e_cm, const Masses& m, double cos_theta) {
  if (e_cm <= m.m1 + m.m2 || e_cm <= m.m3 + m.m4)
    throw std::invalid_argument("cm_kinematics: below threshold");
  const double p = cm_momentum(e_cm, m.m1, m.m2), q = cm_momentum(e_cm, m.m3, m.m4);
  const double sin_theta = std::sqrt(std::max(0.0, 1.0 - cos_theta * cos_theta));
  Kinematics kin;
  kin.m_p = m.m1, kin.m_phi = m.m2, kin.m_n = m.m3, kin.m_pi = m.m4;
  kin.k1 = FourMomentum::on_shell(m.m1, 0.0, 0.0, p);
  kin.k2 = FourMomentum::on_shell(m.m2, 0.0, 0.0, -p);
  kin.k3 = FourMomentum::on_shell(m.m3, q * sin_theta, 0.0, q * cos_theta);
  kin.k4 = FourMomentum::on_shell(m.m4, -q * sin_theta, 0.0, -q * cos_theta);
  return kin;
}

QuadratureRule gauss_legendre(int n) {
  if (n < 2) throw std::invalid_argument("gauss_legendre: need at least two nodes");
  // Boost returns the non-negative zeros in increasing order.
  const std::vector<double> half = boost::math::legendre_p_zeros<double>(n);
  QuadratureRule rule;
  auto weight = [n](double x) {
    const double d = boost::math::legendre_p_prime(n, x);
    return 2.0 / ((1.0 - x * x) * d * d);
  };
  for (auto it = half.rbegin(); it != half.rend(); ++it) {
    if (*it == 0.0) continue;
    rule.nodes.push_back(-*it);
    rule.weights.push_back(weight(*it));
  }
  for (double x : half) {
    rule.nodes.push_back(x);
    rule.weights.push_back(weight(x));
  }
  return rule;
}

CrossSectionResult sigma_tot(double e_cm, const Masses& m, const AngularAmp2& amp2, int n_theta) {
  if (!(e_cm > m.m1 + m.m2)) throw std::invalid_argument("sigma_tot: invalid initial state");
  CrossSectionResult out;
  out.e_cm = e_cm;
  if (e_cm <= m.m3 + m.m4) return out;
  out.above_threshold = true;
  const QuadratureRule rule = gauss_legendre(n_theta);
  double integral = 0.0;
  for (std::size_t k = 0; k < rule.nodes.size(); ++k) integral += rule.weights[k] * amp2(rule.nodes[k]);
  const double k1 = cm_momentum(e_cm, m.m1, m.m2), k3 = cm_momentum(e_cm, m.m3, m.m4);
  out.sigma = (k3 / k1) * 2.0 * std::numbers::pi * integral / (64.0 * std::numbers::pi * std::numbers::pi * e_cm * e_cm);
  return out;
}

CrossSectionResult sigma_tot(double e_cm, const Masses& m, const Couplings& c, int n_theta) {
  return sigma_tot(e_cm, m, [&](double ct) { return spin_summed_amp2(cm_kinematics(e_cm, m, ct), c); },
                   n_theta);
}

}  // namespace ssrqec::scatter
