#include "ssrqec/errors.hpp"
#include "ssrqec/scatter.hpp"
#include "ssrqec/random.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace ssrqec::scatter;

namespace {

constexpr double kPi = std::numbers::pi;
const cplx I(0.0, 1.0);

double metric(int mu) { return mu == 0 ? 1.0 : -1.0; }

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

Kinematics random_cm_point(std::mt19937_64& rng) {
  const Masses m;
  const double e_cm = m.m3 + m.m4 + 5.0 + 300.0 * ssrqec::uniform01(rng);
  return cm_kinematics(e_cm, m, 2.0 * ssrqec::uniform01(rng) - 1.0);
}

Kinematics transform(const Kinematics& k, const std::function<FourMomentum(const FourMomentum&)>& f) {
  Kinematics out = k;
  out.k1 = f(k.k1);
  out.k2 = f(k.k2);
  out.k3 = f(k.k3);
  out.k4 = f(k.k4);
  return out;
}

}  // namespace

TEST_CASE("Clifford algebra in the Dirac representation") {
  const GammaBasis& g = GammaBasis::dirac();
  const Matrix4 id = Matrix4::Identity();
  for (int mu = 0; mu < 4; ++mu)
    for (int nu = 0; nu < 4; ++nu) {
      const Matrix4 anti = g.mu[static_cast<std::size_t>(mu)] * g.mu[static_cast<std::size_t>(nu)] +
                           g.mu[static_cast<std::size_t>(nu)] * g.mu[static_cast<std::size_t>(mu)];
      const Matrix4 expected = (mu == nu ? 2.0 * metric(mu) : 0.0) * id;
      CHECK((anti - expected).cwiseAbs().maxCoeff() < 1e-12);
    }
  CHECK((g.five * g.five - id).cwiseAbs().maxCoeff() < 1e-12);
  for (int mu = 0; mu < 4; ++mu)
    CHECK((g.five * g.mu[static_cast<std::size_t>(mu)] + g.mu[static_cast<std::size_t>(mu)] * g.five)
              .cwiseAbs()
              .maxCoeff() < 1e-12);
  const Matrix4 product = I * g.mu[0] * g.mu[1] * g.mu[2] * g.mu[3];
  CHECK((product - g.five).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("two-body momentum") {
  CHECK(cm_momentum(938.3 + 139.6, 938.3, 139.6) == 0.0);
  CHECK(cm_momentum(1000.0, 938.3, 139.6) == 0.0);
  CHECK(cm_momentum(10.0, 0.0, 0.0) == doctest::Approx(5.0));
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 50; ++trial) {
    const double ma = 1000.0 * ssrqec::uniform01(rng), mb = 1000.0 * ssrqec::uniform01(rng);
    const double e = ma + mb + 500.0 * ssrqec::uniform01(rng) + 1e-3;
    const double p = cm_momentum(e, ma, mb);
    CHECK(std::abs(std::sqrt(ma * ma + p * p) + std::sqrt(mb * mb + p * p) - e) < 1e-9 * e);
  }
}

TEST_CASE("threshold incident energy") {
  const ThresholdEnergy t = threshold_incident_energy(938.3, 139.6, 0.0);
  CHECK(t.exact == doctest::Approx(149.985).epsilon(1e-5));
  CHECK(t.exact == doctest::Approx(t.approximate).epsilon(1e-14));
  const ThresholdEnergy massive = threshold_incident_energy(938.3, 139.6, 10.0);
  CHECK(massive.exact < massive.approximate);
  CHECK(threshold_incident_energy(938.3, 0.0, 0.0).exact == 0.0);

  // Invariant mass at the exact threshold equals m_p + m_pi.
  const double s = 938.3 * 938.3 + 2.0 * 938.3 * massive.exact + 100.0;
  CHECK(std::sqrt(s) == doctest::Approx(938.3 + 139.6).epsilon(1e-12));
}

TEST_CASE("Dirac spinors") {
  const double m = 938.3;
  const DiracSpinor rest = dirac_u(FourMomentum::on_shell(m, 0, 0, 0), m, Spin::up);
  CHECK(std::abs(rest[0] - std::sqrt(2.0 * m)) < 1e-12);
  CHECK(std::abs(rest[1]) + std::abs(rest[2]) + std::abs(rest[3]) == 0.0);

  const GammaBasis& g = GammaBasis::dirac();
  std::mt19937_64 rng(42);
  for (int trial = 0; trial < 50; ++trial) {
    const FourMomentum p = FourMomentum::on_shell(m, 2000.0 * (ssrqec::uniform01(rng) - 0.5),
                                                  2000.0 * (ssrqec::uniform01(rng) - 0.5),
                                                  2000.0 * (ssrqec::uniform01(rng) - 0.5));
    Matrix4 completeness = Matrix4::Zero();
    for (Spin s : {Spin::up, Spin::down}) {
      const DiracSpinor u = dirac_u(p, m, s);
      CHECK(std::abs((dirac_bar(u) * u)(0, 0) - 2.0 * m) < 1e-9 * m);
      CHECK(((g.slash(p) - m * Matrix4::Identity()) * u).cwiseAbs().maxCoeff() < 1e-9 * p.e);
      completeness += u * dirac_bar(u);
    }
    CHECK((completeness - g.slash(p) - m * Matrix4::Identity()).cwiseAbs().maxCoeff() < 1e-9 * p.e);
  }
  CHECK_THROWS_AS(dirac_u(FourMomentum{1000.0, 0, 0, 0}, m, Spin::up), std::invalid_argument);
}

TEST_CASE("amplitude basics") {
  std::mt19937_64 rng(43);
  const Kinematics k = random_cm_point(rng);
  CHECK(amplitude_p_to_n(k, Couplings{0.0, 0.0, 1.0}, Spin::up, Spin::down) == cplx(0.0));
  const Couplings c{0.3, 0.7, 1.0};
  const Couplings c2{0.3, 0.7, 2.0};
  for (Spin s1 : {Spin::up, Spin::down})
    for (Spin s3 : {Spin::up, Spin::down})
      CHECK(amplitude_p_to_n(k, c2, s1, s3) == 2.0 * amplitude_p_to_n(k, c, s1, s3));
}

TEST_CASE("propagator identity agrees with an explicit inverse") {
  std::mt19937_64 rng(44);
  const GammaBasis& g = GammaBasis::dirac();
  for (int trial = 0; trial < 20; ++trial) {
    const Kinematics k = random_cm_point(rng);
    const Couplings c{0.01 + ssrqec::uniform01(rng), ssrqec::uniform01(rng), 1.0 + ssrqec::uniform01(rng)};
    const Matrix4 prop = I * (g.slash(k.k1 + k.k2) - k.m_p * Matrix4::Identity()).inverse();
    const Matrix4 vertex = -I * c.g1 * g.slash(k.k4) * g.five - c.g2 * g.five;
    for (Spin s1 : {Spin::up, Spin::down})
      for (Spin s3 : {Spin::up, Spin::down}) {
        const cplx direct =
            (-I * c.lambda) * (dirac_bar(dirac_u(k.k3, k.m_n, s3)) * vertex * prop * dirac_u(k.k1, k.m_p, s1))(0, 0);
        const cplx a = amplitude_p_to_n(k, c, s1, s3);
        CHECK(std::abs(a - direct) < 1e-9 * std::max(1.0, std::abs(direct)));
      }
  }
}

TEST_CASE("spin-summed square matches the trace technique") {
  std::mt19937_64 rng(45);
  // Pseudoscalar coupling alone near the threshold, then the full vertex.
  const Masses m;
  const Kinematics near = cm_kinematics(m.m3 + m.m4 + 0.5, m, 0.3);
  const Couplings g2_only{0.0, 1.0, 1.0};
  CHECK(rel(spin_summed_amp2(near, g2_only), oracle::spin_summed_trace(near, g2_only)) < 1e-6);
  for (int trial = 0; trial < 20; ++trial) {
    const Kinematics k = random_cm_point(rng);
    const Couplings c{ssrqec::uniform01(rng) * 0.05, ssrqec::uniform01(rng), 1.0};
    const double a2 = spin_summed_amp2(k, c);
    CHECK(a2 >= 0.0);
    CHECK(rel(a2, oracle::spin_summed_trace(k, c)) < 1e-6);
  }
}

TEST_CASE("property: spin-summed square is Lorentz invariant") {
  std::mt19937_64 rng(46);
  for (int trial = 0; trial < 20; ++trial) {
    const Kinematics k = random_cm_point(rng);
    const Couplings c{0.02, 1.0, 1.0};
    const double base = spin_summed_amp2(k, c);
    const double y = 2.0 * ssrqec::uniform01(rng) - 1.0;
    CHECK(rel(spin_summed_amp2(transform(k, [y](const FourMomentum& p) { return p.boost_z(y); }), c), base) < 1e-8);
    const double ax = ssrqec::uniform01(rng), ay = ssrqec::uniform01(rng), az = ssrqec::uniform01(rng) + 0.1;
    const double angle = 2.0 * kPi * ssrqec::uniform01(rng);
    CHECK(rel(spin_summed_amp2(transform(k, [&](const FourMomentum& p) { return p.rotate(ax, ay, az, angle); }), c),
              base) < 1e-8);
  }
}

TEST_CASE("amplitude rejects broken kinematics and the pole") {
  std::mt19937_64 rng(47);
  Kinematics k = random_cm_point(rng);
  const Couplings c{0.1, 1.0, 1.0};
  Kinematics shifted = k;
  shifted.k3 = FourMomentum::on_shell(k.m_n, k.k3.px + 1.0, k.k3.py, k.k3.pz);
  CHECK_THROWS_AS(amplitude_p_to_n(shifted, c, Spin::up, Spin::up), std::invalid_argument);
  Kinematics off = k;
  off.k4.e += 1.0;
  off.k3.e -= 1.0;
  CHECK_THROWS_AS(amplitude_p_to_n(off, c, Spin::up, Spin::up), std::invalid_argument);

  Kinematics pole;
  pole.m_phi = 0.0;
  pole.m_pi = 0.0;
  pole.k1 = FourMomentum::on_shell(pole.m_p, 0, 0, 0);
  pole.k2 = FourMomentum{};
  pole.k3 = pole.k1;
  pole.k4 = FourMomentum{};
  CHECK_THROWS_AS(amplitude_p_to_n(pole, c, Spin::up, Spin::up), ssrqec::SingularityError);
}

TEST_CASE("Gauss-Legendre rule integrates polynomials exactly") {
  for (int n : {2, 5, 16, 64}) {
    const QuadratureRule r = gauss_legendre(n);
    REQUIRE(r.nodes.size() == static_cast<std::size_t>(n));
    for (int deg = 0; deg < 2 * n; ++deg) {
      double sum = 0.0;
      for (std::size_t i = 0; i < r.nodes.size(); ++i) sum += r.weights[i] * std::pow(r.nodes[i], deg);
      const double exact = deg % 2 ? 0.0 : 2.0 / (deg + 1);
      CHECK(std::abs(sum - exact) < 1e-13);
    }
  }
}

TEST_CASE("cross-section threshold and closed form") {
  const Masses m;
  const AngularAmp2 one = [](double) { return 1.0; };
  const CrossSectionResult below = sigma_tot(1000.0, m, one);
  CHECK(below.sigma == 0.0);
  CHECK_FALSE(below.above_threshold);
  CHECK(sigma_tot(m.m3 + m.m4, m, one).sigma == 0.0);
  CHECK(sigma_tot(1000.0, m, Couplings{0.01, 1.0, 1.0}).sigma == 0.0);
  CHECK_THROWS_AS(sigma_tot(m.m1 + m.m2, m, one), std::invalid_argument);

  for (double e : {1080.0, 1200.0, 1400.0}) {
    const CrossSectionResult r = sigma_tot(e, m, one);
    CHECK(r.above_threshold);
    const double closed =
        4.0 * kPi * cm_momentum(e, m.m3, m.m4) / cm_momentum(e, m.m1, m.m2) / (64.0 * kPi * kPi * e * e);
    CHECK(rel(r.sigma, closed) < 1e-12);
  }
}

TEST_CASE("cross-section converges in the node count") {
  const Masses m;
  const Couplings c{0.01, 1.0, 1.0};
  for (double e : {1100.0, 1300.0}) {
    const double s32 = sigma_tot(e, m, c, 32).sigma, s64 = sigma_tot(e, m, c, 64).sigma;
    CHECK(s64 > 0.0);
    CHECK(rel(s32, s64) < 1e-8);
  }
}

TEST_CASE("property: cross-section vanishes like |k3| at threshold") {
  const Masses m;
  const double thr = m.m3 + m.m4;
  const AngularAmp2 one = [](double) { return 1.0; };
  double previous_gap = 1.0;
  for (double delta : {1e-2, 1e-4, 1e-6}) {
    const double ratio = sigma_tot(thr + delta, m, one).sigma / sigma_tot(thr + 2.0 * delta, m, one).sigma;
    const double k3_ratio = cm_momentum(thr + delta, m.m3, m.m4) / cm_momentum(thr + 2.0 * delta, m.m3, m.m4);
    // The flux and 1/E^2 factors move by O(delta / threshold).
    CHECK(rel(ratio, k3_ratio) < 20.0 * delta / thr + 1e-9);
    const double gap = std::abs(ratio - std::sqrt(0.5));
    CHECK(gap <= previous_gap);
    previous_gap = gap;
  }
  CHECK(previous_gap < 1e-6);
}
