#include "ssrqec/rotor.hpp"

#include "ssrqec/random.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace ssrqec::rotor {

namespace {

constexpr double kMinOutcomeProbability = 1e-15;

struct RegisterLayout {
  bool has_reference = false;
  RotorSpace r{0}, a{0}, b{0};
};

RegisterLayout layout_of(const StateVector& psi) {
  const auto& dims = psi.space().dims();
  RegisterLayout out;
  if (dims.size() == 2) {
    out.a = RotorSpace::from_dim(dims[0]);
    out.b = RotorSpace::from_dim(dims[1]);
  } else if (dims.size() == 3) {
    out.has_reference = true;
    out.r = RotorSpace::from_dim(dims[0]);
    out.a = RotorSpace::from_dim(dims[1]);
    out.b = RotorSpace::from_dim(dims[2]);
  } else {
    throw std::invalid_argument("recovery: state must live on A (x) B or R (x) A (x) B");
  }
  return out;
}

}  // namespace

RotorSpace::RotorSpace(int q_max) : q_max_(q_max) {
  if (q_max < 0) throw std::invalid_argument("RotorSpace: q_max must be non-negative");
}

Index RotorSpace::index_of(int q) const {
  if (!contains(q)) throw std::out_of_range("RotorSpace: charge " + std::to_string(q) + " outside truncation");
  return static_cast<Index>(q + q_max_);
}

ProductSpace RotorSpace::product_space(std::string label) const {
  return ProductSpace({dim()}, {std::move(label)});
}

RotorSpace RotorSpace::from_dim(Index dim) {
  if (dim % 2 == 0) throw std::invalid_argument("RotorSpace: dimension must be odd");
  return RotorSpace(static_cast<int>((dim - 1) / 2));
}

StateVector charge_state(const RotorSpace& space, int q) {
  return StateVector::basis(space.product_space(), space.index_of(q));
}

Operator charge_operator(const RotorSpace& space) {
  Eigen::VectorXcd diag(static_cast<Eigen::Index>(space.dim()));
  for (Index i = 0; i < space.dim(); ++i) diag[static_cast<Eigen::Index>(i)] = space.charge_at(i);
  return Operator::diagonal(space.product_space(), diag);
}

Operator shift_up(const RotorSpace& space) {
  const auto d = static_cast<Eigen::Index>(space.dim());
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(d, d);
  for (Eigen::Index i = 0; i + 1 < d; ++i) m(i + 1, i) = 1.0;
  return Operator::dense(space.product_space(), std::move(m));
}

Operator phase_flip(const RotorSpace& space, int q) {
  Eigen::VectorXcd diag = Eigen::VectorXcd::Ones(static_cast<Eigen::Index>(space.dim()));
  diag[static_cast<Eigen::Index>(space.index_of(q))] = -1.0;
  return Operator::diagonal(space.product_space(), diag);
}

Operator total_charge(const RotorSpace& a, const RotorSpace& b) {
  const Operator qa = charge_operator(a), qb = charge_operator(b);
  return tensor_product(qa, Operator::identity(b.product_space())) +
         tensor_product(Operator::identity(a.product_space()), qb);
}

std::vector<double> profile_coefficients(const CoefficientProfile& profile, int window) {
  if (window < 0) throw std::invalid_argument("profile_coefficients: negative window");
  std::vector<double> c(static_cast<std::size_t>(2 * window + 1));
  const double sigma = profile.sigma > 0.0 ? profile.sigma : window / 3.0;
  for (int qt = -window; qt <= window; ++qt) {
    double v = 1.0;
    if (profile.kind == CoefficientProfile::Kind::gaussian && sigma > 0.0)
      v = std::exp(-(qt * qt) / (4.0 * sigma * sigma));
    c[static_cast<std::size_t>(qt + window)] = v;
  }
  double norm = 0.0;
  for (double v : c) norm += v * v;
  norm = std::sqrt(norm);
  for (double& v : c) v /= norm;
  return c;
}

Codeword build_codeword(const RotorSpace& a, const RotorSpace& b, int q,
                        const CoefficientProfile& profile, int window) {
  for (int qt = -window; qt <= window; ++qt)
    if (!a.contains(q - qt) || !b.contains(qt))
      throw std::out_of_range("build_codeword: window overflows the charge truncation");

  const auto c = profile_coefficients(profile, window);
  const ProductSpace space = a.product_space("A").concat(b.product_space("B"));
  Eigen::VectorXcd amps = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(space.dim()));
  Codeword out{StateVector::zero(space), {q, window, {}}};
  for (int qt = -window; qt <= window; ++qt) {
    const double cq = c[static_cast<std::size_t>(qt + window)];
    amps[static_cast<Eigen::Index>(a.index_of(q - qt) * b.dim() + b.index_of(qt))] = cq;
    out.record.coeffs[qt] = cq;
  }
  out.state = StateVector(space, std::move(amps));
  return out;
}

RecoveryOutcome recover_for_outcome(const StateVector& psi, int q1, int q2, int outcome) {
  const RegisterLayout layout = layout_of(psi);
  if (!layout.b.contains(outcome)) throw std::out_of_range("recover_for_outcome: outcome outside B");
  const Index da = layout.a.dim(), db = layout.b.dim();
  const Index dr = layout.has_reference ? layout.r.dim() : 1;
  const Index ib = layout.b.index_of(outcome);

  Eigen::VectorXcd post = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(psi.dim()));
  double p = 0.0;
  for (Index r = 0; r < dr; ++r)
    for (Index ia = 0; ia < da; ++ia) {
      const Index flat = (r * da + ia) * db + ib;
      post[static_cast<Eigen::Index>(flat)] = psi[flat];
      p += std::norm(psi[flat]);
    }
  if (p < kMinOutcomeProbability)
    throw std::domain_error("recover_for_outcome: outcome has vanishing probability");
  post /= std::sqrt(p);

  auto amplitude_for = [&](int q) -> cplx {
    const int qa = q - outcome;
    if (!layout.a.contains(qa)) return 0.0;
    Index r = 0;
    if (layout.has_reference) {
      if (!layout.r.contains(-q)) return 0.0;
      r = layout.r.index_of(-q);
    }
    return post[static_cast<Eigen::Index>((r * da + layout.a.index_of(qa)) * db + ib)];
  };
  cplx alpha = amplitude_for(q1), beta = amplitude_for(q2);
  const double n = std::sqrt(std::norm(alpha) + std::norm(beta));
  if (n > 0.0) {
    alpha /= n;
    beta /= n;
  }
  return {outcome, p, alpha, beta, StateVector(psi.space(), std::move(post))};
}

std::vector<RecoveryOutcome> enumerate_recovery(const StateVector& psi, int q1, int q2) {
  const RegisterLayout layout = layout_of(psi);
  std::vector<RecoveryOutcome> out;
  const Index da = layout.a.dim(), db = layout.b.dim();
  const Index dr = layout.has_reference ? layout.r.dim() : 1;
  for (Index ib = 0; ib < db; ++ib) {
    double p = 0.0;
    for (Index r = 0; r < dr; ++r)
      for (Index ia = 0; ia < da; ++ia) p += std::norm(psi[(r * da + ia) * db + ib]);
    if (p >= kMinOutcomeProbability)
      out.push_back(recover_for_outcome(psi, q1, q2, layout.b.charge_at(ib)));
  }
  return out;
}

RecoveryOutcome recover_by_measuring_B(const StateVector& psi, int q1, int q2,
                                       std::mt19937_64& rng) {
  const auto outcomes = enumerate_recovery(psi, q1, q2);
  if (outcomes.empty()) throw std::domain_error("recover_by_measuring_B: zero state");
  double total = 0.0;
  for (const auto& o : outcomes) total += o.probability;
  const double u = uniform01(rng) * total;
  double acc = 0.0;
  for (const auto& o : outcomes) {
    acc += o.probability;
    if (u < acc) return o;
  }
  return outcomes.back();
}

double logical_fidelity(cplx a0, cplx b0, cplx a, cplx b) {
  return std::norm(std::conj(a0) * a + std::conj(b0) * b);
}

double logical_error_probability(const std::vector<RecoveryOutcome>& outcomes, cplx a0, cplx b0,
                                 double tol) {
  double p = 0.0;
  for (const auto& o : outcomes)
    if (logical_fidelity(a0, b0, o.alpha, o.beta) < 1.0 - tol) p += o.probability;
  return p;
}

GroupDiscretization::GroupDiscretization(int n_g) : n_g_(n_g) {
  if (n_g < 1) throw std::invalid_argument("GroupDiscretization: n_g must be positive");
}

double GroupDiscretization::theta(int m) const { return 2.0 * std::numbers::pi * m / n_g_; }

StateVector discrete_phase_state(const RotorSpace& space, const GroupDiscretization& disc, int m) {
  Eigen::VectorXcd v(static_cast<Eigen::Index>(space.dim()));
  const double th = disc.theta(m);
  const double scale = 1.0 / std::sqrt(static_cast<double>(disc.n_g()));
  for (Index i = 0; i < space.dim(); ++i)
    v[static_cast<Eigen::Index>(i)] = scale * std::polar(1.0, -space.charge_at(i) * th);
  return {space.product_space("R"), std::move(v)};
}

Operator m_inv(const Operator& m, const GroupDiscretization& disc) {
  if (m.space().num_factors() != 1) throw std::invalid_argument("m_inv: operator must act on one rotor");
  const RotorSpace rotor = RotorSpace::from_dim(m.dim());
  if (static_cast<Index>(disc.n_g()) < rotor.dim())
    throw std::invalid_argument("m_inv: n_g must be at least the rotor dimension");

  const auto d = static_cast<Eigen::Index>(rotor.dim());
  const Eigen::MatrixXcd mm = m.to_dense();
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(d * d, d * d);
  for (int k = 0; k < disc.n_g(); ++k) {
    const double th = disc.theta(k);
    const Eigen::VectorXcd ref = discrete_phase_state(rotor, disc, k).amplitudes();
    const Eigen::MatrixXcd proj = ref * ref.adjoint();
    Eigen::MatrixXcd rotated(d, d);
    for (Eigen::Index s = 0; s < d; ++s)
      for (Eigen::Index sp = 0; sp < d; ++sp)
        rotated(s, sp) = std::polar(1.0, -th * rotor.charge_at(static_cast<Index>(s))) * mm(s, sp) *
                         std::polar(1.0, th * rotor.charge_at(static_cast<Index>(sp)));
    for (Eigen::Index r = 0; r < d; ++r)
      for (Eigen::Index rp = 0; rp < d; ++rp)
        out.block(r * d, rp * d, d, d) += proj(r, rp) * rotated;
  }
  return Operator::dense(rotor.product_space("R").concat(m.space()), std::move(out));
}

StateVector prepare_simulated_superposition(const std::map<int, cplx>& alphas,
                                            const SimulationLayout& layout) {
  double norm = 0.0;
  for (const auto& [q, a] : alphas) norm += std::norm(a);
  if (alphas.empty() || std::abs(norm - 1.0) > kNormTol)
    throw std::invalid_argument("prepare_simulated_superposition: alphas must be normalized");

  const RotorSpace &r = layout.reference, &a = layout.a, &b = layout.b;
  const ProductSpace space =
      r.product_space("R").concat(a.product_space("A")).concat(b.product_space("B"));
  Eigen::VectorXcd amps = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(space.dim()));
  for (const auto& [q, alpha] : alphas) {
    if (!r.contains(-q)) throw std::out_of_range("prepare_simulated_superposition: reference overflow");
    const Codeword cw = build_codeword(a, b, q, layout.profile, layout.window);
    for (const auto& [qt, c] : cw.record.coeffs) {
      const Index flat = (r.index_of(-q) * a.dim() + a.index_of(q - qt)) * b.dim() + b.index_of(qt);
      amps[static_cast<Eigen::Index>(flat)] += alpha * c;
    }
  }
  return {space, std::move(amps)};
}

}  // namespace ssrqec::rotor
