#include "ssrqec/qcdcode.hpp"

#include "ssrqec/parallel.hpp"
#include "ssrqec/random.hpp"

#include <boost/math/tools/roots.hpp>

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace ssrqec::qcd {

namespace {

void require_positive(double v, const char* what) {
  if (!(v > 0.0)) throw std::invalid_argument(std::string(what) + " must be positive");
}

Index bit_of(int n, int particle) { return Index{1} << (n - 1 - particle); }

void require_particle(int n, int particle) {
  if (particle < 0 || particle >= n) throw std::out_of_range("particle index out of range");
}

}  // namespace

void PhysicalConstants::validate() const {
  for (auto [v, name] : {std::pair{lambda_qcd, "lambda_qcd"}, {m_pi, "m_pi"}, {m_w, "m_w"},
                         {b_scale, "b_scale"}, {m_u, "m_u"}, {m_d, "m_d"}, {epsilon, "epsilon"},
                         {f_pi, "f_pi"}})
    require_positive(v, name);
}

double pion_mass(double m_u, double m_d, double b_scale) {
  if (m_u < 0.0 || m_d < 0.0 || b_scale < 0.0)
    throw std::invalid_argument("pion_mass: negative input");
  return std::sqrt(b_scale * (m_u + m_d));
}

double thermal_flip_suppression(double temperature, const PhysicalConstants& c) {
  require_positive(temperature, "temperature");
  return std::exp(-c.m_pi / temperature);
}

double sm_flip_suppression(double energy, const PhysicalConstants& c) {
  require_positive(energy, "energy");
  const double ratio = energy / c.m_w;
  return std::max(std::exp(-c.lambda_qcd / energy), ratio * ratio);
}

double sm_crossover_energy(const PhysicalConstants& c) {
  c.validate();
  // log-difference of the two branches; negative while the electroweak term dominates
  auto f = [&](double e) { return -c.lambda_qcd / e - 2.0 * std::log(e / c.m_w); };
  double lo = 1e-3 * c.lambda_qcd, hi = c.lambda_qcd;
  if (f(lo) >= 0.0 || f(hi) <= 0.0)
    throw std::domain_error("sm_crossover_energy: no crossover below lambda_qcd");
  std::uintmax_t iterations = 200;
  auto [a, b] = boost::math::tools::toms748_solve(f, lo, hi, boost::math::tools::eps_tolerance<double>(52),
                                                  iterations);
  return 0.5 * (a + b);
}

double single_quantum_error_probability(double temperature, double epsilon) {
  require_positive(temperature, "temperature");
  require_positive(epsilon, "epsilon");
  return std::exp(-epsilon / temperature);
}

double effective_distance(double lambda, double epsilon) {
  require_positive(lambda, "lambda");
  require_positive(epsilon, "epsilon");
  return lambda / epsilon;
}

std::string to_string(Species s) { return s == Species::phi1 ? "phi1" : "phi2"; }

// --------------------------------------------------------------- AmplitudeTable

AmplitudeTable::AmplitudeTable(int grid) : grid_(grid) {
  if (grid < 0) throw std::invalid_argument("AmplitudeTable: negative grid");
  const auto w = static_cast<std::size_t>(2 * grid + 1);
  entries_.assign(4 * w * w, cplx(0.0));
}

std::size_t AmplitudeTable::offset(Species s, Logical i, int k, int k_prime) const {
  if (!in_grid(k) || !in_grid(k_prime)) throw std::out_of_range("AmplitudeTable: momentum outside grid");
  const auto w = static_cast<std::size_t>(2 * grid_ + 1);
  const auto block = static_cast<std::size_t>(s) * 2 + static_cast<std::size_t>(i);
  return (block * w + static_cast<std::size_t>(k + grid_)) * w + static_cast<std::size_t>(k_prime + grid_);
}

cplx AmplitudeTable::at(Species s, Logical i, int k, int k_prime) const {
  return entries_[offset(s, i, k, k_prime)];
}

void AmplitudeTable::set(Species s, Logical i, int k, int k_prime, cplx value) {
  entries_[offset(s, i, k, k_prime)] = value;
}

double AmplitudeTable::row_norm_squared(Species s, Logical i, int k) const {
  double sum = 0.0;
  for (int kp = -grid_; kp <= grid_; ++kp) sum += std::norm(at(s, i, k, kp));
  return sum;
}

void AmplitudeTable::validate() const {
  for (Species s : {Species::phi1, Species::phi2})
    for (Logical i : {Logical::p, Logical::n})
      for (int k = -grid_; k <= grid_; ++k)
        if (row_norm_squared(s, i, k) > 1.0 + 1e-9)
          throw std::domain_error("AmplitudeTable: row exceeds unit norm");
}

MomentumProfile exponential_profile(double r) {
  if (r < 0.0 || r >= 1.0) throw std::invalid_argument("exponential_profile: r must lie in [0, 1)");
  return [r](int kp) { return std::pow(r, std::abs(kp)); };
}

AmplitudeTable toy_amplitude_table(double lambda1, double lambda2, int grid,
                                   const MomentumProfile& profile) {
  if (std::abs(lambda1) > 1.0 || std::abs(lambda2) > 1.0)
    throw std::invalid_argument("toy_amplitude_table: couplings must satisfy |lambda| <= 1");
  AmplitudeTable table(grid);
  const double forward[2][2] = {{1.0 - lambda1 * lambda1 / 2.0, 1.0},
                                {1.0, 1.0 - lambda2 * lambda2 / 2.0}};
  double weight2 = 0.0;
  for (int kp = -grid; kp <= grid; ++kp)
    if (kp != 0) weight2 += profile(kp) * profile(kp);

  for (Species s : {Species::phi1, Species::phi2})
    for (Logical i : {Logical::p, Logical::n}) {
      const double a0 = forward[static_cast<int>(s)][static_cast<int>(i)];
      const double deficit = std::max(0.0, 1.0 - a0 * a0);
      const double scale = weight2 > 0.0 ? std::sqrt(deficit / weight2) : 0.0;
      for (int k = -grid; k <= grid; ++k) {
        table.set(s, i, k, 0, a0);
        if (scale == 0.0) continue;
        for (int kp = -grid; kp <= grid; ++kp) {
          if (kp == 0) continue;
          // proportional to A_{k,0} except when the forward amplitude vanishes
          const double value = a0 != 0.0 ? a0 * (scale / std::abs(a0)) * profile(kp)
                                         : scale * profile(kp);
          table.set(s, i, k, kp, value);
        }
      }
    }
  table.validate();
  return table;
}

AlphaPair alpha_decomposition(const AmplitudeTable& table, Species s, int k, int k_prime) {
  const cplx ap = table.at(s, Logical::p, k, k_prime);
  const cplx an = table.at(s, Logical::n, k, k_prime);
  return {(ap + an) / 2.0, (ap - an) / 2.0};
}

ErrorSet channel_error_set(const AmplitudeTable& table, Species s, int k) {
  const ProductSpace space({2}, {"isospin"});
  std::vector<Operator> ops;
  std::vector<std::string> labels;
  for (int kp = -table.grid(); kp <= table.grid(); ++kp) {
    Eigen::VectorXcd d(2);
    d << table.at(s, Logical::p, k, kp), table.at(s, Logical::n, k, kp);
    if (d.cwiseAbs().maxCoeff() == 0.0) continue;
    ops.push_back(Operator::diagonal(space, d));
    labels.push_back(to_string(s) + ":k'=" + std::to_string(kp));
  }
  return ErrorSet(std::move(ops), std::move(labels));
}

Operator scattering_dilation(const AmplitudeTable& table, Species s, int k) {
  const int w = 2 * table.grid() + 1;
  const int centre = table.grid();
  Eigen::MatrixXcd u = Eigen::MatrixXcd::Zero(2 * w, 2 * w);
  for (Logical i : {Logical::p, Logical::n}) {
    if (std::abs(table.row_norm_squared(s, i, k) - 1.0) > 1e-9)
      throw std::domain_error("scattering_dilation: amplitude row is not normalized");
    Eigen::VectorXcd a(w);
    for (int kp = -table.grid(); kp <= table.grid(); ++kp) a[kp + centre] = table.at(s, i, k, kp);
    // Householder reflection taking e^{i phi} e_centre to a, times e^{i phi}.
    const double phi = std::arg(a[centre]);
    Eigen::VectorXcd x = Eigen::VectorXcd::Zero(w);
    x[centre] = std::polar(1.0, phi);
    const Eigen::VectorXcd v = x - a;
    Eigen::MatrixXcd block = Eigen::MatrixXcd::Identity(w, w);
    if (v.norm() > 1e-15) block -= 2.0 * v * v.adjoint() / v.squaredNorm();
    block *= std::polar(1.0, phi);
    const int off = static_cast<int>(i) * w;
    u.block(off, off, w, w) = block;
  }
  return Operator::dense(ProductSpace({2, static_cast<Index>(w)}, {"isospin", "transfer"}), std::move(u));
}

// -------------------------------------------------------------- RepetitionState

ProductSpace repetition_space(int n) {
  std::vector<std::string> labels;
  for (int k = 0; k < n; ++k) labels.push_back("pm" + std::to_string(k));
  return ProductSpace(std::vector<Index>(static_cast<std::size_t>(n), 2), std::move(labels));
}

RepetitionState::RepetitionState(StateVector amplitudes, std::vector<int> momenta)
    : amps_(std::move(amplitudes)), momenta_(std::move(momenta)) {
  if (momenta_.empty() || !(amps_.space() == repetition_space(n())))
    throw std::invalid_argument("RepetitionState: amplitudes must live on n qubits");
  if (!amps_.is_normalized()) throw std::domain_error("RepetitionState: not normalized");
}

bool RepetitionState::common_momentum() const {
  return std::all_of(momenta_.begin(), momenta_.end(), [&](int k) { return k == momenta_.front(); });
}

StateVector RepetitionState::species_basis() const {
  Eigen::VectorXcd v = amps_.amplitudes();
  const double h = 1.0 / std::sqrt(2.0);
  for (Index bit = 1; bit < static_cast<Index>(v.size()); bit <<= 1)
    for (Index i = 0; i < static_cast<Index>(v.size()); ++i)
      if ((i & bit) == 0) {
        const cplx a = v[static_cast<Eigen::Index>(i)], b = v[static_cast<Eigen::Index>(i | bit)];
        v[static_cast<Eigen::Index>(i)] = h * (a + b);
        v[static_cast<Eigen::Index>(i | bit)] = h * (a - b);
      }
  return {amps_.space(), std::move(v)};
}

RepetitionState encode_repetition(cplx c_plus, cplx c_minus, int n) {
  if (n < 1 || n % 2 == 0) throw std::invalid_argument("encode_repetition: n must be odd and positive");
  if (std::abs(std::norm(c_plus) + std::norm(c_minus) - 1.0) > kNormTol)
    throw std::invalid_argument("encode_repetition: |c+|^2 + |c-|^2 must be 1");
  const ProductSpace space = repetition_space(n);
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(space.dim()));
  v[0] += c_plus;
  v[static_cast<Eigen::Index>(space.dim() - 1)] += c_minus;
  return {StateVector(space, std::move(v)), std::vector<int>(static_cast<std::size_t>(n), 0)};
}

StateVector apply_effective_error(const StateVector& amps, int particle, cplx alpha1, cplx alpha2) {
  const int n = static_cast<int>(amps.space().num_factors());
  require_particle(n, particle);
  const Index mask = bit_of(n, particle);
  Eigen::VectorXcd out(static_cast<Eigen::Index>(amps.dim()));
  for (Index i = 0; i < amps.dim(); ++i)
    out[static_cast<Eigen::Index>(i)] = alpha1 * amps[i] + alpha2 * amps[i ^ mask];
  return {amps.space(), std::move(out)};
}

RepetitionState apply_flips(const RepetitionState& state, const std::vector<int>& particles) {
  StateVector amps = state.amplitudes();
  for (int k : particles) amps = apply_effective_error(amps, k, 0.0, 1.0);
  return {std::move(amps), state.momenta()};
}

RepetitionState apply_phase_error(const RepetitionState& state, int particle, double theta) {
  const cplx phase = std::polar(1.0, -theta);
  return {apply_effective_error(state.amplitudes(), particle, (phase + 1.0) / 2.0, (phase - 1.0) / 2.0),
          state.momenta()};
}

// ------------------------------------------------------------------ scattering

BranchedState apply_scattering_error(const RepetitionState& state, int particle,
                                     const AmplitudeTable& table, Species s, int k) {
  require_particle(state.n(), particle);
  if (state.momenta()[static_cast<std::size_t>(particle)] != 0)
    throw std::invalid_argument("apply_scattering_error: scattered particle must start at momentum 0");
  if (!table.in_grid(k)) throw std::out_of_range("apply_scattering_error: k outside grid");
  table.validate();

  BranchedState out{particle, s, state.momenta(), {}};
  for (int kp = -table.grid(); kp <= table.grid(); ++kp) {
    const AlphaPair alpha = alpha_decomposition(table, s, k, kp);
    StateVector amps = apply_effective_error(state.amplitudes(), particle, alpha.identity, alpha.z);
    if (amps.norm_squared() == 0.0) continue;
    out.branches.push_back({kp, k - kp, std::move(amps)});
  }
  return out;
}

ProjectedBranch momentum_project_and_boost(const BranchedState& branched, int k_prime) {
  double total = 0.0;
  const Branch* chosen = nullptr;
  for (const auto& b : branched.branches) {
    total += b.amplitudes.norm_squared();
    if (b.k_prime == k_prime) chosen = &b;
  }
  if (chosen == nullptr || total == 0.0)
    throw std::domain_error("momentum_project_and_boost: branch has zero probability");
  // The boost returns the scattered particle to the common momentum it started at.
  return {k_prime, chosen->amplitudes.norm_squared() / total,
          RepetitionState(chosen->amplitudes.normalized(), branched.momenta)};
}

std::vector<ProjectedBranch> enumerate_branches(const BranchedState& branched) {
  std::vector<ProjectedBranch> out;
  for (const auto& b : branched.branches) out.push_back(momentum_project_and_boost(branched, b.k_prime));
  return out;
}

ProjectedBranch momentum_project_and_boost(const BranchedState& branched, std::mt19937_64& rng) {
  const auto all = enumerate_branches(branched);
  if (all.empty()) throw std::domain_error("momentum_project_and_boost: no branches");
  const double u = uniform01(rng);
  double acc = 0.0;
  for (const auto& b : all) {
    acc += b.probability;
    if (u < acc) return b;
  }
  return all.back();
}

// -------------------------------------------------------------------- syndrome

SyndromeResult syndrome_of(const std::vector<int>& flip_bits) {
  SyndromeResult out;
  for (std::size_t k = 0; k + 1 < flip_bits.size(); ++k)
    out.pattern.push_back(((flip_bits[k] ^ flip_bits[k + 1]) & 1) ? -1 : 1);
  return out;
}

namespace {

std::vector<int> bits_of(Index config, int n) {
  std::vector<int> bits(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) bits[static_cast<std::size_t>(k)] = (config & bit_of(n, k)) ? 1 : 0;
  return bits;
}

Index syndrome_key(const SyndromeResult& s) {
  Index key = 0;
  for (int v : s.pattern) key = (key << 1) | (v < 0 ? 1 : 0);
  return key;
}

}  // namespace

std::vector<SyndromeOutcome> enumerate_syndromes(const RepetitionState& state) {
  if (!state.common_momentum())
    throw std::invalid_argument("enumerate_syndromes: particles must share a momentum");
  const int n = state.n();
  const StateVector& amps = state.amplitudes();
  std::map<Index, std::pair<SyndromeResult, Eigen::VectorXcd>> groups;
  for (Index i = 0; i < amps.dim(); ++i) {
    if (amps[i] == 0.0) continue;
    SyndromeResult s = syndrome_of(bits_of(i, n));
    auto [it, inserted] = groups.try_emplace(
        syndrome_key(s), s, Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(amps.dim())));
    it->second.second[static_cast<Eigen::Index>(i)] = amps[i];
  }
  std::vector<SyndromeOutcome> out;
  for (auto& [key, group] : groups) {
    StateVector projected(amps.space(), std::move(group.second));
    const double p = projected.norm_squared();
    out.push_back({group.first, p, RepetitionState(projected.normalized(), state.momenta())});
  }
  return out;
}

SyndromeOutcome measure_syndrome(const RepetitionState& state, std::mt19937_64& rng) {
  auto outcomes = enumerate_syndromes(state);
  if (outcomes.size() == 1) return outcomes.front();
  const double u = uniform01(rng);
  double acc = 0.0;
  for (auto& o : outcomes) {
    acc += o.probability;
    if (u < acc) return o;
  }
  return outcomes.back();
}

std::vector<int> minimal_correction(const SyndromeResult& syndrome) {
  const std::size_t n = syndrome.pattern.size() + 1;
  std::vector<int> e(n, 0);
  for (std::size_t k = 0; k + 1 < n; ++k) e[k + 1] = e[k] ^ (syndrome.pattern[k] < 0 ? 1 : 0);
  const auto weight = static_cast<std::size_t>(std::count(e.begin(), e.end(), 1));
  if (2 * weight > n)
    for (int& b : e) b ^= 1;
  std::vector<int> particles;
  for (std::size_t k = 0; k < n; ++k)
    if (e[k]) particles.push_back(static_cast<int>(k));
  return particles;
}

RepetitionState decode_phase_flip(const RepetitionState& state, const SyndromeResult& syndrome) {
  if (syndrome.pattern.size() + 1 != static_cast<std::size_t>(state.n()))
    throw std::invalid_argument("decode_phase_flip: syndrome length does not match n - 1");
  return apply_flips(state, minimal_correction(syndrome));
}

double fidelity(const RepetitionState& a, const RepetitionState& b) {
  if (a.momenta() != b.momenta()) return 0.0;
  return std::norm(inner(a.amplitudes(), b.amplitudes()));
}

RateEstimate logical_error_rate(int n, double p, std::uint64_t trials, std::uint64_t seed) {
  if (trials == 0) throw std::invalid_argument("logical_error_rate: trials must be positive");
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("logical_error_rate: p must lie in [0, 1]");
  // Unequal weights make a logical flip observable as a fidelity drop.
  const RepetitionState code = encode_repetition(0.6, 0.8, n);

  constexpr std::uint64_t kBlock = 4096;
  const std::uint64_t blocks = (trials + kBlock - 1) / kBlock;
  std::vector<std::uint64_t> failures(blocks, 0);
  parallel_for(blocks, [&](std::size_t blk) {
    const std::uint64_t begin = blk * kBlock, end = std::min(trials, begin + kBlock);
    for (std::uint64_t t = begin; t < end; ++t) {
      std::mt19937_64 rng(derive_seed(seed, static_cast<std::uint64_t>(n), t));
      std::vector<int> flipped;
      for (int k = 0; k < n; ++k)
        if (uniform01(rng) < p) flipped.push_back(k);
      const RepetitionState corrupted = apply_flips(code, flipped);
      const SyndromeOutcome measured = measure_syndrome(corrupted, rng);
      const RepetitionState decoded = decode_phase_flip(measured.post_state, measured.syndrome);
      if (fidelity(decoded, code) < 1.0 - 1e-9) ++failures[blk];
    }
  });

  RateEstimate est;
  est.trials = trials;
  for (auto f : failures) est.failures += f;
  est.rate = static_cast<double>(est.failures) / static_cast<double>(trials);
  est.standard_error = std::sqrt(est.rate * (1.0 - est.rate) / static_cast<double>(trials));
  return est;
}

}  // namespace ssrqec::qcd
