#include "ssrqec/toriccode.hpp"

#include "ssrqec/errors.hpp"
#include "ssrqec/parallel.hpp"
#include "ssrqec/random.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

namespace ssrqec::toric {

namespace {

int mod(int a, int n) { return ((a % n) + n) % n; }

std::vector<Index> strides_for(int edges, int n) {
  std::vector<Index> s(static_cast<std::size_t>(edges));
  Index acc = 1;
  for (int e = edges - 1; e >= 0; --e) {
    s[static_cast<std::size_t>(e)] = acc;
    acc *= static_cast<Index>(n);
  }
  return s;
}

// e^{i pi k / N} for k = 0..2N-1.
std::vector<cplx> half_roots(int n) {
  std::vector<cplx> out(static_cast<std::size_t>(2 * n));
  for (int k = 0; k < 2 * n; ++k) out[static_cast<std::size_t>(k)] = std::polar(1.0, std::numbers::pi * k / n);
  return out;
}

void require_same_shape(const QuditPauli& p, const QuditPauli& q) {
  if (p.n != q.n || p.x.size() != q.x.size())
    throw std::invalid_argument("QuditPauli: operands on different lattices");
}

std::string pauli_label(const QuditPauli& p) {
  if (p.is_identity_up_to_phase()) return "I";
  std::string out;
  for (int e : p.support()) {
    if (!out.empty()) out += ' ';
    out += "X" + std::to_string(p.x[static_cast<std::size_t>(e)]) + "Z" +
           std::to_string(p.z[static_cast<std::size_t>(e)]) + "@" + std::to_string(e);
  }
  return out;
}


}  // namespace

// ------------------------------------------------------------------- lattice

TorusLattice::TorusLattice(int l, int n) : l_(l), n_(n) {
  if (l < 2) throw std::invalid_argument("TorusLattice: l must be at least 2");
  if (n < 2) throw std::invalid_argument("TorusLattice: N must be at least 2");
}

int TorusLattice::edge(Direction dir, int x, int y) const {
  return static_cast<int>(dir) * l_ * l_ + mod(y, l_) * l_ + mod(x, l_);
}

ProductSpace TorusLattice::space() const {
  std::vector<std::string> labels;
  for (int e = 0; e < num_edges(); ++e) labels.push_back((e < l_ * l_ ? "h" : "v") + std::to_string(e % (l_ * l_)));
  return ProductSpace(std::vector<Index>(static_cast<std::size_t>(num_edges()), static_cast<Index>(n_)),
                      std::move(labels));
}

std::uint64_t TorusLattice::hilbert_dim() const {
  std::uint64_t d = 1;
  for (int e = 0; e < num_edges(); ++e) {
    if (d > UINT64_MAX / static_cast<std::uint64_t>(n_)) return 0;
    d *= static_cast<std::uint64_t>(n_);
  }
  return d;
}

// -------------------------------------------------------------- QuditPauli

QuditPauli QuditPauli::identity(int num_edges, int n) {
  if (n < 2 || num_edges < 1) throw std::invalid_argument("QuditPauli: bad shape");
  return {n, std::vector<int>(static_cast<std::size_t>(num_edges), 0),
          std::vector<int>(static_cast<std::size_t>(num_edges), 0), 0};
}

QuditPauli QuditPauli::single(int num_edges, int n, int edge, int x_power, int z_power) {
  QuditPauli p = identity(num_edges, n);
  if (edge < 0 || edge >= num_edges) throw std::out_of_range("QuditPauli::single: edge");
  p.x[static_cast<std::size_t>(edge)] = mod(x_power, n);
  p.z[static_cast<std::size_t>(edge)] = mod(z_power, n);
  return p;
}

int QuditPauli::weight() const { return static_cast<int>(support().size()); }

std::vector<int> QuditPauli::support() const {
  std::vector<int> out;
  for (std::size_t e = 0; e < x.size(); ++e)
    if (x[e] != 0 || z[e] != 0) out.push_back(static_cast<int>(e));
  return out;
}

bool QuditPauli::is_identity_up_to_phase() const { return support().empty(); }

QuditPauli QuditPauli::adjoint() const {
  // (X^a Z^b)^dag = Z^{-b} X^{-a} = w^{ab} X^{-a} Z^{-b}
  QuditPauli out = *this;
  int k = -phase;
  for (std::size_t e = 0; e < x.size(); ++e) {
    k += 2 * x[e] * z[e];
    out.x[e] = mod(-x[e], n);
    out.z[e] = mod(-z[e], n);
  }
  out.phase = mod(k, 2 * n);
  return out;
}

QuditPauli QuditPauli::pow(int m) const {
  if (m < 0) return adjoint().pow(-m);
  QuditPauli out = identity(static_cast<int>(x.size()), n);
  for (int k = 0; k < m; ++k) out = out * *this;
  return out;
}

QuditPauli operator*(const QuditPauli& p, const QuditPauli& q) {
  require_same_shape(p, q);
  QuditPauli out = p;
  int k = p.phase + q.phase;
  for (std::size_t e = 0; e < p.x.size(); ++e) {
    k += 2 * p.z[e] * q.x[e];
    out.x[e] = mod(p.x[e] + q.x[e], p.n);
    out.z[e] = mod(p.z[e] + q.z[e], p.n);
  }
  out.phase = mod(k, 2 * p.n);
  return out;
}

int commutation_exponent(const QuditPauli& p, const QuditPauli& q) {
  require_same_shape(p, q);
  int k = 0;
  for (std::size_t e = 0; e < p.x.size(); ++e) k += p.z[e] * q.x[e] - q.z[e] * p.x[e];
  return mod(k, p.n);
}

Eigen::VectorXcd QuditPauli::apply(const Eigen::VectorXcd& psi) const {
  const int edges = static_cast<int>(x.size());
  const auto strides = strides_for(edges, n);
  const auto dim = static_cast<Index>(psi.size());
  if (dim != strides.front() * static_cast<Index>(n)) throw std::invalid_argument("QuditPauli::apply: dimension");
  const auto roots = half_roots(n);
  const auto sup = support();
  Eigen::VectorXcd out(psi.size());
  constexpr Index kChunk = 1 << 14;
  parallel_for((dim + kChunk - 1) / kChunk, [&](std::size_t c) {
    const Index end = std::min(dim, (c + 1) * kChunk);
    for (Index idx = c * kChunk; idx < end; ++idx) {
      Index target = idx;
      int k = phase;
      for (int e : sup) {
        const auto se = static_cast<std::size_t>(e);
        const int d = static_cast<int>((idx / strides[se]) % static_cast<Index>(n));
        k += 2 * z[se] * d;
        const int nd = (d + x[se]) % n;
        target = target - static_cast<Index>(d) * strides[se] + static_cast<Index>(nd) * strides[se];
      }
      out[static_cast<Eigen::Index>(target)] = roots[static_cast<std::size_t>(k % (2 * n))] * psi[static_cast<Eigen::Index>(idx)];
    }
  });
  return out;
}

Operator QuditPauli::to_operator(const ProductSpace& space) const {
  const auto strides = strides_for(static_cast<int>(x.size()), n);
  if (space.dim() != strides.front() * static_cast<Index>(n)) throw std::invalid_argument("QuditPauli::to_operator: space");
  const auto roots = half_roots(n);
  const auto sup = support();
  std::vector<Operator::Triplet> triplets;
  triplets.reserve(space.dim());
  for (Index idx = 0; idx < space.dim(); ++idx) {
    Index target = idx;
    int k = phase;
    for (int e : sup) {
      const auto se = static_cast<std::size_t>(e);
      const int d = static_cast<int>((idx / strides[se]) % static_cast<Index>(n));
      k += 2 * z[se] * d;
      target = target - static_cast<Index>(d) * strides[se] + static_cast<Index>((d + x[se]) % n) * strides[se];
    }
    triplets.emplace_back(static_cast<Eigen::Index>(target), static_cast<Eigen::Index>(idx),
                          roots[static_cast<std::size_t>(k % (2 * n))]);
  }
  return Operator::auto_from_triplets(space, triplets);
}

// ---------------------------------------------------------------- stabilizers

std::vector<QuditPauli> build_stabilizers(const TorusLattice& lat) {
  const int l = lat.l(), n = lat.n(), edges = lat.num_edges();
  std::vector<QuditPauli> out;
  auto add = [n](std::vector<int>& powers, int e, int power) {
    powers[static_cast<std::size_t>(e)] = mod(powers[static_cast<std::size_t>(e)] + power, n);
  };
  for (int y = 0; y < l; ++y)
    for (int x = 0; x < l; ++x) {
      QuditPauli a = QuditPauli::identity(edges, n);
      add(a.x, lat.edge(Direction::horizontal, x, y), 1);
      add(a.x, lat.edge(Direction::vertical, x, y), 1);
      add(a.x, lat.edge(Direction::horizontal, x - 1, y), -1);
      add(a.x, lat.edge(Direction::vertical, x, y - 1), -1);
      out.push_back(std::move(a));
    }
  for (int y = 0; y < l; ++y)
    for (int x = 0; x < l; ++x) {
      QuditPauli b = QuditPauli::identity(edges, n);
      add(b.z, lat.edge(Direction::horizontal, x, y), 1);
      add(b.z, lat.edge(Direction::vertical, x + 1, y), 1);
      add(b.z, lat.edge(Direction::horizontal, x, y + 1), -1);
      add(b.z, lat.edge(Direction::vertical, x, y), -1);
      out.push_back(std::move(b));
    }
  return out;
}

int symplectic_rank(const std::vector<QuditPauli>& ops) {
  if (ops.empty()) return 0;
  const int n = ops.front().n;
  for (int d = 2; d * d <= n; ++d)
    if (n % d == 0) throw std::invalid_argument("symplectic_rank: N must be prime");
  const std::size_t cols = 2 * ops.front().x.size();
  std::vector<std::vector<int>> rows;
  for (const auto& p : ops) {
    std::vector<int> r(p.x);
    r.insert(r.end(), p.z.begin(), p.z.end());
    rows.push_back(std::move(r));
  }
  auto inverse = [n](int a) {
    for (int b = 1; b < n; ++b)
      if ((a * b) % n == 1) return b;
    return 0;
  };
  int rank = 0;
  for (std::size_t c = 0; c < cols && rank < static_cast<int>(rows.size()); ++c) {
    auto pivot = std::find_if(rows.begin() + rank, rows.end(), [c](const auto& r) { return r[c] != 0; });
    if (pivot == rows.end()) continue;
    std::iter_swap(rows.begin() + rank, pivot);
    auto& pr = rows[static_cast<std::size_t>(rank)];
    const int inv = inverse(pr[c]);
    for (int& v : pr) v = (v * inv) % n;
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (r == static_cast<std::size_t>(rank) || rows[r][c] == 0) continue;
      const int f = rows[r][c];
      for (std::size_t k = 0; k < cols; ++k) rows[r][k] = mod(rows[r][k] - f * pr[k], n);
    }
    ++rank;
  }
  return rank;
}

QuditPauli wilson_loop(const TorusLattice& lat, Cycle cycle, int a, LoopKind kind) {
  QuditPauli p = QuditPauli::identity(lat.num_edges(), lat.n());
  const int power = mod(a, lat.n());
  for (int t = 0; t < lat.l(); ++t) {
    int e = 0;
    if (kind == LoopKind::electric)
      e = cycle == Cycle::x ? lat.edge(Direction::horizontal, t, 0) : lat.edge(Direction::vertical, 0, t);
    else
      e = cycle == Cycle::x ? lat.edge(Direction::vertical, t, 0) : lat.edge(Direction::horizontal, 0, t);
    (kind == LoopKind::electric ? p.z : p.x)[static_cast<std::size_t>(e)] = power;
  }
  return p;
}

// --------------------------------------------------------------- ground space

GroundSpace ground_space(const TorusLattice& lat, std::uint64_t seed) {
  const std::uint64_t dim = lat.hilbert_dim();
  if (dim == 0 || dim > kGroundSpaceDimGuard)
    throw GuardExceeded("ground_space: Hilbert dimension exceeds 2^20");
  const int n = lat.n(), edges = lat.num_edges();
  const auto stabilizers = build_stabilizers(lat);
  const std::size_t target = static_cast<std::size_t>(n * n);
  const std::size_t seeds = target + 2;

  std::vector<Eigen::VectorXcd> projected(seeds);
  for (std::size_t s = 0; s < seeds; ++s) {
    std::mt19937_64 rng(derive_seed(seed, 0, s));
    Eigen::VectorXcd psi = Eigen::VectorXcd::Ones(1);
    for (int e = 0; e < edges; ++e) {
      Eigen::VectorXcd local(n);
      for (int j = 0; j < n; ++j) {
        const double re = 2.0 * uniform01(rng) - 1.0;
        local[j] = cplx(re, 2.0 * uniform01(rng) - 1.0);
      }
      local.normalize();
      Eigen::VectorXcd next(psi.size() * n);
      for (Eigen::Index i = 0; i < psi.size(); ++i) next.segment(i * n, n) = psi[i] * local;
      psi = std::move(next);
    }
    // The stabilizers commute, so one sweep of (1/N) sum_m s^m is the joint projector.
    for (const auto& st : stabilizers) {
      Eigen::VectorXcd acc = psi, cur = psi;
      for (int m = 1; m < n; ++m) {
        cur = st.apply(cur);
        acc += cur;
      }
      psi = acc / static_cast<double>(n);
    }
    projected[s] = std::move(psi);
  }

  GroundSpace gs;
  const ProductSpace space = lat.space();
  std::vector<Eigen::VectorXcd> kept;
  for (auto& v : projected) {
    const double before = v.norm();
    if (before < 1e-12) continue;
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& q : kept) v -= q * q.dot(v);
    if (v.norm() < 1e-8 * before) continue;
    kept.push_back(v.normalized());
  }
  if (kept.size() != target)
    throw InvariantBreach("ground_space: dimension " + std::to_string(kept.size()) + " != N^2");
  for (auto& v : kept) gs.basis.emplace_back(space, std::move(v));
  return sector_basis(gs, lat);
}

GroundSpace sector_basis(const GroundSpace& gs, const TorusLattice& lat) {
  const int n = lat.n();
  const auto k = static_cast<Eigen::Index>(gs.basis.size());
  if (k != static_cast<Eigen::Index>(n * n)) throw std::invalid_argument("sector_basis: basis size must be N^2");
  Eigen::MatrixXcd g(static_cast<Eigen::Index>(gs.basis.front().dim()), k);
  for (Eigen::Index c = 0; c < k; ++c) g.col(c) = gs.basis[static_cast<std::size_t>(c)].amplitudes();

  const QuditPauli we = wilson_loop(lat, Cycle::x, 1, LoopKind::electric);
  const QuditPauli wm = wilson_loop(lat, Cycle::x, 1, LoopKind::magnetic);
  std::vector<Eigen::MatrixXcd> restricted(static_cast<std::size_t>(n * n));
  for (int m = 0; m < n; ++m)
    for (int mp = 0; mp < n; ++mp) {
      const QuditPauli w = we.pow(m) * wm.pow(mp);
      Eigen::MatrixXcd img(g.rows(), k);
      for (Eigen::Index c = 0; c < k; ++c) img.col(c) = w.apply(g.col(c));
      restricted[static_cast<std::size_t>(m * n + mp)] = g.adjoint() * img;
    }

  GroundSpace out;
  const ProductSpace space = gs.basis.front().space();
  const double omega = 2.0 * std::numbers::pi / n;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      Eigen::MatrixXcd p = Eigen::MatrixXcd::Zero(k, k);
      for (int m = 0; m < n; ++m)
        for (int mp = 0; mp < n; ++mp)
          p += std::polar(1.0, -omega * (a * m + b * mp)) * restricted[static_cast<std::size_t>(m * n + mp)];
      p /= static_cast<double>(n * n);
      p = (0.5 * (p + p.adjoint())).eval();
      if (std::abs(p.trace() - 1.0) > 1e-6)
        throw InvariantBreach("sector_basis: sector (" + std::to_string(a) + "," + std::to_string(b) +
                              ") is not one-dimensional");
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(p);
      Eigen::VectorXcd v = g * eig.eigenvectors().col(k - 1);
      v.normalize();
      Eigen::Index pivot = 0;
      for (Eigen::Index i = 1; i < v.size(); ++i)
        if (std::abs(v[i]) > std::abs(v[pivot]) + 1e-12) pivot = i;
      v *= std::conj(v[pivot]) / std::abs(v[pivot]);
      out.basis.emplace_back(space, std::move(v));
      out.sector_labels.emplace_back(a, b);
    }
  return out;
}

// ---------------------------------------------------------------- KL and SSR

std::uint64_t count_paulis(const TorusLattice& lat, int max_weight) {
  const long double local = static_cast<long double>(lat.n()) * lat.n() - 1;
  long double total = 1, term = 1, binom = 1;
  const int edges = lat.num_edges();
  for (int w = 1; w <= max_weight && w <= edges; ++w) {
    term *= local;
    binom = binom * (edges - w + 1) / w;
    total += std::round(binom) * term;
  }
  if (total >= 18446744073709551615.0L) return UINT64_MAX;
  return static_cast<std::uint64_t>(total);
}

std::vector<QuditPauli> enumerate_paulis(const TorusLattice& lat, int max_weight) {
  if (max_weight < 0) throw std::invalid_argument("enumerate_paulis: negative weight");
  const int n = lat.n(), edges = lat.num_edges();
  std::vector<QuditPauli> out{QuditPauli::identity(edges, n)};
  for (int w = 1; w <= std::min(max_weight, edges); ++w) {
    std::vector<int> sup(static_cast<std::size_t>(w));
    for (int i = 0; i < w; ++i) sup[static_cast<std::size_t>(i)] = i;
    while (true) {
      // each support edge takes one of the N^2 - 1 nontrivial (x, z) pairs
      std::vector<int> local(static_cast<std::size_t>(w), 1);
      while (true) {
        QuditPauli p = QuditPauli::identity(edges, n);
        for (int i = 0; i < w; ++i) {
          const auto e = static_cast<std::size_t>(sup[static_cast<std::size_t>(i)]);
          p.x[e] = local[static_cast<std::size_t>(i)] / n;
          p.z[e] = local[static_cast<std::size_t>(i)] % n;
        }
        out.push_back(std::move(p));
        int i = w - 1;
        while (i >= 0 && local[static_cast<std::size_t>(i)] == n * n - 1) local[static_cast<std::size_t>(i--)] = 1;
        if (i < 0) break;
        ++local[static_cast<std::size_t>(i)];
      }
      int i = w - 1;
      while (i >= 0 && sup[static_cast<std::size_t>(i)] == edges - w + i) --i;
      if (i < 0) break;
      ++sup[static_cast<std::size_t>(i)];
      for (int j = i + 1; j < w; ++j) sup[static_cast<std::size_t>(j)] = sup[static_cast<std::size_t>(j - 1)] + 1;
    }
  }
  return out;
}

KLReport kl_check_toric(const TorusLattice& lat, const GroundSpace& gs, int max_weight,
                        const ToricKLOptions& options) {
  if (max_weight < 1) throw std::invalid_argument("kl_check_toric: max_weight must be at least 1");
  const std::uint64_t count = count_paulis(lat, max_weight) + options.extra_errors.size();
  if (count > options.max_errors)
    throw GuardExceeded("kl_check_toric: " + std::to_string(count) + " errors exceed the cap");
  if (count > options.max_entries / lat.hilbert_dim())
    throw GuardExceeded("kl_check_toric: error operators exceed the storage cap");

  std::vector<QuditPauli> paulis = enumerate_paulis(lat, max_weight);
  paulis.insert(paulis.end(), options.extra_errors.begin(), options.extra_errors.end());
  const ProductSpace space = lat.space();
  std::vector<Operator> ops(paulis.size());
  parallel_for(paulis.size(), [&](std::size_t i) { ops[i] = paulis[i].to_operator(space); });
  std::vector<std::string> labels;
  for (const auto& p : paulis) labels.push_back(pauli_label(p));

  const CodeSpace code(gs.basis);
  const ErrorSet errors(std::move(ops), std::move(labels));
  return options.detection_only ? detection_check(code, errors, options.tol) : kl_check(code, errors, options.tol);
}

std::string to_string(PauliClass c) {
  switch (c) {
    case PauliClass::detectable: return "detectable";
    case PauliClass::trivial: return "trivial";
    case PauliClass::logical: return "logical";
  }
  return "unknown";
}

PauliClass classify(const TorusLattice& lat, const QuditPauli& p) {
  for (const auto& s : build_stabilizers(lat))
    if (commutation_exponent(p, s) != 0) return PauliClass::detectable;
  for (Cycle c : {Cycle::x, Cycle::y})
    for (LoopKind k : {LoopKind::electric, LoopKind::magnetic})
      if (commutation_exponent(p, wilson_loop(lat, c, 1, k)) != 0) return PauliClass::logical;
  return PauliClass::trivial;
}

SSRCheck ssr_check_toric(const TorusLattice& lat, const GroundSpace& gs) {
  const auto paulis = enumerate_paulis(lat, lat.l() - 1);
  const std::size_t k = gs.basis.size();
  std::vector<PauliClass> classes(paulis.size());
  std::vector<double> worst(paulis.size(), 0.0);
  parallel_for(paulis.size(), [&](std::size_t i) {
    classes[i] = classify(lat, paulis[i]);
    for (std::size_t b = 0; b < k; ++b) {
      const Eigen::VectorXcd img = paulis[i].apply(gs.basis[b].amplitudes());
      for (std::size_t a = 0; a < k; ++a)
        if (a != b) worst[i] = std::max(worst[i], std::abs(gs.basis[a].amplitudes().dot(img)));
    }
  });
  SSRCheck out;
  out.operators = paulis.size();
  for (std::size_t i = 0; i < paulis.size(); ++i) {
    switch (classes[i]) {
      case PauliClass::detectable: ++out.detectable; break;
      case PauliClass::trivial: ++out.trivial; break;
      case PauliClass::logical: ++out.logical; out.symbolic_zero = false; break;
    }
    out.numeric_max = std::max(out.numeric_max, worst[i]);
  }
  return out;
}

}  // namespace ssrqec::toric
