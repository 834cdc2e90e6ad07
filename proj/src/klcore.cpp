#include "ssrqec/klcore.hpp"

#include "ssrqec/parallel.hpp"

#include <algorithm>
#include <stdexcept>

namespace ssrqec {

namespace {

// Images E_a|i> are cached when they fit in this many bytes; otherwise
// they are recomputed per (a, b) pair.
constexpr std::size_t kImageCacheBytes = std::size_t{256} << 20;

void require_compatible(const CodeSpace& code, const ErrorSet& errors) {
  if (!(code.space() == errors.space()))
    throw std::invalid_argument("kl_check: code and error spaces differ");
}

struct Block {
  Eigen::MatrixXcd m;  // m(i, j) = <j|E_b^dag E_a|i>
};

void accumulate(KLReport& report, std::size_t a, std::size_t b, const Eigen::MatrixXcd& m) {
  const auto k = m.rows();
  const cplx c = m.diagonal().sum() / static_cast<double>(k);
  report.c_matrix(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = c;
  for (Eigen::Index i = 0; i < k; ++i)
    for (Eigen::Index j = 0; j < k; ++j) {
      const cplx dev = m(i, j) - (i == j ? c : cplx(0.0));
      const double mag = std::abs(dev);
      report.max_violation = std::max(report.max_violation, mag);
      if (i != j) report.max_offdiagonal = std::max(report.max_offdiagonal, std::abs(m(i, j)));
      if (mag > report.tol) {
        ++report.violation_count;
        if (report.violations.size() < KLReport::kMaxRecordedViolations)
          report.violations.push_back({a, b, static_cast<std::size_t>(i),
                                       static_cast<std::size_t>(j), dev});
      }
    }
}

}  // namespace

CodeSpace::CodeSpace(std::vector<StateVector> codewords, double tol)
    : codewords_(std::move(codewords)) {
  if (codewords_.empty()) throw std::invalid_argument("CodeSpace: no codewords");
  for (const auto& c : codewords_)
    if (!(c.space() == codewords_.front().space()))
      throw std::invalid_argument("CodeSpace: codewords on different spaces");
  for (std::size_t i = 0; i < codewords_.size(); ++i)
    for (std::size_t j = i; j < codewords_.size(); ++j) {
      const cplx g = inner(codewords_[i], codewords_[j]);
      if (std::abs(g - (i == j ? cplx(1.0) : cplx(0.0))) > tol)
        throw std::invalid_argument("CodeSpace: codewords are not orthonormal");
    }
}

ErrorSet::ErrorSet(std::vector<Operator> operators, std::vector<std::string> labels)
    : ops_(std::move(operators)), labels_(std::move(labels)) {
  if (ops_.empty()) throw std::invalid_argument("ErrorSet: no operators");
  for (const auto& op : ops_)
    if (!(op.space() == ops_.front().space()))
      throw std::invalid_argument("ErrorSet: operators on different spaces");
  if (labels_.empty())
    for (std::size_t a = 0; a < ops_.size(); ++a) labels_.push_back("E" + std::to_string(a));
  if (labels_.size() != ops_.size()) throw std::invalid_argument("ErrorSet: label count");
}

ErrorSet ErrorSet::mixed(const Eigen::MatrixXcd& u) const {
  const auto n = static_cast<Eigen::Index>(ops_.size());
  if (u.rows() != n || u.cols() != n) throw std::invalid_argument("ErrorSet::mixed: shape");
  std::vector<Operator> out;
  for (Eigen::Index b = 0; b < n; ++b) {
    Operator sum = ops_[0] * u(b, 0);
    for (Eigen::Index a = 1; a < n; ++a) sum = sum + ops_[static_cast<std::size_t>(a)] * u(b, a);
    out.push_back(std::move(sum));
  }
  return ErrorSet(std::move(out));
}

KLReport kl_check(const CodeSpace& code, const ErrorSet& errors, double tol) {
  require_compatible(code, errors);
  const std::size_t n = errors.size(), k = code.size();
  const auto ki = static_cast<Eigen::Index>(k);

  auto images_of = [&](std::size_t a) {
    std::vector<StateVector> out;
    out.reserve(k);
    for (std::size_t i = 0; i < k; ++i) out.push_back(apply(errors[a], code[i]));
    return out;
  };
  auto block_of = [&](const std::vector<StateVector>& ea, const std::vector<StateVector>& eb) {
    Eigen::MatrixXcd m(ki, ki);
    for (Eigen::Index i = 0; i < ki; ++i)
      for (Eigen::Index j = 0; j < ki; ++j)
        m(i, j) = inner(eb[static_cast<std::size_t>(j)], ea[static_cast<std::size_t>(i)]);
    return m;
  };

  // Upper triangle b >= a; the lower one follows from M^{ba}_{ji} = conj(M^{ab}_{ij}).
  std::vector<Eigen::MatrixXcd> blocks(n * n);
  const std::size_t cache_bytes = n * k * code.space().dim() * sizeof(cplx);
  if (cache_bytes <= kImageCacheBytes) {
    std::vector<std::vector<StateVector>> images(n);
    parallel_for(n, [&](std::size_t a) { images[a] = images_of(a); });
    parallel_for(n, [&](std::size_t a) {
      for (std::size_t b = a; b < n; ++b) blocks[a * n + b] = block_of(images[a], images[b]);
    });
  } else {
    parallel_for(n, [&](std::size_t a) {
      const auto ea = images_of(a);
      blocks[a * n + a] = block_of(ea, ea);
      for (std::size_t b = a + 1; b < n; ++b) blocks[a * n + b] = block_of(ea, images_of(b));
    });
  }
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < a; ++b) blocks[a * n + b] = blocks[b * n + a].adjoint();

  KLReport report;
  report.tol = tol;
  report.c_matrix = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) accumulate(report, a, b, blocks[a * n + b]);
  report.verdict = report.max_violation <= tol ? Verdict::satisfied : Verdict::violated;
  return report;
}

KLReport detection_check(const CodeSpace& code, const ErrorSet& errors, double tol) {
  require_compatible(code, errors);
  const std::size_t n = errors.size(), k = code.size();
  const auto ki = static_cast<Eigen::Index>(k);
  std::vector<Eigen::MatrixXcd> blocks(n);
  parallel_for(n, [&](std::size_t a) {
    Eigen::MatrixXcd m(ki, ki);
    for (std::size_t i = 0; i < k; ++i) {
      const StateVector img = apply(errors[a], code[i]);
      for (std::size_t j = 0; j < k; ++j)
        m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = inner(code[j], img);
    }
    blocks[a] = std::move(m);
  });

  KLReport report;
  report.tol = tol;
  report.c_matrix = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(n), 1);
  for (std::size_t a = 0; a < n; ++a) accumulate(report, a, 0, blocks[a]);
  report.verdict = report.max_violation <= tol ? Verdict::satisfied : Verdict::violated;
  return report;
}

SectorCheck ssr_sector_check(std::span<const CodeSpace> sectors, const ErrorSet& local_ops,
                             double tol) {
  if (sectors.size() < 2) throw std::invalid_argument("ssr_sector_check: need at least two sectors");
  for (const auto& s : sectors)
    if (!(s.space() == local_ops.space()))
      throw std::invalid_argument("ssr_sector_check: sector and operator spaces differ");

  SectorCheck result;
  for (std::size_t op = 0; op < local_ops.size(); ++op)
    for (std::size_t sb = 0; sb < sectors.size(); ++sb)
      for (const auto& phi : sectors[sb].codewords()) {
        const StateVector image = apply(local_ops[op], phi);
        for (std::size_t sa = 0; sa < sectors.size(); ++sa) {
          if (sa == sb) continue;
          for (const auto& psi : sectors[sa].codewords()) {
            const double mag = std::abs(inner(psi, image));
            if (mag > result.worst_element) result = {true, mag, op, sa, sb};
          }
        }
      }
  result.respected = result.worst_element <= tol;
  return result;
}

ErrorSet kraus_extract(const Operator& u, const StateVector& env_state,
                       std::span<const StateVector> env_basis, double tol) {
  const ProductSpace& full = u.space();
  const ProductSpace& env = env_state.space();
  const std::size_t n_env = env.num_factors();
  if (n_env == 0 || n_env >= full.num_factors())
    throw std::invalid_argument("kraus_extract: environment must be a proper trailing factor set");
  for (std::size_t k = 0; k < n_env; ++k)
    if (full.factor_dim(full.num_factors() - n_env + k) != env.factor_dim(k))
      throw std::invalid_argument("kraus_extract: environment dims do not match trailing factors");
  if (!is_unitary(u, tol)) throw std::domain_error("kraus_extract: operator is not unitary");
  if (!env_state.is_normalized(tol)) throw std::domain_error("kraus_extract: environment state not normalized");
  if (env_basis.size() != env.dim())
    throw std::invalid_argument("kraus_extract: environment basis must be complete");
  for (std::size_t p = 0; p < env_basis.size(); ++p)
    for (std::size_t q = p; q < env_basis.size(); ++q)
      if (std::abs(inner(env_basis[p], env_basis[q]) - (p == q ? cplx(1.0) : cplx(0.0))) > tol)
        throw std::invalid_argument("kraus_extract: environment basis not orthonormal");

  std::vector<std::size_t> sys_factors(full.num_factors() - n_env);
  for (std::size_t k = 0; k < sys_factors.size(); ++k) sys_factors[k] = k;
  const ProductSpace sys = full.select(sys_factors);
  const auto ds = static_cast<Eigen::Index>(sys.dim());
  const auto de = static_cast<Eigen::Index>(env.dim());

  // U (I (x) |phi>) as a (ds*de) x ds matrix, then contract the environment index.
  const Eigen::MatrixXcd umat = u.to_dense();
  Eigen::MatrixXcd isometry = Eigen::MatrixXcd::Zero(ds * de, ds);
  for (Eigen::Index s = 0; s < ds; ++s)
    for (Eigen::Index e = 0; e < de; ++e) isometry.col(s) += umat.col(s * de + e) * env_state[static_cast<Index>(e)];

  std::vector<Operator> ops;
  std::vector<std::string> labels;
  for (std::size_t k = 0; k < env_basis.size(); ++k) {
    const auto& ek = env_basis[k].amplitudes();
    Eigen::MatrixXcd e = Eigen::MatrixXcd::Zero(ds, ds);
    for (Eigen::Index r = 0; r < ds; ++r)
      for (Eigen::Index f = 0; f < de; ++f) e.row(r) += std::conj(ek[f]) * isometry.row(r * de + f);
    if (e.cwiseAbs().maxCoeff() == 0.0) continue;
    ops.push_back(Operator::dense(sys, std::move(e)));
    labels.push_back("K" + std::to_string(k));
  }
  return ErrorSet(std::move(ops), std::move(labels));
}

}  // namespace ssrqec
