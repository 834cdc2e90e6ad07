#include "ssrqec/cli/runner.hpp"

#include "ssrqec/errors.hpp"
#include "ssrqec/hilbert_io.hpp"
#include "ssrqec/qcdcode.hpp"
#include "ssrqec/random.hpp"
#include "ssrqec/rotor.hpp"
#include "ssrqec/scatter.hpp"
#include "ssrqec/toriccode.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <ostream>
#include <stdexcept>

namespace ssrqec::cli {

std::string format_double(double v) {
  if (v == 0.0) return std::signbit(v) ? "-0" : "0";
  char buf[64];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc()) throw std::runtime_error("format_double: conversion failed");
  return std::string(buf, end);
}

// ----------------------------------------------------------------- CsvTable

CsvTable::CsvTable(std::vector<std::string> header) : columns_(header.size()) {
  for (std::size_t i = 0; i < header.size(); ++i) text_ += (i ? "," : "") + header[i];
  text_ += '\n';
  in_row_ = columns_;
}

CsvTable& CsvTable::row() {
  if (in_row_ != columns_) throw std::logic_error("CsvTable: incomplete row");
  in_row_ = 0;
  return *this;
}

CsvTable& CsvTable::add(const std::string& v) {
  if (in_row_ >= columns_) throw std::logic_error("CsvTable: too many fields");
  text_ += v;
  text_ += ++in_row_ == columns_ ? '\n' : ',';
  return *this;
}

CsvTable& CsvTable::add(double v) { return add(format_double(v)); }
CsvTable& CsvTable::add(long long v) { return add(std::to_string(v)); }
CsvTable& CsvTable::add(std::uint64_t v) { return add(std::to_string(v)); }
CsvTable& CsvTable::add(bool v) { return add(std::string(v ? "true" : "false")); }

std::string CsvTable::str() const {
  if (in_row_ != columns_) throw std::logic_error("CsvTable: incomplete row");
  return text_;
}

json kl_report_to_json(const KLReport& report, std::size_t max_listed) {
  json violations = json::array();
  for (std::size_t v = 0; v < std::min(max_listed, report.violations.size()); ++v) {
    const auto& x = report.violations[v];
    violations.push_back({{"a", x.a}, {"b", x.b}, {"i", x.i}, {"j", x.j},
                          {"re", x.deviation.real()}, {"im", x.deviation.imag()}});
  }
  return {{"c_matrix", matrix_to_json(report.c_matrix)},
          {"max_violation", report.max_violation},
          {"max_offdiagonal", report.max_offdiagonal},
          {"verdict", report.satisfied() ? "satisfied" : "violated"},
          {"tol", report.tol},
          {"violation_count", report.violation_count},
          {"violations_listed", violations}};
}

namespace {

std::string dump(const json& j) { return j.dump(2) + "\n"; }

template <typename T>
std::vector<T> as_list(const json& v) {
  std::vector<T> out;
  if (v.is_array())
    for (const auto& e : v) out.push_back(e.get<T>());
  else
    out.push_back(v.get<T>());
  return out;
}

qcd::PhysicalConstants constants_from(const json& overrides) {
  qcd::PhysicalConstants c;
  const std::pair<const char*, double*> fields[] = {
      {"lambda_qcd", &c.lambda_qcd}, {"m_pi", &c.m_pi}, {"m_w", &c.m_w},         {"b_scale", &c.b_scale},
      {"m_u", &c.m_u},               {"m_d", &c.m_d},   {"lambda1", &c.lambda1}, {"lambda2", &c.lambda2},
      {"epsilon", &c.epsilon},       {"f_pi", &c.f_pi}};
  for (const auto& [name, field] : fields)
    if (overrides.contains(name)) *field = overrides[name].get<double>();
  c.validate();
  return c;
}

json constants_to_json(const qcd::PhysicalConstants& c) {
  return {{"lambda_qcd", c.lambda_qcd}, {"m_pi", c.m_pi},       {"m_w", c.m_w},         {"b_scale", c.b_scale},
          {"m_u", c.m_u},               {"m_d", c.m_d},         {"lambda1", c.lambda1}, {"lambda2", c.lambda2},
          {"epsilon", c.epsilon},       {"f_pi", c.f_pi}};
}

// --------------------------------------------------------------- experiments

RunOutput run_kl_check(const ResolvedConfig& cfg) {
  const json& p = cfg.params;
  std::vector<StateVector> code;
  for (const auto& c : p["code"]) code.push_back(state_from_json(c));
  std::vector<Operator> ops;
  for (const auto& e : p["errors"]) ops.push_back(operator_from_json(e));
  const CodeSpace cs(std::move(code));
  const ErrorSet es(std::move(ops));
  const double tol = p["tol"];
  const KLReport report = p["mode"] == "full" ? kl_check(cs, es, tol) : detection_check(cs, es, tol);

  RunOutput out;
  out.files.push_back({"kl_report.json", dump(kl_report_to_json(report))});
  out.results = {{"verdict", report.satisfied() ? "satisfied" : "violated"},
                 {"max_violation", report.max_violation},
                 {"max_offdiagonal", report.max_offdiagonal}};
  return out;
}

std::string recovery_csv(const std::vector<rotor::RecoveryOutcome>& outcomes, cplx a0, cplx b0) {
  CsvTable t({"outcome", "probability", "fidelity"});
  for (const auto& o : outcomes)
    t.row().add(o.outcome).add(o.probability).add(rotor::logical_fidelity(a0, b0, o.alpha, o.beta));
  return t.str();
}

RunOutput run_rotor(const ResolvedConfig& cfg) {
  using namespace rotor;
  const json& p = cfg.params;
  const RotorSpace space(p["q_max"].get<int>());
  const int w = p["W"], q1 = p["q1"], q2 = p["q2"], n_g = p["n_g"];
  const CoefficientProfile profile =
      p["profile"] == "uniform" ? CoefficientProfile::uniform() : CoefficientProfile::gaussian(p["sigma"].get<double>());
  const cplx a0 = p["a0"].get<double>(), b0 = p["b0"].get<double>();
  const bool on_a = p["error_register"] == "A";
  const auto charges = p["error_charges"].get<std::vector<int>>();

  const ProductSpace ra = space.product_space("A"), rb = space.product_space("B");
  auto corrupt = [&](StateVector psi, bool with_reference) {
    for (int q : charges) {
      const Operator flip = phase_flip(space, q);
      Operator op = on_a ? tensor_product(flip, Operator::identity(rb)) : tensor_product(Operator::identity(ra), flip);
      if (with_reference) op = tensor_product(Operator::identity(space.product_space("R")), op);
      psi = apply(op, psi);
    }
    return psi;
  };

  const StateVector logical = build_codeword(space, space, q1, profile, w).state * a0 +
                              build_codeword(space, space, q2, profile, w).state * b0;
  const auto outcomes = enumerate_recovery(corrupt(logical, false), q1, q2);

  RunOutput out;
  out.files.push_back({"rotor_recovery.csv", recovery_csv(outcomes, a0, b0)});
  double min_fid = 1.0, total = 0.0;
  for (const auto& o : outcomes) {
    min_fid = std::min(min_fid, logical_fidelity(a0, b0, o.alpha, o.beta));
    total += o.probability;
  }
  out.results = {{"outcomes", outcomes.size()},
                 {"total_probability", total},
                 {"min_fidelity", min_fid},
                 {"logical_error_probability", logical_error_probability(outcomes, a0, b0)}};
  if (cfg.seed) {
    std::mt19937_64 rng(derive_seed(*cfg.seed, 0, 0));
    const auto sampled = recover_by_measuring_B(corrupt(logical, false), q1, q2, rng);
    out.results["sampled_outcome"] = sampled.outcome;
    out.results["sampled_fidelity"] = logical_fidelity(a0, b0, sampled.alpha, sampled.beta);
  }
  if (n_g > 0) {
    const SimulationLayout layout{space, space, space, profile, w};
    const StateVector simulated = prepare_simulated_superposition({{q1, a0}, {q2, b0}}, layout);
    const auto sim_outcomes = enumerate_recovery(corrupt(simulated, true), q1, q2);
    out.files.push_back({"rotor_simulated.csv", recovery_csv(sim_outcomes, a0, b0)});
    // U+ simulated on |0>_R |0>_S must give |-1>_R |1>_S
    const Operator shift_inv = m_inv(shift_up(space), GroupDiscretization(n_g));
    const StateVector vacuum = tensor_product(charge_state(space, 0), charge_state(space, 0));
    const StateVector expected = tensor_product(charge_state(space, -1), charge_state(space, 1));
    out.results["simulated_min_fidelity"] = 1.0;
    for (const auto& o : sim_outcomes)
      out.results["simulated_min_fidelity"] =
          std::min(out.results["simulated_min_fidelity"].get<double>(), logical_fidelity(a0, b0, o.alpha, o.beta));
    out.results["m_inv_shift_residual"] = (apply(shift_inv, vacuum) - expected).norm();
  }
  out.assumptions.push_back(
      "recovery relabels the A register according to the B outcome without applying a further unitary");
  return out;
}

RunOutput run_qcd_rates(const ResolvedConfig& cfg) {
  const json& p = cfg.params;
  const qcd::PhysicalConstants c = constants_from(p["constants"]);
  const int points = p["points"];
  auto log_grid = [points](double lo, double hi, int i) {
    return lo * std::pow(hi / lo, static_cast<double>(i) / (points - 1));
  };

  CsvTable rates({"temperature", "thermal_suppression", "single_quantum_p", "distance_power", "direct"});
  const double distance = qcd::effective_distance(c.lambda_qcd, c.epsilon);
  for (int i = 0; i < points; ++i) {
    const double t = log_grid(p["t_min"], p["t_max"], i);
    const double single = qcd::single_quantum_error_probability(t, c.epsilon);
    rates.row().add(t).add(qcd::thermal_flip_suppression(t, c)).add(single).add(std::pow(single, distance))
        .add(std::exp(-c.lambda_qcd / t));
  }
  CsvTable sm({"energy", "sm_suppression", "strong_term", "weak_term"});
  for (int i = 0; i < points; ++i) {
    const double e = log_grid(p["e_min"], p["e_max"], i);
    sm.row().add(e).add(qcd::sm_flip_suppression(e, c)).add(std::exp(-c.lambda_qcd / e)).add(std::pow(e / c.m_w, 2));
  }

  RunOutput out;
  out.files.push_back({"rates.csv", rates.str()});
  out.files.push_back({"sm_rates.csv", sm.str()});
  out.results = {{"constants", constants_to_json(c)},
                 {"pion_mass", qcd::pion_mass(c.m_u, c.m_d, c.b_scale)},
                 {"sm_crossover_energy", qcd::sm_crossover_energy(c)},
                 {"effective_distance", distance}};
  return out;
}

double binomial_tail(int n, double p) {
  double total = 0.0;
  for (int j = (n + 1) / 2; j <= n; ++j)
    total += std::exp(std::lgamma(n + 1.0) - std::lgamma(j + 1.0) - std::lgamma(n - j + 1.0)) * std::pow(p, j) *
             std::pow(1.0 - p, n - j);
  return total;
}

RunOutput run_qcd_code(const ResolvedConfig& cfg) {
  const json& p = cfg.params;
  const qcd::PhysicalConstants c = constants_from(p["constants"]);
  const auto ns = as_list<int>(p["n"]);
  std::vector<double> ps;
  if (p.contains("temperature"))
    ps.push_back(qcd::single_quantum_error_probability(p["temperature"].get<double>(), c.epsilon));
  else
    ps = as_list<double>(p["p"]);
  const auto trials = p["trials"].get<std::uint64_t>();
  const int grid = p["grid"];
  const qcd::AmplitudeTable table =
      qcd::toy_amplitude_table(p["lambda1"], p["lambda2"], grid, qcd::exponential_profile(p["profile_r"]));

  CsvTable branches({"n", "particle", "species", "k_prime", "probability", "min_fidelity"});
  double worst_branch = 1.0;
  for (int n : ns) {
    const qcd::RepetitionState code = qcd::encode_repetition(0.6, 0.8, n);
    for (int particle = 0; particle < n; ++particle)
      for (qcd::Species s : {qcd::Species::phi1, qcd::Species::phi2}) {
        const auto branched = qcd::apply_scattering_error(code, particle, table, s, 0);
        for (const auto& b : qcd::enumerate_branches(branched)) {
          double fid = 1.0;
          for (const auto& o : qcd::enumerate_syndromes(b.state))
            fid = std::min(fid, qcd::fidelity(qcd::decode_phase_flip(o.post_state, o.syndrome), code));
          worst_branch = std::min(worst_branch, fid);
          branches.row().add(n).add(particle).add(qcd::to_string(s)).add(b.k_prime).add(b.probability).add(fid);
        }
      }
  }

  CsvTable rates({"p", "n", "logical_rate", "stderr", "binomial_tail", "failures", "trials"});
  std::uint64_t index = 0;
  double worst_z = 0.0;
  for (int n : ns)
    for (double prob : ps) {
      const auto est = qcd::logical_error_rate(n, prob, trials, derive_seed(*cfg.seed, 1, index++));
      const double tail = binomial_tail(n, prob);
      const double sd = std::sqrt(tail * (1.0 - tail) / static_cast<double>(trials));
      if (sd > 0.0) worst_z = std::max(worst_z, std::abs(est.rate - tail) / sd);
      rates.row().add(prob).add(n).add(est.rate).add(est.standard_error).add(tail).add(est.failures).add(est.trials);
    }

  RunOutput out;
  out.files.push_back({"branches.csv", branches.str()});
  out.files.push_back({"logical_rates.csv", rates.str()});
  out.results = {{"constants", constants_to_json(c)},
                 {"min_branch_fidelity", worst_branch},
                 {"max_deviation_in_standard_errors", worst_z}};
  out.assumptions = {qcd::kEnvironmentDiscardNote, qcd::kNeutronDecayNote,
                     "amplitudes with k' != 0 follow a model profile; only the forward amplitudes come from the "
                     "toy couplings"};
  return out;
}

RunOutput run_xsec(const ResolvedConfig& cfg) {
  const json& p = cfg.params;
  const scatter::Masses m{p["m_p"], p["m_phi"], p["m_n"], p["m_pi"]};
  scatter::Couplings c;
  c.g1 = p["g1"], c.g2 = p["g2"], c.lambda = p["lambda"], c.pole_guard = p["pole_guard"];
  const int points = p["points"], n_theta = p["n_theta"];
  const double lo = p["e_min"], hi = p["e_max"];

  CsvTable t({"e_cm", "sigma", "above_threshold"});
  for (int i = 0; i < points; ++i) {
    const double e = points == 1 ? lo : lo + (hi - lo) * i / (points - 1);
    const auto r = scatter::sigma_tot(e, m, c, n_theta);
    t.row().add(e).add(r.sigma).add(r.above_threshold);
  }
  const auto thr = scatter::threshold_incident_energy(m.m1, m.m4, m.m2);
  RunOutput out;
  out.files.push_back({"xsec.csv", t.str()});
  out.results = {{"threshold_e_cm", m.m3 + m.m4},
                 {"threshold_incident_energy_exact", thr.exact},
                 {"threshold_incident_energy_approximate", thr.approximate}};
  out.assumptions = {"initial spins averaged and final spins summed",
                     "isospin factors absorbed into the channel coupling lambda"};
  return out;
}

RunOutput run_toric(const ResolvedConfig& cfg) {
  using namespace toric;
  const json& p = cfg.params;
  const TorusLattice lat(p["L"].get<int>(), p["N"].get<int>());
  const GroundSpace gs = cfg.seed ? ground_space(lat, *cfg.seed) : ground_space(lat);

  ToricKLOptions opt;
  opt.tol = p["tol"];
  opt.max_errors = p["max_errors"].get<std::size_t>();
  opt.detection_only = p["detection_only"];
  if (p["wilson_loop_error"].get<bool>()) opt.extra_errors.push_back(wilson_loop(lat, Cycle::x, 1, LoopKind::electric));
  const KLReport report = kl_check_toric(lat, gs, p["max_weight"], opt);
  const SSRCheck ssr = ssr_check_toric(lat, gs);

  const QuditPauli we = wilson_loop(lat, Cycle::x, 1, LoopKind::electric);
  const QuditPauli wm = wilson_loop(lat, Cycle::x, 1, LoopKind::magnetic);
  CsvTable t({"a", "b", "electric_re", "electric_im", "magnetic_re", "magnetic_im"});
  for (std::size_t k = 0; k < gs.basis.size(); ++k) {
    const auto& v = gs.basis[k].amplitudes();
    const cplx e = v.dot(we.apply(v)), m = v.dot(wm.apply(v));
    t.row().add(gs.sector_labels[k].first).add(gs.sector_labels[k].second).add(e.real()).add(e.imag())
        .add(m.real()).add(m.imag());
  }

  RunOutput out;
  out.files.push_back({"kl_report.json", dump(kl_report_to_json(report))});
  out.files.push_back({"sectors.csv", t.str()});
  out.results = {{"ground_space_dimension", gs.basis.size()},
                 {"verdict", report.satisfied() ? "satisfied" : "violated"},
                 {"max_violation", report.max_violation},
                 {"ssr", {{"operators", ssr.operators},
                          {"detectable", ssr.detectable},
                          {"trivial", ssr.trivial},
                          {"logical", ssr.logical},
                          {"symbolic_zero", ssr.symbolic_zero},
                          {"numeric_max", ssr.numeric_max}}}};
  out.assumptions = {"weight of a qudit operator is its support size",
                     "sectors are labeled by the commuting electric and magnetic loops along the x-cycle"};
  return out;
}

json diagnostics_json(const std::vector<Diagnostic>& ds) {
  json out = json::array();
  for (const auto& d : ds) out.push_back({{"kind", to_string(d.kind)}, {"path", d.path}, {"message", d.message}});
  return out;
}

int exit_code_for(const Validation& v) {
  if (v.ok()) return kExitOk;
  return v.has_schema_error() ? kExitSchema : kExitGuard;
}

void write_error(std::ostream& err, const std::string& kind, const std::string& message, json extra = nullptr) {
  json e{{"error", {{"kind", kind}, {"message", message}}}};
  if (!extra.is_null()) e["error"]["diagnostics"] = std::move(extra);
  err << e.dump(2) << "\n";
}

}  // namespace

RunOutput execute(const ResolvedConfig& config) {
  const std::string& e = config.experiment;
  if (e == "kl-check") return run_kl_check(config);
  if (e == "rotor") return run_rotor(config);
  if (e == "qcd-rates") return run_qcd_rates(config);
  if (e == "qcd-code") return run_qcd_code(config);
  if (e == "xsec") return run_xsec(config);
  if (e == "toric") return run_toric(config);
  throw std::invalid_argument("execute: unknown experiment " + e);
}

int report_validation(const json& config, std::ostream& out) {
  const Validation v = validate_config(config);
  out << diagnostics_json(v.diagnostics).dump(2) << "\n";
  return exit_code_for(v);
}

int run_config(const json& config, std::ostream& out, std::ostream& err) {
  const Validation v = validate_config(config);
  if (!v.ok()) {
    write_error(err, v.has_schema_error() ? "schema" : "guard", "config rejected", diagnostics_json(v.diagnostics));
    return exit_code_for(v);
  }
  const ResolvedConfig& cfg = *v.config;
  const auto start = std::chrono::steady_clock::now();
  RunOutput result;
  try {
    result = execute(cfg);
  } catch (const GuardExceeded& ex) {
    write_error(err, "guard", ex.what());
    return kExitGuard;
  } catch (const InvariantBreach& ex) {
    write_error(err, "invariant", ex.what());
    return kExitInvariant;
  } catch (const std::exception& ex) {
    write_error(err, "failure", ex.what());
    return kExitFailure;
  }
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  namespace fs = std::filesystem;
  try {
    const fs::path dir(cfg.output_dir);
    fs::create_directories(dir);
    json manifest = json::array();
    for (const auto& f : result.files) {
      std::ofstream os(dir / f.name, std::ios::binary);
      os << f.content;
      if (!os) throw std::runtime_error("cannot write " + (dir / f.name).string());
      manifest.push_back({{"name", f.name}, {"bytes", f.content.size()}, {"sha256", sha256_hex(f.content)}});
    }
    const json report{{"config", cfg.to_json()},       {"version", kVersion},
                      {"wall_time_seconds", wall},     {"assumptions", result.assumptions},
                      {"results", result.results},     {"files", manifest}};
    std::ofstream os(dir / "run_report.json", std::ios::binary);
    os << dump(report);
    if (!os) throw std::runtime_error("cannot write run_report.json");
    out << dump(result.results);
  } catch (const std::exception& ex) {
    write_error(err, "io", ex.what());
    return kExitFailure;
  }
  return kExitOk;
}

}  // namespace ssrqec::cli
