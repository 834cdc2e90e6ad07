#include "ssrqec/cli/runner.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

namespace {

using ssrqec::cli::json;

// Parse failures are reported like schema violations.
bool load_config(const std::string& path, json& out) {
  std::ifstream in(path);
  if (!in) {
    std::cerr << json{{"error", {{"kind", "schema"}, {"message", "cannot open " + path}}}}.dump(2) << "\n";
    return false;
  }
  try {
    out = json::parse(in, nullptr, true, false);
  } catch (const json::parse_error& e) {
    std::cerr << json{{"error", {{"kind", "schema"}, {"message", e.what()}}}}.dump(2) << "\n";
    return false;
  }
  return true;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Superselection and quantum error correction numerical lab"};
  app.require_subcommand(1);
  app.set_version_flag("--version", ssrqec::cli::kVersion);

  std::string config_path;
  auto* run = app.add_subcommand("run", "Run an experiment config");
  run->add_option("config", config_path, "config JSON")->required();

  std::string validate_path;
  auto* validate = app.add_subcommand("validate", "Check a config without running it");
  validate->add_option("config", validate_path, "config JSON")->required();

  auto* schema = app.add_subcommand("schema", "Print the config JSON schema");

  std::string xsec_out = ".";
  auto* xsec = app.add_subcommand("xsec", "Cross-section sweep");
  double m_p = 938.3, m_phi = 0.0, m_n = 938.3, m_pi = 139.6, g1 = 0.01, g2 = 1.0, lambda = 1.0;
  double e_min = 1000.0, e_max = 1400.0;
  int points = 41, n_theta = 64;
  xsec->add_option("--m-p", m_p, "proton mass (MeV)")->capture_default_str();
  xsec->add_option("--m-phi", m_phi, "scalar mass (MeV)")->capture_default_str();
  xsec->add_option("--m-n", m_n, "neutron mass (MeV)")->capture_default_str();
  xsec->add_option("--m-pi", m_pi, "pion mass (MeV)")->capture_default_str();
  xsec->add_option("--g1", g1, "derivative coupling")->capture_default_str();
  xsec->add_option("--g2", g2, "pseudoscalar coupling")->capture_default_str();
  xsec->add_option("--lambda", lambda, "channel coupling")->capture_default_str();
  xsec->add_option("--e-min", e_min, "lowest CM energy (MeV)")->capture_default_str();
  xsec->add_option("--e-max", e_max, "highest CM energy (MeV)")->capture_default_str();
  xsec->add_option("--points", points, "energies")->capture_default_str();
  xsec->add_option("--n-theta", n_theta, "quadrature nodes")->capture_default_str();
  xsec->add_option("-o,--output-dir", xsec_out, "output directory")->capture_default_str();

  int toric_n = 2, toric_l = 2, max_weight = 1;
  double tol = 1e-9;
  bool detection_only = false, wilson = false;
  std::string toric_out = ".";
  auto* toric = app.add_subcommand("toric", "Toric code sectors and KL check");
  toric->add_option("-N,--qudit-dim", toric_n, "qudit dimension N")->capture_default_str();
  toric->add_option("-l,--size", toric_l, "lattice size l")->capture_default_str();
  toric->add_option("--max-weight", max_weight, "largest error weight")->capture_default_str();
  toric->add_option("--tol", tol, "KL tolerance")->capture_default_str();
  toric->add_flag("--detection-only", detection_only, "detection check only");
  toric->add_flag("--wilson-loop", wilson, "add a Wilson loop to the error set");
  toric->add_option("-o,--output-dir", toric_out, "output directory")->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  if (*schema) {
    std::cout << ssrqec::cli::config_schema().dump(2) << "\n";
    return ssrqec::cli::kExitOk;
  }
  if (*validate) {
    json config;
    if (!load_config(validate_path, config)) return ssrqec::cli::kExitSchema;
    return ssrqec::cli::report_validation(config, std::cout);
  }
  json config;
  if (*run) {
    if (!load_config(config_path, config)) return ssrqec::cli::kExitSchema;
  } else if (*xsec) {
    config = {{"experiment", "xsec"},
              {"output_dir", xsec_out},
              {"params", {{"m_p", m_p}, {"m_phi", m_phi}, {"m_n", m_n}, {"m_pi", m_pi}, {"g1", g1},
                          {"g2", g2}, {"lambda", lambda}, {"e_min", e_min}, {"e_max", e_max},
                          {"points", points}, {"n_theta", n_theta}}}};
  } else {
    config = {{"experiment", "toric"},
              {"output_dir", toric_out},
              {"params", {{"N", toric_n}, {"L", toric_l}, {"max_weight", max_weight}, {"tol", tol},
                          {"detection_only", detection_only}, {"wilson_loop_error", wilson}}}};
  }
  return ssrqec::cli::run_config(config, std::cout, std::cerr);
}
