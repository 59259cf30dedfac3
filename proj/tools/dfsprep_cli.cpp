// Command-line front door: basis enumeration, state preparation experiments,
// run-count sweeps, hardware resource tables, and a health-check bundle.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>

#include "dfsprep/report.hpp"
#include "dfsprep/serialize.hpp"

namespace {

using namespace dfsprep;

void write_out(const std::string& payload, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << payload;
    return;
  }
  std::ofstream f(out_path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open output path: " + out_path);
  f << payload;
}

nlohmann::json error_payload(const std::string& kind, const std::string& what) {
  return {{"error", kind}, {"what", what}};
}

int run(int argc, char** argv) {
  CLI::App app{"decoherence-free subspace basis toolkit"};
  app.require_subcommand(1);

  // basis
  auto* basis_cmd = app.add_subcommand("basis", "enumerate the singlet-sector basis");
  int basis_n = 6;
  bool with_amps = false;
  std::string basis_out;
  basis_cmd->add_option("--n", basis_n, "qubit count (even)")->required();
  basis_cmd->add_flag("--amplitudes", with_amps, "include state amplitudes");
  basis_cmd->add_option("--out", basis_out, "output path (default stdout)");

  // prepare
  auto* prep_cmd = app.add_subcommand("prepare", "prepare the orthogonal basis");
  PrepareSpec pspec;
  std::string prep_mode = "exact", prep_out, prep_csv_path, prep_svg_path;
  prep_cmd->add_option("--n", pspec.n_qubits, "qubit count (even)")->required();
  prep_cmd->add_option("--epsilon", pspec.epsilon, "target infidelity");
  prep_cmd->add_option("--mode", prep_mode, "exact|sampled")
      ->check(CLI::IsMember({"exact", "sampled"}));
  prep_cmd->add_option("--seed", pspec.seed, "random seed");
  prep_cmd->add_option("--out", prep_out, "JSON output path (default stdout)");
  prep_cmd->add_option("--csv", prep_csv_path, "also write the per-iteration CSV here");
  prep_cmd->add_option("--svg", prep_svg_path, "also write an infidelity plot here");

  // sweep
  auto* sweep_cmd = app.add_subcommand("sweep", "mean run counts vs target infidelity");
  SweepSpec sspec;
  std::string sweep_out, sweep_json_path, sweep_svg_path;
  std::vector<double> eps_list;
  sweep_cmd->add_option("--n", sspec.n_qubits, "qubit count (even)")->required();
  sweep_cmd->add_option("--epsilons", eps_list, "epsilon list")->required()->delimiter(',');
  sweep_cmd->add_option("--trials", sspec.trials, "Monte-Carlo trials per point");
  sweep_cmd->add_option("--seed", sspec.seed, "random seed");
  sweep_cmd->add_option("--out", sweep_out, "CSV output path (default stdout)");
  sweep_cmd->add_option("--json", sweep_json_path, "also write the JSON report here");
  sweep_cmd->add_option("--svg", sweep_svg_path, "also write the runs plot here");

  // resources
  auto* res_cmd = app.add_subcommand("resources", "native-gate resource estimates");
  std::string res_gate, res_circuit_path, res_out;
  double omega_ghz = 6.0, rabi_mhz = 25.0, g_mhz = 25.0;
  res_cmd->add_option("--gate", res_gate, "single gate name (default: full table)");
  res_cmd->add_option("--circuit", res_circuit_path, "circuit JSON file to transpile");
  res_cmd->add_option("--omega-ghz", omega_ghz, "qubit frequency / 2pi in GHz");
  res_cmd->add_option("--rabi-mhz", rabi_mhz, "drive Rabi frequency / 2pi in MHz");
  res_cmd->add_option("--g-mhz", g_mhz, "coupling strength / 2pi in MHz");
  res_cmd->add_option("--out", res_out, "output path (default stdout)");

  // verify
  auto* verify_cmd = app.add_subcommand("verify", "run the health-check bundle");
  int verify_n = 6;
  std::uint64_t verify_seed = 1;
  std::string verify_out;
  bool verify_as_json = false;
  verify_cmd->add_option("--n", verify_n, "qubit count (even)")->required();
  verify_cmd->add_option("--seed", verify_seed, "random seed");
  verify_cmd->add_flag("--json", verify_as_json, "emit JSON instead of text");
  verify_cmd->add_option("--out", verify_out, "output path (default stdout)");

  CLI11_PARSE(app, argc, argv);

  if (basis_cmd->parsed()) {
    auto [basis, spectral] = build_basis_matrix(basis_n);
    nlohmann::json j;
    j["N"] = basis_n;
    j["d"] = basis.columns.size();
    j["spectral"] = {{"sigma_max", spectral.sigma_max},
                     {"sigma_min", spectral.sigma_min},
                     {"kappa", spectral.kappa}};
    j["entries"] = nlohmann::json::array();
    const auto seqs = enumerate_parens(basis_n / 2);
    for (size_t i = 0; i < basis.columns.size(); ++i) {
      nlohmann::json e;
      e["index"] = i + 1;
      e["parens"] = seqs[i].chars;
      e["pairs"] = nlohmann::json::array();
      for (const auto& [a, b] : basis.pairings[i].pairs) e["pairs"].push_back({a, b});
      if (with_amps) e["amplitudes"] = amplitudes_to_json(basis.columns[i]);
      j["entries"].push_back(std::move(e));
    }
    write_out(j.dump(2) + "\n", basis_out);
    return 0;
  }

  if (prep_cmd->parsed()) {
    pspec.mode = prep_mode == "exact" ? PrepareMode::ExactOperator : PrepareMode::SampledCircuit;
    const PrepareExperiment e = run_prepare_experiment(pspec);
    write_out(prepare_json(e), prep_out);
    if (!prep_csv_path.empty()) write_out(prepare_csv(e), prep_csv_path);
    if (!prep_svg_path.empty()) write_out(prepare_svg(e), prep_svg_path);
    return 0;
  }

  if (sweep_cmd->parsed()) {
    sspec.epsilons = eps_list;
    const SweepExperiment e = run_sweep_experiment(sspec);
    write_out(sweep_csv(e), sweep_out);
    if (!sweep_json_path.empty()) write_out(sweep_json(e), sweep_json_path);
    if (!sweep_svg_path.empty()) write_out(sweep_svg(e), sweep_svg_path);
    return 0;
  }

  if (res_cmd->parsed()) {
    const HardwareParams params = HardwareParams::from_frequencies(omega_ghz, rabi_mhz, g_mhz);
    if (!res_circuit_path.empty()) {
      std::ifstream f(res_circuit_path);
      if (!f) throw std::runtime_error("cannot read circuit file: " + res_circuit_path);
      const Circuit c = circuit_from_json(nlohmann::json::parse(f));
      const NativeCircuit nc = transpile(c);
      const ResourceEstimate est = estimate_resources(nc, params);
      std::vector<ResourceRow> rows{{"circuit", est.iswap_count, est.single_qubit_count,
                                     est.duration_ns}};
      write_out(resource_csv(rows), res_out);
      return 0;
    }
    auto rows = resource_table(params);
    if (!res_gate.empty()) {
      std::erase_if(rows, [&](const ResourceRow& r) { return r.gate != res_gate; });
      if (rows.empty()) throw std::runtime_error("unknown gate name: " + res_gate);
    }
    write_out(resource_csv(rows), res_out);
    return 0;
  }

  const VerifyReport report = verify_bundle(verify_n, verify_seed);
  write_out(verify_as_json ? verify_json(report) : verify_text(report), verify_out);
  return report.all_passed() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const std::invalid_argument& e) {
    std::cerr << error_payload("argument", e.what()).dump() << "\n";
    return 2;
  } catch (const dfsprep::ResourceError& e) {
    std::cerr << error_payload("resource", e.what()).dump() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << error_payload("runtime", e.what()).dump() << "\n";
    return 4;
  }
}
