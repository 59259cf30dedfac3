#pragma once

#include <string>
#include <vector>

#include "dfsprep/orthogonalize.hpp"
#include "dfsprep/transpile.hpp"

namespace dfsprep {

struct PrepareSpec {
  int n_qubits = 6;
  double epsilon = 1e-10;
  PrepareMode mode = PrepareMode::ExactOperator;
  std::uint64_t seed = 1;
};

struct PrepareExperiment {
  PrepareSpec spec;
  PreparationResult result;
};

/// Full preparation sweep over k = 1..d; rows are one line per (k, m).
PrepareExperiment run_prepare_experiment(const PrepareSpec& spec);

std::string prepare_csv(const PrepareExperiment& e);
std::string prepare_json(const PrepareExperiment& e, bool amplitudes = true);
/// Log-scale infidelity vs iteration, one polyline per basis index.
std::string prepare_svg(const PrepareExperiment& e);

struct SweepSpec {
  int n_qubits = 6;
  std::vector<double> epsilons;
  int trials = 200;
  std::uint64_t seed = 1;
};

struct SweepRow {
  double epsilon = 0.0;
  int k = 0;
  double mean_runs = 0.0;
  double stderr_runs = 0.0;
  int trials = 0;
  int m_bound = 0;
  double runs_bound = 0.0;  // 2 kappa^2 m
};

struct AffineFit {
  int k = 0;
  double slope = 0.0;      // runs per unit ln(1/eps)
  double intercept = 0.0;
  double r_squared = 1.0;
  double max_residual = 0.0;
};

struct SweepExperiment {
  SweepSpec spec;
  SpectralInfo spectral;
  std::vector<SweepRow> rows;   // ordered by (epsilon, k)
  std::vector<AffineFit> fits;  // one per k
};

/// Monte-Carlo run counts in sampled mode, bound-based stopping. Trials fan
/// out over threads; per-trial seeds are derived from (seed, stream index) so
/// scheduling cannot change any number.
SweepExperiment run_sweep_experiment(const SweepSpec& spec);

std::string sweep_csv(const SweepExperiment& e);
std::string sweep_json(const SweepExperiment& e);
std::string sweep_svg(const SweepExperiment& e);

struct ResourceRow {
  std::string gate;
  int iswap_count = 0;
  int single_qubit_count = 0;
  double duration_ns = 0.0;
};

/// Per-gate resource table under the given hardware constants.
std::vector<ResourceRow> resource_table(const HardwareParams& params);
std::string resource_csv(const std::vector<ResourceRow>& rows);

struct VerifyCheck {
  std::string name;
  bool passed = false;
  double value = 0.0;
  double threshold = 0.0;
};

struct VerifyReport {
  std::vector<VerifyCheck> checks;
  bool all_passed() const;
};

/// One-shot health report: total-spin residuals, basis rank, oracle
/// orthonormality, prepared-state fidelities, transpiler equivalence.
VerifyReport verify_bundle(int n_qubits, std::uint64_t seed = 1);
std::string verify_text(const VerifyReport& r);
std::string verify_json(const VerifyReport& r);

}  // namespace dfsprep
