#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "dfsprep/basis.hpp"
#include "dfsprep/circuit.hpp"
#include "dfsprep/statevector.hpp"

namespace dfsprep {

enum class PrepareMode { ExactOperator, SampledCircuit };

struct PreparationConfig {
  int n_qubits = 4;
  double epsilon = 1e-10;       // target infidelity
  PrepareMode mode = PrepareMode::ExactOperator;
  int max_m = 200;              // iteration cap before giving up
  std::uint64_t seed = 1;
  /// Oracle-checked stopping compares against the classical target each round;
  /// otherwise the spectral iteration bound fixes the round count up front.
  bool oracle_checked_stop = true;

  void validate() const;
};

struct IterationRecord {
  int m = 0;
  double infidelity = 0.0;            // vs the classical target, when available
  double success_probability = 0.0;   // all-zeros Born probability of this round
  std::uint64_t circuit_runs = 0;     // executions consumed to reach this iterate
};

struct PreparationTrace {
  int k = 0;  // 1-based basis index being prepared
  std::vector<IterationRecord> iterations;
  std::uint64_t total_runs = 0;
  int m_final = 0;
};

/// Iteration ran into config.max_m without reaching the target.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(std::string what, PreparationTrace trace)
      : std::runtime_error(std::move(what)), trace(std::move(trace)) {}
  PreparationTrace trace;
};

struct PreparationResult {
  std::vector<QuantumState> basis;   // u_1..u_d, phase-normalized
  std::vector<PreparationTrace> traces;
  SpectralInfo spectral;
  std::vector<double> lambda;        // spectral radius per k = 1..d-1
};

/// Classical targets t_1..t_d by modified Gram-Schmidt with a second
/// orthogonalization pass. Throws DegeneracyError if a pivot collapses.
std::vector<QuantumState> gram_schmidt_oracle(const BasisMatrix& basis);

struct ChainResult {
  RawVector out;
  double probability;  // |out|^2, the all-zeros branch weight
};

/// P_k ... P_1 |input> by sequential rank-1 deflations, first prior first.
ChainResult project_chain(const QuantumState& input,
                          std::span<const QuantumState> priors);

struct SpectralGap {
  double lambda = 0.0;
  /// Rounds needed to push the infidelity below eps: ceil(ln(eps/kappa)/ln(lambda)),
  /// or 1 in the degenerate lambda = 0 case.
  int m_bound(double eps, double kappa) const;
};

/// Largest eigenvalue magnitude of the deflation chain restricted to
/// span{a_1..a_k} (dense eigensolve of the k x k restriction).
SpectralGap spectral_gap(std::span<const QuantumState> priors);

/// Drives |a_{k+1}> towards the orthogonal complement. Exact mode applies the
/// deflation chain directly; sampled mode simulates the measurement round and
/// restarts the whole cascade from a fresh |a_{k+1}> whenever any ancilla
/// reads nonzero, counting every execution.
std::pair<QuantumState, PreparationTrace> prepare_basis_state(
    int k_plus_1, const PreparationConfig& config,
    const std::optional<QuantumState>& oracle_t = std::nullopt);

PreparationResult prepare_all(const PreparationConfig& config);

/// Average run counts from per-stage success probabilities:
/// r_j = (r_{j-1} + 1) / p_j with r_0 = 0.
std::vector<double> expected_runs(std::span<const double> success_probabilities);

/// Closed-form ceiling 2 kappa^2 m on the expected total runs.
double expected_runs_bound(double kappa, int m);

}  // namespace dfsprep
