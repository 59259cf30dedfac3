#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "dfsprep/types.hpp"

namespace dfsprep {

// Amplitude indexing convention used throughout: qubit 0 maps to the most
// significant bit of the amplitude index, so the index read as a big-endian
// bitstring lists qubits left to right. Hardware-style labels in the
// literature are 1-based; qubit q here corresponds to label q+1.
inline int bit_of(std::uint64_t index, int n_qubits, int qubit) {
  return static_cast<int>((index >> (n_qubits - 1 - qubit)) & 1u);
}

/// Normalized pure state of n_qubits qubits.
class QuantumState {
 public:
  QuantumState(int n_qubits, std::vector<cdouble> amplitudes);

  /// |index> in the big-endian convention above.
  static QuantumState computational_basis(int n_qubits, std::uint64_t index);
  static QuantumState zero_state(int n_qubits) { return computational_basis(n_qubits, 0); }

  int n_qubits() const { return n_qubits_; }
  std::uint64_t dim() const { return std::uint64_t(1) << n_qubits_; }
  const std::vector<cdouble>& amplitudes() const { return amps_; }
  cdouble amplitude(std::uint64_t index) const { return amps_[index]; }

  double norm() const;

 private:
  int n_qubits_;
  std::vector<cdouble> amps_;
};

/// Possibly unnormalized vector, e.g. the output of a projector chain.
/// Kept as a distinct type so projector pipelines never renormalize silently.
struct RawVector {
  int n_qubits = 0;
  std::vector<cdouble> amplitudes;
  double norm = 0.0;

  static RawVector from(const QuantumState& s);
  /// Normalizes into a QuantumState; requires norm > tol.
  QuantumState normalized(double tol = 1e-300) const;
};

/// Unitary gate, either dense over `arity` qubits (arity <= 3) or diagonal
/// over an arbitrary qubit tuple (the multi-qubit phase gate lives here).
class GateMatrix {
 public:
  static GateMatrix dense(int arity, std::vector<cdouble> row_major);
  static GateMatrix diagonal(int arity, std::vector<cdouble> diag);
  /// I - 2|1...1><1...1| on n qubits.
  static GateMatrix phase_flip_all_ones(int n);

  int arity() const { return arity_; }
  bool is_diagonal() const { return diagonal_; }
  const std::vector<cdouble>& entries() const { return entries_; }
  GateMatrix adjoint() const;

 private:
  GateMatrix(int arity, bool diagonal, std::vector<cdouble> entries);
  int arity_;
  bool diagonal_;
  std::vector<cdouble> entries_;  // dim*dim row-major, or dim diagonal
};

/// U|psi> with U acting on `targets` (order significant) and identity elsewhere.
QuantumState apply_gate(const QuantumState& state, const GateMatrix& gate,
                        std::span<const int> targets);

/// In-place kernel used by the simulator loop.
void apply_gate_inplace(std::vector<cdouble>& amps, int n_qubits, const GateMatrix& gate,
                        std::span<const int> targets);

struct MeasureResult {
  std::vector<int> bits;  // one per target, in target order
  QuantumState collapsed;
  double probability;
};

/// Projective measurement of `targets` in the computational basis, sampled by
/// the Born rule from `rng`. Outcomes with probability below 1e-15 are never
/// sampled.
MeasureResult measure_qubits(const QuantumState& state, std::span<const int> targets,
                             RandomSource& rng);

/// Born probabilities of all 2^k outcomes of measuring `targets`, indexed by
/// the bits in target order (first target = most significant).
std::vector<double> outcome_probabilities(const QuantumState& state,
                                          std::span<const int> targets);

cdouble inner_product(const QuantumState& u, const QuantumState& v);
double fidelity(const QuantumState& u, const QuantumState& v);

/// v - a<a|v> with refreshed norm. Idempotent.
RawVector rank1_deflate(const RawVector& v, const QuantumState& a);

/// Rotates the global phase so the first amplitude of maximum magnitude
/// (within a relative 1e-9 tie window) is real positive.
QuantumState phase_normalize(const QuantumState& s);

}  // namespace dfsprep
