#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "dfsprep/basis.hpp"
#include "dfsprep/statevector.hpp"

namespace dfsprep {

enum class GateKind {
  X, Z, H, CNOT, CZ, CH, CCX, S1,  // circuit-level set
  RX, RZ, RY, ISWAP,               // native set (plus RY for dressing identities)
  A, B, C, D                       // fixed single-qubit gates used by the Toffoli wiring
};

std::string to_string(GateKind k);
GateKind gate_kind_from_string(const std::string& s);

/// One gate application. `qubits` are 0-based absolute indices; S1 takes an
/// arbitrary tuple, everything else has fixed arity.
struct GateOp {
  GateKind kind;
  std::vector<double> params;  // rotation angles, radians
  std::vector<int> qubits;

  static GateOp simple(GateKind k, std::vector<int> qubits);
  static GateOp rotation(GateKind k, double theta, int qubit);
  static GateOp s1(std::vector<int> qubits);

  int arity() const { return static_cast<int>(qubits.size()); }
};

/// Dense/diagonal matrix of a single op (for the simulator and unitary builds).
GateMatrix gate_matrix(const GateOp& op);

/// Gate list over a system register (qubits 0..n_system-1) and an ancilla
/// register (n_system..n_system+n_ancilla-1). `measured` ancillas are read out
/// in the computational basis at the very end of the circuit.
struct Circuit {
  int n_system = 0;
  int n_ancilla = 0;
  std::vector<GateOp> ops;
  std::set<int> measured;

  int n_total() const { return n_system + n_ancilla; }
  void push(GateOp op);
  Circuit without_measurements() const;
};

/// (|01> - |10>)/sqrt(2) on the ordered pair from |00>. Four gates.
Circuit singlet_prep_circuit(int q_first, int q_second, int n_system = -1);

/// O_a: product of singlet preparations, one per pair. 4*(N/2) gates.
Circuit basis_prep_circuit(const Pairing& pairing);

/// Which construction realizes a controlled reflection.
enum class ControlStyle {
  /// Conjugate an X-wall-wrapped multiqubit phase gate by the uncontrolled
  /// preparation; only the phase gate grows by the control qubit.
  SharedPhase,
  /// Control every preparation gate individually (X->CNOT, H->CH, CNOT->CCX,
  /// Z->CZ); mirrors the hardware-layout figures and exercises the full
  /// circuit-level gate set.
  PerGate
};

/// I - 2|a><a| for the pairing state, optionally controlled by an ancilla.
Circuit reflection_circuit(const Pairing& pairing, std::optional<int> control = std::nullopt,
                           ControlStyle style = ControlStyle::SharedPhase);

/// Measurement round: for each prior pairing an ancilla wraps its controlled
/// reflection in Hadamards; all ancillas are measured at the end. The
/// all-zeros branch applies the deflation chain P_k...P_1.
Circuit orthogonalization_round_circuit(const std::vector<Pairing>& prior_pairings,
                                        ControlStyle style = ControlStyle::SharedPhase);

struct SimOutcome {
  QuantumState final;        // post-measurement state with measured ancillas removed
  std::vector<int> record;   // measured bits, ascending ancilla index
  double branch_probability; // Born probability of the sampled record
};

/// Runs the circuit on `input` (system register; ancillas start in |0>),
/// sampling the end-of-circuit measurements from `rng`.
SimOutcome simulate(const Circuit& circuit, const QuantumState& input, RandomSource& rng);

constexpr int kDenseUnitaryCap = 12;

/// Column j is the circuit applied to basis state |j>. Requires no
/// measurements and at most 12 total qubits.
Eigen::MatrixXcd unitary_of(const Circuit& circuit);

}  // namespace dfsprep
