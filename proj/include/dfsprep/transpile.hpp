#pragma once

#include <set>
#include <utility>
#include <vector>

#include "dfsprep/circuit.hpp"

namespace dfsprep {

/// Hardware constants, stored as angular frequencies (rad/s). The reference
/// point is a transmon lattice with switchable nearest-neighbour XY coupling.
struct HardwareParams {
  double omega = 0.0;     // qubit frequency
  double rabi = 0.0;      // single-qubit drive
  double coupling = 0.0;  // two-qubit XY strength

  static HardwareParams from_frequencies(double omega_ghz, double rabi_mhz, double g_mhz);
  static HardwareParams defaults() { return from_frequencies(6.0, 25.0, 25.0); }

  /// Full X pulse, 10 ns at the default drive, scaling as 1/Omega.
  double t_pi_ns() const;
  /// XY interaction on for 3*pi/(2g).
  double t_iswap_ns() const;

  void validate() const;
};

/// Gate list over {RX, RZ, ISWAP} only. RX pulses are emitted at calibrated
/// angles (+-pi/2 and pi); other rotations are synthesized from two pi/2
/// pulses with virtual Z frame updates. `ancillas` are scratch qubits the
/// expansion borrows; they start and must end in |0>.
struct NativeCircuit {
  int n_qubits = 0;
  std::vector<GateOp> ops;
  std::set<int> ancillas;

  int iswap_count() const;
  int rx_count() const;
};

struct ResourceEstimate {
  int iswap_count = 0;
  int single_qubit_count = 0;  // physical RX pulses; RZ is a frame update
  double duration_ns = 0.0;    // critical path, ASAP schedule
};

struct CouplingGraph {
  int n_nodes = 0;
  std::set<std::pair<int, int>> edges;  // normalized first < second

  bool has_edge(int a, int b) const;
};

/// Single-gate expansion into the native set. Accepts the circuit-level set
/// plus {RY, A, B, C, D} and native kinds.
NativeCircuit decompose_gate(const GateOp& gate);

/// I - 2|1..1><1..1| on n data qubits via an AND-ladder of Toffolis:
/// n-3 scratch qubits and 2n-5 Toffoli-class blocks for n >= 4.
NativeCircuit synthesize_multiqubit_phase(int n);

/// Whole-circuit expansion. Scratch ancillas for the phase gates are pooled
/// after the circuit's own registers; adjacent RZ on the same qubit merge.
NativeCircuit transpile(const Circuit& circuit);

/// ASAP schedule with each gate exclusively occupying its qubits; duration is
/// the critical path. t(RZ) = 0, t(RX(theta)) = |theta|/pi * t_pi, t(iSWAP)
/// fixed by the coupling.
ResourceEstimate estimate_resources(const NativeCircuit& native, const HardwareParams& params);

/// Spectral-norm distance, minimized over a global phase, between the circuit
/// unitary and the native unitary restricted to the scratch-ancillas-in-|0>
/// block. Ancilla leakage shows up as distance.
double verify_equivalence(const Circuit& original, const NativeCircuit& native);

struct IswapDiagnostic {
  double raw_distance = 0.0;       // expm(-i H t_ref) vs iSWAP, phase-minimized
  double framed_distance = 0.0;    // same with RZ frame rotations removed
  double t_reference_ns = 0.0;     // 3*pi/(2g)
  double t_star_ns = 0.0;          // duration minimizing the framed distance
  double framed_distance_at_t_star = 0.0;
};

/// Exponentiates the two-qubit XY Hamiltonian and compares against the ideal
/// iSWAP. Diagnostic only; transpilation always uses the ideal matrix.
IswapDiagnostic iswap_hamiltonian_check(const HardwareParams& params);

/// Every iSWAP whose qubit pair is not a coupling edge.
std::vector<GateOp> check_coupling(const NativeCircuit& native, const CouplingGraph& graph);

/// Seven-qubit layout for the four-qubit preparation experiment: system 0..3,
/// measurement ancilla 4, phase-gate scratch 5..6.
CouplingGraph seven_qubit_layout();

}  // namespace dfsprep
