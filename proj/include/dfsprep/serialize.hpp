#pragma once

#include <string>

#include <json.hpp>

#include "dfsprep/circuit.hpp"
#include "dfsprep/orthogonalize.hpp"
#include "dfsprep/statevector.hpp"

namespace dfsprep {

/// Amplitudes as an array of [re, im] pairs; index order is the big-endian
/// bitstring with qubit 0 as the most significant bit.
nlohmann::json amplitudes_to_json(const QuantumState& s);
QuantumState state_from_json(int n_qubits, const nlohmann::json& j);

/// {kind, params, qubits} with 0-based qubits.
nlohmann::json op_to_json(const GateOp& op);
GateOp op_from_json(const nlohmann::json& j);

nlohmann::json circuit_to_json(const Circuit& c);
Circuit circuit_from_json(const nlohmann::json& j);

nlohmann::json preparation_result_to_json(const PreparationResult& r,
                                          const PreparationConfig& config,
                                          bool include_amplitudes = true);

}  // namespace dfsprep
