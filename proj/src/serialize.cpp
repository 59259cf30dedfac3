#include "dfsprep/serialize.hpp"

namespace dfsprep {

nlohmann::json amplitudes_to_json(const QuantumState& s) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& a : s.amplitudes()) arr.push_back({a.real(), a.imag()});
  return arr;
}

QuantumState state_from_json(int n_qubits, const nlohmann::json& j) {
  std::vector<cdouble> amps;
  amps.reserve(j.size());
  for (const auto& pair : j) amps.emplace_back(pair.at(0).get<double>(), pair.at(1).get<double>());
  return QuantumState(n_qubits, std::move(amps));
}

nlohmann::json op_to_json(const GateOp& op) {
  return {{"kind", to_string(op.kind)}, {"params", op.params}, {"qubits", op.qubits}};
}

GateOp op_from_json(const nlohmann::json& j) {
  const GateKind kind = gate_kind_from_string(j.at("kind").get<std::string>());
  std::vector<double> params = j.value("params", std::vector<double>{});
  std::vector<int> qubits = j.at("qubits").get<std::vector<int>>();
  if (kind == GateKind::S1) return GateOp::s1(std::move(qubits));
  if (kind == GateKind::RX || kind == GateKind::RZ || kind == GateKind::RY) {
    if (params.size() != 1) throw std::invalid_argument("rotation needs one angle");
    return GateOp::rotation(kind, params[0], qubits.at(0));
  }
  return GateOp::simple(kind, std::move(qubits));
}

nlohmann::json circuit_to_json(const Circuit& c) {
  nlohmann::json ops = nlohmann::json::array();
  for (const auto& op : c.ops) ops.push_back(op_to_json(op));
  return {{"n_system", c.n_system},
          {"n_ancilla", c.n_ancilla},
          {"ops", std::move(ops)},
          {"measured", std::vector<int>(c.measured.begin(), c.measured.end())}};
}

Circuit circuit_from_json(const nlohmann::json& j) {
  Circuit c;
  c.n_system = j.at("n_system").get<int>();
  c.n_ancilla = j.value("n_ancilla", 0);
  for (const auto& jop : j.at("ops")) c.push(op_from_json(jop));
  for (int q : j.value("measured", std::vector<int>{})) {
    if (q < c.n_system || q >= c.n_total())
      throw std::invalid_argument("measured index is not an ancilla");
    c.measured.insert(q);
  }
  return c;
}

nlohmann::json preparation_result_to_json(const PreparationResult& r,
                                          const PreparationConfig& config,
                                          bool include_amplitudes) {
  nlohmann::json j;
  j["N"] = config.n_qubits;
  j["epsilon"] = config.epsilon;
  j["mode"] = config.mode == PrepareMode::ExactOperator ? "exact" : "sampled";
  j["seed"] = config.seed;
  j["spectral"] = {{"sigma_max", r.spectral.sigma_max},
                   {"sigma_min", r.spectral.sigma_min},
                   {"kappa", r.spectral.kappa}};
  j["lambda"] = r.lambda;
  j["states"] = nlohmann::json::array();
  for (size_t i = 0; i < r.basis.size(); ++i) {
    const auto& trace = r.traces[i];
    nlohmann::json s;
    s["k"] = trace.k;
    s["m"] = trace.m_final;
    s["total_runs"] = trace.total_runs;
    s["infidelity"] =
        trace.iterations.empty() ? 0.0 : trace.iterations.back().infidelity;
    if (include_amplitudes) s["amplitudes"] = amplitudes_to_json(r.basis[i]);
    j["states"].push_back(std::move(s));
  }
  return j;
}

}  // namespace dfsprep
