#include "dfsprep/circuit.hpp"

#include <cmath>
#include <numbers>
#include <unordered_map>

namespace dfsprep {

namespace {

constexpr double kPi = std::numbers::pi;
const cdouble kI{0.0, 1.0};

int expected_arity(GateKind k) {
  switch (k) {
    case GateKind::X:
    case GateKind::Z:
    case GateKind::H:
    case GateKind::RX:
    case GateKind::RZ:
    case GateKind::RY:
    case GateKind::A:
    case GateKind::B:
    case GateKind::C:
    case GateKind::D:
      return 1;
    case GateKind::CNOT:
    case GateKind::CZ:
    case GateKind::CH:
    case GateKind::ISWAP:
      return 2;
    case GateKind::CCX:
      return 3;
    case GateKind::S1:
      return -1;  // variable
  }
  return -1;
}

bool is_rotation(GateKind k) {
  return k == GateKind::RX || k == GateKind::RZ || k == GateKind::RY;
}

std::vector<cdouble> mat1(cdouble a, cdouble b, cdouble c, cdouble d) { return {a, b, c, d}; }

std::vector<cdouble> controlled(const std::vector<cdouble>& u) {
  // control = first qubit
  std::vector<cdouble> m(16, cdouble(0.0));
  m[0 * 4 + 0] = 1.0;
  m[1 * 4 + 1] = 1.0;
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 2; ++c) m[(r + 2) * 4 + (c + 2)] = u[r * 2 + c];
  return m;
}

}  // namespace

std::string to_string(GateKind k) {
  switch (k) {
    case GateKind::X: return "X";
    case GateKind::Z: return "Z";
    case GateKind::H: return "H";
    case GateKind::CNOT: return "CNOT";
    case GateKind::CZ: return "CZ";
    case GateKind::CH: return "CH";
    case GateKind::CCX: return "CCX";
    case GateKind::S1: return "S1";
    case GateKind::RX: return "RX";
    case GateKind::RZ: return "RZ";
    case GateKind::RY: return "RY";
    case GateKind::ISWAP: return "ISWAP";
    case GateKind::A: return "A";
    case GateKind::B: return "B";
    case GateKind::C: return "C";
    case GateKind::D: return "D";
  }
  return "?";
}

GateKind gate_kind_from_string(const std::string& s) {
  static const std::unordered_map<std::string, GateKind> table = {
      {"X", GateKind::X},     {"Z", GateKind::Z},     {"H", GateKind::H},
      {"CNOT", GateKind::CNOT}, {"CZ", GateKind::CZ}, {"CH", GateKind::CH},
      {"CCX", GateKind::CCX}, {"S1", GateKind::S1},   {"RX", GateKind::RX},
      {"RZ", GateKind::RZ},   {"RY", GateKind::RY},   {"ISWAP", GateKind::ISWAP},
      {"A", GateKind::A},     {"B", GateKind::B},     {"C", GateKind::C},
      {"D", GateKind::D}};
  auto it = table.find(s);
  if (it == table.end()) throw std::invalid_argument("unknown gate kind: " + s);
  return it->second;
}

GateOp GateOp::simple(GateKind k, std::vector<int> qubits) {
  if (k == GateKind::S1) return s1(std::move(qubits));
  if (is_rotation(k)) throw std::invalid_argument("rotation gates need an angle");
  GateOp op{k, {}, std::move(qubits)};
  if (op.arity() != expected_arity(k)) throw std::invalid_argument("gate arity mismatch");
  return op;
}

GateOp GateOp::rotation(GateKind k, double theta, int qubit) {
  if (!is_rotation(k)) throw std::invalid_argument("not a rotation kind");
  return GateOp{k, {theta}, {qubit}};
}

GateOp GateOp::s1(std::vector<int> qubits) {
  if (qubits.empty()) throw std::invalid_argument("S1 needs at least one qubit");
  return GateOp{GateKind::S1, {}, std::move(qubits)};
}

GateMatrix gate_matrix(const GateOp& op) {
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  switch (op.kind) {
    case GateKind::X:
      return GateMatrix::dense(1, mat1(0, 1, 1, 0));
    case GateKind::Z:
      return GateMatrix::diagonal(1, {1.0, -1.0});
    case GateKind::H:
      return GateMatrix::dense(1, mat1(inv_sqrt2, inv_sqrt2, inv_sqrt2, -inv_sqrt2));
    case GateKind::RX: {
      const double t = op.params.at(0);
      return GateMatrix::dense(
          1, mat1(std::cos(t / 2), -kI * std::sin(t / 2), -kI * std::sin(t / 2), std::cos(t / 2)));
    }
    case GateKind::RY: {
      const double t = op.params.at(0);
      return GateMatrix::dense(1, mat1(std::cos(t / 2), -std::sin(t / 2), std::sin(t / 2),
                                       std::cos(t / 2)));
    }
    case GateKind::RZ: {
      const double t = op.params.at(0);
      return GateMatrix::diagonal(1, {std::exp(-kI * (t / 2)), std::exp(kI * (t / 2))});
    }
    case GateKind::A:
      return GateMatrix::diagonal(1, {1.0, kI});
    case GateKind::B: {
      const double c = std::cos(kPi / 8), s = std::sin(kPi / 8);
      return GateMatrix::dense(1, mat1(c, -s, s, c));
    }
    case GateKind::C: {
      const double c = std::cos(kPi / 8), s = std::sin(kPi / 8);
      return GateMatrix::dense(1, mat1(c, s, kI * s, -kI * c));
    }
    case GateKind::D:
      return GateMatrix::diagonal(1, {1.0, std::exp(-kI * (kPi / 4))});
    case GateKind::CNOT:
      return GateMatrix::dense(2, controlled(mat1(0, 1, 1, 0)));
    case GateKind::CZ:
      return GateMatrix::diagonal(2, {1.0, 1.0, 1.0, -1.0});
    case GateKind::CH:
      return GateMatrix::dense(
          2, controlled(mat1(inv_sqrt2, inv_sqrt2, inv_sqrt2, -inv_sqrt2)));
    case GateKind::CCX: {
      std::vector<cdouble> m(64, cdouble(0.0));
      for (int i = 0; i < 6; ++i) m[i * 8 + i] = 1.0;
      m[6 * 8 + 7] = 1.0;
      m[7 * 8 + 6] = 1.0;
      return GateMatrix::dense(3, std::move(m));
    }
    case GateKind::ISWAP: {
      std::vector<cdouble> m(16, cdouble(0.0));
      m[0] = 1.0;
      m[15] = 1.0;
      m[1 * 4 + 2] = kI;
      m[2 * 4 + 1] = kI;
      return GateMatrix::dense(2, std::move(m));
    }
    case GateKind::S1:
      return GateMatrix::phase_flip_all_ones(op.arity());
  }
  throw std::invalid_argument("unhandled gate kind");
}

void Circuit::push(GateOp op) {
  for (int q : op.qubits)
    if (q < 0 || q >= n_total()) throw std::invalid_argument("op target outside register");
  ops.push_back(std::move(op));
}

Circuit Circuit::without_measurements() const {
  Circuit c = *this;
  c.measured.clear();
  return c;
}

Circuit singlet_prep_circuit(int q_first, int q_second, int n_system) {
  if (q_first == q_second) throw std::invalid_argument("singlet pair needs distinct qubits");
  if (n_system < 0) n_system = std::max(q_first, q_second) + 1;
  Circuit c;
  c.n_system = n_system;
  c.push(GateOp::simple(GateKind::X, {q_second}));
  c.push(GateOp::simple(GateKind::H, {q_first}));
  c.push(GateOp::simple(GateKind::CNOT, {q_first, q_second}));
  c.push(GateOp::simple(GateKind::Z, {q_first}));
  return c;
}

Circuit basis_prep_circuit(const Pairing& pairing) {
  if (!pairing.is_perfect_matching())
    throw std::invalid_argument("pairing is not a perfect matching");
  Circuit c;
  c.n_system = pairing.n_qubits();
  for (const auto& [i, j] : pairing.pairs) {
    const Circuit s = singlet_prep_circuit(i - 1, j - 1, c.n_system);
    for (const auto& op : s.ops) c.push(op);
  }
  return c;
}

namespace {

// Gate-by-gate controlled image of the preparation gates.
GateOp control_gate(const GateOp& g, int control) {
  switch (g.kind) {
    case GateKind::X:
      return GateOp::simple(GateKind::CNOT, {control, g.qubits[0]});
    case GateKind::H:
      return GateOp::simple(GateKind::CH, {control, g.qubits[0]});
    case GateKind::Z:
      return GateOp::simple(GateKind::CZ, {control, g.qubits[0]});
    case GateKind::CNOT:
      return GateOp::simple(GateKind::CCX, {control, g.qubits[0], g.qubits[1]});
    default:
      throw std::invalid_argument("cannot control this gate kind");
  }
}

void append_reflection(Circuit& c, const Pairing& pairing, std::optional<int> control,
                       ControlStyle style) {
  const int n = pairing.n_qubits();
  const Circuit prep = basis_prep_circuit(pairing);

  // O^dagger: preparation gates reversed (all involved gates are self-adjoint).
  if (control && style == ControlStyle::PerGate) {
    for (auto it = prep.ops.rbegin(); it != prep.ops.rend(); ++it)
      c.push(control_gate(*it, *control));
  } else {
    for (auto it = prep.ops.rbegin(); it != prep.ops.rend(); ++it) c.push(*it);
  }

  // I - 2|0..0><0..0| = X-wall . S1 . X-wall; a control joins the phase gate.
  for (int q = 0; q < n; ++q) c.push(GateOp::simple(GateKind::X, {q}));
  std::vector<int> phase_qubits;
  if (control) phase_qubits.push_back(*control);
  for (int q = 0; q < n; ++q) phase_qubits.push_back(q);
  c.push(GateOp::s1(std::move(phase_qubits)));
  for (int q = 0; q < n; ++q) c.push(GateOp::simple(GateKind::X, {q}));

  if (control && style == ControlStyle::PerGate) {
    for (const auto& op : prep.ops) c.push(control_gate(op, *control));
  } else {
    for (const auto& op : prep.ops) c.push(op);
  }
}

}  // namespace

Circuit reflection_circuit(const Pairing& pairing, std::optional<int> control,
                           ControlStyle style) {
  if (!pairing.is_perfect_matching())
    throw std::invalid_argument("pairing is not a perfect matching");
  const int n = pairing.n_qubits();
  Circuit c;
  c.n_system = n;
  if (control) {
    if (*control < n) throw std::invalid_argument("control must lie outside the system register");
    c.n_ancilla = *control - n + 1;
  }
  append_reflection(c, pairing, control, style);
  return c;
}

Circuit orthogonalization_round_circuit(const std::vector<Pairing>& prior_pairings,
                                        ControlStyle style) {
  if (prior_pairings.empty())
    throw std::invalid_argument("at least one prior state is needed for a round");
  const int n = prior_pairings.front().n_qubits();
  for (const auto& p : prior_pairings)
    if (p.n_qubits() != n) throw std::invalid_argument("priors live on different registers");

  Circuit c;
  c.n_system = n;
  c.n_ancilla = static_cast<int>(prior_pairings.size());
  for (int i = 0; i < c.n_ancilla; ++i) {
    const int anc = n + i;
    c.push(GateOp::simple(GateKind::H, {anc}));
    append_reflection(c, prior_pairings[i], anc, style);
    c.push(GateOp::simple(GateKind::H, {anc}));
    c.measured.insert(anc);
  }
  return c;
}

SimOutcome simulate(const Circuit& circuit, const QuantumState& input, RandomSource& rng) {
  if (input.n_qubits() != circuit.n_system)
    throw std::invalid_argument("input does not match the system register");
  const int n = circuit.n_total();
  const int na = circuit.n_ancilla;
  std::vector<cdouble> amps(std::uint64_t(1) << n, cdouble(0.0));
  for (std::uint64_t i = 0; i < input.dim(); ++i) amps[i << na] = input.amplitude(i);

  for (const auto& op : circuit.ops)
    apply_gate_inplace(amps, n, gate_matrix(op), op.qubits);
  QuantumState full(n, std::move(amps));

  if (circuit.measured.empty())
    return SimOutcome{std::move(full), {}, 1.0};

  std::vector<int> targets(circuit.measured.begin(), circuit.measured.end());
  MeasureResult m = measure_qubits(full, targets, rng);

  // Drop the measured ancillas (each is in a definite basis state now).
  std::vector<int> keep;
  for (int q = 0; q < n; ++q)
    if (!circuit.measured.count(q)) keep.push_back(q);
  const int nk = static_cast<int>(keep.size());
  std::vector<cdouble> sub(std::uint64_t(1) << nk, cdouble(0.0));
  for (std::uint64_t idx = 0; idx < m.collapsed.dim(); ++idx) {
    bool match = true;
    for (size_t i = 0; i < targets.size(); ++i)
      if (bit_of(idx, n, targets[i]) != m.bits[i]) { match = false; break; }
    if (!match) continue;
    std::uint64_t s = 0;
    for (int i = 0; i < nk; ++i) s |= std::uint64_t(bit_of(idx, n, keep[i])) << (nk - 1 - i);
    sub[s] = m.collapsed.amplitude(idx);
  }
  return SimOutcome{QuantumState(nk, std::move(sub)), std::move(m.bits), m.probability};
}

Eigen::MatrixXcd unitary_of(const Circuit& circuit) {
  if (!circuit.measured.empty())
    throw std::invalid_argument("unitary extraction needs a measurement-free circuit");
  const int n = circuit.n_total();
  if (n > kDenseUnitaryCap) throw ResourceError("dense unitary capped at 12 qubits");
  const std::uint64_t dim = std::uint64_t(1) << n;
  std::vector<GateMatrix> mats;
  mats.reserve(circuit.ops.size());
  for (const auto& op : circuit.ops) mats.push_back(gate_matrix(op));
  Eigen::MatrixXcd u(dim, dim);
  std::vector<cdouble> col(dim);
  for (std::uint64_t j = 0; j < dim; ++j) {
    std::fill(col.begin(), col.end(), cdouble(0.0));
    col[j] = 1.0;
    for (size_t g = 0; g < mats.size(); ++g)
      apply_gate_inplace(col, n, mats[g], circuit.ops[g].qubits);
    for (std::uint64_t i = 0; i < dim; ++i) u(i, j) = col[i];
  }
  return u;
}

}  // namespace dfsprep
