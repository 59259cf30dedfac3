#include "dfsprep/transpile.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <future>
#include <numbers>
#include <thread>

namespace dfsprep {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kDefaultRabi = 2.0 * kPi * 25e6;
constexpr double kTPiAtDefaultNs = 10.0;

double canonical_angle(double theta) {
  double t = std::remainder(theta, 2.0 * kPi);
  if (t <= -kPi + 1e-15) t = kPi;  // fold -pi onto +pi
  return t;
}

bool near(double a, double b) { return std::abs(a - b) < 1e-12; }

class Emitter {
 public:
  void rz(int q, double theta) {
    theta = canonical_angle(theta);
    if (near(theta, 0.0)) return;
    ops_.push_back(GateOp::rotation(GateKind::RZ, theta, q));
  }

  void x90(int q, double sign = 1.0) {
    ops_.push_back(GateOp::rotation(GateKind::RX, sign * kPi / 2, q));
  }

  /// RX at calibrated pulse angles only; everything else becomes two pi/2
  /// pulses inside virtual-Z frame updates.
  void rx(int q, double theta) {
    theta = canonical_angle(theta);
    if (near(theta, 0.0)) return;
    if (near(std::abs(theta), kPi / 2) || near(theta, kPi)) {
      ops_.push_back(GateOp::rotation(GateKind::RX, theta, q));
      return;
    }
    // RX(t) = RZ(pi/2) RX90 RZ(t - pi) RX90 RZ(pi/2) up to a global phase
    rz(q, kPi / 2);
    x90(q);
    rz(q, theta - kPi);
    x90(q);
    rz(q, kPi / 2);
  }

  void ry(int q, double theta) {  // RY(t) = RZ(-pi/2) RX(-t) RZ(pi/2)
    rz(q, kPi / 2);
    rx(q, -theta);
    rz(q, -kPi / 2);
  }

  void h(int q) {  // H = RZ(pi/2) RX(pi/2) RZ(pi/2) up to phase
    rz(q, kPi / 2);
    x90(q);
    rz(q, kPi / 2);
  }

  void x(int q) { ops_.push_back(GateOp::rotation(GateKind::RX, kPi, q)); }
  void z(int q) { rz(q, kPi); }
  void t(int q) { rz(q, kPi / 4); }
  void tdg(int q) { rz(q, -kPi / 4); }

  void iswap(int a, int b) { ops_.push_back(GateOp::simple(GateKind::ISWAP, {a, b})); }

  /// Two-pulse XY core: CNOT = locals . iSWAP . RX_c(pi/2) . iSWAP . locals.
  void cnot(int c, int t) {
    rz(t, -kPi / 2);
    rz(c, kPi);
    rz(t, kPi);
    iswap(c, t);
    x90(c);
    iswap(c, t);
    rz(t, kPi / 2);
    rz(c, kPi / 2);
    x90(t);
  }

  void cz(int c, int t) {
    h(t);
    cnot(c, t);
    h(t);
  }

  void ch(int c, int t) {  // CH = (I x RY(pi/4)) CZ (I x RY(-pi/4))
    ry(t, -kPi / 4);
    cz(c, t);
    ry(t, kPi / 4);
  }

  /// Phase-polynomial Toffoli skeleton: six CNOT cores, all other content is
  /// virtual Z. The Hadamard pair around it turns the phase flip into CCX.
  void ccz(int c1, int c2, int tq) {
    cnot(c2, tq);
    tdg(tq);
    cnot(c1, tq);
    t(tq);
    cnot(c2, tq);
    tdg(tq);
    cnot(c1, tq);
    t(c2);
    t(tq);
    cnot(c1, c2);
    t(c1);
    tdg(c2);
    cnot(c1, c2);
  }

  void ccx(int c1, int c2, int tq) {
    h(tq);
    ccz(c1, c2, tq);
    h(tq);
  }

  /// AND-ladder phase gate; scratch qubits hold the running conjunction and
  /// are uncomputed afterwards.
  void s1(const std::vector<int>& qs, const std::vector<int>& scratch) {
    const int n = static_cast<int>(qs.size());
    if (n == 1) {
      z(qs[0]);
      return;
    }
    if (n == 2) {
      cz(qs[0], qs[1]);
      return;
    }
    if (n == 3) {
      ccz(qs[0], qs[1], qs[2]);
      return;
    }
    const int na = n - 3;
    if (static_cast<int>(scratch.size()) < na)
      throw std::invalid_argument("not enough scratch qubits for phase gate");
    std::vector<std::array<int, 3>> computes;
    computes.push_back({qs[0], qs[1], scratch[0]});
    for (int i = 1; i < na; ++i) computes.push_back({qs[1 + i], scratch[i - 1], scratch[i]});
    for (const auto& [a, b, c] : computes) ccx(a, b, c);
    ccz(scratch[na - 1], qs[n - 2], qs[n - 1]);
    for (auto it = computes.rbegin(); it != computes.rend(); ++it) ccx((*it)[0], (*it)[1], (*it)[2]);
  }

  std::vector<GateOp> take() { return std::move(ops_); }

 private:
  std::vector<GateOp> ops_;
};

/// Merge adjacent RZ on the same qubit, dropping anything that cancels.
std::vector<GateOp> merge_rz(std::vector<GateOp> ops) {
  std::vector<GateOp> out;
  for (auto& op : ops) {
    if (op.kind == GateKind::RZ && !out.empty() && out.back().kind == GateKind::RZ &&
        out.back().qubits == op.qubits) {
      const double merged = canonical_angle(out.back().params[0] + op.params[0]);
      out.pop_back();
      if (!near(merged, 0.0)) out.push_back(GateOp::rotation(GateKind::RZ, merged, op.qubits[0]));
      continue;
    }
    if (op.kind == GateKind::RZ && near(canonical_angle(op.params[0]), 0.0)) continue;
    out.push_back(std::move(op));
  }
  return out;
}

void emit_op(Emitter& em, const GateOp& op, const std::vector<int>& scratch) {
  switch (op.kind) {
    case GateKind::X: em.x(op.qubits[0]); return;
    case GateKind::Z: em.z(op.qubits[0]); return;
    case GateKind::H: em.h(op.qubits[0]); return;
    case GateKind::RX: em.rx(op.qubits[0], op.params.at(0)); return;
    case GateKind::RZ: em.rz(op.qubits[0], op.params.at(0)); return;
    case GateKind::RY: em.ry(op.qubits[0], op.params.at(0)); return;
    case GateKind::A: em.rz(op.qubits[0], kPi / 2); return;                       // phase . RZ(pi/2)
    case GateKind::B:                                                             // RZ RX(pi/4) RZ
      em.rz(op.qubits[0], -kPi / 2);
      em.rx(op.qubits[0], kPi / 4);
      em.rz(op.qubits[0], kPi / 2);
      return;
    case GateKind::C:
      em.rz(op.qubits[0], kPi / 2);
      em.rx(op.qubits[0], kPi / 4);
      em.rz(op.qubits[0], kPi);
      return;
    case GateKind::D: em.rz(op.qubits[0], -kPi / 4); return;
    case GateKind::CNOT: em.cnot(op.qubits[0], op.qubits[1]); return;
    case GateKind::CZ: em.cz(op.qubits[0], op.qubits[1]); return;
    case GateKind::CH: em.ch(op.qubits[0], op.qubits[1]); return;
    case GateKind::CCX: em.ccx(op.qubits[0], op.qubits[1], op.qubits[2]); return;
    case GateKind::ISWAP: em.iswap(op.qubits[0], op.qubits[1]); return;
    case GateKind::S1: em.s1(op.qubits, scratch); return;
  }
  throw std::invalid_argument("unknown gate kind in transpilation");
}

}  // namespace

HardwareParams HardwareParams::from_frequencies(double omega_ghz, double rabi_mhz,
                                                double g_mhz) {
  HardwareParams p;
  p.omega = 2.0 * kPi * omega_ghz * 1e9;
  p.rabi = 2.0 * kPi * rabi_mhz * 1e6;
  p.coupling = 2.0 * kPi * g_mhz * 1e6;
  p.validate();
  return p;
}

void HardwareParams::validate() const {
  if (!(omega > 0.0) || !(rabi > 0.0) || !(coupling > 0.0))
    throw std::invalid_argument("hardware frequencies must be positive");
}

double HardwareParams::t_pi_ns() const { return kTPiAtDefaultNs * (kDefaultRabi / rabi); }

double HardwareParams::t_iswap_ns() const { return 3.0 * kPi / (2.0 * coupling) * 1e9; }

int NativeCircuit::iswap_count() const {
  return static_cast<int>(
      std::count_if(ops.begin(), ops.end(), [](const GateOp& g) { return g.kind == GateKind::ISWAP; }));
}

int NativeCircuit::rx_count() const {
  return static_cast<int>(
      std::count_if(ops.begin(), ops.end(), [](const GateOp& g) { return g.kind == GateKind::RX; }));
}

bool CouplingGraph::has_edge(int a, int b) const {
  if (a > b) std::swap(a, b);
  return edges.count({a, b}) > 0;
}

NativeCircuit decompose_gate(const GateOp& gate) {
  NativeCircuit nc;
  int maxq = 0;
  for (int q : gate.qubits) maxq = std::max(maxq, q);
  nc.n_qubits = maxq + 1;

  std::vector<int> scratch;
  if (gate.kind == GateKind::S1 && gate.arity() >= 4) {
    for (int i = 0; i < gate.arity() - 3; ++i) {
      scratch.push_back(nc.n_qubits);
      nc.ancillas.insert(nc.n_qubits);
      ++nc.n_qubits;
    }
  }
  Emitter em;
  emit_op(em, gate, scratch);
  nc.ops = merge_rz(em.take());
  return nc;
}

NativeCircuit synthesize_multiqubit_phase(int n) {
  if (n < 2) throw std::invalid_argument("phase gate needs at least two qubits");
  std::vector<int> qs(n);
  for (int i = 0; i < n; ++i) qs[i] = i;
  return decompose_gate(GateOp::s1(qs));
}

NativeCircuit transpile(const Circuit& circuit) {
  NativeCircuit nc;
  nc.n_qubits = circuit.n_total();

  // Shared scratch pool sized for the widest phase gate; every use restores
  // the pool to |0>, so reuse across gates is sound.
  int pool = 0;
  for (const auto& op : circuit.ops)
    if (op.kind == GateKind::S1 && op.arity() >= 4) pool = std::max(pool, op.arity() - 3);
  std::vector<int> scratch;
  for (int i = 0; i < pool; ++i) {
    scratch.push_back(nc.n_qubits);
    nc.ancillas.insert(nc.n_qubits);
    ++nc.n_qubits;
  }

  Emitter em;
  for (const auto& op : circuit.ops) emit_op(em, op, scratch);
  nc.ops = merge_rz(em.take());
  return nc;
}

ResourceEstimate estimate_resources(const NativeCircuit& native, const HardwareParams& params) {
  params.validate();
  ResourceEstimate est;
  std::vector<double> busy_until(native.n_qubits, 0.0);
  double end = 0.0;
  for (const auto& op : native.ops) {
    double dur = 0.0;
    if (op.kind == GateKind::ISWAP) {
      dur = params.t_iswap_ns();
      ++est.iswap_count;
    } else if (op.kind == GateKind::RX) {
      dur = std::abs(canonical_angle(op.params[0])) / kPi * params.t_pi_ns();
      ++est.single_qubit_count;
    } else if (op.kind != GateKind::RZ) {
      throw std::invalid_argument("non-native gate in resource estimation");
    }
    double start = 0.0;
    for (int q : op.qubits) start = std::max(start, busy_until[q]);
    for (int q : op.qubits) busy_until[q] = start + dur;
    end = std::max(end, start + dur);
  }
  est.duration_ns = end;
  return est;
}

namespace {

Eigen::MatrixXcd native_block(const NativeCircuit& native, int data_qubits,
                              double* max_leak) {
  const int n = native.n_qubits;
  const std::uint64_t full_dim = std::uint64_t(1) << n;
  const std::uint64_t data_dim = std::uint64_t(1) << data_qubits;
  const int anc_bits = n - data_qubits;

  std::vector<GateMatrix> mats;
  mats.reserve(native.ops.size());
  for (const auto& op : native.ops) mats.push_back(gate_matrix(op));

  Eigen::MatrixXcd block(data_dim, data_dim);
  std::vector<double> leaks(data_dim, 0.0);

  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const std::uint64_t chunk = (data_dim + hw - 1) / hw;
  std::vector<std::future<void>> futs;
  for (unsigned w = 0; w < hw; ++w) {
    const std::uint64_t lo = w * chunk, hi = std::min(data_dim, (w + 1) * chunk);
    if (lo >= hi) break;
    futs.push_back(std::async(std::launch::async, [&, lo, hi]() {
      std::vector<cdouble> col(full_dim);
      for (std::uint64_t j = lo; j < hi; ++j) {
        std::fill(col.begin(), col.end(), cdouble(0.0));
        col[j << anc_bits] = 1.0;  // scratch ancillas are the low bits, start |0>
        for (size_t g = 0; g < mats.size(); ++g)
          apply_gate_inplace(col, n, mats[g], native.ops[g].qubits);
        double leak = 0.0;
        for (std::uint64_t i = 0; i < full_dim; ++i) {
          if ((i & ((std::uint64_t(1) << anc_bits) - 1)) == 0)
            block(i >> anc_bits, j) = col[i];
          else
            leak += std::norm(col[i]);
        }
        leaks[j] = std::sqrt(leak);
      }
    }));
  }
  for (auto& f : futs) f.get();
  *max_leak = *std::max_element(leaks.begin(), leaks.end());
  return block;
}

/// min over phi of || U - e^{i phi} V ||_2 for unitary U, V: the eigenphases
/// of V^dagger U lie on the unit circle; center the smallest enclosing arc.
double unitary_phase_distance(const Eigen::MatrixXcd& u, const Eigen::MatrixXcd& v) {
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(v.adjoint() * u, false);
  std::vector<double> phases;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i)
    phases.push_back(std::arg(es.eigenvalues()(i)));
  std::sort(phases.begin(), phases.end());
  const int m = static_cast<int>(phases.size());
  double max_gap = 2.0 * kPi - (phases.back() - phases.front());
  for (int i = 0; i + 1 < m; ++i) max_gap = std::max(max_gap, phases[i + 1] - phases[i]);
  const double half_width = (2.0 * kPi - max_gap) / 2.0;
  return 2.0 * std::sin(std::min(half_width, kPi) / 2.0);
}

}  // namespace

double verify_equivalence(const Circuit& original, const NativeCircuit& native) {
  if (native.n_qubits > kDenseUnitaryCap)
    throw ResourceError("equivalence check capped at 12 joint qubits");
  const int data_qubits = original.n_total();
  if (data_qubits + static_cast<int>(native.ancillas.size()) != native.n_qubits)
    throw std::invalid_argument("native register does not extend the original circuit");

  const Eigen::MatrixXcd u = unitary_of(original.without_measurements());
  double leak = 0.0;
  const Eigen::MatrixXcd block = native_block(native, data_qubits, &leak);

  const Eigen::MatrixXcd gram = block.adjoint() * block;
  const double nonunitary =
      (gram - Eigen::MatrixXcd::Identity(gram.rows(), gram.cols())).cwiseAbs().maxCoeff();
  if (leak < 1e-6 && nonunitary < 1e-6) return unitary_phase_distance(u, block);

  // Leaky block: align phases by trace and take the exact spectral norm.
  cdouble tr = (block.adjoint() * u).trace();
  const cdouble phase = std::abs(tr) > 1e-12 ? tr / std::abs(tr) : cdouble(1.0);
  Eigen::BDCSVD<Eigen::MatrixXcd> svd(u - phase * block);
  return svd.singularValues()(0);
}

IswapDiagnostic iswap_hamiltonian_check(const HardwareParams& params) {
  params.validate();
  Eigen::MatrixXcd sx(2, 2), sy(2, 2), sz(2, 2), id = Eigen::MatrixXcd::Identity(2, 2);
  sx << 0, 1, 1, 0;
  sy << 0, cdouble(0, -1), cdouble(0, 1), 0;
  sz << 1, 0, 0, -1;
  auto kron = [](const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
    Eigen::MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
      for (Eigen::Index j = 0; j < a.cols(); ++j)
        out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
  };
  const Eigen::MatrixXcd zpart = params.omega / 2.0 * (kron(sz, id) + kron(id, sz));
  const Eigen::MatrixXcd xy = kron(sx, sx) + kron(sy, sy);
  const Eigen::MatrixXcd h = zpart + params.coupling * xy;

  Eigen::MatrixXcd iswap = Eigen::MatrixXcd::Zero(4, 4);
  iswap(0, 0) = 1.0;
  iswap(3, 3) = 1.0;
  iswap(1, 2) = cdouble(0, 1);
  iswap(2, 1) = cdouble(0, 1);

  auto expm = [](const Eigen::MatrixXcd& herm, double t) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(herm);
    Eigen::VectorXcd ph(es.eigenvalues().size());
    for (Eigen::Index i = 0; i < ph.size(); ++i)
      ph(i) = std::exp(cdouble(0, -es.eigenvalues()(i) * t));
    return Eigen::MatrixXcd(es.eigenvectors() * ph.asDiagonal() *
                            es.eigenvectors().adjoint());
  };

  // The qubit-frequency part commutes with the XY part and is exactly an RZ
  // frame rotation, so the framed distance reduces to the XY factor alone.
  auto framed = [&](double t) {
    return unitary_phase_distance(expm(params.coupling * xy, t), iswap);
  };

  IswapDiagnostic diag;
  const double t_ref = 3.0 * kPi / (2.0 * params.coupling);
  diag.t_reference_ns = t_ref * 1e9;
  diag.raw_distance = unitary_phase_distance(expm(h, t_ref), iswap);
  diag.framed_distance = framed(t_ref);

  // The framed distance is periodic in t; report the earliest minimizer.
  const int grid = 4096;
  double best_d = diag.framed_distance;
  for (int i = 1; i <= grid; ++i)
    best_d = std::min(best_d, framed(t_ref * 1.5 * i / grid));
  double best_t = t_ref;
  for (int i = 1; i <= grid; ++i) {
    const double t = t_ref * 1.5 * i / grid;
    if (framed(t) < best_d + 1e-2) {  // within one grid step of a minimum
      best_t = t;
      break;
    }
  }
  double lo = best_t - 6 * t_ref * 1.5 / grid, hi = best_t + 6 * t_ref * 1.5 / grid;
  for (int it = 0; it < 80; ++it) {  // ternary refine
    const double m1 = lo + (hi - lo) / 3.0, m2 = hi - (hi - lo) / 3.0;
    if (framed(m1) < framed(m2))
      hi = m2;
    else
      lo = m1;
  }
  best_t = (lo + hi) / 2.0;
  diag.t_star_ns = best_t * 1e9;
  diag.framed_distance_at_t_star = framed(best_t);
  return diag;
}

std::vector<GateOp> check_coupling(const NativeCircuit& native, const CouplingGraph& graph) {
  std::vector<GateOp> violations;
  for (const auto& op : native.ops)
    if (op.kind == GateKind::ISWAP && !graph.has_edge(op.qubits[0], op.qubits[1]))
      violations.push_back(op);
  return violations;
}

CouplingGraph seven_qubit_layout() {
  CouplingGraph g;
  g.n_nodes = 7;
  const std::pair<int, int> edges[] = {{0, 1}, {0, 2}, {1, 3}, {2, 3}, {0, 4}, {1, 4},
                                       {2, 4}, {3, 4}, {0, 5}, {4, 5}, {1, 5}, {1, 6},
                                       {5, 6}, {2, 6}, {3, 6}};
  for (auto e : edges) g.edges.insert(e);
  return g;
}

}  // namespace dfsprep
