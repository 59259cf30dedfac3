#include "dfsprep/statevector.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace dfsprep {

namespace {

double vec_norm(const std::vector<cdouble>& a) {
  double s = 0.0;
  for (const auto& x : a) s += std::norm(x);
  return std::sqrt(s);
}

void check_targets(int n_qubits, std::span<const int> targets, int arity) {
  if (static_cast<int>(targets.size()) != arity)
    throw std::invalid_argument("gate arity does not match target count");
  for (size_t i = 0; i < targets.size(); ++i) {
    if (targets[i] < 0 || targets[i] >= n_qubits)
      throw std::invalid_argument("gate target out of range");
    for (size_t j = i + 1; j < targets.size(); ++j)
      if (targets[i] == targets[j]) throw std::invalid_argument("duplicated gate target");
  }
}

}  // namespace

QuantumState::QuantumState(int n_qubits, std::vector<cdouble> amplitudes)
    : n_qubits_(n_qubits), amps_(std::move(amplitudes)) {
  if (n_qubits < 1) throw std::invalid_argument("state needs at least one qubit");
  if (amps_.size() != (std::uint64_t(1) << n_qubits))
    throw std::invalid_argument("amplitude count does not match qubit count");
  double n = vec_norm(amps_);
  if (std::abs(n - 1.0) > 1e-9) throw std::invalid_argument("state is not normalized");
  if (std::abs(n - 1.0) > 1e-13) {  // refresh tiny drift so invariants stay tight
    for (auto& x : amps_) x /= n;
  }
}

QuantumState QuantumState::computational_basis(int n_qubits, std::uint64_t index) {
  std::vector<cdouble> a(std::uint64_t(1) << n_qubits, cdouble(0.0));
  a.at(index) = 1.0;
  return QuantumState(n_qubits, std::move(a));
}

double QuantumState::norm() const { return vec_norm(amps_); }

RawVector RawVector::from(const QuantumState& s) {
  return RawVector{s.n_qubits(), s.amplitudes(), s.norm()};
}

QuantumState RawVector::normalized(double tol) const {
  if (norm <= tol) throw std::invalid_argument("cannot normalize an annihilated vector");
  std::vector<cdouble> a(amplitudes);
  for (auto& x : a) x /= norm;
  return QuantumState(n_qubits, std::move(a));
}

GateMatrix::GateMatrix(int arity, bool diagonal, std::vector<cdouble> entries)
    : arity_(arity), diagonal_(diagonal), entries_(std::move(entries)) {}

GateMatrix GateMatrix::dense(int arity, std::vector<cdouble> row_major) {
  if (arity < 1 || arity > 3) throw std::invalid_argument("dense gates support 1..3 qubits");
  const std::uint64_t d = std::uint64_t(1) << arity;
  if (row_major.size() != d * d) throw std::invalid_argument("gate matrix has wrong size");
  // U U^dagger = I within 1e-12
  for (std::uint64_t i = 0; i < d; ++i) {
    for (std::uint64_t j = 0; j < d; ++j) {
      cdouble s = 0.0;
      for (std::uint64_t k = 0; k < d; ++k)
        s += row_major[i * d + k] * std::conj(row_major[j * d + k]);
      if (std::abs(s - (i == j ? 1.0 : 0.0)) > 1e-12)
        throw std::invalid_argument("gate matrix is not unitary");
    }
  }
  return GateMatrix(arity, false, std::move(row_major));
}

GateMatrix GateMatrix::diagonal(int arity, std::vector<cdouble> diag) {
  if (arity < 1 || arity > 16) throw std::invalid_argument("diagonal gate arity out of range");
  if (diag.size() != (std::uint64_t(1) << arity))
    throw std::invalid_argument("diagonal has wrong size");
  for (const auto& x : diag)
    if (std::abs(std::abs(x) - 1.0) > 1e-12)
      throw std::invalid_argument("diagonal gate is not unitary");
  return GateMatrix(arity, true, std::move(diag));
}

GateMatrix GateMatrix::phase_flip_all_ones(int n) {
  std::vector<cdouble> d(std::uint64_t(1) << n, cdouble(1.0));
  d.back() = -1.0;
  return diagonal(n, std::move(d));
}

GateMatrix GateMatrix::adjoint() const {
  std::vector<cdouble> e(entries_.size());
  if (diagonal_) {
    for (size_t i = 0; i < entries_.size(); ++i) e[i] = std::conj(entries_[i]);
  } else {
    const std::uint64_t d = std::uint64_t(1) << arity_;
    for (std::uint64_t i = 0; i < d; ++i)
      for (std::uint64_t j = 0; j < d; ++j) e[j * d + i] = std::conj(entries_[i * d + j]);
  }
  return GateMatrix(arity_, diagonal_, std::move(e));
}

void apply_gate_inplace(std::vector<cdouble>& amps, int n_qubits, const GateMatrix& gate,
                        std::span<const int> targets) {
  check_targets(n_qubits, targets, gate.arity());
  const int k = gate.arity();
  const std::uint64_t dim = std::uint64_t(1) << n_qubits;
  const std::uint64_t sub = std::uint64_t(1) << k;

  // bit position of each target (target 0 = most significant within the gate)
  std::vector<std::uint64_t> tbit(k);
  std::uint64_t tmask = 0;
  for (int i = 0; i < k; ++i) {
    tbit[i] = std::uint64_t(1) << (n_qubits - 1 - targets[i]);
    tmask |= tbit[i];
  }

  if (gate.is_diagonal()) {
    const auto& d = gate.entries();
    for (std::uint64_t idx = 0; idx < dim; ++idx) {
      std::uint64_t s = 0;
      for (int i = 0; i < k; ++i)
        if (idx & tbit[i]) s |= sub >> (i + 1);
      amps[idx] *= d[s];
    }
    return;
  }

  const auto& m = gate.entries();
  std::vector<cdouble> scratch(sub);
  for (std::uint64_t base = 0; base < dim; ++base) {
    if (base & tmask) continue;  // enumerate each gate-subspace once
    for (std::uint64_t s = 0; s < sub; ++s) {
      std::uint64_t idx = base;
      for (int i = 0; i < k; ++i)
        if (s & (sub >> (i + 1))) idx |= tbit[i];
      scratch[s] = amps[idx];
    }
    for (std::uint64_t r = 0; r < sub; ++r) {
      cdouble acc = 0.0;
      for (std::uint64_t c = 0; c < sub; ++c) acc += m[r * sub + c] * scratch[c];
      std::uint64_t idx = base;
      for (int i = 0; i < k; ++i)
        if (r & (sub >> (i + 1))) idx |= tbit[i];
      amps[idx] = acc;
    }
  }
}

QuantumState apply_gate(const QuantumState& state, const GateMatrix& gate,
                        std::span<const int> targets) {
  std::vector<cdouble> a = state.amplitudes();
  apply_gate_inplace(a, state.n_qubits(), gate, targets);
  return QuantumState(state.n_qubits(), std::move(a));
}

std::vector<double> outcome_probabilities(const QuantumState& state,
                                          std::span<const int> targets) {
  check_targets(state.n_qubits(), targets, static_cast<int>(targets.size()));
  if (targets.size() > 24) throw std::invalid_argument("too many measured qubits");
  const int k = static_cast<int>(targets.size());
  std::vector<double> prob(std::uint64_t(1) << k, 0.0);
  const auto& amps = state.amplitudes();
  for (std::uint64_t idx = 0; idx < state.dim(); ++idx) {
    double p = std::norm(amps[idx]);
    if (p == 0.0) continue;
    std::uint64_t o = 0;
    for (int i = 0; i < k; ++i)
      o = (o << 1) | std::uint64_t(bit_of(idx, state.n_qubits(), targets[i]));
    prob[o] += p;
  }
  return prob;
}

MeasureResult measure_qubits(const QuantumState& state, std::span<const int> targets,
                             RandomSource& rng) {
  const int k = static_cast<int>(targets.size());
  std::vector<double> prob = outcome_probabilities(state, targets);

  // Outcomes below the zero-probability guard are unreachable; renormalize the
  // rest so the sampler cannot land on numerical noise.
  constexpr double kZeroGuard = 1e-15;
  double total = 0.0;
  for (double& p : prob) {
    if (p < kZeroGuard) p = 0.0;
    total += p;
  }
  const double u = rng.uniform() * total;
  double acc = 0.0;
  std::uint64_t outcome = 0;
  for (std::uint64_t o = 0; o < prob.size(); ++o) {
    acc += prob[o];
    if (u < acc || o + 1 == prob.size()) {
      outcome = o;
      while (prob[outcome] == 0.0) --outcome;  // guard against end-of-loop fallthrough
      break;
    }
  }

  std::vector<int> bits(k);
  for (int i = 0; i < k; ++i) bits[i] = static_cast<int>((outcome >> (k - 1 - i)) & 1u);

  std::vector<cdouble> a = state.amplitudes();
  const double scale = 1.0 / std::sqrt(prob[outcome]);
  for (std::uint64_t idx = 0; idx < state.dim(); ++idx) {
    std::uint64_t o = 0;
    for (int i = 0; i < k; ++i)
      o = (o << 1) | std::uint64_t(bit_of(idx, state.n_qubits(), targets[i]));
    a[idx] = (o == outcome) ? a[idx] * scale : cdouble(0.0);
  }
  return MeasureResult{std::move(bits), QuantumState(state.n_qubits(), std::move(a)),
                       prob[outcome]};
}

cdouble inner_product(const QuantumState& u, const QuantumState& v) {
  if (u.n_qubits() != v.n_qubits())
    throw std::invalid_argument("inner product needs equal qubit counts");
  cdouble s = 0.0;
  for (std::uint64_t i = 0; i < u.dim(); ++i)
    s += std::conj(u.amplitude(i)) * v.amplitude(i);
  return s;
}

double fidelity(const QuantumState& u, const QuantumState& v) {
  return std::norm(inner_product(u, v));
}

RawVector rank1_deflate(const RawVector& v, const QuantumState& a) {
  if (v.n_qubits != a.n_qubits())
    throw std::invalid_argument("deflation needs equal qubit counts");
  cdouble overlap = 0.0;
  for (std::uint64_t i = 0; i < a.dim(); ++i)
    overlap += std::conj(a.amplitude(i)) * v.amplitudes[i];
  RawVector out;
  out.n_qubits = v.n_qubits;
  out.amplitudes.resize(v.amplitudes.size());
  for (std::uint64_t i = 0; i < a.dim(); ++i)
    out.amplitudes[i] = v.amplitudes[i] - a.amplitude(i) * overlap;
  out.norm = vec_norm(out.amplitudes);
  return out;
}

QuantumState phase_normalize(const QuantumState& s) {
  double maxmag = 0.0;
  for (const auto& x : s.amplitudes()) maxmag = std::max(maxmag, std::abs(x));
  if (maxmag == 0.0) return s;
  std::uint64_t pivot = 0;
  for (std::uint64_t i = 0; i < s.dim(); ++i) {
    if (std::abs(s.amplitude(i)) >= maxmag * (1.0 - 1e-9)) {
      pivot = i;
      break;
    }
  }
  cdouble ph = s.amplitude(pivot) / std::abs(s.amplitude(pivot));
  std::vector<cdouble> a = s.amplitudes();
  for (auto& x : a) x /= ph;
  return QuantumState(s.n_qubits(), std::move(a));
}

}  // namespace dfsprep
