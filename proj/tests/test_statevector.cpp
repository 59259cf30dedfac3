#include <doctest.h>

#include <cmath>

#include "dfsprep/basis.hpp"
#include "dfsprep/circuit.hpp"
#include "dfsprep/statevector.hpp"

using namespace dfsprep;

namespace {

QuantumState ket(int n, std::uint64_t idx) { return QuantumState::computational_basis(n, idx); }

const GateMatrix kX = gate_matrix(GateOp::simple(GateKind::X, {0}));
const GateMatrix kH = gate_matrix(GateOp::simple(GateKind::H, {0}));
const GateMatrix kZ = gate_matrix(GateOp::simple(GateKind::Z, {0}));
const GateMatrix kCnot = gate_matrix(GateOp::simple(GateKind::CNOT, {0, 1}));

// Eq.-style four-qubit pairing states written out longhand, independent of
// pairing_to_state, for oracle checks.
QuantumState a1_n4() {
  std::vector<cdouble> v(16, 0.0);
  v[0b0101] = 0.5; v[0b0110] = -0.5; v[0b1001] = -0.5; v[0b1010] = 0.5;
  return QuantumState(4, v);
}
QuantumState a2_n4() {
  std::vector<cdouble> v(16, 0.0);
  v[0b0011] = 0.5; v[0b0110] = -0.5; v[0b1001] = -0.5; v[0b1100] = 0.5;
  return QuantumState(4, v);
}

}  // namespace

TEST_CASE("pauli X flips a single qubit") {
  const int t[] = {0};
  const QuantumState out = apply_gate(ket(1, 0), kX, t);
  CHECK(std::abs(out.amplitude(1) - 1.0) < 1e-12);
}

TEST_CASE("H then CNOT builds the Bell pair, Z fixes the singlet sign") {
  // start |01> (second qubit flipped), H on 0, CNOT 0->1: (|01> + |10>)/sqrt2
  QuantumState s = ket(2, 0);
  const int q1[] = {1};
  const int q0[] = {0};
  const int q01[] = {0, 1};
  s = apply_gate(s, kX, q1);
  s = apply_gate(s, kH, q0);
  s = apply_gate(s, kCnot, q01);
  CHECK(std::abs(s.amplitude(0b01) - 1 / std::sqrt(2.0)) < 1e-12);
  CHECK(std::abs(s.amplitude(0b10) - 1 / std::sqrt(2.0)) < 1e-12);
  s = apply_gate(s, kZ, q0);
  CHECK(std::abs(s.amplitude(0b01) - 1 / std::sqrt(2.0)) < 1e-12);
  CHECK(std::abs(s.amplitude(0b10) + 1 / std::sqrt(2.0)) < 1e-12);
}

TEST_CASE("gate then adjoint restores the state") {
  RandomSource rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<cdouble> v(8);
    double norm = 0;
    for (auto& x : v) {
      x = cdouble(rng.uniform() - 0.5, rng.uniform() - 0.5);
      norm += std::norm(x);
    }
    for (auto& x : v) x /= std::sqrt(norm);
    const QuantumState s(3, v);
    const GateMatrix u = gate_matrix(GateOp::rotation(GateKind::RX, 1.2345, 0));
    const int t[] = {1};
    const QuantumState round_trip = apply_gate(apply_gate(s, u, t), u.adjoint(), t);
    for (std::uint64_t i = 0; i < 8; ++i)
      CHECK(std::abs(round_trip.amplitude(i) - s.amplitude(i)) < 1e-10);
  }
}

TEST_CASE("norm preserved by every gate application") {
  RandomSource rng(3);
  QuantumState s = ket(4, 5);
  for (int i = 0; i < 200; ++i) {
    const int q = int(rng.next_u64() % 4);
    const GateMatrix u = gate_matrix(GateOp::rotation(GateKind::RZ, rng.uniform() * 6, q));
    const int t[] = {q};
    s = apply_gate(s, u, t);
    CHECK(std::abs(s.norm() - 1.0) < 1e-12);
  }
}

TEST_CASE("argument errors: bad targets") {
  const int dup[] = {0, 0};
  const int oob[] = {5, 1};
  CHECK_THROWS_AS(apply_gate(ket(2, 0), kCnot, dup), std::invalid_argument);
  CHECK_THROWS_AS(apply_gate(ket(2, 0), kCnot, oob), std::invalid_argument);
  CHECK_THROWS_AS(inner_product(ket(2, 0), ket(3, 0)), std::invalid_argument);
}

TEST_CASE("deterministic measurement of a basis state") {
  RandomSource rng(1);
  const int t[] = {0};
  const MeasureResult m = measure_qubits(ket(1, 0), t, rng);
  CHECK(m.bits == std::vector<int>{0});
  CHECK(m.probability == doctest::Approx(1.0));
  CHECK(std::abs(m.collapsed.amplitude(0) - 1.0) < 1e-15);
}

TEST_CASE("born statistics of the plus state") {
  const int t[] = {0};
  QuantumState plus = apply_gate(ket(1, 0), kH, t);
  RandomSource rng(42);
  int zeros = 0;
  const int trials = 10000;
  for (int i = 0; i < trials; ++i) {
    RandomSource per(RandomSource::derive_seed(42, i));
    if (measure_qubits(plus, t, per).bits[0] == 0) ++zeros;
  }
  const double freq = double(zeros) / trials;
  const double sigma = std::sqrt(0.25 / trials);
  CHECK(std::abs(freq - 0.5) < 3 * sigma);
}

TEST_CASE("measurement completeness: outcome probabilities sum to one") {
  RandomSource rng(11);
  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<cdouble> v(16);
    double norm = 0;
    for (auto& x : v) {
      x = cdouble(rng.uniform() - 0.5, rng.uniform() - 0.5);
      norm += std::norm(x);
    }
    for (auto& x : v) x /= std::sqrt(norm);
    const QuantumState s(4, v);
    const int t[] = {1, 3};
    const auto probs = outcome_probabilities(s, t);
    double sum = 0;
    for (double p : probs) sum += p;
    CHECK(std::abs(sum - 1.0) < 1e-10);
  }
}

TEST_CASE("single-ancilla round branch weight on the second pairing state is 3/4") {
  // single deflation survival probability: 1 - |<a1|a2>|^2 = 3/4
  const QuantumState a1 = a1_n4();
  const QuantumState a2 = a2_n4();
  const cdouble ov = inner_product(a1, a2);
  CHECK(std::abs(ov - cdouble(0.5)) < 1e-12);
  const RawVector defl = rank1_deflate(RawVector::from(a2), a1);
  CHECK(defl.norm * defl.norm == doctest::Approx(0.75).epsilon(1e-12));
}

TEST_CASE("fidelity is phase invariant and normalized") {
  const QuantumState a1 = a1_n4();
  std::vector<cdouble> v = a1.amplitudes();
  const cdouble phase = std::polar(1.0, 0.8121);
  for (auto& x : v) x *= phase;
  const QuantumState rotated(4, v);
  CHECK(fidelity(a1, rotated) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(fidelity(a1, a1) == doctest::Approx(1.0));
}

TEST_CASE("deflation: self-annihilation, idempotence, orthogonality") {
  const QuantumState a1 = a1_n4();
  const QuantumState a2 = a2_n4();
  const RawVector zero = rank1_deflate(RawVector::from(a1), a1);
  CHECK(zero.norm < 1e-12);

  RandomSource rng(5);
  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<cdouble> v(16);
    for (auto& x : v) x = cdouble(rng.uniform() - 0.5, rng.uniform() - 0.5);
    double n = 0;
    for (auto& x : v) n += std::norm(x);
    for (auto& x : v) x /= std::sqrt(n);
    const QuantumState s(4, v);
    const RawVector once = rank1_deflate(RawVector::from(s), a2);
    const RawVector twice = rank1_deflate(once, a2);
    for (std::uint64_t i = 0; i < 16; ++i)
      CHECK(std::abs(once.amplitudes[i] - twice.amplitudes[i]) < 1e-12);
    cdouble overlap = 0;
    for (std::uint64_t i = 0; i < 16; ++i)
      overlap += std::conj(a2.amplitude(i)) * once.amplitudes[i];
    CHECK(std::abs(overlap) < 1e-12);
  }
}

TEST_CASE("phase normalization pins the dominant amplitude") {
  std::vector<cdouble> v(4, 0.0);
  v[1] = cdouble(0, 0.8);
  v[2] = 0.6;
  const QuantumState s = phase_normalize(QuantumState(4 / 2, v));
  CHECK(s.amplitude(1).real() == doctest::Approx(0.8));
  CHECK(std::abs(s.amplitude(1).imag()) < 1e-12);
}

TEST_CASE("outcomes below the probability guard are never sampled") {
  // amplitude 1e-9 carries probability 1e-18, under the 1e-15 guard
  std::vector<cdouble> v(2, 0.0);
  v[0] = std::sqrt(1.0 - 1e-18);
  v[1] = 1e-9;
  const QuantumState s(1, v);
  const int t[] = {0};
  for (int i = 0; i < 2000; ++i) {
    RandomSource rng(RandomSource::derive_seed(321, i));
    CHECK(measure_qubits(s, t, rng).bits[0] == 0);
  }
}
