#include "dfsprep/basis.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numeric>

namespace dfsprep {

namespace {

void require_even(int n_qubits) {
  if (n_qubits < 2 || n_qubits % 2 != 0)
    throw std::invalid_argument("qubit count must be even and at least 2");
}

}  // namespace

bool ParenSequence::valid() const {
  int depth = 0;
  for (char c : chars) {
    if (c == '(')
      ++depth;
    else if (c == ')')
      --depth;
    else
      return false;
    if (depth < 0) return false;
  }
  return depth == 0;
}

bool Pairing::is_perfect_matching() const {
  const int n = n_qubits();
  if (n == 0) return false;
  std::vector<bool> seen(n + 1, false);
  int last_first = 0;
  for (const auto& [a, b] : pairs) {
    if (a < 1 || b < 1 || a > n || b > n || a >= b) return false;
    if (seen[a] || seen[b]) return false;
    if (a < last_first) return false;  // sorted by first element
    seen[a] = seen[b] = true;
    last_first = a;
  }
  return true;
}

std::uint64_t dfs_dimension(int n_qubits) {
  require_even(n_qubits);
  const std::uint64_t p = n_qubits / 2;
  // Catalan(p) by the multiplicative recurrence, exact in 64 bits for desk sizes.
  std::uint64_t c = 1;
  for (std::uint64_t i = 0; i < p; ++i) c = c * 2 * (2 * i + 1) / (i + 2);
  return c;
}

std::uint64_t pairing_count(int n_qubits) {
  require_even(n_qubits);
  std::uint64_t f = 1;
  for (int k = n_qubits - 1; k > 1; k -= 2) f *= static_cast<std::uint64_t>(k);
  return f;
}

std::vector<ParenSequence> enumerate_parens(int pairs) {
  if (pairs < 0) throw std::invalid_argument("pair count must be nonnegative");
  if (pairs == 0) return {ParenSequence{""}};
  std::vector<ParenSequence> out;
  for (int inner = 0; inner < pairs; ++inner) {
    const auto heads = enumerate_parens(inner);
    const auto tails = enumerate_parens(pairs - 1 - inner);
    for (const auto& a : heads)
      for (const auto& b : tails) out.push_back(ParenSequence{"(" + a.chars + ")" + b.chars});
  }
  return out;
}

Pairing parens_to_pairing(const ParenSequence& seq) {
  if (!seq.valid() || seq.chars.empty())
    throw std::invalid_argument("invalid parentheses sequence");
  std::vector<int> open, close;
  for (int i = 0; i < static_cast<int>(seq.chars.size()); ++i)
    (seq.chars[i] == '(' ? open : close).push_back(i + 1);
  Pairing p;
  for (size_t m = 0; m < open.size(); ++m) p.pairs.emplace_back(open[m], close[m]);
  return p;
}

QuantumState pairing_to_state(const Pairing& pairing) {
  if (!pairing.is_perfect_matching())
    throw std::invalid_argument("pairing is not a perfect matching");
  const int n = pairing.n_qubits();
  const int np = static_cast<int>(pairing.pairs.size());
  std::vector<cdouble> amps(std::uint64_t(1) << n, cdouble(0.0));
  const double mag = std::pow(1.0 / std::sqrt(2.0), np);
  // Each pair contributes |0_i 1_j> - |1_i 0_j>; expand the product.
  for (std::uint64_t choice = 0; choice < (std::uint64_t(1) << np); ++choice) {
    std::uint64_t idx = 0;
    double sign = 1.0;
    for (int m = 0; m < np; ++m) {
      const auto [i, j] = pairing.pairs[m];
      if (choice & (std::uint64_t(1) << m)) {
        idx |= std::uint64_t(1) << (n - i);  // 1 at qubit i (1-based label)
        sign = -sign;
      } else {
        idx |= std::uint64_t(1) << (n - j);  // 1 at qubit j
      }
    }
    amps[idx] += sign * mag;
  }
  return QuantumState(n, std::move(amps));
}

std::pair<BasisMatrix, SpectralInfo> build_basis_matrix(int n_qubits) {
  require_even(n_qubits);
  if (n_qubits > kDenseBasisCap)
    throw ResourceError("dense basis materialization capped at 12 qubits");
  BasisMatrix bm;
  bm.n_qubits = n_qubits;
  for (const auto& seq : enumerate_parens(n_qubits / 2)) {
    bm.pairings.push_back(parens_to_pairing(seq));
    bm.columns.push_back(pairing_to_state(bm.pairings.back()));
  }

  const int d = static_cast<int>(bm.columns.size());
  Eigen::MatrixXcd gram(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) gram(i, j) = inner_product(bm.columns[i], bm.columns[j]);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(gram);
  const auto& ev = es.eigenvalues();
  if (ev(0) < 1e-10) throw DegeneracyError("basis matrix is rank deficient");
  SpectralInfo info;
  info.sigma_max = std::sqrt(ev(d - 1));
  info.sigma_min = std::sqrt(ev(0));
  info.kappa = info.sigma_max / info.sigma_min;
  return {std::move(bm), info};
}

namespace {

// S_a |psi> = sum_i sigma_a^(i) |psi> for a in {x,y,z}, bare Pauli convention.
std::vector<cdouble> collective_pauli(const std::vector<cdouble>& amps, int n, char axis) {
  std::vector<cdouble> out(amps.size(), cdouble(0.0));
  for (int q = 0; q < n; ++q) {
    const std::uint64_t bit = std::uint64_t(1) << (n - 1 - q);
    for (std::uint64_t idx = 0; idx < amps.size(); ++idx) {
      const bool one = idx & bit;
      switch (axis) {
        case 'x':
          out[idx ^ bit] += amps[idx];
          break;
        case 'y':
          out[idx ^ bit] += (one ? cdouble(0, -1) : cdouble(0, 1)) * amps[idx];
          break;
        default:
          out[idx] += (one ? -1.0 : 1.0) * amps[idx];
      }
    }
  }
  return out;
}

}  // namespace

double verify_dfs_membership(const QuantumState& state) {
  const int n = state.n_qubits();
  std::vector<cdouble> total(state.dim(), cdouble(0.0));
  for (char axis : {'x', 'y', 'z'}) {
    auto once = collective_pauli(state.amplitudes(), n, axis);
    auto twice = collective_pauli(once, n, axis);
    for (std::uint64_t i = 0; i < total.size(); ++i) total[i] += twice[i];
  }
  double s = 0.0;
  for (const auto& x : total) s += std::norm(x);
  return std::sqrt(s);
}

int s2_nullspace_dimension(int n_qubits) {
  require_even(n_qubits);
  if (n_qubits > 10) throw ResourceError("dense S^2 eigendecomposition capped at 10 qubits");
  const std::uint64_t dim = std::uint64_t(1) << n_qubits;
  Eigen::MatrixXcd s2 = Eigen::MatrixXcd::Zero(dim, dim);
  std::vector<cdouble> col(dim);
  for (std::uint64_t j = 0; j < dim; ++j) {
    std::fill(col.begin(), col.end(), cdouble(0.0));
    col[j] = 1.0;
    std::vector<cdouble> acc(dim, cdouble(0.0));
    for (char axis : {'x', 'y', 'z'}) {
      auto once = collective_pauli(col, n_qubits, axis);
      auto twice = collective_pauli(once, n_qubits, axis);
      for (std::uint64_t i = 0; i < dim; ++i) acc[i] += twice[i];
    }
    for (std::uint64_t i = 0; i < dim; ++i) s2(i, j) = acc[i];
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(s2);
  int count = 0;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i)
    if (es.eigenvalues()(i) < 0.5) ++count;  // spectrum is integer-gapped
  return count;
}

}  // namespace dfsprep
