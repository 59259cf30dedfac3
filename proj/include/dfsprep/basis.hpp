#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "dfsprep/statevector.hpp"

namespace dfsprep {

/// Balanced parentheses word of length N. Validity: every prefix has at least
/// as many '(' as ')', and the totals match.
struct ParenSequence {
  std::string chars;
  bool valid() const;
};

/// Perfect matching of {1..N} into N/2 pairs, first < second within each pair,
/// pairs sorted by first element. Indices are 1-based to line up with the
/// usual spin-labelling convention; circuit qubits are these minus one.
struct Pairing {
  std::vector<std::pair<int, int>> pairs;

  int n_qubits() const { return static_cast<int>(pairs.size()) * 2; }
  bool is_perfect_matching() const;
};

/// Catalan dimension N!/((N/2)!(N/2+1)!) of the singlet sector.
std::uint64_t dfs_dimension(int n_qubits);

/// (N-1)!!, the number of distinct perfect matchings of N qubits.
std::uint64_t pairing_count(int n_qubits);

/// All valid words with `pairs` parenthesis pairs in the canonical order given
/// by the decomposition S = (A)B with |A| ascending, recursing on both parts.
std::vector<ParenSequence> enumerate_parens(int pairs);

/// m-th '(' position pairs with the m-th ')' position (positions ascending,
/// 1-based). Note this is not the nesting-match rule.
Pairing parens_to_pairing(const ParenSequence& seq);

/// Tensor product of two-qubit singlets over the pairing.
QuantumState pairing_to_state(const Pairing& pairing);

struct BasisMatrix {
  int n_qubits = 0;
  std::vector<Pairing> pairings;       // enumeration order
  std::vector<QuantumState> columns;   // |a_1>..|a_d>
};

struct SpectralInfo {
  double sigma_max = 0.0;
  double sigma_min = 0.0;
  double kappa = 0.0;
};

constexpr int kDenseBasisCap = 12;

/// Materializes the full linearly independent basis with singular data of the
/// column matrix (computed from the Gram matrix eigenvalues).
std::pair<BasisMatrix, SpectralInfo> build_basis_matrix(int n_qubits);

/// || S^2 |psi> || with S_a = sum_i sigma_a^(i) in the bare Pauli convention.
/// Zero exactly on the collective-noise-protected subspace.
double verify_dfs_membership(const QuantumState& state);

/// Dimension of the S^2 kernel via dense eigendecomposition. Independent
/// cross-check for dfs_dimension; capped at 10 qubits.
int s2_nullspace_dimension(int n_qubits);

}  // namespace dfsprep
