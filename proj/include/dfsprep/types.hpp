#pragma once

#include <complex>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>

namespace dfsprep {

using cdouble = std::complex<double>;

/// Requested object exceeds the dense-simulation caps (qubit counts, matrix sizes).
class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Basis matrix turned out rank-deficient during orthogonalization.
class DegeneracyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Deterministic uniform source. All randomness in the library flows through
/// this wrapper so that results are reproducible from a single integer seed.
/// Doubles are produced by the 53-bit shift construction rather than
/// std::uniform_real_distribution, which is implementation-defined.
class RandomSource {
 public:
  explicit RandomSource(std::uint64_t seed) : engine_(seed) {}

  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  std::uint64_t next_u64() { return engine_(); }

  /// Stable mixing of (seed, stream) for independent per-trial sources.
  static std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace dfsprep
