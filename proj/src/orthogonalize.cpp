#include "dfsprep/orthogonalize.hpp"

#include <Eigen/Dense>
#include <cmath>

namespace dfsprep {

void PreparationConfig::validate() const {
  if (n_qubits < 2 || n_qubits % 2 != 0)
    throw std::invalid_argument("qubit count must be even and at least 2");
  if (!(epsilon > 0.0 && epsilon < 1.0))
    throw std::invalid_argument("epsilon must lie in (0, 1)");
  if (max_m < 1) throw std::invalid_argument("max_m must be at least 1");
}

std::vector<QuantumState> gram_schmidt_oracle(const BasisMatrix& basis) {
  std::vector<QuantumState> out;
  for (const auto& a : basis.columns) {
    RawVector v = RawVector::from(a);
    for (int pass = 0; pass < 2; ++pass)  // one reorthogonalization pass
      for (const auto& t : out) v = rank1_deflate(v, t);
    if (v.norm < 1e-10) throw DegeneracyError("rank deficiency during orthogonalization");
    out.push_back(v.normalized());
  }
  return out;
}

ChainResult project_chain(const QuantumState& input, std::span<const QuantumState> priors) {
  RawVector v = RawVector::from(input);
  for (const auto& a : priors) {
    if (a.n_qubits() != input.n_qubits())
      throw std::invalid_argument("prior dimension mismatch");
    v = rank1_deflate(v, a);
  }
  const double p = v.norm * v.norm;
  return ChainResult{std::move(v), p};
}

int SpectralGap::m_bound(double eps, double kappa) const {
  if (!(eps > 0.0) || !(kappa >= 1.0)) throw std::invalid_argument("bad eps or kappa");
  if (lambda < 1e-12) return 1;
  const double m = std::ceil(std::log(eps / kappa) / std::log(lambda));
  return std::max(1, static_cast<int>(m));
}

SpectralGap spectral_gap(std::span<const QuantumState> priors) {
  const int k = static_cast<int>(priors.size());
  if (k < 1) throw std::invalid_argument("spectral gap needs at least one prior");

  // Orthonormal frame for the span, then the chain restricted to it.
  std::vector<QuantumState> frame;
  for (const auto& a : priors) {
    RawVector v = RawVector::from(a);
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& t : frame) v = rank1_deflate(v, t);
    if (v.norm < 1e-10) throw DegeneracyError("priors are linearly dependent");
    frame.push_back(v.normalized());
  }
  Eigen::MatrixXcd m(k, k);
  for (int j = 0; j < k; ++j) {
    ChainResult chain = project_chain(frame[j], priors);
    for (int i = 0; i < k; ++i) {
      cdouble s = 0.0;
      for (std::uint64_t idx = 0; idx < frame[i].dim(); ++idx)
        s += std::conj(frame[i].amplitude(idx)) * chain.out.amplitudes[idx];
      m(i, j) = s;
    }
  }
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(m, /*computeEigenvectors=*/false);
  double lambda = 0.0;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i)
    lambda = std::max(lambda, std::abs(es.eigenvalues()(i)));
  return SpectralGap{lambda};
}

namespace {

struct PrepareContext {
  BasisMatrix basis;
  SpectralInfo spectral;
  std::vector<QuantumState> targets;  // oracle states, for oracle-checked stopping
};

std::pair<QuantumState, PreparationTrace> prepare_one(
    int k_plus_1, const PreparationConfig& config, const PrepareContext& ctx,
    const std::optional<QuantumState>& oracle_t, RandomSource& rng) {
  const int d = static_cast<int>(ctx.basis.columns.size());
  if (k_plus_1 < 1 || k_plus_1 > d) throw std::invalid_argument("basis index out of range");
  const int k = k_plus_1 - 1;

  PreparationTrace trace;
  trace.k = k_plus_1;
  const QuantumState& start = ctx.basis.columns[k];

  if (k == 0) {  // no priors: the first state is ready immediately
    trace.total_runs = 1;
    trace.m_final = 0;
    return {phase_normalize(start), trace};
  }

  std::span<const QuantumState> priors(ctx.basis.columns.data(), k);
  const std::optional<QuantumState>& target = oracle_t;

  int m_cap = config.max_m;
  if (!config.oracle_checked_stop) {
    const SpectralGap gap = spectral_gap(priors);
    m_cap = std::min(config.max_m, gap.m_bound(config.epsilon, ctx.spectral.kappa));
  }

  auto infid = [&](const QuantumState& s) {
    return target ? 1.0 - fidelity(s, *target) : std::nan("");
  };

  if (config.mode == PrepareMode::ExactOperator) {
    QuantumState v = start;
    for (int m = 1; m <= m_cap; ++m) {
      ChainResult chain = project_chain(v, priors);
      v = chain.out.normalized();
      trace.iterations.push_back(
          IterationRecord{m, infid(v), chain.probability, static_cast<std::uint64_t>(m) + 1});
      trace.m_final = m;
      if (config.oracle_checked_stop && target && infid(v) < config.epsilon) break;
    }
    trace.total_runs = trace.m_final + 1;  // initial preparation plus one run per round
    if (config.oracle_checked_stop && target && 1.0 - fidelity(v, *target) >= config.epsilon)
      throw ConvergenceError("iteration cap reached before target infidelity", trace);
    return {phase_normalize(v), trace};
  }

  // Sampled circuit mode. A failed measurement discards everything: the
  // cascade resumes from a freshly prepared |a_{k+1}>.
  std::vector<Pairing> prior_pairings(ctx.basis.pairings.begin(),
                                      ctx.basis.pairings.begin() + k);
  const Circuit round = orthogonalization_round_circuit(prior_pairings);
  std::uint64_t runs = 0;
  int reached_m = 0;
  QuantumState v = start;
  std::vector<IterationRecord> successes;
  while (reached_m < m_cap) {
    if (runs > 1'000'000) {
      trace.iterations = std::move(successes);
      trace.total_runs = runs;
      trace.m_final = reached_m;
      throw ConvergenceError("run budget exhausted", trace);
    }
    SimOutcome out = simulate(round, v, rng);
    ++runs;
    const bool all_zero =
        std::all_of(out.record.begin(), out.record.end(), [](int b) { return b == 0; });
    if (!all_zero) {
      v = start;  // stage-1 restart
      reached_m = 0;
      successes.clear();
      continue;
    }
    v = out.final;
    ++reached_m;
    successes.push_back(
        IterationRecord{reached_m, infid(v), out.branch_probability, runs});
    if (config.oracle_checked_stop && target && infid(v) < config.epsilon) break;
  }
  trace.iterations = std::move(successes);
  trace.total_runs = runs;
  trace.m_final = reached_m;
  if (config.oracle_checked_stop && target && 1.0 - fidelity(v, *target) >= config.epsilon)
    throw ConvergenceError("iteration cap reached before target infidelity", trace);
  return {phase_normalize(v), trace};
}

}  // namespace

std::pair<QuantumState, PreparationTrace> prepare_basis_state(
    int k_plus_1, const PreparationConfig& config,
    const std::optional<QuantumState>& oracle_t) {
  config.validate();
  PrepareContext ctx;
  std::tie(ctx.basis, ctx.spectral) = build_basis_matrix(config.n_qubits);
  std::optional<QuantumState> target = oracle_t;
  if (!target && config.oracle_checked_stop) {
    ctx.targets = gram_schmidt_oracle(ctx.basis);
    target = ctx.targets[k_plus_1 - 1];
  }
  RandomSource rng(config.seed);
  return prepare_one(k_plus_1, config, ctx, target, rng);
}

PreparationResult prepare_all(const PreparationConfig& config) {
  config.validate();
  PrepareContext ctx;
  std::tie(ctx.basis, ctx.spectral) = build_basis_matrix(config.n_qubits);
  ctx.targets = gram_schmidt_oracle(ctx.basis);

  PreparationResult result;
  result.spectral = ctx.spectral;
  const int d = static_cast<int>(ctx.basis.columns.size());
  for (int k = 1; k < d; ++k) {
    std::span<const QuantumState> priors(ctx.basis.columns.data(), k);
    result.lambda.push_back(spectral_gap(priors).lambda);
  }
  for (int i = 1; i <= d; ++i) {
    RandomSource rng(RandomSource::derive_seed(config.seed, i));
    auto [u, trace] = prepare_one(i, config, ctx, ctx.targets[i - 1], rng);
    result.basis.push_back(std::move(u));
    result.traces.push_back(std::move(trace));
  }
  return result;
}

std::vector<double> expected_runs(std::span<const double> success_probabilities) {
  std::vector<double> r;
  double prev = 0.0;
  for (double p : success_probabilities) {
    if (!(p > 0.0))
      throw std::invalid_argument("zero success probability: expected runs diverge");
    if (p > 1.0) throw std::invalid_argument("success probability above one");
    prev = (prev + 1.0) / p;
    r.push_back(prev);
  }
  return r;
}

double expected_runs_bound(double kappa, int m) { return 2.0 * kappa * kappa * m; }

}  // namespace dfsprep
