#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>

#include "dfsprep/orthogonalize.hpp"
#include "reference_states.hpp"

using namespace dfsprep;

namespace {

double amp_distance(const QuantumState& a, const QuantumState& b) {
  double worst = 0;
  for (std::uint64_t i = 0; i < a.dim(); ++i)
    worst = std::max(worst, std::abs(a.amplitude(i) - b.amplitude(i)));
  return worst;
}

}  // namespace

TEST_CASE("oracle targets: four qubits") {
  auto [basis, info] = build_basis_matrix(4);
  const auto t = gram_schmidt_oracle(basis);
  REQUIRE(t.size() == 2);
  CHECK(amp_distance(t[0], basis.columns[0]) < 1e-12);  // empty projector: t1 = a1
  CHECK(amp_distance(phase_normalize(t[1]), phase_normalize(refstates::t2_n4())) < 1e-12);
  CHECK(fidelity(basis.columns[0], t[1]) < 1e-24);  // complement is orthogonal to a1
}

TEST_CASE("oracle targets: six qubits match the analytic complements") {
  auto [basis, info] = build_basis_matrix(6);
  const auto t = gram_schmidt_oracle(basis);
  const auto expected = refstates::all_n6();
  REQUIRE(t.size() == 5);
  for (int i = 0; i < 5; ++i)
    CHECK(amp_distance(phase_normalize(t[i]), phase_normalize(expected[i])) < 1e-12);
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j) {
      const double expect = i == j ? 1.0 : 0.0;
      CHECK(std::abs(std::abs(inner_product(t[i], t[j])) - expect) < 1e-12);
    }
}

TEST_CASE("oracle rejects rank-deficient input") {
  auto [basis, info] = build_basis_matrix(4);
  BasisMatrix degenerate = basis;
  degenerate.columns.push_back(basis.columns[0]);
  degenerate.pairings.push_back(basis.pairings[0]);
  CHECK_THROWS_AS(gram_schmidt_oracle(degenerate), DegeneracyError);
}

TEST_CASE("projection chain examples") {
  auto [basis, info] = build_basis_matrix(4);
  const QuantumState& a1 = basis.columns[0];
  const QuantumState& a2 = basis.columns[1];
  std::vector<QuantumState> priors{a1};

  const ChainResult r1 = project_chain(a2, priors);
  CHECK(r1.probability == doctest::Approx(0.75).epsilon(1e-12));
  const QuantumState t2 = refstates::t2_n4();
  CHECK(fidelity(r1.out.normalized(), t2) == doctest::Approx(1.0).epsilon(1e-12));

  const ChainResult fixed = project_chain(t2, priors);
  CHECK(fixed.probability == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(amp_distance(fixed.out.normalized(), t2) < 1e-12);

  const ChainResult dead = project_chain(a1, priors);
  CHECK(dead.probability < 1e-24);
}

TEST_CASE("spectral gaps and iteration bounds") {
  auto [basis4, info4] = build_basis_matrix(4);
  const SpectralGap g1 = spectral_gap({basis4.columns.data(), 1});
  CHECK(g1.lambda < 1e-12);
  CHECK(g1.m_bound(1e-10, info4.kappa) == 1);

  auto [basis6, info6] = build_basis_matrix(6);
  const SpectralGap g4 = spectral_gap({basis6.columns.data(), 4});
  CHECK(g4.lambda == doctest::Approx(refstates::kLambda4N6).epsilon(1e-10));
  CHECK(g4.m_bound(1e-10, info6.kappa) ==
        int(std::ceil(std::log(1e-10 / info6.kappa) / std::log(g4.lambda))));

  auto [basis8, info8] = build_basis_matrix(8);
  for (auto* pair : {&basis4, &basis6, &basis8}) {
    for (size_t k = 1; k < pair->columns.size(); ++k)
      CHECK(spectral_gap({pair->columns.data(), k}).lambda < 1.0 - 1e-9);
  }
}

TEST_CASE("first state needs no rounds") {
  PreparationConfig config;
  config.n_qubits = 6;
  auto [u1, trace] = prepare_basis_state(1, config);
  CHECK(trace.m_final == 0);
  CHECK(trace.total_runs == 1);
  auto [basis, info] = build_basis_matrix(6);
  CHECK(fidelity(u1, basis.columns[0]) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("six qubits: second and third states converge in one round") {
  PreparationConfig config;
  config.n_qubits = 6;
  config.epsilon = 1e-10;
  for (int k : {2, 3}) {
    auto [u, trace] = prepare_basis_state(k, config);
    REQUIRE(!trace.iterations.empty());
    CHECK(trace.iterations.front().infidelity < 1e-10);
    CHECK(trace.m_final == 1);
  }
}

TEST_CASE("six qubits: later states decay geometrically") {
  PreparationConfig config;
  config.n_qubits = 6;
  config.epsilon = 1e-12;
  for (int k : {4, 5}) {
    auto [u, trace] = prepare_basis_state(k, config);
    // infidelity non-increasing (machine-noise slack at the bottom)
    for (size_t i = 1; i < trace.iterations.size(); ++i)
      CHECK(trace.iterations[i].infidelity <=
            trace.iterations[i - 1].infidelity + 1e-13);
    CHECK(trace.iterations.back().infidelity < 1e-12);
    CHECK(trace.m_final >= 3);
  }
}

TEST_CASE("quantitative convergence envelope") {
  // infidelity after m rounds stays below 2 lambda^m / (lambda^m + |(I-P)a|)
  auto [basis, info] = build_basis_matrix(6);
  for (int kp1 : {4, 5}) {
    const int k = kp1 - 1;
    std::span<const QuantumState> priors(basis.columns.data(), k);
    const double lambda = spectral_gap(priors).lambda;
    const auto targets = gram_schmidt_oracle(basis);

    // |(I-P_k) a_{k+1}| from the oracle projector
    RawVector res = RawVector::from(basis.columns[k]);
    for (int j = 0; j < k; ++j) res = rank1_deflate(res, targets[j]);
    const double residual = res.norm;

    PreparationConfig config;
    config.n_qubits = 6;
    config.epsilon = 1e-12;
    auto [u, trace] = prepare_basis_state(kp1, config);
    for (const auto& it : trace.iterations) {
      const double lm = std::pow(lambda, it.m);
      CHECK(it.infidelity <= 2 * lm / (lm + residual) + 1e-12);
    }
  }
}

TEST_CASE("bound-based stopping without an oracle") {
  PreparationConfig config;
  config.n_qubits = 6;
  config.epsilon = 1e-10;
  config.oracle_checked_stop = false;
  auto [basis, info] = build_basis_matrix(6);
  const auto targets = gram_schmidt_oracle(basis);
  for (int k = 2; k <= 5; ++k) {
    auto [u, trace] = prepare_basis_state(k, config);
    std::span<const QuantumState> priors(basis.columns.data(), k - 1);
    CHECK(trace.m_final == spectral_gap(priors).m_bound(config.epsilon, info.kappa));
    CHECK(1.0 - fidelity(u, targets[k - 1]) < config.epsilon);
  }
}

TEST_CASE("iteration cap raises a convergence error carrying the trace") {
  PreparationConfig config;
  config.n_qubits = 6;
  config.epsilon = 1e-12;
  config.max_m = 2;
  try {
    prepare_basis_state(5, config);
    FAIL("expected ConvergenceError");
  } catch (const ConvergenceError& e) {
    CHECK(e.trace.k == 5);
    CHECK(e.trace.m_final == 2);
    CHECK(!e.trace.iterations.empty());
  }
}

TEST_CASE("sampled and exact iterates agree on the all-zeros path") {
  PreparationConfig exact;
  exact.n_qubits = 6;
  exact.epsilon = 1e-8;
  PreparationConfig sampled = exact;
  sampled.mode = PrepareMode::SampledCircuit;
  sampled.seed = 31;
  for (int k : {4, 5}) {
    auto [ue, te] = prepare_basis_state(k, exact);
    auto [us, ts] = prepare_basis_state(k, sampled);
    // both stop at the oracle threshold; conditioned on success the states match
    CHECK(amp_distance(ue, us) < 1e-9);
    CHECK(ts.total_runs >= std::uint64_t(ts.m_final));
  }
}

TEST_CASE("preparing everything: orthogonality, protection, span") {
  PreparationConfig config;
  config.n_qubits = 6;
  config.epsilon = 1e-10;
  const PreparationResult r = prepare_all(config);
  REQUIRE(r.basis.size() == 5);
  REQUIRE(r.lambda.size() == 4);
  CHECK(r.lambda[0] < 1e-12);
  CHECK(r.lambda[3] == doctest::Approx(refstates::kLambda4N6).epsilon(1e-10));

  const double sqrt_eps = std::sqrt(config.epsilon);
  for (int i = 0; i < 5; ++i) {
    CHECK(verify_dfs_membership(r.basis[i]) < 1e-8);
    for (int j = i + 1; j < 5; ++j)
      CHECK(std::abs(inner_product(r.basis[i], r.basis[j])) < sqrt_eps);
  }

  // span equality against the oracle: projectors onto the two column spans
  auto [basis, info] = build_basis_matrix(6);
  const auto t = gram_schmidt_oracle(basis);
  Eigen::MatrixXcd mu(64, 5), mt(64, 5);
  for (int i = 0; i < 5; ++i)
    for (std::uint64_t j = 0; j < 64; ++j) {
      mu(j, i) = r.basis[i].amplitude(j);
      mt(j, i) = t[i].amplitude(j);
    }
  const Eigen::MatrixXcd pu = mu * (mu.adjoint() * mu).inverse() * mu.adjoint();
  const Eigen::MatrixXcd pt = mt * (mt.adjoint() * mt).inverse() * mt.adjoint();
  Eigen::BDCSVD<Eigen::MatrixXcd> svd(pu - pt);
  CHECK(svd.singularValues()(0) < 1e-8);
}

TEST_CASE("two qubits: the singlet is the whole story") {
  PreparationConfig config;
  config.n_qubits = 2;
  const PreparationResult r = prepare_all(config);
  REQUIRE(r.basis.size() == 1);
  CHECK(fidelity(r.basis[0], pairing_to_state(Pairing{{{1, 2}}})) ==
        doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("four qubits: one deflation is exact") {
  PreparationConfig config;
  config.n_qubits = 4;
  config.epsilon = 1e-10;
  const PreparationResult r = prepare_all(config);
  const auto t = gram_schmidt_oracle(build_basis_matrix(4).first);
  CHECK(1.0 - fidelity(r.basis[1], t[1]) < 1e-12);
  CHECK(r.traces[1].m_final == 1);
}

TEST_CASE("run-count recurrence") {
  const double one[] = {1.0};
  CHECK(expected_runs(one) == std::vector<double>{1.0});
  const double p34[] = {0.75};
  CHECK(expected_runs(p34)[0] == doctest::Approx(4.0 / 3.0));
  const double halves[] = {0.5, 0.5};
  const auto r = expected_runs(halves);
  CHECK(r[0] == doctest::Approx(2.0));
  CHECK(r[1] == doctest::Approx(6.0));
  const double bad[] = {0.5, 0.0};
  CHECK_THROWS_AS(expected_runs(bad), std::invalid_argument);
  CHECK(expected_runs_bound(2.0, 3) == doctest::Approx(24.0));
}

TEST_CASE("empirical run counts track the recurrence model") {
  auto [basis, info] = build_basis_matrix(6);
  const int kp1 = 4;
  std::span<const QuantumState> priors(basis.columns.data(), kp1 - 1);
  const SpectralGap gap = spectral_gap(priors);
  const double eps = 1e-4;
  const int m = gap.m_bound(eps, info.kappa);

  // model probabilities from the exact iterates
  std::vector<double> probs;
  QuantumState v = basis.columns[kp1 - 1];
  for (int j = 0; j < m; ++j) {
    const ChainResult c = project_chain(v, priors);
    probs.push_back(c.probability);
    v = c.out.normalized();
  }
  const double model = expected_runs(probs).back();

  const int trials = 300;
  double mean = 0;
  std::vector<double> samples;
  for (int i = 0; i < trials; ++i) {
    PreparationConfig config;
    config.n_qubits = 6;
    config.epsilon = eps;
    config.mode = PrepareMode::SampledCircuit;
    config.oracle_checked_stop = false;
    config.seed = RandomSource::derive_seed(1234, i);
    auto [u, trace] = prepare_basis_state(kp1, config);
    samples.push_back(double(trace.total_runs));
    mean += double(trace.total_runs);
  }
  mean /= trials;
  double var = 0;
  for (double s : samples) var += (s - mean) * (s - mean);
  var /= (trials - 1);
  const double stderr_mean = std::sqrt(var / trials);
  CHECK(std::abs(mean - model) < 3 * stderr_mean + 1e-9);
  CHECK(mean <= expected_runs_bound(info.kappa, m) + 3 * stderr_mean);
}
