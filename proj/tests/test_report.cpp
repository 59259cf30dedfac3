#include <doctest.h>

#include <json.hpp>

#include "dfsprep/report.hpp"
#include "dfsprep/serialize.hpp"

using namespace dfsprep;

TEST_CASE("prepare experiment: shape and determinism") {
  PrepareSpec spec;
  spec.n_qubits = 4;
  spec.epsilon = 1e-10;
  spec.seed = 5;
  const PrepareExperiment a = run_prepare_experiment(spec);
  const PrepareExperiment b = run_prepare_experiment(spec);
  CHECK(prepare_csv(a) == prepare_csv(b));
  CHECK(prepare_json(a) == prepare_json(b));

  const std::string csv = prepare_csv(a);
  CHECK(csv.find("k,m,infidelity,success_probability") == 0);
  CHECK(csv.find("\n1,0,0,1\n") != std::string::npos);  // first state needs no rounds
  CHECK(csv.find("\n2,1,") != std::string::npos);

  const nlohmann::json j = nlohmann::json::parse(prepare_json(a));
  CHECK(j["N"] == 4);
  CHECK(j["states"].size() == 2);
  CHECK(j["spectral"]["kappa"].get<double>() == doctest::Approx(std::sqrt(3.0)));
  // round trip of serialized amplitudes
  const QuantumState u2 = state_from_json(4, j["states"][1]["amplitudes"]);
  CHECK(u2.norm() == doctest::Approx(1.0));
}

TEST_CASE("sampled prepare runs differ by seed but not by replay") {
  PrepareSpec spec;
  spec.n_qubits = 4;
  spec.mode = PrepareMode::SampledCircuit;
  spec.seed = 11;
  const std::string first = prepare_csv(run_prepare_experiment(spec));
  const std::string replay = prepare_csv(run_prepare_experiment(spec));
  CHECK(first == replay);
}

TEST_CASE("sweep experiment on the four-qubit system") {
  SweepSpec spec;
  spec.n_qubits = 4;
  spec.epsilons = {1e-2, 1e-5, 1e-8};
  spec.trials = 120;
  spec.seed = 3;
  const SweepExperiment e = run_sweep_experiment(spec);
  REQUIRE(e.rows.size() == 6);  // 3 epsilons x d=2
  REQUIRE(e.fits.size() == 2);

  for (const auto& row : e.rows) {
    if (row.k == 1) CHECK(row.mean_runs == doctest::Approx(1.0));  // no ancillas
    CHECK(row.trials == 120);
    CHECK(row.stderr_runs >= 0.0);
    CHECK(row.mean_runs <= row.runs_bound + 3 * row.stderr_runs + 1e-9);
  }
  for (const auto& fit : e.fits) CHECK(fit.r_squared > 0.9);

  // deterministic reduction regardless of thread scheduling
  const SweepExperiment replay = run_sweep_experiment(spec);
  CHECK(sweep_csv(e) == sweep_csv(replay));
  CHECK(sweep_json(e) == sweep_json(replay));
}

TEST_CASE("resource table rows") {
  const auto rows = resource_table(HardwareParams::defaults());
  REQUIRE(rows.size() >= 8);
  CHECK(rows[0].gate == "Z");
  CHECK(rows[0].iswap_count == 0);
  CHECK(rows[0].duration_ns == doctest::Approx(0.0));
  bool saw_cnot = false;
  for (const auto& r : rows)
    if (r.gate == "CNOT") {
      saw_cnot = true;
      CHECK(r.iswap_count == 2);
      CHECK(r.duration_ns == doctest::Approx(70.0));
    }
  CHECK(saw_cnot);
  const std::string csv = resource_csv(rows);
  CHECK(csv.find("gate,iswap_count,single_qubit_count,duration_ns") == 0);
}

TEST_CASE("svg plots are well formed") {
  PrepareSpec spec;
  spec.n_qubits = 4;
  const PrepareExperiment e = run_prepare_experiment(spec);
  const std::string svg = prepare_svg(e);
  CHECK(svg.find("<svg") == 0);
  CHECK(svg.find("polyline") != std::string::npos);
  CHECK(svg.rfind("</svg>\n") == svg.size() - 7);

  SweepSpec sspec;
  sspec.n_qubits = 4;
  sspec.epsilons = {1e-2, 1e-4, 1e-6};
  sspec.trials = 100;
  const std::string svg2 = sweep_svg(run_sweep_experiment(sspec));
  CHECK(svg2.find("<svg") == 0);
  CHECK(svg2.find("polyline") != std::string::npos);
}

TEST_CASE("verify bundle passes on healthy four- and six-qubit systems") {
  for (int n : {4, 6}) {
    const VerifyReport r = verify_bundle(n);
    for (const auto& c : r.checks) {
      INFO(c.name);
      CHECK(c.passed);
    }
    CHECK(r.all_passed());
    const std::string text = verify_text(r);
    CHECK(text.find("FAIL") == std::string::npos);
    const nlohmann::json j = nlohmann::json::parse(verify_json(r));
    CHECK(j["all_passed"] == true);
  }
}

TEST_CASE("two-qubit prepare is a single row with zero infidelity") {
  PrepareSpec spec;
  spec.n_qubits = 2;
  const PrepareExperiment e = run_prepare_experiment(spec);
  CHECK(prepare_csv(e) == "k,m,infidelity,success_probability\n1,0,0,1\n");
}
