#include <doctest.h>

#include <cmath>

#include "ntkit/experiment.hpp"

using namespace ntkit;

namespace {

NoiseModelFile identity_noise() {
  NoiseModelFile file;
  for (int j = 0; j < 3; ++j) {
    NoiseModelFile::Entry e;
    e.junction = j;
    e.fidelities = FidelityVector::identity(2);
    file.entries.push_back(e);
  }
  return file;
}

BcsParams short_bcs() {
  BcsParams p;
  p.steps = 2;
  return p;
}

}  // namespace

TEST_CASE("trial names round-trip") {
  for (Trial t : {Trial::T1, Trial::T2, Trial::T3, Trial::T4, Trial::Diag})
    CHECK(trial_from_string(trial_name(t)) == t);
  CHECK_THROWS(trial_from_string("T9"));
}

TEST_CASE("synthetic noise generator is seeded and calibrated") {
  SyntheticNoiseSpec spec;
  spec.mean_error = 0.012;
  auto a = gen_synthetic_noise(spec);
  auto b = gen_synthetic_noise(spec);
  REQUIRE(a.entries.size() == 3);
  for (int j = 0; j < 3; ++j) {
    const auto& f = a.entries[j].fidelities;
    CHECK(f.f[0] == doctest::Approx(1.0).epsilon(1e-12));
    for (std::size_t i = 0; i < 16; ++i) CHECK(f.f[i] == doctest::Approx(b.entries[j].fidelities.f[i]).epsilon(1e-15));
    auto p = walsh_hadamard(f);
    CHECK(p.p[0] == doctest::Approx(1.0 - spec.mean_error).epsilon(1e-10));
    CHECK(!p.quasi);
  }
  spec.seed = 2;
  auto c = gen_synthetic_noise(spec);
  CHECK(c.entries[0].fidelities.f[5] != doctest::Approx(a.entries[0].fidelities.f[5]).epsilon(1e-12));
}

TEST_CASE("higher dispersion spreads the fidelities more") {
  auto spread = [](double disp) {
    SyntheticNoiseSpec spec;
    spec.dispersion = disp;
    auto file = gen_synthetic_noise(spec);
    double mean = 0.0, var = 0.0;
    const auto& f = file.entries[0].fidelities.f;
    for (int i = 1; i < 16; ++i) mean += f[i] / 15.0;
    for (int i = 1; i < 16; ++i) var += (f[i] - mean) * (f[i] - mean) / 15.0;
    return std::sqrt(var) / (1.0 - mean);
  };
  CHECK(spread(2.0) > spread(0.1));
}

TEST_CASE("channel-mode trial with no noise reproduces the circuit exactly") {
  ExperimentConfig cfg;
  cfg.bcs = short_bcs();
  cfg.trial = Trial::T1;
  auto res = run_trial(cfg, identity_noise());
  CHECK(res.zeta_all == doctest::Approx(0.0).epsilon(1e-10));
  for (std::size_t t = 0; t < res.times.size(); ++t)
    for (std::size_t o = 0; o < res.observables.size(); ++o) {
      CHECK(res.f_nec[t][o] == doctest::Approx(1.0).epsilon(1e-10));
      CHECK(res.mitigated[t][o] == doctest::Approx(res.ideal[t][o]).epsilon(1e-10));
    }
  // continuum references differ from the circuit by the product-formula error
  CHECK(std::abs(res.exact[1][0] - res.ideal[1][0]) < 0.2);
}

TEST_CASE("sampled trial agrees with its channel-mode limit") {
  SyntheticNoiseSpec spec;
  spec.mean_error = 0.01;
  auto noise = gen_synthetic_noise(spec);
  ExperimentConfig cfg;
  cfg.bcs = short_bcs();
  cfg.trial = Trial::T2;
  MitigationPlan plan = plan_for(noise, cfg.bcs);
  auto limit = run_trial(cfg, noise, plan);
  cfg.trial = Trial::T3;
  cfg.n_nt = 2000;
  auto sampled = run_trial(cfg, noise, plan);
  REQUIRE(sampled.per_circuit.size() == 2);
  int ok = 0, n = 0;
  for (std::size_t t = 0; t < sampled.times.size(); ++t)
    for (std::size_t o = 0; o < sampled.observables.size(); ++o) {
      // sigma of the mean ~ gamma^N / sqrt(N_NT)
      double sigma = 3.0 * std::exp(sampled.plan.log_sigma) / std::sqrt(double(cfg.n_nt));
      ++n;
      if (std::abs(sampled.mitigated[t][o] - limit.mitigated[t][o]) < 3.0 * sigma + 0.05) ++ok;
    }
  CHECK(ok == n);
}

TEST_CASE("worker count does not change the bytes") {
  SyntheticNoiseSpec spec;
  auto noise = gen_synthetic_noise(spec);
  ExperimentConfig cfg;
  cfg.bcs = short_bcs();
  cfg.trial = Trial::T3;
  cfg.n_nt = 300;
  MitigationPlan plan = plan_for(noise, cfg.bcs);
  cfg.workers = 1;
  auto r1 = run_trial(cfg, noise, plan);
  cfg.workers = 4;
  auto r4 = run_trial(cfg, noise, plan);
  CHECK(expectations_csv(r1) == expectations_csv(r4));
}

TEST_CASE("diagnostics report wiring") {
  SyntheticNoiseSpec spec;
  spec.mean_error = 0.008;
  auto noise = gen_synthetic_noise(spec);
  ExperimentConfig cfg;
  cfg.bcs = short_bcs();
  cfg.n_nt = 400;
  cfg.inject_depol_1q = 0.004;
  auto rep = run_diagnostics(cfg, noise);
  CHECK(rep.curve.front().n == 100);
  CHECK(rep.curve.back().n == 400);
  CHECK(rep.decomposition.dz_nt == doctest::Approx(rep.finite.zeta_all - rep.inf.zeta_all).epsilon(1e-12));
  CHECK(rep.decomposition.dz_c_unk == doctest::Approx(rep.full.zeta_all - rep.finite.zeta_all).epsilon(1e-12));
  CHECK(rep.decomposition.no_nt_projection >= 0.0);
  // the csv helpers render every row
  auto csv = expectations_csv(rep.full);
  CHECK(csv.find("DIAG") != std::string::npos);
  CHECK(curve_csv(rep.curve).find("100,") != std::string::npos);
}
