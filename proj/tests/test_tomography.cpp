#include <doctest.h>

#include <cmath>

#include "ntkit/channels.hpp"
#include "ntkit/tomography.hpp"

using namespace ntkit;

namespace {

ProbVector random_channel_2q(Rng& rng, double max_rate = 0.004) {
  std::vector<double> p(16, 0.0);
  double tot = 0.0;
  for (std::size_t i = 1; i < 16; ++i) tot += (p[i] = uniform01(rng) * max_rate);
  p[0] = 1.0 - tot;
  return ProbVector(2, p);
}

NoiseModel model_for(const ProbVector& ch, bool neighbor = false) {
  NoiseModel m;
  m.junctions.push_back({0, ch, neighbor});
  return m;
}

const std::vector<int> kDepths = {1, 2, 4, 8, 16};

}  // namespace

TEST_CASE("pnt circuit generation structure") {
  auto specs = generate_pnt_circuits(0, kDepths, false);
  CHECK(specs.size() == 9 * kDepths.size());
  int even = 0, odd = 0;
  for (const auto& s : specs) {
    CHECK(s.circuit.cnot_count() == static_cast<std::size_t>(s.cnots));
    if (s.cnots % 2 == 0) {
      CHECK(s.cnots == 2 * s.n);
      ++even;
    } else {
      CHECK(s.cnots == 2 * s.n + 1);
      ++odd;
    }
    CHECK(s.circuit.num_qubits == 2);
    for (const auto& g : s.circuit.gates)
      if (g.type == GateType::Cnot) CHECK(g.junction == 0);
  }
  CHECK(even == 5 * static_cast<int>(kDepths.size()));
  CHECK(odd == 4 * static_cast<int>(kDepths.size()));

  auto xspecs = generate_pnt_circuits(0, {1, 2}, true);
  for (const auto& s : xspecs) {
    CHECK(s.circuit.num_qubits == 3);
    CHECK(s.meas_basis.size() == 3);
    CHECK(s.meas_basis[2] == Pauli::Z);
    CHECK(s.quantities.size() >= 2);  // F^I and F^D variants
  }
}

TEST_CASE("noiseless signals are exactly one") {
  auto specs = generate_pnt_circuits(0, {1, 2, 4}, false);
  NoiseModel empty;
  Rng rng(1);
  auto sig = measure_pnt(specs, empty, 0, 0, rng);
  for (const auto& row : sig.rows)
    for (const auto& s : row.samples) {
      REQUIRE(s.size() == 1);
      CHECK(s[0] == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("uniform depolarizing noise damps every signal geometrically") {
  double eps = 0.02;
  auto ch = walsh_hadamard(make_depolarizing_2q({eps}));
  auto specs = generate_pnt_circuits(0, {1, 2, 4}, false);
  NoiseModel m = model_for(ch);
  Rng rng(2);
  auto sig = measure_pnt(specs, m, 0, 0, rng);
  for (const auto& row : sig.rows)
    for (std::size_t qi = 0; qi < row.samples.size(); ++qi)
      CHECK(row.samples[qi][0] == doctest::Approx(std::pow(1.0 - eps, row.cnots)).epsilon(1e-10));
}

TEST_CASE("a single ZX error leaves commuting signals untouched") {
  std::vector<double> p(16, 0.0);
  p[0] = 0.98;
  p[PauliString("ZX").index()] = 0.02;
  auto specs = generate_pnt_circuits(0, kDepths, false);
  NoiseModel m = model_for(ProbVector(2, p));
  Rng rng(3);
  auto res = fit_fidelities(measure_pnt(specs, m, 0, 0, rng), 0, 0);
  auto expect = inverse_walsh_hadamard(ProbVector(2, p));
  for (std::size_t a = 1; a < 16; ++a) {
    CHECK(res.f[a] == doctest::Approx(expect.f[a]).epsilon(1e-8));
    if (symplectic_product(2, a, PauliString("ZX").index()) == 0) CHECK(res.f[a] == doctest::Approx(1.0).epsilon(1e-10));
  }
}

TEST_CASE("analytic signals round-trip to the injected fidelities") {
  Rng rng(5);
  auto specs = generate_pnt_circuits(0, kDepths, false);
  for (int trial = 0; trial < 10; ++trial) {
    auto ch = random_channel_2q(rng);
    auto truth = inverse_walsh_hadamard(ch);
    NoiseModel m = model_for(ch);
    auto res = fit_fidelities(measure_pnt(specs, m, 0, 0, rng), 0, 0);
    for (std::size_t a = 1; a < 16; ++a) CHECK(res.f[a] == doctest::Approx(truth.f[a]).epsilon(1e-6));
    // degeneracy resolution keeps labels straight even for lopsided pairs
    CHECK(!res.crosstalk);
  }
}

TEST_CASE("swapping a degenerate pair swaps the recovered values") {
  // an IZ error damps f_XX but not f_XI; a ZZ error does the opposite
  std::size_t xx = PauliString("XX").index(), xi = PauliString("XI").index();
  std::vector<double> p1(16, 0.0), p2(16, 0.0);
  p1[0] = p2[0] = 0.98;
  p1[PauliString("IZ").index()] = 0.02;
  p2[PauliString("ZZ").index()] = 0.02;
  auto specs = generate_pnt_circuits(0, kDepths, false);
  Rng rng(7);
  auto res1 = fit_fidelities(measure_pnt(specs, model_for(ProbVector(2, p1)), 0, 0, rng), 0, 0);
  auto res2 = fit_fidelities(measure_pnt(specs, model_for(ProbVector(2, p2)), 0, 0, rng), 0, 0);
  CHECK(res1.f[xx] == doctest::Approx(0.96).epsilon(1e-8));
  CHECK(res1.f[xi] == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(res2.f[xx] == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(res2.f[xi] == doctest::Approx(0.96).epsilon(1e-8));
}

TEST_CASE("shot-mode tomography recovers fidelities within bootstrap error") {
  Rng rng(11);
  auto ch = random_channel_2q(rng);
  auto truth = inverse_walsh_hadamard(ch);
  auto specs = generate_pnt_circuits(0, kDepths, false);
  NoiseModel m = model_for(ch);
  auto sig = measure_pnt(specs, m, 100, 100, rng);
  auto res = fit_fidelities(sig, 0, 300, 99);
  int within3 = 0;
  for (std::size_t a = 1; a < 16; ++a) {
    CHECK(res.f_std[a] > 0.0);
    if (std::abs(res.f[a] - truth.f[a]) <= 3.0 * res.f_std[a]) ++within3;
  }
  CHECK(within3 >= 13);  // ~15 at 3 sigma; allow a strict minimum
}

TEST_CASE("crosstalk tomography recovers both fidelity blocks") {
  QuasiLocalParams3Q params{0.012, 0.006, 0.002};
  auto f3 = make_quasilocal_3q(params);
  auto ch = walsh_hadamard(f3);
  auto specs = generate_pnt_circuits(0, {1, 2, 4, 8}, true);
  NoiseModel m = model_for(ch, true);
  Rng rng(13);
  auto res = fit_fidelities(measure_pnt(specs, m, 0, 0, rng), 0, 0);
  REQUIRE(res.crosstalk);
  for (std::size_t pair = 0; pair < 16; ++pair) {
    if (pair != 0) CHECK(res.f[pair] == doctest::Approx(f3.f[pair * 4]).epsilon(1e-6));
    CHECK(res.fD[pair] == doctest::Approx(f3.f[pair * 4 + 3]).epsilon(1e-6));
  }
  auto dist = sanitize_for_emulation(res);
  CHECK(dist.q == 3);
  for (std::size_t i = 0; i < 64; ++i) CHECK(dist.p[i] == doctest::Approx(ch.p[i]).epsilon(1e-6));
}

TEST_CASE("sanitizer clamps unphysical fits") {
  TomographyResult res;
  res.f.assign(16, 0.99);
  res.f[0] = 1.0;
  res.f[5] = 1.01;  // above 1: WH picks up negative mass
  res.crosstalk = false;
  auto dist = sanitize_for_emulation(res);
  CHECK(dist.sum() == doctest::Approx(1.0).epsilon(1e-12));
  for (double v : dist.p) CHECK(v >= 0.0);
}
