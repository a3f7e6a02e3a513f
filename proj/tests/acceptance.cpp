// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Heavier statistical scenarios live here rather than in the unit
// tests; tolerances follow the stated targets.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>
#include <thread>
#include <vector>

#include "ntkit/compiling.hpp"
#include "ntkit/experiment.hpp"
#include "ntkit/process.hpp"
#include "ntkit/simulator.hpp"
#include "ntkit/tomography.hpp"

using namespace ntkit;
using Clock = std::chrono::steady_clock;

namespace {

int g_failures = 0;

void report(int idx, const std::string& name, bool ok, const std::string& detail) {
  std::printf("%s criterion %d (%s): %s\n", ok ? "PASS" : "FAIL", idx, name.c_str(), detail.c_str());
  std::fflush(stdout);
  if (!ok) ++g_failures;
}

double elapsed(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

FidelityVector random_channel(Rng& rng, std::size_t q, double scale) {
  std::size_t dim = 1u << (2 * q);
  std::vector<double> p(dim, 0.0);
  double tot = 0.0;
  for (std::size_t i = 1; i < dim; ++i) tot += (p[i] = uniform01(rng) * scale);
  p[0] = 1.0 - tot;
  return inverse_walsh_hadamard(ProbVector(q, p));
}

// ---- 1: transform and plan algebra ----
void criterion1() {
  auto t0 = Clock::now();
  double worst = 0.0;
  Rng rng(11);
  for (std::size_t q : {std::size_t{2}, std::size_t{3}}) {
    double scale = q == 2 ? 0.004 : 0.001;
    for (int trial = 0; trial < 100; ++trial) {
      FidelityVector gate = random_channel(rng, q, scale);
      ProbVector p = walsh_hadamard(gate);
      FidelityVector back = inverse_walsh_hadamard(p);
      for (std::size_t i = 0; i < gate.dim(); ++i) worst = std::max(worst, std::abs(back.f[i] - gate.f[i]));

      FidelityVector target = q == 2 ? make_depolarizing_2q({matched_epsilon(gate)})
                                     : make_quasilocal_3q({0.004, 0.002, 0.001});
      QuasiProbPlan plan = tailor_plan(gate, target);
      double neg = 0.0, sum = 0.0;
      for (double v : plan.quasi) {
        sum += v;
        if (v < 0.0) neg += -v;
      }
      worst = std::max(worst, std::abs(sum - 1.0));
      worst = std::max(worst, std::abs(plan.gamma - (1.0 + 2.0 * neg)));
      // the dressing's PTM is the elementwise target/gate ratio
      FidelityVector dressing = inverse_walsh_hadamard(ProbVector(q, plan.quasi));
      for (std::size_t i = 0; i < gate.dim(); ++i)
        worst = std::max(worst, std::abs(dressing.f[i] * gate.f[i] - target.f[i]));
      if (q == 2) {
        QuasiProbPlan closed = q_dnt(gate, matched_epsilon(gate));
        for (std::size_t i = 0; i < 16; ++i) worst = std::max(worst, std::abs(closed.quasi[i] - plan.quasi[i]));
      }
    }
  }
  double secs = elapsed(t0);
  char buf[120];
  std::snprintf(buf, sizeof buf, "max deviation %.2e (tol 1e-12), %.2f s (limit 1 s)", worst, secs);
  report(1, "channel algebra identities", worst < 1e-12 && secs < 1.0, buf);
}

// ---- 2: twirl decoherence ----
double offdiag_residual(const NoiseModel& model, const std::vector<std::vector<CnotDressing>>& dressings) {
  Circuit base(2);
  base.add(Gate::cnot(0, 1, 0));
  Matrix u = base.unitary();
  ChannelFn fn = [&](const Matrix& rho) {
    Matrix in = u.adjoint() * rho * u;
    Matrix acc = Matrix::Zero(rho.rows(), rho.cols());
    for (const auto& ch : dressings) {
      DensityMatrix r;
      r.q = 2;
      r.rho = in;
      acc += run_circuit_channel(dress_circuit(base, ch, nullptr).circuit, model, r).rho / double(dressings.size());
    }
    return acc;
  };
  Matrix chi = chi_matrix(fn, 2);
  double off = 0.0;
  for (int a = 0; a < 16; ++a)
    for (int b = 0; b < 16; ++b)
      if (a != b) off = std::max(off, std::abs(chi(a, b)));
  return off;
}

void criterion2() {
  NoiseModel model;
  model.coherent_delta = 0.2;
  model.coherent_seed = 5;

  std::vector<std::vector<CnotDressing>> full(16, std::vector<CnotDressing>(1));
  for (int pair = 0; pair < 16; ++pair) full[pair][0].rc_pair = pair;
  double exact_off = offdiag_residual(model, full);

  const std::vector<int> ns = {50, 200, 800};
  std::vector<double> mean_res;
  Rng rng(13);
  for (int n : ns) {
    double acc = 0.0;
    const int reps = 6;
    for (int r = 0; r < reps; ++r) {
      std::vector<std::vector<CnotDressing>> sampled(n, std::vector<CnotDressing>(1));
      for (int i = 0; i < n; ++i) sampled[i][0].rc_pair = int(rng() % 16);
      acc += offdiag_residual(model, sampled);
    }
    mean_res.push_back(acc / reps);
  }
  // least-squares slope of ln(residual) vs ln(N)
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < ns.size(); ++i) {
    double x = std::log(double(ns[i])), y = std::log(mean_res[i]);
    sx += x; sy += y; sxx += x * x; sxy += x * y;
  }
  double slope = (3.0 * sxy - sx * sy) / (3.0 * sxx - sx * sx);
  char buf[160];
  std::snprintf(buf, sizeof buf, "enumerated off-diagonal %.2e (tol 1e-10), finite-N slope %.3f (target -0.5+-0.1)",
                exact_off, slope);
  report(2, "randomized-compiling decoherence", exact_off < 1e-10 && std::abs(slope + 0.5) < 0.1, buf);
}

// ---- 3: tomography end to end ----
void criterion3() {
  auto t0 = Clock::now();
  const int n_channels = 50;
  std::vector<FidelityVector> truths;
  Rng seed_rng(17);
  for (int c = 0; c < n_channels; ++c) truths.push_back(random_channel(seed_rng, 2, 0.0025));

  std::vector<int> depths = {1, 2, 4, 8, 16};  // n_d = 5
  std::vector<double> analytic_err(n_channels, 0.0);
  std::vector<int> within(n_channels, 0);

  int workers = std::max(1u, std::thread::hardware_concurrency());
  auto work = [&](int w) {
    for (int c = w; c < n_channels; c += workers) {
      auto specs = generate_pnt_circuits(0, depths, false);
      NoiseModel m;
      m.junctions.push_back({0, walsh_hadamard(truths[c]), false});
      Rng rng(derive_seed(23, 1, c));
      auto exact = fit_fidelities(measure_pnt(specs, m, 0, 0, rng), 0, 0);
      for (std::size_t a = 1; a < 16; ++a)
        analytic_err[c] = std::max(analytic_err[c], std::abs(exact.f[a] - truths[c].f[a]));

      Rng rng2(derive_seed(23, 2, c));
      auto sig = measure_pnt(specs, m, 200, 100, rng2);  // N_RC = 200, N_S = 100
      auto fit = fit_fidelities(sig, 0, 500, derive_seed(23, 3, c));
      for (std::size_t a = 1; a < 16; ++a)
        if (fit.f_std[a] > 0.0 && std::abs(fit.f[a] - truths[c].f[a]) <= 3.0 * fit.f_std[a]) ++within[c];
    }
  };
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w) pool.emplace_back(work, w);
  for (auto& th : pool) th.join();

  double worst_analytic = 0.0;
  int total_within = 0;
  for (int c = 0; c < n_channels; ++c) {
    worst_analytic = std::max(worst_analytic, analytic_err[c]);
    total_within += within[c];
  }
  double frac = double(total_within) / double(15 * n_channels);
  double secs = elapsed(t0);
  char buf[180];
  std::snprintf(buf, sizeof buf, "analytic max err %.2e (tol 1e-6), shot-mode 3-sigma coverage %.1f%% (need 95%%), %.0f s (limit 300 s)",
                worst_analytic, 100.0 * frac, secs);
  report(3, "noise tomography", worst_analytic < 1e-6 && frac >= 0.95 && secs < 300.0, buf);
}

// ---- 4: finite-sampling convergence of the tailoring estimator ----
void criterion4() {
  Circuit c(3);
  c.add(Gate::single(GateType::H, 0));
  c.add(Gate::single(GateType::Rz, 1, 0.4));
  for (int r = 0; r < 5; ++r) {
    c.add(Gate::cnot(0, 1, 0));
    c.add(Gate::cnot(1, 2, 1));
  }
  c.add(Gate::single(GateType::Ry, 0, 0.7));

  Rng rng(29);
  std::map<int, FidelityVector> gates;
  gates[0] = random_channel(rng, 2, 0.003);
  gates[1] = random_channel(rng, 2, 0.003);
  PlanMap plans;
  NoiseModel raw, target;
  for (int j : {0, 1}) {
    FidelityVector tgt = make_depolarizing_2q({matched_epsilon(gates[j])});
    plans[j] = tailor_plan(gates[j], tgt);
    raw.junctions.push_back({j, walsh_hadamard(gates[j]), false});
    target.junctions.push_back({j, walsh_hadamard(tgt), false});
  }
  // observable with the largest target-channel expectation
  PauliString obs;
  double best = 0.0;
  DensityMatrix rho_t = run_circuit_channel(c, target);
  for (std::size_t a = 1; a < 64; ++a) {
    PauliString cand(3, a);
    double v = std::abs(expectation(rho_t, cand));
    if (v > best) {
      best = v;
      obs = cand;
    }
  }
  double exact = expectation(rho_t, obs);

  const std::vector<int> ns = {100, 1000, 10000};
  const int reps = 100;  // the RMS itself needs tight statistics for the slope check
  std::vector<double> rms;
  double sigma_1e4 = 0.0, est_1e4 = 0.0;
  for (int n : ns) {
    double acc = 0.0;
    for (int r = 0; r < reps; ++r) {
      Rng rr(derive_seed(31, n, r));
      double sum = 0.0, sumsq = 0.0;
      for (int i = 0; i < n; ++i) {
        DressedCircuit d = nt_dress(c, plans, rr);
        double v = d.sign * std::exp(d.weight_log) * expectation_state(run_circuit_trajectory(d.circuit, raw, rr), obs, 3);
        sum += v;
        sumsq += v * v;
      }
      double est = sum / n;
      acc += (est - exact) * (est - exact);
      if (n == 10000 && r == 0) {
        est_1e4 = est;
        sigma_1e4 = std::sqrt((sumsq / n - est * est) / n);
      }
    }
    rms.push_back(std::sqrt(acc / reps));
  }
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < ns.size(); ++i) {
    double x = std::log(double(ns[i])), y = std::log(rms[i]);
    sx += x; sy += y; sxx += x * x; sxy += x * y;
  }
  double slope = (3.0 * sxy - sx * sy) / (3.0 * sxx - sx * sx);
  double pull = std::abs(est_1e4 - exact) / sigma_1e4;
  char buf[160];
  std::snprintf(buf, sizeof buf, "RMS slope %.3f (target -0.5+-0.1), N=1e4 pull %.2f sigma (limit 3)", slope, pull);
  report(4, "tailoring-estimator convergence", std::abs(slope + 0.5) < 0.1 && pull < 3.0, buf);
}

// ---- 5: estimation-circuit mitigation is exact for global depolarizing ----
void criterion5() {
  Circuit c(3);
  c.add(Gate::single(GateType::Rx, 0, 0.9));
  c.add(Gate::single(GateType::Ry, 1, -0.5));
  c.add(Gate::cnot(0, 1, 0));
  c.add(Gate::single(GateType::Rz, 2, 1.3));
  c.add(Gate::cnot(1, 2, 1));
  c.add(Gate::single(GateType::H, 0));

  double eps = 0.08;  // single end-of-circuit global depolarizing channel
  std::vector<double> p(64, eps / 64.0);
  p[0] = 1.0 - 63.0 * eps / 64.0;
  ProbVector glob(3, p);
  NoiseModel none;
  std::vector<int> all_q = {0, 1, 2};

  DensityMatrix noisy = apply_pauli_channel(run_circuit_channel(c, none), glob, all_q);
  Circuit nec = nec_circuit(c);
  DensityMatrix nec_noisy = apply_pauli_channel(run_circuit_channel(nec, none), glob, all_q);
  Vector ideal = run_circuit_ideal(c);

  double worst = 0.0;
  for (const char* w : {"ZII", "XYI", "ZZZ", "IXZ", "YYY"}) {
    PauliString obs(w);
    PauliString nobs = choose_nec_observable(nec, obs);
    double fnec = expectation(nec_noisy, nobs) / expectation_state(run_circuit_ideal(nec), nobs, 3);
    double got = mitigate(expectation(noisy, obs), fnec);
    worst = std::max(worst, std::abs(got - expectation_state(ideal, obs, 3)));
  }
  char buf[120];
  std::snprintf(buf, sizeof buf, "max deviation %.2e (tol 1e-10)", worst);
  report(5, "global-depolarizing mitigation exactness", worst < 1e-10, buf);
}

// ---- 6: trial accuracy ordering ----
void criterion6() {
  auto t0 = Clock::now();
  SyntheticNoiseSpec spec;
  spec.mean_error = 0.01;
  spec.dispersion = 4.0;
  spec.seed = 48;
  NoiseModelFile noise = gen_synthetic_noise(spec);
  // applicability condition: strongly anisotropic channels, i.e. the spread of
  // the 15 Pauli error rates is at least twice their mean (a fidelity-based
  // spread can never reach that factor: the per-error-term contributions to the
  // 15 infidelities overlap too much)
  double min_ratio = 1e9;
  for (const auto& e : noise.entries) {
    ProbVector p = walsh_hadamard(e.fidelities);
    double mean = 0.0, var = 0.0;
    for (int i = 1; i < 16; ++i) mean += p.p[i] / 15.0;
    for (int i = 1; i < 16; ++i) var += (p.p[i] - mean) * (p.p[i] - mean) / 15.0;
    min_ratio = std::min(min_ratio, std::sqrt(var) / mean);
  }

  ExperimentConfig cfg;
  cfg.seed = 43;
  cfg.workers = std::max(1u, std::thread::hardware_concurrency());
  bool cnots_ok = bcs_trotter_circuit(cfg.bcs, cfg.bcs.steps).cnot_count() == 135;

  MitigationPlan plan = plan_for(noise, cfg.bcs);
  std::map<Trial, double> zeta;
  for (Trial t : {Trial::T1, Trial::T2, Trial::T4}) {
    cfg.trial = t;
    zeta[t] = run_trial(cfg, noise, plan).zeta_last2;
  }
  cfg.trial = Trial::T3;
  cfg.n_nt = 10000;
  cfg.shots_per_circuit = 1;
  double zeta_t3 = run_trial(cfg, noise, plan).zeta_last2;

  double ratio = zeta[Trial::T2] / zeta[Trial::T1];
  double secs = elapsed(t0);
  bool order = zeta[Trial::T2] < zeta[Trial::T4] && zeta[Trial::T4] < zeta[Trial::T1];
  bool ok = min_ratio >= 2.0 && cnots_ok && order && ratio <= 0.6 && secs < 1800.0;
  char buf[240];
  std::snprintf(buf, sizeof buf,
                "zeta T1=%.4f T2=%.4f T3=%.4f T4=%.4f, improvement x%.2f (need >= x1.67), dispersion ratio %.2f, 135 CNOTs %s, %.0f s (limit 1800 s)",
                zeta[Trial::T1], zeta[Trial::T2], zeta_t3, zeta[Trial::T4], 1.0 / ratio, min_ratio,
                cnots_ok ? "yes" : "NO", secs);
  report(6, "trial accuracy ordering", ok, buf);
}

// ---- 7 & 8: extrapolation machinery and decomposition ----
void criteria78() {
  // Scenario designed so the intercept is resolvable inside the paper's
  // N <= 1000 fit window: near-isotropic noise (negligible quasiprobability
  // sign noise) with a large enough mean error that the model-residual bias
  // dominates the batch noise, and enough shots that per-circuit shot noise
  // averages down.
  ExperimentConfig cfg;
  cfg.seed = 47;
  cfg.bcs.steps = 5;
  cfg.n_nt = 5000;
  cfg.shots_per_circuit = 300;
  cfg.workers = std::max(1u, std::thread::hardware_concurrency());
  SyntheticNoiseSpec spec;
  spec.mean_error = 0.04;
  spec.dispersion = 0.05;
  spec.seed = 53;
  NoiseModelFile noise = gen_synthetic_noise(spec);

  cfg.inject_coherent = 0.002;
  cfg.inject_depol_1q = 0.0;
  DiagReport coh = run_diagnostics(cfg, noise);

  std::vector<std::size_t> want = {100, 200, 300, 400, 500, 600, 700, 800, 900, 1000, 2000, 3000, 4000, 5000};
  std::vector<std::size_t> got;
  for (const auto& p : coh.curve) got.push_back(p.n);
  bool grid_ok = got == want;
  double sb = std::sqrt(coh.fit.var_b);
  double pull7 = std::abs(coh.fit.b - coh.inf.zeta_all) / sb;
  char buf[200];
  std::snprintf(buf, sizeof buf, "intercept b=%.4f vs zeta_inf=%.4f, pull %.2f sigma (limit 2), grid %s", coh.fit.b,
                coh.inf.zeta_all, pull7, grid_ok ? "matches" : "MISMATCH");
  report(7, "sampling-noise extrapolation", pull7 <= 2.0 && grid_ok, buf);

  double coh_pull = std::abs(coh.decomposition.dz_unk) / coh.decomposition.dz_unk_std;

  // strong enough that the extra damping overwhelms the model-residual bias
  cfg.inject_coherent = 0.0;
  cfg.inject_depol_1q = 2e-3;
  DiagReport dep = run_diagnostics(cfg, noise);
  double dep_pull = dep.decomposition.dz_unk / dep.decomposition.dz_unk_std;
  std::snprintf(buf, sizeof buf,
                "coherent-only |dz_unk| pull %.2f sigma (limit 2), depol-only dz_unk pull %.2f sigma (need > 2)",
                coh_pull, dep_pull);
  report(8, "noise-source decomposition", coh_pull <= 2.0 && dep_pull > 2.0, buf);
}

// ---- 9: reproducibility across worker counts ----
void criterion9() {
  SyntheticNoiseSpec spec;
  spec.seed = 59;
  NoiseModelFile noise = gen_synthetic_noise(spec);
  ExperimentConfig cfg;
  cfg.bcs.steps = 3;
  cfg.trial = Trial::T3;
  cfg.n_nt = 600;
  cfg.seed = 61;
  MitigationPlan plan = plan_for(noise, cfg.bcs);
  cfg.workers = 1;
  TrialResult r1 = run_trial(cfg, noise, plan);
  cfg.workers = 7;
  TrialResult r7 = run_trial(cfg, noise, plan);
  bool exp_ok = expectations_csv(r1) == expectations_csv(r7);
  bool curve_ok = curve_csv(bootstrap_curve(r1.per_circuit, r1.ideal)) ==
                  curve_csv(bootstrap_curve(r7.per_circuit, r7.ideal));
  report(9, "worker-count reproducibility", exp_ok && curve_ok,
         std::string("expectations ") + (exp_ok ? "identical" : "DIFFER") + ", batch curve " +
             (curve_ok ? "identical" : "DIFFER"));
}

}  // namespace

int main() {
  criterion1();
  criterion2();
  criterion3();
  criterion4();
  criterion5();
  criterion6();
  criteria78();
  criterion9();
  if (g_failures) {
    std::printf("%d criterion(s) failed\n", g_failures);
    return 1;
  }
  std::printf("all acceptance criteria passed\n");
  return 0;
}
