#include "ntkit/experiment.hpp"

#include <cmath>
#include <cstdio>
#include <random>
#include <stdexcept>
#include <thread>

#include "ntkit/compiling.hpp"
#include "ntkit/simulator.hpp"

namespace ntkit {

namespace {

// seed-stream stage tags
constexpr int kStageNoiseGen = 900;
constexpr int kStageCoherent = 990;
constexpr int kStageTrialBase = 100;  // + trial_id * 100 + time index

int trial_id(Trial t) {
  switch (t) {
    case Trial::T1: return 1;
    case Trial::T2: return 2;
    case Trial::T3: return 3;
    case Trial::T4: return 4;
    case Trial::Diag: return 5;
  }
  return 0;
}

}  // namespace

std::string trial_name(Trial t) {
  switch (t) {
    case Trial::T1: return "T1";
    case Trial::T2: return "T2";
    case Trial::T3: return "T3";
    case Trial::T4: return "T4";
    case Trial::Diag: return "DIAG";
  }
  throw std::invalid_argument("unknown trial");
}

Trial trial_from_string(const std::string& s) {
  if (s == "T1" || s == "t1") return Trial::T1;
  if (s == "T2" || s == "t2") return Trial::T2;
  if (s == "T3" || s == "t3") return Trial::T3;
  if (s == "T4" || s == "t4") return Trial::T4;
  if (s == "DIAG" || s == "diag") return Trial::Diag;
  throw std::invalid_argument("unknown trial name: " + s);
}

NoiseModelFile gen_synthetic_noise(const SyntheticNoiseSpec& spec) {
  if (spec.mean_error < 0.0 || spec.mean_error >= 1.0) throw std::invalid_argument("mean error out of range");
  NoiseModelFile file;
  for (int j = 0; j < spec.junctions; ++j) {
    Rng rng(derive_seed(spec.seed, kStageNoiseGen, j));
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<double> p(16, 0.0);
    double tot = 0.0;
    for (int i = 1; i < 16; ++i) tot += (p[i] = std::exp(spec.dispersion * gauss(rng)));
    for (int i = 1; i < 16; ++i) p[i] *= spec.mean_error / tot;
    p[0] = 1.0 - spec.mean_error;
    NoiseModelFile::Entry e;
    e.junction = j;
    e.fidelities = inverse_walsh_hadamard(ProbVector(2, p));
    file.entries.push_back(std::move(e));
  }
  return file;
}

NoiseModel noise_model_from_file(const NoiseModelFile& noise) {
  NoiseModel model;
  for (const auto& e : noise.entries) {
    ProbVector p = sanitize_distribution(walsh_hadamard(e.fidelities));
    model.junctions.push_back({e.junction, std::move(p), e.fidelities.q == 3});
  }
  return model;
}

MitigationPlan plan_for(const NoiseModelFile& noise, const BcsParams& bcs) {
  std::map<int, FidelityVector> gates;
  for (const auto& e : noise.entries) gates[e.junction] = e.fidelities;
  Circuit nec = nec_circuit(bcs_trotter_circuit(bcs, bcs.steps));
  return optimize_target(gates, nec, PauliString(std::string(bcs.qubits(), 'Z')));
}

namespace {

// exact-channel model of the trial's assumed noise
NoiseModel assumed_model(Trial t, const NoiseModelFile& noise, const MitigationPlan& plan) {
  switch (t) {
    case Trial::T1:
      return noise_model_from_file(noise);
    case Trial::T2:
    case Trial::T3:
    case Trial::Diag: {
      NoiseModel m;
      for (const auto& e : noise.entries) {
        FidelityVector tgt = e.fidelities.q == 3 ? make_quasilocal_3q(plan.target_3q.at(e.junction))
                                                 : make_depolarizing_2q({plan.target_epsilon.at(e.junction)});
        m.junctions.push_back({e.junction, walsh_hadamard(tgt), e.fidelities.q == 3});
      }
      return m;
    }
    case Trial::T4: {
      NoiseModel m;
      for (const auto& e : noise.entries)
        m.junctions.push_back(
            {e.junction, walsh_hadamard(make_depolarizing_2q({matched_epsilon(e.fidelities)})), false});
      return m;
    }
  }
  throw std::invalid_argument("unknown trial");
}

std::vector<Pauli> joint_basis(const std::vector<PauliString>& observables, int nq) {
  std::vector<Pauli> basis(nq, Pauli::I);
  for (const auto& obs : observables)
    for (int q = 0; q < nq; ++q) {
      Pauli p = obs.at(q);
      if (p == Pauli::I) continue;
      if (basis[q] != Pauli::I && basis[q] != p)
        throw std::invalid_argument("observable set is not jointly measurable in one basis");
      basis[q] = p;
    }
  return basis;
}

}  // namespace

TrialResult run_trial(const ExperimentConfig& cfg, const NoiseModelFile& noise) {
  bool needs_plan = cfg.trial != Trial::T1 && cfg.trial != Trial::T4;
  MitigationPlan plan;
  if (needs_plan) plan = plan_for(noise, cfg.bcs);
  return run_trial(cfg, noise, plan);
}

TrialResult run_trial(const ExperimentConfig& cfg, const NoiseModelFile& noise, const MitigationPlan& plan) {
  const BcsParams& p = cfg.bcs;
  int nq = p.qubits();
  TrialResult res;
  res.trial = cfg.trial;
  res.observables = bcs_observables();
  res.plan = plan;
  std::size_t n_obs = res.observables.size();

  NoiseModel mitigation_model = assumed_model(cfg.trial, noise, plan);
  bool sampled = cfg.trial == Trial::T3 || cfg.trial == Trial::Diag;
  NoiseModel exec_model;
  if (sampled) {
    exec_model = noise_model_from_file(noise);
    exec_model.coherent_delta = cfg.inject_coherent;
    exec_model.coherent_seed = derive_seed(cfg.seed, kStageCoherent, 0);
    exec_model.single_qubit_depolarizing = cfg.inject_depol_1q;
    if (cfg.n_nt < 1 || cfg.shots_per_circuit < 1)
      throw std::invalid_argument("sampled trials need at least one circuit and one shot");
  }

  std::vector<Pauli> basis = joint_basis(res.observables, nq);
  std::vector<std::vector<int>> obs_qubits(n_obs);
  for (std::size_t o = 0; o < n_obs; ++o)
    for (int q = 0; q < nq; ++q)
      if (res.observables[o].at(q) != Pauli::I) obs_qubits[o].push_back(q);

  for (int step = 1; step <= p.steps; ++step) {
    double t = step * p.dt;
    res.times.push_back(t);
    Circuit c = bcs_trotter_circuit(p, step);
    Vector ideal_psi = run_circuit_ideal(c);
    Vector exact_psi = exact_evolve(p, t, bcs_initial_state(nq));
    std::vector<double> ideal(n_obs), exact(n_obs), fnec(n_obs), raw(n_obs), mit(n_obs);
    Circuit nec = nec_circuit(c);
    for (std::size_t o = 0; o < n_obs; ++o) {
      ideal[o] = expectation_state(ideal_psi, res.observables[o], nq);
      exact[o] = expectation_state(exact_psi, res.observables[o], nq);
      fnec[o] = nec_fidelity(nec, mitigation_model, choose_nec_observable(nec, res.observables[o]));
    }

    if (!sampled) {
      DensityMatrix rho = run_circuit_channel(c, mitigation_model);
      for (std::size_t o = 0; o < n_obs; ++o) {
        raw[o] = expectation(rho, res.observables[o]);
        mit[o] = mitigate(raw[o], fnec[o]);
      }
    } else {
      std::vector<std::vector<double>> circ(cfg.n_nt, std::vector<double>(n_obs, 0.0));
      int workers = std::max(1, cfg.workers);
      auto work = [&](int w) {
        for (int i = w; i < cfg.n_nt; i += workers) {
          Rng rng(derive_seed(cfg.seed, kStageTrialBase + trial_id(cfg.trial) * 100 + step, i));
          DressedCircuit d = nt_dress(c, plan.plans, rng);
          double w_total = d.sign * std::exp(d.weight_log);
          // every shot sees an independent noise realization
          std::vector<double> acc(n_obs, 0.0);
          for (int s = 0; s < cfg.shots_per_circuit; ++s) {
            Vector psi = run_circuit_trajectory(d.circuit, exec_model, rng);
            ShotRecord rec = sample_shots_state(psi, basis, nq, 1, rng);
            for (std::size_t o = 0; o < n_obs; ++o) acc[o] += counts_expectation(rec, obs_qubits[o]);
          }
          for (std::size_t o = 0; o < n_obs; ++o)
            circ[i][o] = w_total * acc[o] / cfg.shots_per_circuit / fnec[o];
        }
      };
      if (workers == 1) {
        work(0);
      } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; ++w) pool.emplace_back(work, w);
        for (auto& th : pool) th.join();
      }
      for (std::size_t o = 0; o < n_obs; ++o) {
        double s = 0.0;
        for (int i = 0; i < cfg.n_nt; ++i) s += circ[i][o];  // sequential, order-fixed
        mit[o] = s / cfg.n_nt;
        raw[o] = mit[o] * fnec[o];
      }
      res.per_circuit.push_back(std::move(circ));
    }
    res.ideal.push_back(std::move(ideal));
    res.exact.push_back(std::move(exact));
    res.f_nec.push_back(std::move(fnec));
    res.raw.push_back(std::move(raw));
    res.mitigated.push_back(std::move(mit));
  }

  std::vector<AwaeRow> all, last2;
  for (std::size_t ti = 0; ti < res.times.size(); ++ti)
    for (std::size_t o = 0; o < n_obs; ++o) {
      all.push_back({res.ideal[ti][o], res.mitigated[ti][o]});
      if (ti + 2 >= res.times.size()) last2.push_back({res.ideal[ti][o], res.mitigated[ti][o]});
    }
  res.zeta_all = awae(all);
  res.zeta_last2 = awae(last2);
  return res;
}

DiagReport run_diagnostics(const ExperimentConfig& cfg, const NoiseModelFile& noise) {
  MitigationPlan plan = plan_for(noise, cfg.bcs);
  DiagReport rep;
  ExperimentConfig c2 = cfg;
  c2.trial = Trial::T2;
  c2.inject_coherent = c2.inject_depol_1q = 0.0;
  rep.inf = run_trial(c2, noise, plan);
  ExperimentConfig c3 = cfg;
  c3.trial = Trial::T3;
  c3.inject_coherent = c3.inject_depol_1q = 0.0;
  rep.finite = run_trial(c3, noise, plan);
  ExperimentConfig cd = cfg;
  cd.trial = Trial::Diag;
  rep.full = run_trial(cd, noise, plan);

  rep.curve = bootstrap_curve(rep.full.per_circuit, rep.full.ideal);
  rep.fit = extrapolate(rep.curve);

  double log_gamma = 0.0;
  for (const auto& [j, g] : plan.gamma) log_gamma += plan.n_cnot.at(j) * std::log(g);
  Circuit nec = nec_circuit(bcs_trotter_circuit(cfg.bcs, cfg.bcs.steps));
  PauliString obs = plan.nec_observable;
  double f_tgt = nec_fidelity(nec, assumed_model(Trial::T2, noise, plan), obs);
  double f_raw = nec_fidelity(nec, noise_model_from_file(noise), obs);
  rep.decomposition =
      diagnostics(rep.inf.zeta_all, rep.finite.zeta_all, rep.full.zeta_all, rep.fit, log_gamma, f_tgt, f_raw);
  return rep;
}

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

std::string expectations_csv(const TrialResult& r) {
  std::string out = "trial,time,observable,ideal,exact,raw,f_nec,mitigated\n";
  for (std::size_t ti = 0; ti < r.times.size(); ++ti)
    for (std::size_t o = 0; o < r.observables.size(); ++o) {
      out += trial_name(r.trial) + "," + fmt(r.times[ti]) + "," + r.observables[o].str() + "," + fmt(r.ideal[ti][o]) +
             "," + fmt(r.exact[ti][o]) + "," + fmt(r.raw[ti][o]) + "," + fmt(r.f_nec[ti][o]) + "," +
             fmt(r.mitigated[ti][o]) + "\n";
    }
  out += "# zeta_all=" + fmt(r.zeta_all) + " zeta_last2=" + fmt(r.zeta_last2) + "\n";
  return out;
}

std::string curve_csv(const std::vector<BatchCurvePoint>& curve) {
  std::string out = "n,zeta,std\n";
  for (const auto& pt : curve) out += std::to_string(pt.n) + "," + fmt(pt.zeta) + "," + fmt(pt.std) + "\n";
  return out;
}

}  // namespace ntkit
