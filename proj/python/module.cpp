// Python bindings for the main operations: channel algebra, noise
// generation, tomography, planning, and trial execution.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "ntkit/experiment.hpp"
#include "ntkit/tomography.hpp"

namespace py = pybind11;
using namespace ntkit;

PYBIND11_MODULE(_ntkit, m) {
  m.doc() = "noise tailoring and mitigation emulation toolkit";

  m.def(
      "walsh_hadamard",
      [](const std::vector<double>& f, std::size_t q) { return walsh_hadamard(FidelityVector(q, f)).p; },
      py::arg("fidelities"), py::arg("q"), "PTM diagonal -> Pauli error probabilities");
  m.def(
      "inverse_walsh_hadamard",
      [](const std::vector<double>& p, std::size_t q) { return inverse_walsh_hadamard(ProbVector(q, p)).f; },
      py::arg("probabilities"), py::arg("q"));
  m.def(
      "depolarizing_2q", [](double eps) { return make_depolarizing_2q({eps}).f; }, py::arg("epsilon"));
  m.def(
      "tailor",
      [](const std::vector<double>& gate, const std::vector<double>& target, std::size_t q) {
        QuasiProbPlan plan = tailor_plan(FidelityVector(q, gate), FidelityVector(q, target));
        py::dict d;
        d["quasi"] = plan.quasi;
        d["gamma"] = plan.gamma;
        return d;
      },
      py::arg("gate"), py::arg("target"), py::arg("q"),
      "quasiprobability dressing plan mapping the gate channel onto the target");
  m.def(
      "matched_epsilon", [](const std::vector<double>& f, std::size_t q) { return matched_epsilon(FidelityVector(q, f)); },
      py::arg("fidelities"), py::arg("q") = 2);

  m.def(
      "gen_noise",
      [](int junctions, double mean_error, double dispersion, std::uint64_t seed) {
        SyntheticNoiseSpec spec{junctions, mean_error, dispersion, seed};
        return gen_synthetic_noise(spec).to_json();
      },
      py::arg("junctions") = 3, py::arg("mean_error") = 0.01, py::arg("dispersion") = 1.1, py::arg("seed") = 1,
      "synthetic anisotropic noise model as JSON");

  m.def(
      "pnt_fit",
      [](const std::string& noise_json, int junction, std::size_t n_rc, std::size_t shots, int depth_count,
         std::uint64_t seed) {
        auto truth = NoiseModelFile::from_json(noise_json);
        const auto* e = truth.find(junction);
        if (!e) throw std::invalid_argument("junction not present in the noise model");
        std::vector<int> depths;
        for (int d = 0; d < depth_count; ++d) depths.push_back(1 << d);
        auto specs = generate_pnt_circuits(junction, depths, e->fidelities.q == 3);
        NoiseModel model;
        model.junctions.push_back({junction, walsh_hadamard(e->fidelities), e->fidelities.q == 3});
        Rng rng(derive_seed(seed, 300, junction));
        auto res = fit_fidelities(measure_pnt(specs, model, n_rc, shots, rng), junction,
                                  shots ? std::size_t{500} : std::size_t{0}, derive_seed(seed, 301, junction));
        py::dict d;
        d["f"] = res.f;
        d["f_std"] = res.f_std;
        if (res.crosstalk) {
          d["fD"] = res.fD;
          d["fD_std"] = res.fD_std;
        }
        return d;
      },
      py::arg("noise_json"), py::arg("junction") = 0, py::arg("n_rc") = 0, py::arg("shots") = 0,
      py::arg("depth_count") = 5, py::arg("seed") = 1,
      "noise tomography against an emulated device; n_rc=shots=0 selects analytic signals");

  m.def(
      "plan",
      [](const std::string& noise_json, int steps, double dt) {
        BcsParams bcs;
        bcs.steps = steps;
        bcs.dt = dt;
        return plan_for(NoiseModelFile::from_json(noise_json), bcs).to_json();
      },
      py::arg("noise_json"), py::arg("steps") = 15, py::arg("dt") = 0.2, "optimized tailoring plan as JSON");

  m.def(
      "run_trial",
      [](const std::string& noise_json, const std::string& trial, int steps, int n_nt, std::uint64_t seed,
         int workers) {
        ExperimentConfig cfg;
        cfg.trial = trial_from_string(trial);
        cfg.bcs.steps = steps;
        cfg.n_nt = n_nt;
        cfg.seed = seed;
        cfg.workers = workers;
        TrialResult res = run_trial(cfg, NoiseModelFile::from_json(noise_json));
        py::dict d;
        d["zeta_all"] = res.zeta_all;
        d["zeta_last2"] = res.zeta_last2;
        d["times"] = res.times;
        d["ideal"] = res.ideal;
        d["mitigated"] = res.mitigated;
        d["expectations_csv"] = expectations_csv(res);
        return d;
      },
      py::arg("noise_json"), py::arg("trial") = "T1", py::arg("steps") = 15, py::arg("n_nt") = 1000,
      py::arg("seed") = 1, py::arg("workers") = 1);

  m.def("observables", [] {
    std::vector<std::string> names;
    for (const auto& o : bcs_observables()) names.push_back(o.str());
    return names;
  });
}
