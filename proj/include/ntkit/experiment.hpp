#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ntkit/analysis.hpp"
#include "ntkit/bcs.hpp"
#include "ntkit/channels.hpp"
#include "ntkit/mitigation.hpp"

namespace ntkit {

// Emulation configurations compared throughout:
//   T1   exact channel mode with the raw Pauli noise, + estimation-circuit
//        mitigation
//   T2   exact channel mode with the optimized depolarizing target
//   T3   finite quasiprobability sampling of the tailoring dressings over the
//        raw noise (trajectory mode)
//   T4   exact channel mode with the average-matched depolarizing strength
//   Diag T3 plus injected coherent / single-qubit noise, with the
//        decomposition report
enum class Trial { T1, T2, T3, T4, Diag };

std::string trial_name(Trial t);
Trial trial_from_string(const std::string& s);

// Anisotropic synthetic noise: per junction, 15 log-normal Pauli rates
// rescaled to a fixed total error probability per CNOT.
struct SyntheticNoiseSpec {
  int junctions = 3;
  double mean_error = 0.01;  // total error probability per CNOT
  double dispersion = 1.1;   // sigma of the log-normal rate draw
  std::uint64_t seed = 1;
};
NoiseModelFile gen_synthetic_noise(const SyntheticNoiseSpec& spec);

struct ExperimentConfig {
  BcsParams bcs;
  Trial trial = Trial::T3;
  int n_nt = 10000;          // sampled circuits per time point (T3/Diag)
  int shots_per_circuit = 1;
  std::uint64_t seed = 1;
  int workers = 1;
  double inject_coherent = 0.0;   // residual-coherent angle per junction
  double inject_depol_1q = 0.0;   // depolarizing rate after 1q gates
};

struct TrialResult {
  Trial trial = Trial::T1;
  std::vector<double> times;                 // t_j = j dt
  std::vector<PauliString> observables;
  std::vector<std::vector<double>> ideal;    // noiseless-circuit references
  std::vector<std::vector<double>> exact;    // continuum values, reported only
  std::vector<std::vector<double>> raw;      // before mitigation
  std::vector<std::vector<double>> mitigated;
  std::vector<std::vector<double>> f_nec;
  // mitigated per-sampled-circuit contributions, [time][circuit][obs]
  std::vector<std::vector<std::vector<double>>> per_circuit;
  MitigationPlan plan;
  double zeta_all = 0.0;
  double zeta_last2 = 0.0;  // last two time points, the short-horizon score
};

// Exact-channel model from an on-disk fidelity table.
NoiseModel noise_model_from_file(const NoiseModelFile& noise);

// Target optimization against the full-depth estimation circuit.
MitigationPlan plan_for(const NoiseModelFile& noise, const BcsParams& bcs);

TrialResult run_trial(const ExperimentConfig& cfg, const NoiseModelFile& noise);
TrialResult run_trial(const ExperimentConfig& cfg, const NoiseModelFile& noise, const MitigationPlan& plan);

struct DiagReport {
  TrialResult inf;     // T2: infinite-sampling emulation
  TrialResult finite;  // T3 without injections
  TrialResult full;    // T3 with the configured injections
  std::vector<BatchCurvePoint> curve;
  ExtrapolationFit fit;
  DiagnosticsReport decomposition;
};
DiagReport run_diagnostics(const ExperimentConfig& cfg, const NoiseModelFile& noise);

// Deterministic text renderings (used for file emission and the
// reproducibility checks).
std::string expectations_csv(const TrialResult& r);
std::string curve_csv(const std::vector<BatchCurvePoint>& curve);

}  // namespace ntkit
