#pragma once

#include <map>
#include <string>

#include "ntkit/channels.hpp"
#include "ntkit/compiling.hpp"
#include "ntkit/simulator.hpp"

namespace ntkit {

// Everything needed to run and undo noise tailoring on one circuit: the
// per-junction target strengths, the dressing plans with their gammas, and
// the estimator prefactor sigma = prod gamma^N_CNOT / F_NEC (log-space, the
// exponent overflows double for deep circuits otherwise).
struct MitigationPlan {
  std::map<int, double> target_epsilon;             // 2-qubit targets (PTM damping)
  std::map<int, QuasiLocalParams3Q> target_3q;      // 3-qubit targets
  PlanMap plans;
  std::map<int, double> gamma;
  std::map<int, int> n_cnot;
  double f_nec = 1.0;
  double log_sigma = 0.0;
  PauliString nec_observable;

  std::string to_json() const;
  static MitigationPlan from_json(const std::string& text);
};

// The circuit with every single-qubit gate deleted; CNOT order, qubits and
// junction tags are preserved.
Circuit nec_circuit(const Circuit& c);

// Noisy / ideal expectation ratio of the noise-estimation circuit in exact
// channel mode.
double nec_fidelity(const Circuit& nec, const NoiseModel& model, const PauliString& obs);

double mitigate(double raw, double f_nec);

// The observable whose decay defines F_NEC: the requested one when its ideal
// NEC expectation is nonzero, otherwise the Z-string on its support (the NEC
// circuit maps |0..0> to itself, so any Z-string has ideal expectation +1).
PauliString choose_nec_observable(const Circuit& nec, const PauliString& desired);

struct OptimizeOptions {
  int grid = 64;
  int sweeps = 2;
  int refine_iters = 40;
};

// Per-junction search of the target depolarizing strength lambda_d in
// [0, 1/15] (epsilon = 16 lambda_d) minimizing sigma; junctions are relaxed
// one at a time by grid + golden-section, holding the others fixed
// (coordinate descent, `sweeps` passes). Entries of `gates` with q = 3 get a
// box search over the quasi-local triple instead.
MitigationPlan optimize_target(const std::map<int, FidelityVector>& gates, const Circuit& nec,
                               const PauliString& observable, const OptimizeOptions& opt = {});

}  // namespace ntkit
