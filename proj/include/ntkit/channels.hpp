#pragma once

#include <string>
#include <vector>

#include "ntkit/pauli.hpp"
#include "ntkit/rng.hpp"

namespace ntkit {

// Isotropic 2-qubit channel: PTM diag(1, 1-eps, ..., 1-eps). The per-Pauli
// error rate is eps/16 and the total error probability 15*eps/16.
struct DepolarizingParams2Q {
  double epsilon = 0.0;
};

// Three-parameter channel on (control, target, neighbor): depolarizing noise
// on the CNOT pair, on the neighbor, and on all three at once.
struct QuasiLocalParams3Q {
  double eps_cnot = 0.0;
  double eps_neigh = 0.0;
  double eps_glob = 0.0;
};

// Signed dressing distribution mapping one Pauli channel into another.
// quasi[a] sums to 1 but may be negative; sampling uses probs[a] =
// |quasi[a]| / gamma and reweights by signs[a] * gamma.
struct QuasiProbPlan {
  std::size_t q = 0;
  std::vector<double> quasi;
  std::vector<double> probs;
  std::vector<int> signs;
  double gamma = 1.0;
  int junction_id = -1;
};

FidelityVector make_depolarizing_2q(const DepolarizingParams2Q& params);
FidelityVector make_quasilocal_3q(const QuasiLocalParams3Q& params);

// Elementwise PTM-diagonal algebra (diagonal channels commute).
FidelityVector compose_fidelities(const FidelityVector& a, const FidelityVector& b);
FidelityVector invert_fidelities(const FidelityVector& f);

// Plan for the dressing channel E^target (E^gate)^-1.
QuasiProbPlan tailor_plan(const FidelityVector& gate, const FidelityVector& target);

// Depolarizing strength with the same average fidelity as `gate`.
double matched_epsilon(const FidelityVector& gate);

// Closed-form quasiprobabilities for a depolarizing target of strength
// epsilon: q_a = (1/16)[1 + (1-eps) sum_{b!=0} (-1)^{<a,b>}/f_b]. Equals
// tailor_plan(gate, make_depolarizing_2q(epsilon)).
QuasiProbPlan q_dnt(const FidelityVector& gate, double epsilon);

std::pair<PauliString, int> sample_dressing(const QuasiProbPlan& plan, Rng& rng);

// Clamp negative probabilities to zero and renormalize (used before feeding
// tomography output to the emulator; note this is not the same as clamping
// fidelities above 1).
ProbVector sanitize_distribution(const ProbVector& p);

// On-disk noise model: per junction the measured PTM diagonal.
struct NoiseModelFile {
  struct Entry {
    int junction = -1;
    std::string direction = "forward";
    int neighbor = -1;  // register position, 3q entries only
    FidelityVector fidelities;
  };
  std::vector<Entry> entries;

  std::string to_json() const;
  static NoiseModelFile from_json(const std::string& text);
  const Entry* find(int junction) const;
};

}  // namespace ntkit
