#pragma once

#include <vector>

#include "ntkit/circuit.hpp"
#include "ntkit/pauli.hpp"

namespace ntkit {

// Reduced pairing model on a handful of modes:
//   H = -sum_j (eps_j - g/2) Z_j - (g/2) sum_{i<j} (X_i X_j + Y_i Y_j)
struct BcsParams {
  std::vector<double> eps{1.0, 1.5, 2.0};
  double g = 1.0;
  double dt = 0.2;
  int steps = 15;

  int qubits() const { return static_cast<int>(eps.size()); }
};

Matrix bcs_hamiltonian(const BcsParams& p);

// |+...+>
Vector bcs_initial_state(int q);

// e^{-iHt} psi0 via exact diagonalization.
Vector exact_evolve(const BcsParams& p, double t, const Vector& psi0);

// The tracked observable set for the 3-mode instance.
std::vector<PauliString> bcs_observables();

// exp(i theta (X_a X_b + Y_a Y_b) / 2) on qubits (a, b), compiled into
// exactly 3 identically-oriented CNOTs plus single-qubit gates; the CNOTs
// carry `junction` for the noise model.
void append_xxyy_block(Circuit& c, int a, int b, double theta, int junction);

// First-order product formula: per step the single-mode Rz layer followed by
// the pair blocks (0,1), (1,2), (0,2) with junction ids 0, 1, 2.  9 CNOTs
// per step.
Circuit bcs_trotter_circuit(const BcsParams& p, int steps);

}  // namespace ntkit
