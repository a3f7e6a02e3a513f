#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ntkit/circuit.hpp"
#include "ntkit/pauli.hpp"
#include "ntkit/rng.hpp"

namespace ntkit {

// 2^q x 2^q density matrix. Kept Hermitian / unit trace by every operation.
struct DensityMatrix {
  int q = 0;
  Matrix rho;

  static DensityMatrix zero_state(int q);
  static DensityMatrix from_statevector(const Vector& psi, int q);
  double trace_real() const;
  bool is_physical(double tol = 1e-8) const;
};

// Per-junction Pauli channel attached after each CNOT, plus optional
// diagnostics knobs: a residual coherent unitary per junction, a single-qubit
// depolarizing rate applied after every single-qubit gate, and a readout
// confusion matrix per qubit.
struct JunctionChannel {
  int junction = -1;
  ProbVector probs;          // 2-qubit (16) or 3-qubit incl. neighbor (64)
  bool has_neighbor = false;
};

struct NoiseModel {
  std::vector<JunctionChannel> junctions;
  // exp(-i delta H_rand) on the CNOT pair, generated per junction from
  // coherent_seed. Emulates the residual coherent channel left by finite RC.
  double coherent_delta = 0.0;
  uint64_t coherent_seed = 0;
  double single_qubit_depolarizing = 0.0;
  // row r = true state, col c = observed outcome
  std::vector<Eigen::Matrix2d> readout_confusion;

  const JunctionChannel* find(int junction) const;
  bool has_coherent() const { return coherent_delta > 0.0; }
  Matrix coherent_unitary(int junction) const;  // 4x4 on (control, target)
};

struct ShotRecord {
  int q = 0;
  std::vector<Pauli> basis;             // measurement basis per qubit (I = skip -> Z)
  std::map<uint64_t, double> counts;    // outcome bits -> count (double: IBU output is fractional)
  double total = 0.0;
};

// -- pure-state kernels (trajectory mode) --
Vector zero_statevector(int q);
void apply_gate_state(Vector& psi, const Gate& g, int num_qubits);
void apply_pauli_state(Vector& psi, std::size_t pauli_index, const std::vector<int>& qubits, int num_qubits);

// -- density-matrix operations --
DensityMatrix apply_gate(const DensityMatrix& rho, const Gate& g);
DensityMatrix apply_unitary(const DensityMatrix& rho, const Matrix& u, const std::vector<int>& qubits);
DensityMatrix apply_pauli_channel(const DensityMatrix& rho, const ProbVector& channel, const std::vector<int>& qubits);
double expectation(const DensityMatrix& rho, const PauliString& obs);
double expectation_state(const Vector& psi, const PauliString& obs, int num_qubits);

ShotRecord sample_shots(const DensityMatrix& rho, const std::vector<Pauli>& basis, std::size_t n, Rng& rng);
ShotRecord sample_shots_state(const Vector& psi, const std::vector<Pauli>& basis, int num_qubits, std::size_t n,
                              Rng& rng);

// Observable estimate from counts: mean over shots of the +-1 product over
// `qubits` (register positions).
double counts_expectation(const ShotRecord& rec, const std::vector<int>& qubits);

ShotRecord apply_readout_error(const ShotRecord& rec, const std::vector<Eigen::Matrix2d>& confusion, Rng& rng);
ShotRecord ibu_correct(const ShotRecord& rec, const std::vector<Eigen::Matrix2d>& confusion, int iters);

// Channel mode: exact evolution, Pauli channel applied after each CNOT.
DensityMatrix run_circuit_channel(const Circuit& c, const NoiseModel& model);
// Same, from a caller-supplied initial matrix (need not be a physical state;
// process-matrix extraction feeds basis matrices through it).
DensityMatrix run_circuit_channel(const Circuit& c, const NoiseModel& model, DensityMatrix rho);

// Trajectory mode: one sampled Pauli error per CNOT; returns the pure state.
Vector run_circuit_trajectory(const Circuit& c, const NoiseModel& model, Rng& rng);

// Noiseless pure-state run.
Vector run_circuit_ideal(const Circuit& c);

}  // namespace ntkit
