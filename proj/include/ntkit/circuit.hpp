#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ntkit/pauli.hpp"

namespace ntkit {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

enum class GateType : uint8_t { H, X, Y, Z, S, Sdg, Rx, Ry, Rz, Cnot };

bool is_single_qubit(GateType t);
std::string gate_name(GateType t);
GateType gate_from_name(const std::string& name);

struct Gate {
  GateType type;
  int q0 = 0;             // single-qubit target, or CNOT control
  int q1 = -1;            // CNOT target
  double angle = 0.0;     // rotation angle for Rx/Ry/Rz
  int junction = -1;      // noise-model junction id, CNOT only
  int neighbor = -1;      // spectator qubit for crosstalk channels, CNOT only

  static Gate single(GateType t, int q, double angle = 0.0);
  static Gate cnot(int control, int target, int junction = -1, int neighbor = -1);

  // 2x2 or 4x4 unitary of the bare gate.
  Matrix unitary() const;
};

struct Circuit {
  int num_qubits = 0;
  std::vector<Gate> gates;

  Circuit() = default;
  explicit Circuit(int nq) : num_qubits(nq) {}

  void add(Gate g);
  std::size_t cnot_count() const;

  // Full 2^n x 2^n unitary (debug/oracle use; n <= 5).
  Matrix unitary() const;

  std::string to_json() const;
  static Circuit from_json(const std::string& text);
};

// Dense matrix for a Pauli string on its own qubits.
Matrix pauli_matrix(const PauliString& p);

// Pauli string embedded into an n-qubit register (identity elsewhere);
// `qubits[k]` is the register position of the string's qubit k.
Matrix pauli_matrix_embedded(const PauliString& p, const std::vector<int>& qubits, int num_qubits);

}  // namespace ntkit
