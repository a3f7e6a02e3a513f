#include "ntkit/bcs.hpp"

#include <stdexcept>

#include <Eigen/Eigenvalues>

#include "ntkit/circuit.hpp"

namespace ntkit {

namespace {

PauliString single(int nq, int q, Pauli op) {
  std::vector<Pauli> w(nq, Pauli::I);
  w[q] = op;
  return PauliString(w);
}

PauliString pair(int nq, int a, int b, Pauli pa, Pauli pb) {
  std::vector<Pauli> w(nq, Pauli::I);
  w[a] = pa;
  w[b] = pb;
  return PauliString(w);
}

}  // namespace

Matrix bcs_hamiltonian(const BcsParams& p) {
  int nq = p.qubits();
  if (nq < 2) throw std::invalid_argument("pairing model needs at least two modes");
  std::size_t dim = std::size_t{1} << nq;
  Matrix h = Matrix::Zero(dim, dim);
  for (int j = 0; j < nq; ++j)
    h -= (p.eps[j] - 0.5 * p.g) * pauli_matrix(single(nq, j, Pauli::Z));
  for (int i = 0; i < nq; ++i)
    for (int j = i + 1; j < nq; ++j) {
      h -= 0.5 * p.g * pauli_matrix(pair(nq, i, j, Pauli::X, Pauli::X));
      h -= 0.5 * p.g * pauli_matrix(pair(nq, i, j, Pauli::Y, Pauli::Y));
    }
  return h;
}

Vector bcs_initial_state(int q) {
  std::size_t dim = std::size_t{1} << q;
  return Vector::Constant(dim, Complex(1.0 / std::sqrt(double(dim)), 0.0));
}

Vector exact_evolve(const BcsParams& p, double t, const Vector& psi0) {
  Matrix h = bcs_hamiltonian(p);
  Eigen::SelfAdjointEigenSolver<Matrix> es(h);
  Vector phases(h.rows());
  for (Eigen::Index k = 0; k < h.rows(); ++k)
    phases[k] = std::exp(Complex(0.0, -es.eigenvalues()[k] * t));
  return es.eigenvectors() * phases.cwiseProduct(es.eigenvectors().adjoint() * psi0).matrix();
}

std::vector<PauliString> bcs_observables() {
  return {PauliString("XII"), PauliString("IYI"), PauliString("IIZ"), PauliString("XYI"),
          PauliString("IYZ"), PauliString("XIZ"), PauliString("XYZ")};
}

void append_xxyy_block(Circuit& c, int a, int b, double theta, int junction) {
  const double hp = M_PI / 2.0;
  c.add(Gate::single(GateType::S, b));
  c.add(Gate::single(GateType::H, b));
  c.add(Gate::single(GateType::Rx, a, hp));
  c.add(Gate::cnot(a, b, junction));
  c.add(Gate::single(GateType::Rx, a, -hp));
  c.add(Gate::single(GateType::Rz, b, theta));
  c.add(Gate::cnot(a, b, junction));
  c.add(Gate::single(GateType::Rz, b, -theta));
  c.add(Gate::single(GateType::H, a));
  c.add(Gate::cnot(a, b, junction));
  c.add(Gate::single(GateType::H, a));
  c.add(Gate::single(GateType::H, b));
}

Circuit bcs_trotter_circuit(const BcsParams& p, int steps) {
  int nq = p.qubits();
  if (nq != 3) throw std::invalid_argument("trotter layout is fixed to three modes");
  Circuit c(nq);
  for (int j = 0; j < nq; ++j) c.add(Gate::single(GateType::H, j));  // |+..+> prep
  const int pairs[3][2] = {{0, 1}, {1, 2}, {0, 2}};
  for (int s = 0; s < steps; ++s) {
    for (int j = 0; j < nq; ++j)
      c.add(Gate::single(GateType::Rz, j, -2.0 * (p.eps[j] - 0.5 * p.g) * p.dt));
    for (int k = 0; k < 3; ++k)
      append_xxyy_block(c, pairs[k][0], pairs[k][1], p.g * p.dt, k);
  }
  return c;
}

}  // namespace ntkit
