#include <doctest.h>

#include <cmath>

#include "ntkit/bcs.hpp"
#include "ntkit/simulator.hpp"

using namespace ntkit;

namespace {

Matrix xxyy_exact(double theta) {
  Matrix g = pauli_matrix(PauliString("XX")) + pauli_matrix(PauliString("YY"));
  Eigen::SelfAdjointEigenSolver<Matrix> es(g);
  Matrix d = Matrix::Zero(4, 4);
  for (int k = 0; k < 4; ++k) d(k, k) = std::exp(Complex(0.0, 0.5 * theta * es.eigenvalues()[k]));
  return es.eigenvectors() * d * es.eigenvectors().adjoint();
}

// 1 iff u = phase * v
double phase_overlap(const Matrix& u, const Matrix& v) {
  return std::abs((u.adjoint() * v).trace()) / static_cast<double>(u.rows());
}

}  // namespace

TEST_CASE("xxyy block matches the matrix exponential") {
  for (double theta : {0.0, 0.2, -0.7, 1.9, M_PI}) {
    Circuit c(2);
    append_xxyy_block(c, 0, 1, theta, 0);
    CHECK(c.cnot_count() == 3);
    CHECK(phase_overlap(c.unitary(), xxyy_exact(theta)) == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("xxyy block embeds correctly on a non-adjacent pair") {
  double theta = 0.6;
  Circuit c(3);
  append_xxyy_block(c, 0, 2, theta, 5);
  Matrix g = pauli_matrix_embedded(PauliString("XX"), {0, 2}, 3) + pauli_matrix_embedded(PauliString("YY"), {0, 2}, 3);
  Eigen::SelfAdjointEigenSolver<Matrix> es(g);
  Matrix d = Matrix::Zero(8, 8);
  for (int k = 0; k < 8; ++k) d(k, k) = std::exp(Complex(0.0, 0.5 * theta * es.eigenvalues()[k]));
  CHECK(phase_overlap(c.unitary(), es.eigenvectors() * d * es.eigenvectors().adjoint()) ==
        doctest::Approx(1.0).epsilon(1e-12));
  for (const auto& gate : c.gates)
    if (gate.type == GateType::Cnot) CHECK(gate.junction == 5);
}

TEST_CASE("trotter circuit layout and gate count") {
  BcsParams p;
  Circuit c = bcs_trotter_circuit(p, 15);
  CHECK(c.cnot_count() == 135);
  CHECK(bcs_trotter_circuit(p, 1).cnot_count() == 9);
  int per_junction[3] = {0, 0, 0};
  for (const auto& g : bcs_trotter_circuit(p, 1).gates)
    if (g.type == GateType::Cnot) per_junction[g.junction]++;
  for (int j = 0; j < 3; ++j) CHECK(per_junction[j] == 3);
  BcsParams bad;
  bad.eps = {1.0, 2.0};
  CHECK_THROWS(bcs_trotter_circuit(bad, 1));
}

TEST_CASE("exact evolution conserves norm and energy") {
  BcsParams p;
  Matrix h = bcs_hamiltonian(p);
  Vector psi0 = bcs_initial_state(3);
  double e0 = (psi0.adjoint() * h * psi0)(0).real();
  for (double t : {0.3, 1.0, 2.7}) {
    Vector psi = exact_evolve(p, t, psi0);
    CHECK(psi.norm() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK((psi.adjoint() * h * psi)(0).real() == doctest::Approx(e0).epsilon(1e-10));
  }
}

TEST_CASE("trotter error shrinks first order in the step size") {
  BcsParams p;
  double t = 1.0;
  auto worst_error = [&](double dt) {
    BcsParams q = p;
    q.dt = dt;
    int steps = static_cast<int>(std::lround(t / dt));
    Vector trot = run_circuit_ideal(bcs_trotter_circuit(q, steps));
    Vector exact = exact_evolve(p, t, bcs_initial_state(3));
    double worst = 0.0;
    for (const auto& obs : bcs_observables())
      worst = std::max(worst, std::abs(expectation_state(trot, obs, 3) - expectation_state(exact, obs, 3)));
    return worst;
  };
  double e1 = worst_error(0.2), e2 = worst_error(0.1), e3 = worst_error(0.05);
  CHECK(std::log2(e1 / e2) == doctest::Approx(1.0).epsilon(0.2));
  CHECK(std::log2(e2 / e3) == doctest::Approx(1.0).epsilon(0.2));
}

TEST_CASE("decoupled modes precess at twice their mode energy") {
  BcsParams p;
  p.g = 0.0;
  for (double t : {0.4, 1.2}) {
    int steps = static_cast<int>(std::lround(t / p.dt));
    Vector trot = run_circuit_ideal(bcs_trotter_circuit(p, steps));
    Vector exact = exact_evolve(p, t, bcs_initial_state(3));
    // with g = 0 every term commutes, so the product formula is exact
    CHECK(expectation_state(trot, PauliString("XII"), 3) == doctest::Approx(std::cos(2.0 * p.eps[0] * t)).epsilon(1e-10));
    CHECK(expectation_state(exact, PauliString("XII"), 3) == doctest::Approx(std::cos(2.0 * p.eps[0] * t)).epsilon(1e-10));
  }
}
