#include "ntkit/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include <Eigen/Eigenvalues>

namespace ntkit {

namespace {

// Bit position of a qubit in a basis-state index (qubit 0 = most significant).
int bitpos(int qubit, int num_qubits) { return num_qubits - 1 - qubit; }

struct PauliAction {
  uint64_t flip_mask = 0;  // X or Y qubits
  uint64_t sign_mask = 0;  // Z or Y qubits
  int y_count = 0;
};

PauliAction pauli_action(std::size_t pauli_index, const std::vector<int>& qubits, int num_qubits) {
  PauliAction a;
  const std::size_t k = qubits.size();
  for (std::size_t j = 0; j < k; ++j) {
    auto digit = (pauli_index >> (2 * (k - 1 - j))) & 3;
    uint64_t bit = uint64_t{1} << bitpos(qubits[j], num_qubits);
    if (digit == 1) {
      a.flip_mask |= bit;
    } else if (digit == 2) {
      a.flip_mask |= bit;
      a.sign_mask |= bit;
      ++a.y_count;
    } else if (digit == 3) {
      a.sign_mask |= bit;
    }
  }
  return a;
}

int parity_sign(uint64_t v) { return (__builtin_popcountll(v) & 1) ? -1 : 1; }

}  // namespace

DensityMatrix DensityMatrix::zero_state(int q) {
  DensityMatrix d;
  d.q = q;
  const std::size_t dim = std::size_t{1} << q;
  d.rho = Matrix::Zero(dim, dim);
  d.rho(0, 0) = 1.0;
  return d;
}

DensityMatrix DensityMatrix::from_statevector(const Vector& psi, int q) {
  DensityMatrix d;
  d.q = q;
  d.rho = psi * psi.adjoint();
  return d;
}

double DensityMatrix::trace_real() const { return rho.trace().real(); }

bool DensityMatrix::is_physical(double tol) const {
  if (std::abs(rho.trace().real() - 1.0) > 1e-10) return false;
  if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > 1e-10) return false;
  Eigen::SelfAdjointEigenSolver<Matrix> es(rho, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff() >= -tol;
}

const JunctionChannel* NoiseModel::find(int junction) const {
  for (const auto& j : junctions)
    if (j.junction == junction) return &j;
  return nullptr;
}

Matrix NoiseModel::coherent_unitary(int junction) const {
  Rng rng(coherent_seed * 0x9e3779b97f4a7c15ULL + static_cast<uint64_t>(junction) + 1);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Matrix h = Matrix::Zero(4, 4);
  for (int r = 0; r < 4; ++r) {
    h(r, r) = gauss(rng);
    for (int c = r + 1; c < 4; ++c) {
      Complex v(gauss(rng), gauss(rng));
      h(r, c) = v;
      h(c, r) = std::conj(v);
    }
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(h);
  double norm = es.eigenvalues().cwiseAbs().maxCoeff();
  Vector phases(4);
  for (int k = 0; k < 4; ++k) phases(k) = std::exp(Complex(0.0, -coherent_delta * es.eigenvalues()(k) / norm));
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

Vector zero_statevector(int q) {
  Vector psi = Vector::Zero(std::size_t{1} << q);
  psi(0) = 1.0;
  return psi;
}

namespace {

void apply_1q_state(Vector& psi, const Matrix& u, int qubit, int num_qubits) {
  const std::size_t dim = psi.size();
  const std::size_t bit = std::size_t{1} << bitpos(qubit, num_qubits);
  for (std::size_t i = 0; i < dim; ++i) {
    if (i & bit) continue;
    Complex a = psi(i), b = psi(i | bit);
    psi(i) = u(0, 0) * a + u(0, 1) * b;
    psi(i | bit) = u(1, 0) * a + u(1, 1) * b;
  }
}

void apply_cnot_state(Vector& psi, int control, int target, int num_qubits) {
  const std::size_t dim = psi.size();
  const std::size_t cbit = std::size_t{1} << bitpos(control, num_qubits);
  const std::size_t tbit = std::size_t{1} << bitpos(target, num_qubits);
  for (std::size_t i = 0; i < dim; ++i) {
    if ((i & cbit) && !(i & tbit)) std::swap(psi(i), psi(i | tbit));
  }
}

void apply_2q_state(Vector& psi, const Matrix& u, int qa, int qb, int num_qubits) {
  const std::size_t dim = psi.size();
  const std::size_t abit = std::size_t{1} << bitpos(qa, num_qubits);
  const std::size_t bbit = std::size_t{1} << bitpos(qb, num_qubits);
  for (std::size_t i = 0; i < dim; ++i) {
    if (i & (abit | bbit)) continue;
    std::size_t idx[4] = {i, i | bbit, i | abit, i | abit | bbit};
    Complex v[4];
    for (int k = 0; k < 4; ++k) v[k] = psi(idx[k]);
    for (int r = 0; r < 4; ++r) {
      Complex acc = 0.0;
      for (int c = 0; c < 4; ++c) acc += u(r, c) * v[c];
      psi(idx[r]) = acc;
    }
  }
}

}  // namespace

namespace {

// Single-qubit application without building a gate matrix (hot path).
void apply_1q_entries(Vector& psi, Complex u00, Complex u01, Complex u10, Complex u11, int qubit, int num_qubits) {
  const std::size_t dim = psi.size();
  const std::size_t bit = std::size_t{1} << bitpos(qubit, num_qubits);
  for (std::size_t i = 0; i < dim; ++i) {
    if (i & bit) continue;
    Complex a = psi(i), b = psi(i | bit);
    psi(i) = u00 * a + u01 * b;
    psi(i | bit) = u10 * a + u11 * b;
  }
}

}  // namespace

void apply_gate_state(Vector& psi, const Gate& g, int num_qubits) {
  const Complex i(0.0, 1.0);
  const double s = 1.0 / std::sqrt(2.0);
  switch (g.type) {
    case GateType::Cnot:
      apply_cnot_state(psi, g.q0, g.q1, num_qubits);
      return;
    case GateType::H:
      apply_1q_entries(psi, s, s, s, -s, g.q0, num_qubits);
      return;
    case GateType::X:
      apply_1q_entries(psi, 0, 1, 1, 0, g.q0, num_qubits);
      return;
    case GateType::Y:
      apply_1q_entries(psi, 0, -i, i, 0, g.q0, num_qubits);
      return;
    case GateType::Z:
      apply_1q_entries(psi, 1, 0, 0, -1, g.q0, num_qubits);
      return;
    case GateType::S:
      apply_1q_entries(psi, 1, 0, 0, i, g.q0, num_qubits);
      return;
    case GateType::Sdg:
      apply_1q_entries(psi, 1, 0, 0, -i, g.q0, num_qubits);
      return;
    case GateType::Rx: {
      double c = std::cos(g.angle / 2), sn = std::sin(g.angle / 2);
      apply_1q_entries(psi, c, -i * sn, -i * sn, c, g.q0, num_qubits);
      return;
    }
    case GateType::Ry: {
      double c = std::cos(g.angle / 2), sn = std::sin(g.angle / 2);
      apply_1q_entries(psi, c, -sn, sn, c, g.q0, num_qubits);
      return;
    }
    case GateType::Rz: {
      Complex e = std::exp(-i * (g.angle / 2));
      apply_1q_entries(psi, e, 0, 0, std::conj(e), g.q0, num_qubits);
      return;
    }
    default:
      apply_1q_state(psi, g.unitary(), g.q0, num_qubits);
  }
}

void apply_pauli_state(Vector& psi, std::size_t pauli_index, const std::vector<int>& qubits, int num_qubits) {
  if (pauli_index == 0) return;
  PauliAction a = pauli_action(pauli_index, qubits, num_qubits);
  const std::size_t dim = psi.size();
  Complex yphase = std::pow(Complex(0.0, 1.0), a.y_count);
  if (a.flip_mask == 0) {
    for (std::size_t i = 0; i < dim; ++i) psi(i) *= yphase * double(parity_sign(i & a.sign_mask));
    return;
  }
  for (std::size_t i = 0; i < dim; ++i) {
    std::size_t j = i ^ a.flip_mask;
    if (j < i) continue;
    Complex vi = psi(i), vj = psi(j);
    psi(j) = yphase * double(parity_sign(i & a.sign_mask)) * vi;
    psi(i) = yphase * double(parity_sign(j & a.sign_mask)) * vj;
  }
}

DensityMatrix apply_gate(const DensityMatrix& rho, const Gate& g) {
  std::vector<int> qs = g.type == GateType::Cnot ? std::vector<int>{g.q0, g.q1} : std::vector<int>{g.q0};
  return apply_unitary(rho, g.unitary(), qs);
}

DensityMatrix apply_unitary(const DensityMatrix& rho, const Matrix& u, const std::vector<int>& qubits) {
  for (int q : qubits)
    if (q < 0 || q >= rho.q) throw std::out_of_range("apply_unitary: qubit index out of range");
  DensityMatrix out;
  out.q = rho.q;
  out.rho = rho.rho;
  // U rho U^dag as statevector kernels over columns of rho and rho^dag.
  auto apply_cols = [&](Matrix& m) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      Vector col = m.col(c);
      if (qubits.size() == 1) {
        apply_1q_state(col, u, qubits[0], rho.q);
      } else if (qubits.size() == 2) {
        apply_2q_state(col, u, qubits[0], qubits[1], rho.q);
      } else {
        throw std::invalid_argument("apply_unitary supports 1- or 2-qubit unitaries");
      }
      m.col(c) = col;
    }
  };
  apply_cols(out.rho);
  out.rho.adjointInPlace();
  apply_cols(out.rho);
  out.rho.adjointInPlace();
  return out;
}

DensityMatrix apply_pauli_channel(const DensityMatrix& rho, const ProbVector& channel, const std::vector<int>& qubits) {
  if (channel.quasi) throw std::invalid_argument("quasi-distributions cannot be applied as exact channels");
  for (double p : channel.p)
    if (p < -1e-12) throw std::invalid_argument("quasi-distributions cannot be applied as exact channels");
  if (qubits.size() != channel.q) throw std::invalid_argument("channel qubit count mismatch");
  const std::size_t dim = rho.rho.rows();
  Matrix out = Matrix::Zero(dim, dim);
  for (std::size_t a = 0; a < channel.dim(); ++a) {
    double p = channel.p[a];
    if (p <= 0.0) continue;
    if (a == 0) {
      out += p * rho.rho;
      continue;
    }
    PauliAction act = pauli_action(a, qubits, rho.q);
    for (std::size_t i = 0; i < dim; ++i) {
      int si = parity_sign(i & act.sign_mask);
      for (std::size_t j = 0; j < dim; ++j) {
        int sj = parity_sign(j & act.sign_mask);
        out(i ^ act.flip_mask, j ^ act.flip_mask) += p * static_cast<double>(si * sj) * rho.rho(i, j);
      }
    }
  }
  DensityMatrix res;
  res.q = rho.q;
  res.rho = std::move(out);
  return res;
}

double expectation(const DensityMatrix& rho, const PauliString& obs) {
  if (static_cast<int>(obs.qubits()) != rho.q) throw std::invalid_argument("observable qubit count mismatch");
  std::vector<int> qs(obs.qubits());
  for (std::size_t k = 0; k < qs.size(); ++k) qs[k] = static_cast<int>(k);
  PauliAction a = pauli_action(obs.index(), qs, rho.q);
  Complex yphase = std::pow(Complex(0.0, 1.0), a.y_count);
  Complex tr = 0.0;
  const std::size_t dim = rho.rho.rows();
  for (std::size_t i = 0; i < dim; ++i) {
    double s = parity_sign(i & a.sign_mask);
    tr += rho.rho(i, i ^ a.flip_mask) * yphase * s;
  }
  return tr.real();
}

double expectation_state(const Vector& psi, const PauliString& obs, int num_qubits) {
  Vector phi = psi;
  std::vector<int> qs(obs.qubits());
  for (std::size_t k = 0; k < qs.size(); ++k) qs[k] = static_cast<int>(k);
  apply_pauli_state(phi, obs.index(), qs, num_qubits);
  return psi.dot(phi).real();
}

namespace {

// Rotations mapping the requested basis to Z before sampling.
void rotate_to_z_state(Vector& psi, const std::vector<Pauli>& basis, int num_qubits) {
  for (int k = 0; k < num_qubits; ++k) {
    switch (basis[k]) {
      case Pauli::X:
        apply_gate_state(psi, Gate::single(GateType::H, k), num_qubits);
        break;
      case Pauli::Y:
        apply_gate_state(psi, Gate::single(GateType::Sdg, k), num_qubits);
        apply_gate_state(psi, Gate::single(GateType::H, k), num_qubits);
        break;
      default:
        break;
    }
  }
}

ShotRecord sample_from_probs(const std::vector<double>& probs, const std::vector<Pauli>& basis, int q, std::size_t n,
                             Rng& rng) {
  ShotRecord rec;
  rec.q = q;
  rec.basis = basis;
  rec.total = static_cast<double>(n);
  for (std::size_t s = 0; s < n; ++s) {
    std::size_t outcome = sample_discrete(probs, rng);
    rec.counts[outcome] += 1.0;
  }
  return rec;
}

}  // namespace

ShotRecord sample_shots(const DensityMatrix& rho, const std::vector<Pauli>& basis, std::size_t n, Rng& rng) {
  if (static_cast<int>(basis.size()) != rho.q) throw std::invalid_argument("basis size mismatch");
  DensityMatrix rot = rho;
  for (int k = 0; k < rho.q; ++k) {
    if (basis[k] == Pauli::X) {
      rot = apply_gate(rot, Gate::single(GateType::H, k));
    } else if (basis[k] == Pauli::Y) {
      rot = apply_gate(rot, Gate::single(GateType::Sdg, k));
      rot = apply_gate(rot, Gate::single(GateType::H, k));
    }
  }
  std::vector<double> probs(rot.rho.rows());
  for (Eigen::Index i = 0; i < rot.rho.rows(); ++i) probs[i] = std::max(0.0, rot.rho(i, i).real());
  double s = 0.0;
  for (double p : probs) s += p;
  for (double& p : probs) p /= s;
  return sample_from_probs(probs, basis, rho.q, n, rng);
}

ShotRecord sample_shots_state(const Vector& psi, const std::vector<Pauli>& basis, int num_qubits, std::size_t n,
                              Rng& rng) {
  Vector rot = psi;
  rotate_to_z_state(rot, basis, num_qubits);
  std::vector<double> probs(rot.size());
  double s = 0.0;
  for (Eigen::Index i = 0; i < rot.size(); ++i) {
    probs[i] = std::norm(rot(i));
    s += probs[i];
  }
  for (double& p : probs) p /= s;
  return sample_from_probs(probs, basis, num_qubits, n, rng);
}

double counts_expectation(const ShotRecord& rec, const std::vector<int>& qubits) {
  if (rec.total <= 0.0) throw std::invalid_argument("empty shot record");
  uint64_t mask = 0;
  for (int q : qubits) mask |= uint64_t{1} << (rec.q - 1 - q);
  double acc = 0.0;
  for (const auto& [outcome, count] : rec.counts) acc += parity_sign(outcome & mask) * count;
  return acc / rec.total;
}

ShotRecord apply_readout_error(const ShotRecord& rec, const std::vector<Eigen::Matrix2d>& confusion, Rng& rng) {
  if (static_cast<int>(confusion.size()) != rec.q) throw std::invalid_argument("confusion matrix count mismatch");
  ShotRecord out;
  out.q = rec.q;
  out.basis = rec.basis;
  out.total = rec.total;
  for (const auto& [outcome, count] : rec.counts) {
    auto n = static_cast<std::size_t>(std::llround(count));
    for (std::size_t s = 0; s < n; ++s) {
      uint64_t obs = 0;
      for (int k = 0; k < rec.q; ++k) {
        int bit = static_cast<int>((outcome >> (rec.q - 1 - k)) & 1);
        double p1 = confusion[k](bit, 1);
        int seen = uniform01(rng) < p1 ? 1 : 0;
        if (seen) obs |= uint64_t{1} << (rec.q - 1 - k);
      }
      out.counts[obs] += 1.0;
    }
  }
  return out;
}

ShotRecord ibu_correct(const ShotRecord& rec, const std::vector<Eigen::Matrix2d>& confusion, int iters) {
  if (iters < 1) throw std::invalid_argument("ibu_correct: iters must be >= 1");
  const std::size_t dim = std::size_t{1} << rec.q;
  for (const auto& m : confusion) {
    if (m.row(0).sum() <= 0.0 || m.row(1).sum() <= 0.0) throw std::invalid_argument("degenerate readout response");
  }
  // Full response matrix R(obs | true) as product over qubits.
  Eigen::MatrixXd resp(dim, dim);
  for (std::size_t t = 0; t < dim; ++t) {
    for (std::size_t o = 0; o < dim; ++o) {
      double p = 1.0;
      for (int k = 0; k < rec.q; ++k) {
        int tb = static_cast<int>((t >> (rec.q - 1 - k)) & 1);
        int ob = static_cast<int>((o >> (rec.q - 1 - k)) & 1);
        p *= confusion[static_cast<std::size_t>(k)](tb, ob);
      }
      resp(o, t) = p;
    }
  }
  Eigen::VectorXd measured = Eigen::VectorXd::Zero(dim);
  for (const auto& [outcome, count] : rec.counts) measured(static_cast<Eigen::Index>(outcome)) = count / rec.total;
  Eigen::VectorXd est = Eigen::VectorXd::Constant(dim, 1.0 / static_cast<double>(dim));
  for (int it = 0; it < iters; ++it) {
    Eigen::VectorXd pred = resp * est;
    Eigen::VectorXd next = Eigen::VectorXd::Zero(dim);
    for (std::size_t i = 0; i < dim; ++i) {
      double acc = 0.0;
      for (std::size_t j = 0; j < dim; ++j) {
        if (pred(j) > 0.0) acc += resp(j, i) * measured(j) / pred(j);
      }
      next(i) = est(i) * acc;
    }
    double s = next.sum();
    if (s > 0.0) next /= s;
    est = next;
  }
  ShotRecord out;
  out.q = rec.q;
  out.basis = rec.basis;
  out.total = rec.total;
  for (std::size_t i = 0; i < dim; ++i) {
    if (est(i) > 0.0) out.counts[i] = est(i) * rec.total;
  }
  return out;
}

namespace {

std::vector<int> channel_qubits(const Gate& g, const JunctionChannel& ch) {
  if (ch.has_neighbor) {
    if (g.neighbor < 0) throw std::invalid_argument("3-qubit channel on a CNOT without a declared neighbor");
    return {g.q0, g.q1, g.neighbor};
  }
  return {g.q0, g.q1};
}

const JunctionChannel* lookup(const NoiseModel& model, const Gate& g) {
  if (g.junction < 0) return nullptr;
  const JunctionChannel* ch = model.find(g.junction);
  if (!ch && !model.junctions.empty())
    throw std::invalid_argument("noise model does not cover junction " + std::to_string(g.junction));
  return ch;
}

ProbVector one_qubit_depolarizing(double p_total) {
  return ProbVector(1, {1.0 - p_total, p_total / 3.0, p_total / 3.0, p_total / 3.0});
}

}  // namespace

DensityMatrix run_circuit_channel(const Circuit& c, const NoiseModel& model) {
  return run_circuit_channel(c, model, DensityMatrix::zero_state(c.num_qubits));
}

DensityMatrix run_circuit_channel(const Circuit& c, const NoiseModel& model, DensityMatrix rho) {
  std::map<int, Matrix> coherent;  // per-junction cache; the unitary is deterministic
  for (const auto& g : c.gates) {
    rho = apply_gate(rho, g);
    if (g.type == GateType::Cnot) {
      if (const JunctionChannel* ch = lookup(model, g)) rho = apply_pauli_channel(rho, ch->probs, channel_qubits(g, *ch));
      if (model.has_coherent() && g.junction >= 0) {
        auto it = coherent.find(g.junction);
        if (it == coherent.end()) it = coherent.emplace(g.junction, model.coherent_unitary(g.junction)).first;
        rho = apply_unitary(rho, it->second, {g.q0, g.q1});
      }
    } else if (model.single_qubit_depolarizing > 0.0) {
      rho = apply_pauli_channel(rho, one_qubit_depolarizing(model.single_qubit_depolarizing), {g.q0});
    }
  }
  return rho;
}

Vector run_circuit_trajectory(const Circuit& c, const NoiseModel& model, Rng& rng) {
  Vector psi = zero_statevector(c.num_qubits);
  std::map<int, Matrix> coherent;  // per-junction cache; the unitary is deterministic
  ProbVector depol_1q(1, {1.0, 0.0, 0.0, 0.0});
  if (model.single_qubit_depolarizing > 0.0) depol_1q = one_qubit_depolarizing(model.single_qubit_depolarizing);
  std::vector<int> one_qubit{0};
  for (const auto& g : c.gates) {
    apply_gate_state(psi, g, c.num_qubits);
    if (g.type == GateType::Cnot) {
      if (const JunctionChannel* ch = lookup(model, g)) {
        if (ch->probs.quasi) throw std::invalid_argument("trajectory mode needs a true probability channel");
        std::size_t err = sample_discrete(ch->probs.p, rng);
        apply_pauli_state(psi, err, channel_qubits(g, *ch), c.num_qubits);
      }
      if (model.has_coherent() && g.junction >= 0) {
        auto it = coherent.find(g.junction);
        if (it == coherent.end()) it = coherent.emplace(g.junction, model.coherent_unitary(g.junction)).first;
        apply_2q_state(psi, it->second, g.q0, g.q1, c.num_qubits);
      }
    } else if (model.single_qubit_depolarizing > 0.0) {
      std::size_t err = sample_discrete(depol_1q.p, rng);
      one_qubit[0] = g.q0;
      apply_pauli_state(psi, err, one_qubit, c.num_qubits);
    }
  }
  return psi;
}

Vector run_circuit_ideal(const Circuit& c) {
  Vector psi = zero_statevector(c.num_qubits);
  for (const auto& g : c.gates) apply_gate_state(psi, g, c.num_qubits);
  return psi;
}

}  // namespace ntkit
