#include "ntkit/circuit.hpp"

#include <cmath>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace ntkit {

bool is_single_qubit(GateType t) { return t != GateType::Cnot; }

std::string gate_name(GateType t) {
  switch (t) {
    case GateType::H: return "h";
    case GateType::X: return "x";
    case GateType::Y: return "y";
    case GateType::Z: return "z";
    case GateType::S: return "s";
    case GateType::Sdg: return "sdg";
    case GateType::Rx: return "rx";
    case GateType::Ry: return "ry";
    case GateType::Rz: return "rz";
    case GateType::Cnot: return "cnot";
  }
  throw std::logic_error("bad gate type");
}

GateType gate_from_name(const std::string& name) {
  if (name == "h") return GateType::H;
  if (name == "x") return GateType::X;
  if (name == "y") return GateType::Y;
  if (name == "z") return GateType::Z;
  if (name == "s") return GateType::S;
  if (name == "sdg") return GateType::Sdg;
  if (name == "rx") return GateType::Rx;
  if (name == "ry") return GateType::Ry;
  if (name == "rz") return GateType::Rz;
  if (name == "cnot") return GateType::Cnot;
  throw std::invalid_argument("unknown gate name: " + name);
}

Gate Gate::single(GateType t, int q, double angle) {
  if (!is_single_qubit(t)) throw std::invalid_argument("Gate::single called with CNOT");
  Gate g;
  g.type = t;
  g.q0 = q;
  g.angle = angle;
  return g;
}

Gate Gate::cnot(int control, int target, int junction, int neighbor) {
  if (control == target) throw std::invalid_argument("CNOT control == target");
  Gate g;
  g.type = GateType::Cnot;
  g.q0 = control;
  g.q1 = target;
  g.junction = junction;
  g.neighbor = neighbor;
  return g;
}

Matrix Gate::unitary() const {
  const Complex i(0.0, 1.0);
  const double s = 1.0 / std::sqrt(2.0);
  switch (type) {
    case GateType::H: {
      Matrix m(2, 2);
      m << s, s, s, -s;
      return m;
    }
    case GateType::X: {
      Matrix m(2, 2);
      m << 0, 1, 1, 0;
      return m;
    }
    case GateType::Y: {
      Matrix m(2, 2);
      m << 0, -i, i, 0;
      return m;
    }
    case GateType::Z: {
      Matrix m(2, 2);
      m << 1, 0, 0, -1;
      return m;
    }
    case GateType::S: {
      Matrix m(2, 2);
      m << 1, 0, 0, i;
      return m;
    }
    case GateType::Sdg: {
      Matrix m(2, 2);
      m << 1, 0, 0, -i;
      return m;
    }
    case GateType::Rx: {
      Matrix m(2, 2);
      double c = std::cos(angle / 2), sn = std::sin(angle / 2);
      m << c, -i * sn, -i * sn, c;
      return m;
    }
    case GateType::Ry: {
      Matrix m(2, 2);
      double c = std::cos(angle / 2), sn = std::sin(angle / 2);
      m << c, -sn, sn, c;
      return m;
    }
    case GateType::Rz: {
      Matrix m(2, 2);
      m << std::exp(-i * (angle / 2)), 0, 0, std::exp(i * (angle / 2));
      return m;
    }
    case GateType::Cnot: {
      Matrix m = Matrix::Zero(4, 4);
      m(0, 0) = 1;
      m(1, 1) = 1;
      m(2, 3) = 1;
      m(3, 2) = 1;
      return m;
    }
  }
  throw std::logic_error("bad gate type");
}

void Circuit::add(Gate g) {
  int hi = std::max(g.q0, std::max(g.q1, g.neighbor));
  if (g.q0 < 0 || hi >= num_qubits) throw std::out_of_range("gate qubit index out of range");
  gates.push_back(g);
}

std::size_t Circuit::cnot_count() const {
  std::size_t n = 0;
  for (const auto& g : gates)
    if (g.type == GateType::Cnot) ++n;
  return n;
}

namespace {

// Embed a k-qubit unitary into the full register. Qubit 0 is the most
// significant bit of the basis-state index, matching the Pauli index
// convention in pauli.hpp.
Matrix embed(const Matrix& u, const std::vector<int>& qubits, int num_qubits) {
  const std::size_t dim = std::size_t{1} << num_qubits;
  const std::size_t k = qubits.size();
  Matrix full = Matrix::Zero(dim, dim);
  std::vector<int> shifts(k);
  for (std::size_t j = 0; j < k; ++j) shifts[j] = num_qubits - 1 - qubits[j];
  std::size_t mask = 0;
  for (int sh : shifts) mask |= (std::size_t{1} << sh);
  for (std::size_t base = 0; base < dim; ++base) {
    if (base & mask) continue;  // enumerate states with the acted qubits at 0
    for (std::size_t r = 0; r < (std::size_t{1} << k); ++r) {
      std::size_t row = base;
      for (std::size_t j = 0; j < k; ++j)
        if ((r >> (k - 1 - j)) & 1) row |= (std::size_t{1} << shifts[j]);
      for (std::size_t c = 0; c < (std::size_t{1} << k); ++c) {
        std::size_t col = base;
        for (std::size_t j = 0; j < k; ++j)
          if ((c >> (k - 1 - j)) & 1) col |= (std::size_t{1} << shifts[j]);
        full(row, col) = u(r, c);
      }
    }
  }
  return full;
}

}  // namespace

Matrix Circuit::unitary() const {
  const std::size_t dim = std::size_t{1} << num_qubits;
  Matrix u = Matrix::Identity(dim, dim);
  for (const auto& g : gates) {
    std::vector<int> qs = g.type == GateType::Cnot ? std::vector<int>{g.q0, g.q1} : std::vector<int>{g.q0};
    u = embed(g.unitary(), qs, num_qubits) * u;
  }
  return u;
}

std::string Circuit::to_json() const {
  nlohmann::json j;
  j["num_qubits"] = num_qubits;
  auto& arr = j["gates"] = nlohmann::json::array();
  for (const auto& g : gates) {
    nlohmann::json jg;
    jg["gate"] = gate_name(g.type);
    if (g.type == GateType::Cnot) {
      jg["control"] = g.q0;
      jg["target"] = g.q1;
      if (g.junction >= 0) jg["junction"] = g.junction;
      if (g.neighbor >= 0) jg["neighbor"] = g.neighbor;
    } else {
      jg["qubit"] = g.q0;
      if (g.type == GateType::Rx || g.type == GateType::Ry || g.type == GateType::Rz) jg["angle"] = g.angle;
    }
    arr.push_back(jg);
  }
  return j.dump(2);
}

Circuit Circuit::from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  Circuit c(j.at("num_qubits").get<int>());
  for (const auto& jg : j.at("gates")) {
    GateType t = gate_from_name(jg.at("gate").get<std::string>());
    if (t == GateType::Cnot) {
      c.add(Gate::cnot(jg.at("control").get<int>(), jg.at("target").get<int>(), jg.value("junction", -1),
                       jg.value("neighbor", -1)));
    } else {
      c.add(Gate::single(t, jg.at("qubit").get<int>(), jg.value("angle", 0.0)));
    }
  }
  return c;
}

Matrix pauli_matrix(const PauliString& p) {
  Matrix m = Matrix::Identity(1, 1);
  const Complex i(0.0, 1.0);
  // Build from the least significant factor outwards so qubit 0 ends up as
  // the outermost (most significant) tensor factor.
  for (std::size_t k = p.qubits(); k-- > 0;) {
    Matrix s(2, 2);
    switch (p.at(k)) {
      case Pauli::I: s << 1, 0, 0, 1; break;
      case Pauli::X: s << 0, 1, 1, 0; break;
      case Pauli::Y: s << 0, -i, i, 0; break;
      case Pauli::Z: s << 1, 0, 0, -1; break;
    }
    Matrix next(m.rows() * 2, m.cols() * 2);
    next.block(0, 0, m.rows(), m.cols()) = s(0, 0) * m;
    next.block(0, m.cols(), m.rows(), m.cols()) = s(0, 1) * m;
    next.block(m.rows(), 0, m.rows(), m.cols()) = s(1, 0) * m;
    next.block(m.rows(), m.cols(), m.rows(), m.cols()) = s(1, 1) * m;
    m = std::move(next);
  }
  return m;
}

Matrix pauli_matrix_embedded(const PauliString& p, const std::vector<int>& qubits, int num_qubits) {
  if (qubits.size() != p.qubits()) throw std::invalid_argument("qubit map size mismatch");
  std::vector<Pauli> word(static_cast<std::size_t>(num_qubits), Pauli::I);
  for (std::size_t k = 0; k < qubits.size(); ++k) {
    if (qubits[k] < 0 || qubits[k] >= num_qubits) throw std::out_of_range("qubit index out of range");
    word[static_cast<std::size_t>(qubits[k])] = p.at(k);
  }
  return pauli_matrix(PauliString(std::move(word)));
}

}  // namespace ntkit
