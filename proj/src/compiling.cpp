#include "ntkit/compiling.hpp"

#include <cmath>
#include <stdexcept>

namespace ntkit {

Gate neighbor_rotation(int which, int qubit, bool inverse) {
  if (which < 0 || which >= kNeighborRotations) throw std::out_of_range("neighbor rotation index out of range");
  GateType axis[3] = {GateType::Rx, GateType::Ry, GateType::Rz};
  double angle = (which % 2 == 0 ? 1.0 : -1.0) * M_PI / 2.0;
  if (inverse) angle = -angle;
  return Gate::single(axis[which / 2], qubit, angle);
}

namespace {

void push_pauli(Circuit& out, Pauli p, int qubit) {
  switch (p) {
    case Pauli::I: return;
    case Pauli::X: out.add(Gate::single(GateType::X, qubit)); return;
    case Pauli::Y: out.add(Gate::single(GateType::Y, qubit)); return;
    case Pauli::Z: out.add(Gate::single(GateType::Z, qubit)); return;
  }
}

}  // namespace

DressedCircuit dress_circuit(const Circuit& c, const std::vector<CnotDressing>& choices, const PlanMap* plans) {
  if (choices.size() != c.cnot_count()) throw std::invalid_argument("one dressing choice per CNOT required");
  DressedCircuit out;
  out.circuit.num_qubits = c.num_qubits;
  out.choices = choices;
  std::size_t k = 0;
  for (const auto& g : c.gates) {
    if (g.type != GateType::Cnot) {
      out.circuit.add(g);
      continue;
    }
    const CnotDressing& d = choices[k++];
    if (d.neighbor_rot >= 0) {
      if (g.neighbor < 0) throw std::invalid_argument("crosstalk twirl on a CNOT without a declared neighbor");
      if (g.neighbor == g.q0 || g.neighbor == g.q1) throw std::invalid_argument("neighbor collides with an active qubit");
      out.circuit.add(neighbor_rotation(d.neighbor_rot, g.neighbor, false));
    }
    auto pc = static_cast<Pauli>((d.rc_pair >> 2) & 3);
    auto pt = static_cast<Pauli>(d.rc_pair & 3);
    push_pauli(out.circuit, pc, g.q0);
    push_pauli(out.circuit, pt, g.q1);
    out.circuit.add(g);
    if (d.nt_index >= 0) {
      if (!plans) throw std::invalid_argument("dressing requests a plan but none were given");
      auto it = plans->find(g.junction);
      if (it == plans->end()) throw std::invalid_argument("no plan for junction " + std::to_string(g.junction));
      const QuasiProbPlan& plan = it->second;
      PauliString dress(plan.q, static_cast<std::size_t>(d.nt_index));
      push_pauli(out.circuit, dress.at(0), g.q0);
      push_pauli(out.circuit, dress.at(1), g.q1);
      if (plan.q == 3) {
        if (g.neighbor < 0) throw std::invalid_argument("3-qubit plan on a CNOT without a declared neighbor");
        push_pauli(out.circuit, dress.at(2), g.neighbor);
      }
      out.sign *= plan.signs[static_cast<std::size_t>(d.nt_index)];
      out.weight_log += std::log(plan.gamma);
    }
    // Post-correction: the pre-pair conjugated through the CNOT (the phase
    // sign is global and drops out).
    auto [post, sign] = clifford_conjugate(CliffordGate::Cnot, PauliString({pc, pt}));
    (void)sign;
    push_pauli(out.circuit, post.at(0), g.q0);
    push_pauli(out.circuit, post.at(1), g.q1);
    if (d.neighbor_rot >= 0) out.circuit.add(neighbor_rotation(d.neighbor_rot, g.neighbor, true));
  }
  return out;
}

DressedCircuit rc_dress(const Circuit& c, Rng& rng) {
  std::vector<CnotDressing> choices(c.cnot_count());
  for (auto& d : choices) d.rc_pair = static_cast<int>(rng() % 16);
  return dress_circuit(c, choices, nullptr);
}

DressedCircuit crc_dress(const Circuit& c, Rng& rng) {
  std::vector<CnotDressing> choices(c.cnot_count());
  std::size_t k = 0;
  for (const auto& g : c.gates) {
    if (g.type != GateType::Cnot) continue;
    choices[k].rc_pair = static_cast<int>(rng() % 16);
    if (g.neighbor >= 0) choices[k].neighbor_rot = static_cast<int>(rng() % kNeighborRotations);
    ++k;
  }
  return dress_circuit(c, choices, nullptr);
}

DressedCircuit nt_dress(const Circuit& c, const PlanMap& plans, Rng& rng, bool use_crosstalk) {
  std::vector<CnotDressing> choices(c.cnot_count());
  std::size_t k = 0;
  for (const auto& g : c.gates) {
    if (g.type != GateType::Cnot) continue;
    choices[k].rc_pair = static_cast<int>(rng() % 16);
    if (use_crosstalk && g.neighbor >= 0) choices[k].neighbor_rot = static_cast<int>(rng() % kNeighborRotations);
    if (g.junction >= 0) {
      auto it = plans.find(g.junction);
      if (it == plans.end()) throw std::invalid_argument("no plan for junction " + std::to_string(g.junction));
      choices[k].nt_index = static_cast<int>(sample_discrete(it->second.probs, rng));
    }
    ++k;
  }
  return dress_circuit(c, choices, &plans);
}

}  // namespace ntkit
