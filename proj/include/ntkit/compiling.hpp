#pragma once

#include <map>
#include <vector>

#include "ntkit/channels.hpp"
#include "ntkit/circuit.hpp"
#include "ntkit/rng.hpp"

namespace ntkit {

using PlanMap = std::map<int, QuasiProbPlan>;

// Per-CNOT dressing choices. rc_pair indexes the 16 Pauli pre-gate pairs
// (base-4: control digit, target digit); neighbor_rot indexes the six pi/2
// rotations of the crosstalk twirl (-1 = none); nt_index is the sampled
// dressing Pauli of the junction's quasiprobability plan (-1 = none).
struct CnotDressing {
  int rc_pair = 0;
  int neighbor_rot = -1;
  int nt_index = -1;
};

struct DressedCircuit {
  Circuit circuit;
  int sign = 1;            // product of quasiprobability signs
  double weight_log = 0.0; // sum of ln(gamma) over dressed junctions
  std::vector<CnotDressing> choices;
};

// Number of elements in the neighbor-rotation twirl set
// {Rx(+-pi/2), Ry(+-pi/2), Rz(+-pi/2)}.
inline constexpr int kNeighborRotations = 6;

Gate neighbor_rotation(int which, int qubit, bool inverse);

// Deterministic dressing from explicit per-CNOT choices (one entry per CNOT,
// in circuit order). The noise-tailoring dressing Pauli is inserted directly
// after the CNOT so it lands after the junction's noise channel; the RC
// post-correction (the pre-pair conjugated through the CNOT) follows it.
DressedCircuit dress_circuit(const Circuit& c, const std::vector<CnotDressing>& choices, const PlanMap* plans);

// Uniformly random RC twirl: each CNOT wrapped in one of its 16 Pauli-pair
// dressings. Logical action is unchanged.
DressedCircuit rc_dress(const Circuit& c, Rng& rng);

// RC plus a random pi/2 rotation pair on each CNOT's declared neighbor.
DressedCircuit crc_dress(const Circuit& c, Rng& rng);

// RC (or cRC when use_crosstalk) plus one sampled quasiprobability dressing
// per junction; accumulates the sign product and sum of ln(gamma).
DressedCircuit nt_dress(const Circuit& c, const PlanMap& plans, Rng& rng, bool use_crosstalk = false);

}  // namespace ntkit
