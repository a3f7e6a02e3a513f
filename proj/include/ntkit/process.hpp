#pragma once

#include <functional>

#include "ntkit/circuit.hpp"

namespace ntkit {

using ChannelFn = std::function<Matrix(const Matrix&)>;

// chi (process) matrix of a channel E(rho) = sum_ab chi_ab P_a rho P_b,
// extracted from the Choi matrix: chi_ab = <v_a| C |v_b> / d^2 with
// C = sum_ij |i><j| (x) E(|i><j|) and |v_a> = sum_i |i> (x) P_a |i>.
// A Pauli channel has chi diagonal equal to its error probabilities.
Matrix chi_matrix(const ChannelFn& channel, int q);

}  // namespace ntkit
