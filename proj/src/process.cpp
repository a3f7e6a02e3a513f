#include "ntkit/process.hpp"

#include "ntkit/pauli.hpp"

namespace ntkit {

Matrix chi_matrix(const ChannelFn& channel, int q) {
  const std::size_t d = std::size_t{1} << q;
  const std::size_t n4 = std::size_t{1} << (2 * q);
  Matrix choi = Matrix::Zero(d * d, d * d);
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      Matrix eij = Matrix::Zero(d, d);
      eij(i, j) = 1.0;
      choi.block(i * d, j * d, d, d) = channel(eij);
    }
  }
  Matrix v(d * d, n4);
  for (std::size_t a = 0; a < n4; ++a) {
    Matrix pa = pauli_matrix(PauliString(static_cast<std::size_t>(q), a));
    for (std::size_t i = 0; i < d; ++i) v.block(i * d, a, d, 1) = pa.col(i);
  }
  return (v.adjoint() * choi * v) / static_cast<double>(d * d);
}

}  // namespace ntkit
