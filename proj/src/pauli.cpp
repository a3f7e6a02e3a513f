#include "ntkit/pauli.hpp"

#include <cmath>
#include <stdexcept>

namespace ntkit {

char pauli_char(Pauli p) {
  switch (p) {
    case Pauli::I: return 'I';
    case Pauli::X: return 'X';
    case Pauli::Y: return 'Y';
    case Pauli::Z: return 'Z';
  }
  throw std::logic_error("bad Pauli value");
}

Pauli pauli_from_char(char c) {
  switch (c) {
    case 'I': return Pauli::I;
    case 'X': return Pauli::X;
    case 'Y': return Pauli::Y;
    case 'Z': return Pauli::Z;
  }
  throw std::invalid_argument(std::string("not a Pauli symbol: ") + c);
}

PauliString::PauliString(std::size_t qubits, std::size_t index) : word_(qubits, Pauli::I) {
  if (qubits == 0) throw std::invalid_argument("PauliString needs at least one qubit");
  std::size_t dim = std::size_t{1} << (2 * qubits);
  if (index >= dim) throw std::out_of_range("Pauli index out of range");
  for (std::size_t k = qubits; k-- > 0;) {
    word_[k] = static_cast<Pauli>(index & 3);
    index >>= 2;
  }
}

PauliString::PauliString(const std::string& word) {
  if (word.empty()) throw std::invalid_argument("empty Pauli word");
  word_.reserve(word.size());
  for (char c : word) word_.push_back(pauli_from_char(c));
}

PauliString::PauliString(std::vector<Pauli> word) : word_(std::move(word)) {
  if (word_.empty()) throw std::invalid_argument("empty Pauli word");
}

std::size_t PauliString::index() const {
  std::size_t idx = 0;
  for (Pauli p : word_) idx = (idx << 2) | static_cast<std::size_t>(p);
  return idx;
}

std::string PauliString::str() const {
  std::string s;
  s.reserve(word_.size());
  for (Pauli p : word_) s.push_back(pauli_char(p));
  return s;
}

bool PauliString::is_identity() const {
  for (Pauli p : word_)
    if (p != Pauli::I) return false;
  return true;
}

FidelityVector::FidelityVector(std::size_t q_, std::vector<double> f_) : q(q_), f(std::move(f_)) {
  if (f.size() != (std::size_t{1} << (2 * q))) throw std::invalid_argument("fidelity vector has wrong dimension");
}

FidelityVector FidelityVector::identity(std::size_t q) {
  return FidelityVector(q, std::vector<double>(std::size_t{1} << (2 * q), 1.0));
}

ProbVector::ProbVector(std::size_t q_, std::vector<double> p_) : q(q_), p(std::move(p_)) {
  if (p.size() != (std::size_t{1} << (2 * q))) throw std::invalid_argument("probability vector has wrong dimension");
}

double ProbVector::sum() const {
  double s = 0.0;
  for (double v : p) s += v;
  return s;
}

int symplectic_product(const PauliString& a, const PauliString& b) {
  if (a.qubits() != b.qubits()) throw std::invalid_argument("symplectic product: qubit counts differ");
  int parity = 0;
  for (std::size_t k = 0; k < a.qubits(); ++k) {
    Pauli pa = a.at(k), pb = b.at(k);
    if (pa != Pauli::I && pb != Pauli::I && pa != pb) parity ^= 1;
  }
  return parity;
}

int symplectic_product(std::size_t q, std::size_t a, std::size_t b) {
  int parity = 0;
  for (std::size_t k = 0; k < q; ++k) {
    std::size_t da = (a >> (2 * k)) & 3, db = (b >> (2 * k)) & 3;
    if (da != 0 && db != 0 && da != db) parity ^= 1;
  }
  return parity;
}

namespace {

// In-place per-qubit butterfly with the 4x4 sign kernel
// M[a][b] = (-1)^{<a,b>_sp}; the full transform is its q-fold tensor power.
void sign_transform(std::vector<double>& v, std::size_t q) {
  const std::size_t dim = v.size();
  for (std::size_t k = 0; k < q; ++k) {
    const std::size_t stride = std::size_t{1} << (2 * k);
    for (std::size_t block = 0; block < dim; block += 4 * stride) {
      for (std::size_t off = 0; off < stride; ++off) {
        double i = v[block + off];
        double x = v[block + off + stride];
        double y = v[block + off + 2 * stride];
        double z = v[block + off + 3 * stride];
        v[block + off] = i + x + y + z;
        v[block + off + stride] = i + x - y - z;
        v[block + off + 2 * stride] = i - x + y - z;
        v[block + off + 3 * stride] = i - x - y + z;
      }
    }
  }
}

}  // namespace

ProbVector walsh_hadamard(const FidelityVector& f) {
  if (std::abs(f.f[0] - 1.0) > 1e-9) throw std::invalid_argument("walsh_hadamard: f[0] must be 1");
  std::vector<double> v = f.f;
  sign_transform(v, f.q);
  const double norm = 1.0 / static_cast<double>(v.size());
  bool quasi = false;
  for (double& x : v) {
    x *= norm;
    if (x < -1e-12) quasi = true;
  }
  ProbVector out(f.q, std::move(v));
  out.quasi = quasi;
  return out;
}

FidelityVector inverse_walsh_hadamard(const ProbVector& p) {
  std::vector<double> v = p.p;
  sign_transform(v, p.q);
  return FidelityVector(p.q, std::move(v));
}

namespace {

// Symplectic (x,z) encoding: I=(0,0), X=(1,0), Y=(1,1), Z=(0,1).
struct XZ {
  int x, z;
};

XZ to_xz(Pauli p) {
  switch (p) {
    case Pauli::I: return {0, 0};
    case Pauli::X: return {1, 0};
    case Pauli::Y: return {1, 1};
    case Pauli::Z: return {0, 1};
  }
  throw std::logic_error("bad Pauli value");
}

Pauli from_xz(XZ v) {
  if (v.x && v.z) return Pauli::Y;
  if (v.x) return Pauli::X;
  if (v.z) return Pauli::Z;
  return Pauli::I;
}

// Conjugation table for a single-qubit Clifford: image and sign per symbol.
struct Rule1Q {
  Pauli image[4];
  int sign[4];
};

Rule1Q rule_for(CliffordGate g) {
  switch (g) {
    case CliffordGate::H:
      return {{Pauli::I, Pauli::Z, Pauli::Y, Pauli::X}, {1, 1, -1, 1}};
    case CliffordGate::RzHalfPi:  // X -> Y, Y -> -X
      return {{Pauli::I, Pauli::Y, Pauli::X, Pauli::Z}, {1, 1, -1, 1}};
    case CliffordGate::RxHalfPi:  // Y -> Z, Z -> -Y
      return {{Pauli::I, Pauli::X, Pauli::Z, Pauli::Y}, {1, 1, 1, -1}};
    case CliffordGate::X:
      return {{Pauli::I, Pauli::X, Pauli::Y, Pauli::Z}, {1, 1, -1, -1}};
    case CliffordGate::Y:
      return {{Pauli::I, Pauli::X, Pauli::Y, Pauli::Z}, {1, -1, 1, -1}};
    case CliffordGate::Z:
      return {{Pauli::I, Pauli::X, Pauli::Y, Pauli::Z}, {1, -1, -1, 1}};
    default:
      throw std::invalid_argument("not a single-qubit Clifford gate");
  }
}

}  // namespace

std::pair<PauliString, int> clifford_conjugate(CliffordGate gate, const PauliString& p) {
  if (gate == CliffordGate::Cnot) {
    if (p.qubits() != 2) throw std::invalid_argument("CNOT conjugation needs a 2-qubit Pauli string");
    XZ c = to_xz(p.at(0)), t = to_xz(p.at(1));
    // Symplectic update: X on control copies to target, Z on target copies
    // to control. Sign flips exactly when x_c z_t (x_t ^ z_c ^ 1) = 1.
    int sign = (c.x && t.z && ((t.x ^ c.z ^ 1) != 0)) ? -1 : 1;
    XZ c2{c.x, c.z ^ t.z};
    XZ t2{t.x ^ c.x, t.z};
    return {PauliString({from_xz(c2), from_xz(t2)}), sign};
  }
  if (p.qubits() != 1) throw std::invalid_argument("single-qubit Clifford conjugation needs a 1-qubit Pauli string");
  Rule1Q r = rule_for(gate);
  auto a = static_cast<std::size_t>(p.at(0));
  return {PauliString({r.image[a]}), r.sign[a]};
}

}  // namespace ntkit
