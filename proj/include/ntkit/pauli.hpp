#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace ntkit {

// Single-qubit Pauli symbols. The numeric values double as base-4 digits of
// the canonical PauliString index.
enum class Pauli : uint8_t { I = 0, X = 1, Y = 2, Z = 3 };

char pauli_char(Pauli p);
Pauli pauli_from_char(char c);

// A length-q word over {I,X,Y,Z}.
//
// Index convention (fixed once, used everywhere): the index is the base-4
// number whose MOST significant digit is qubit 0, i.e.
//   index = sum_k digit(qubit k) * 4^(q-1-k),  digits I=0, X=1, Y=2, Z=3.
// So for q=2 the word "ZX" (Z on qubit 0, X on qubit 1) has index 3*4+1=13,
// and index 0 is always the all-identity word.
class PauliString {
 public:
  PauliString() = default;
  PauliString(std::size_t qubits, std::size_t index);
  explicit PauliString(const std::string& word);
  PauliString(std::vector<Pauli> word);

  std::size_t qubits() const { return word_.size(); }
  std::size_t index() const;
  Pauli at(std::size_t qubit) const { return word_[qubit]; }
  void set(std::size_t qubit, Pauli p) { word_[qubit] = p; }
  const std::vector<Pauli>& word() const { return word_; }
  std::string str() const;
  bool is_identity() const;

  bool operator==(const PauliString& other) const { return word_ == other.word_; }

 private:
  std::vector<Pauli> word_;
};

// PTM diagonal of a Pauli channel, one fidelity per Pauli index.
// f[0] = 1 is required for trace preservation; entries above 1 are admitted
// (tomography can produce them) as are the >1 values of inverted channels.
struct FidelityVector {
  std::size_t q = 0;
  std::vector<double> f;

  FidelityVector() = default;
  FidelityVector(std::size_t q_, std::vector<double> f_);
  static FidelityVector identity(std::size_t q);
  std::size_t dim() const { return f.size(); }
};

// chi-diagonal of a Pauli channel: error probabilities summing to 1.
// `quasi` marks vectors with negative entries (quasiprobability
// distributions); those are rejected by exact channel application.
struct ProbVector {
  std::size_t q = 0;
  std::vector<double> p;
  bool quasi = false;

  ProbVector() = default;
  ProbVector(std::size_t q_, std::vector<double> p_);
  std::size_t dim() const { return p.size(); }
  double sum() const;
};

// 0 if the Pauli strings commute, 1 if they anticommute.
int symplectic_product(const PauliString& a, const PauliString& b);

// Same, on canonical indices.
int symplectic_product(std::size_t q, std::size_t a, std::size_t b);

// p_a = 4^-q sum_b (-1)^{<a,b>_sp} f_b.  Output is flagged quasi when any
// entry dips below -1e-12.
ProbVector walsh_hadamard(const FidelityVector& f);

// f_b = sum_a (-1)^{<a,b>_sp} p_a.
FidelityVector inverse_walsh_hadamard(const ProbVector& p);

// Clifford gates supported by conjugation. Cnot acts on a 2-qubit string
// (qubit 0 = control, qubit 1 = target); the rest act on 1-qubit strings.
enum class CliffordGate { Cnot, H, RxHalfPi, RzHalfPi, X, Y, Z };

// Returns (U P U^dag) as a Pauli string together with its phase sign.
std::pair<PauliString, int> clifford_conjugate(CliffordGate gate, const PauliString& p);

}  // namespace ntkit
