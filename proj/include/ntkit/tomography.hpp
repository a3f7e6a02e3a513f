#pragma once

#include <string>
#include <vector>

#include "ntkit/circuit.hpp"
#include "ntkit/pauli.hpp"
#include "ntkit/rng.hpp"
#include "ntkit/simulator.hpp"

namespace ntkit {

// The nine repeated-CNOT circuit families. Inv and the Cat* families use even
// CNOT counts 2n (Cat* insert Rz(pi/2) x Rx(pi/2) after every CNOT to rotate
// the Y-containing fidelities into reach); the Odd* families use 2n+1 CNOTs to
// split the degenerate fidelity pairs via joint/marginal measurements.
enum class PntFamily { Inv, CatYZ, CatXY, CatYY, CatXZ, OddXX, OddYX, OddZY, OddZZ };

std::string pnt_family_name(PntFamily f);

// Fidelity key: 2-qubit Pauli index * 2 + block, where block 0 is the
// neighbor-identity block F^I and block 1 the neighbor-error block F^D.
// Non-crosstalk quantities always use block 0.
inline int fid_key(std::size_t pair_index, bool block_d) { return static_cast<int>(pair_index) * 2 + (block_d ? 1 : 0); }

struct PntCircuitSpec {
  PntFamily family = PntFamily::Inv;
  int n = 1;        // depth parameter
  int cnots = 2;    // 2n or 2n+1
  bool crosstalk = false;
  Circuit circuit;                // local frame: qubit 0 control, 1 target, 2 neighbor
  std::vector<Pauli> meas_basis;  // per local qubit

  struct Quantity {
    std::string series;                            // amplitude-sharing group, e.g. "OddZZ:joint"
    std::vector<int> qubits;                       // positions entering the +-1 product
    std::vector<std::pair<int, int>> exponents;    // (fid_key, power): signal = A * prod f^power
  };
  std::vector<Quantity> quantities;
};

// The 9 families at the given depth parameters n (CNOT counts 2n / 2n+1).
// Junction id is attached to every CNOT; with_crosstalk adds the neighbor
// (local qubit 2, prepared in |0>, measured in Z) and the F^D quantities.
std::vector<PntCircuitSpec> generate_pnt_circuits(int junction, const std::vector<int>& depths, bool with_crosstalk);

// Raw signal table. One row per executed spec; samples[q][r] is quantity q's
// estimate from the r-th randomly compiled circuit (size 1 in analytic mode).
struct PntSignals {
  struct Row {
    PntFamily family;
    int n = 1;
    int cnots = 2;
    bool crosstalk = false;
    std::vector<PntCircuitSpec::Quantity> quantities;
    std::vector<std::vector<double>> samples;
  };
  std::vector<Row> rows;
};

// Runs every spec against the model. shots == 0 selects analytic mode:
// channel-mode evolution of the undressed circuit, exact expectations.
// Otherwise each spec is executed n_rc times with a fresh RC (cRC for
// crosstalk specs) dressing and `shots` trajectory-sampled shots.
PntSignals measure_pnt(const std::vector<PntCircuitSpec>& specs, const NoiseModel& model, std::size_t n_rc,
                       std::size_t shots, Rng& rng);

struct TomographyResult {
  int junction = -1;
  std::string direction = "forward";
  bool crosstalk = false;
  std::vector<double> f;        // block F^I, 16 entries, f[0] = 1 exactly
  std::vector<double> f_std;
  std::vector<double> fD;       // block F^D (crosstalk fits only)
  std::vector<double> fD_std;
  std::vector<bool> anomaly;    // f > 1 + 3 std, reported but not corrected
};

// Joint weighted least squares of ln s = ln A + sum power * ln f over all
// series; redundant estimates (f_IX, f_ZI appear in several families) are
// pooled automatically by the shared unknowns. Bootstrap over RC samples
// (resampled per row, shared across that row's quantities) gives the std.
TomographyResult fit_fidelities(const PntSignals& signals, int junction = -1, std::size_t n_bootstrap = 1000,
                                uint64_t seed = 1);

// Error distribution for the emulator: WH transform of the fitted fidelities
// with negative probabilities clamped to zero and the rest renormalized.
ProbVector sanitize_for_emulation(const TomographyResult& result);

}  // namespace ntkit
