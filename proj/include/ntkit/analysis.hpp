#pragma once

#include <cstddef>
#include <vector>

namespace ntkit {

// One (observable, time) entry of an accuracy comparison.
struct AwaeRow {
  double perfect = 0.0;
  double estimate = 0.0;
};

// Average weighted absolute error:
//   zeta = sum |perfect| * |estimate - perfect| / sum |perfect|
// Entries with perfect = 0 carry no weight; throws when every reference is 0.
double awae(const std::vector<AwaeRow>& rows);

struct BatchCurvePoint {
  std::size_t n = 0;  // circuits per group
  double zeta = 0.0;  // mean over groups of the per-group zeta
  double std = 0.0;   // spread of the group zetas / sqrt(#groups)
};

// Per-circuit estimator outputs, indexed [time][circuit][observable], against
// references indexed [time][observable].  Circuits are split into batches of
// `batch_size` (consecutive, order-preserving); consecutive batches are merged
// into groups of N/batch_size, zeta is evaluated per group across all
// (time, observable) rows and averaged.  The grid is
// {1,...,10} x batch_size, {20,...,50} x batch_size, and the full sample.
std::vector<BatchCurvePoint> bootstrap_curve(const std::vector<std::vector<std::vector<double>>>& per_circuit,
                                             const std::vector<std::vector<double>>& reference,
                                             std::size_t batch_size = 100);

struct ExtrapolationFit {
  double a = 0.0;  // sampling-noise amplitude of a/sqrt(N) + b
  double b = 0.0;  // infinite-sampling intercept, clipped at 0
  double var_a = 0.0;
  double var_b = 0.0;
  double cov_ab = 0.0;
};

// Weighted least squares of zeta(N) = a/sqrt(N) + b over points with
// n <= fit_max_n, weights 1/std^2 (points with std = 0 get the largest
// finite weight in the set).  A negative intercept is clipped to 0 and `a`
// refit; the covariance is that of the unconstrained fit.
ExtrapolationFit extrapolate(const std::vector<BatchCurvePoint>& curve, std::size_t fit_max_n = 1000);

struct DiagnosticsReport {
  double zeta_inf = 0.0;     // infinite-sampling emulation
  double zeta_finite = 0.0;  // finite-sampling emulation
  double zeta_full = 0.0;    // full run with extra injected noise
  double dz_nt = 0.0;        // finite-sampling contribution
  double dz_c_unk = 0.0;     // coherent + unidentified contribution
  double dz_unk = 0.0;       // unidentified alone: fit intercept - zeta_inf
  double dz_unk_std = 0.0;
  double no_nt_projection = 0.0;  // dz_c_unk rescaled to the untailored run
};

// Decomposes the accuracy gap between the three runs; `log_gamma_total` is
// sum_j N_j ln gamma_j for the tailored circuit, `f_nec_target` /
// `f_nec_raw` are the estimation-circuit fidelities of the target and raw
// noise channels.
DiagnosticsReport diagnostics(double zeta_inf, double zeta_finite, double zeta_full, const ExtrapolationFit& fit,
                              double log_gamma_total, double f_nec_target, double f_nec_raw);

}  // namespace ntkit
