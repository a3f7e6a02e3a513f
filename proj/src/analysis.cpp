#include "ntkit/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ntkit {

double awae(const std::vector<AwaeRow>& rows) {
  double num = 0.0, z = 0.0;
  for (const auto& r : rows) {
    double w = std::abs(r.perfect);
    num += w * std::abs(r.estimate - r.perfect);
    z += w;
  }
  if (z <= 0.0) throw std::invalid_argument("all reference values are zero; the weighted error is undefined");
  return num / z;
}

std::vector<BatchCurvePoint> bootstrap_curve(const std::vector<std::vector<std::vector<double>>>& per_circuit,
                                             const std::vector<std::vector<double>>& reference,
                                             std::size_t batch_size) {
  if (batch_size == 0) throw std::invalid_argument("batch size must be positive");
  if (per_circuit.empty() || per_circuit.size() != reference.size())
    throw std::invalid_argument("per-circuit table and reference table disagree");
  std::size_t total = per_circuit[0].size();
  std::size_t n_obs = reference[0].size();
  for (std::size_t t = 0; t < per_circuit.size(); ++t) {
    if (per_circuit[t].size() != total) throw std::invalid_argument("time points have unequal circuit counts");
    if (reference[t].size() != n_obs) throw std::invalid_argument("reference table is ragged");
    for (const auto& row : per_circuit[t])
      if (row.size() != n_obs) throw std::invalid_argument("per-circuit rows disagree with the observable count");
  }
  std::size_t n_batches = total / batch_size;
  if (n_batches < 2) throw std::invalid_argument("need at least two complete batches");

  // per-batch sums, indexed [batch][time][obs]
  std::vector<std::vector<std::vector<double>>> sums(
      n_batches, std::vector<std::vector<double>>(per_circuit.size(), std::vector<double>(n_obs, 0.0)));
  for (std::size_t t = 0; t < per_circuit.size(); ++t)
    for (std::size_t b = 0; b < n_batches; ++b)
      for (std::size_t i = b * batch_size; i < (b + 1) * batch_size; ++i)
        for (std::size_t o = 0; o < n_obs; ++o) sums[b][t][o] += per_circuit[t][i][o];

  auto group_zeta = [&](std::size_t first, std::size_t count) {
    std::vector<AwaeRow> rows;
    rows.reserve(per_circuit.size() * n_obs);
    for (std::size_t t = 0; t < per_circuit.size(); ++t)
      for (std::size_t o = 0; o < n_obs; ++o) {
        double s = 0.0;
        for (std::size_t b = first; b < first + count; ++b) s += sums[b][t][o];
        rows.push_back({reference[t][o], s / (double(count) * double(batch_size))});
      }
    return awae(rows);
  };

  std::vector<BatchCurvePoint> curve;
  auto add_point = [&](std::size_t merge) {
    std::size_t groups = n_batches / merge;
    if (groups == 0) return;
    std::vector<double> zetas(groups);
    for (std::size_t g = 0; g < groups; ++g) zetas[g] = group_zeta(g * merge, merge);
    double mean = 0.0;
    for (double z : zetas) mean += z;
    mean /= double(groups);
    double var = 0.0;
    for (double z : zetas) var += (z - mean) * (z - mean);
    double std = groups > 1 ? std::sqrt(var / double(groups - 1) / double(groups)) : 0.0;
    curve.push_back({merge * batch_size, mean, std});
  };
  for (std::size_t m = 1; m <= 10; ++m) add_point(m);
  for (std::size_t m = 20; m <= 50; m += 10) add_point(m);

  // the full sample, remainder circuits included
  bool dup = !curve.empty() && curve.back().n == total && n_batches * batch_size == total;
  if (!dup) {
    std::vector<AwaeRow> rows;
    for (std::size_t t = 0; t < per_circuit.size(); ++t)
      for (std::size_t o = 0; o < n_obs; ++o) {
        double s = 0.0;
        for (const auto& row : per_circuit[t]) s += row[o];
        rows.push_back({reference[t][o], s / double(total)});
      }
    curve.push_back({total, awae(rows), 0.0});
  }
  return curve;
}

ExtrapolationFit extrapolate(const std::vector<BatchCurvePoint>& curve, std::size_t fit_max_n) {
  std::vector<const BatchCurvePoint*> pts;
  for (const auto& p : curve)
    if (p.n <= fit_max_n) pts.push_back(&p);
  if (pts.size() < 3) throw std::invalid_argument("extrapolation needs at least three points below the cut");

  double wmax = 0.0;
  for (auto* p : pts)
    if (p->std > 0.0) wmax = std::max(wmax, 1.0 / (p->std * p->std));
  if (wmax == 0.0) wmax = 1.0;

  double sxx = 0.0, sx = 0.0, sw = 0.0, sxy = 0.0, sy = 0.0;
  for (auto* p : pts) {
    double w = p->std > 0.0 ? 1.0 / (p->std * p->std) : wmax;
    double x = 1.0 / std::sqrt(double(p->n));
    sxx += w * x * x;
    sx += w * x;
    sw += w;
    sxy += w * x * p->zeta;
    sy += w * p->zeta;
  }
  double det = sxx * sw - sx * sx;
  if (std::abs(det) < 1e-300 * sxx * sw) throw std::runtime_error("degenerate extrapolation design");
  ExtrapolationFit fit;
  fit.a = (sw * sxy - sx * sy) / det;
  fit.b = (sxx * sy - sx * sxy) / det;
  fit.var_a = sw / det;
  fit.var_b = sxx / det;
  fit.cov_ab = -sx / det;
  if (fit.b < 0.0) {
    fit.b = 0.0;
    fit.a = sxy / sxx;
  }
  return fit;
}

DiagnosticsReport diagnostics(double zeta_inf, double zeta_finite, double zeta_full, const ExtrapolationFit& fit,
                              double log_gamma_total, double f_nec_target, double f_nec_raw) {
  if (f_nec_raw <= 0.0 || f_nec_target <= 0.0) throw std::invalid_argument("non-positive estimation-circuit fidelity");
  DiagnosticsReport rep;
  rep.zeta_inf = zeta_inf;
  rep.zeta_finite = zeta_finite;
  rep.zeta_full = zeta_full;
  rep.dz_nt = zeta_finite - zeta_inf;
  rep.dz_c_unk = zeta_full - zeta_finite;
  rep.dz_unk = fit.b - zeta_inf;
  rep.dz_unk_std = std::sqrt(std::max(fit.var_b, 0.0));
  rep.no_nt_projection = rep.dz_c_unk * std::exp(-log_gamma_total) * f_nec_target / f_nec_raw;
  return rep;
}

}  // namespace ntkit
