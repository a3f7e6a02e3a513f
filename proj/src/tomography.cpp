#include "ntkit/tomography.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <stdexcept>

#include <Eigen/Dense>

#include "ntkit/channels.hpp"
#include "ntkit/compiling.hpp"

namespace ntkit {

std::string pnt_family_name(PntFamily f) {
  switch (f) {
    case PntFamily::Inv: return "Inv";
    case PntFamily::CatYZ: return "CatYZ";
    case PntFamily::CatXY: return "CatXY";
    case PntFamily::CatYY: return "CatYY";
    case PntFamily::CatXZ: return "CatXZ";
    case PntFamily::OddXX: return "OddXX";
    case PntFamily::OddYX: return "OddYX";
    case PntFamily::OddZY: return "OddZY";
    case PntFamily::OddZZ: return "OddZZ";
  }
  throw std::logic_error("bad family");
}

namespace {

int key(const char* word, bool d = false) { return fid_key(PauliString(word).index(), d); }

// prep symbols: '0' -> |0>, '+' -> |+>, 'y' -> |+_y>
void prep_qubit(Circuit& c, int q, char s) {
  if (s == '0') return;
  c.add(Gate::single(GateType::H, q));
  if (s == 'y') c.add(Gate::single(GateType::S, q));
}

struct FamilyDef {
  PntFamily fam;
  bool odd;
  bool cat_rotations;
  char prep0, prep1;
  Pauli meas0, meas1;
};

const FamilyDef kFamilies[] = {
    {PntFamily::Inv, false, false, '0', '+', Pauli::Z, Pauli::X},
    {PntFamily::CatYZ, false, true, '+', 'y', Pauli::X, Pauli::Y},
    {PntFamily::CatXY, false, true, 'y', '0', Pauli::Y, Pauli::Z},
    {PntFamily::CatYY, false, true, '+', '0', Pauli::X, Pauli::Z},
    {PntFamily::CatXZ, false, true, 'y', 'y', Pauli::Y, Pauli::Y},
    {PntFamily::OddXX, true, false, '+', '+', Pauli::X, Pauli::X},
    {PntFamily::OddYX, true, false, 'y', '+', Pauli::Y, Pauli::X},
    {PntFamily::OddZY, true, false, '0', 'y', Pauli::Z, Pauli::Y},
    {PntFamily::OddZZ, true, false, '0', '0', Pauli::Z, Pauli::Z},
};

using Quantity = PntCircuitSpec::Quantity;

// Non-crosstalk quantities of one family at depth n (m CNOTs). The exponents
// encode the Heisenberg orbit of each observable through the repeated block:
// the Inv/Cat* orbits sit on a single fidelity every CNOT; the Odd* orbits
// alternate between the two members of a degenerate pair, so an odd count
// leaves the exponents split (n+1, n) and the joint/marginal signals resolve
// the pair.
std::vector<Quantity> family_quantities(PntFamily fam, int n, int m) {
  std::string name = pnt_family_name(fam);
  switch (fam) {
    case PntFamily::Inv:
      return {{"Inv:IX", {1}, {{key("IX"), m}}},
              {"Inv:ZI", {0}, {{key("ZI"), m}}},
              {"Inv:ZX", {0, 1}, {{key("ZX"), m}}}};
    case PntFamily::CatYZ: return {{"CatYZ:YZ", {0, 1}, {{key("YZ"), m}}}};
    case PntFamily::CatXY: return {{"CatXY:XY", {0, 1}, {{key("XY"), m}}}};
    case PntFamily::CatYY: return {{"CatYY:YY", {0, 1}, {{key("YY"), m}}}};
    case PntFamily::CatXZ: return {{"CatXZ:XZ", {0, 1}, {{key("XZ"), m}}}};
    case PntFamily::OddXX:
      return {{"OddXX:joint", {0, 1}, {{key("XX"), n + 1}, {key("XI"), n}}},
              {"OddXX:marg", {0}, {{key("XI"), n + 1}, {key("XX"), n}}},
              {"OddXX:red", {1}, {{key("IX"), m}}}};
    case PntFamily::OddYX:
      return {{"OddYX:joint", {0, 1}, {{key("YX"), n + 1}, {key("YI"), n}}},
              {"OddYX:marg", {0}, {{key("YI"), n + 1}, {key("YX"), n}}},
              {"OddYX:red", {1}, {{key("IX"), m}}}};
    case PntFamily::OddZY:
      return {{"OddZY:joint", {0, 1}, {{key("ZY"), n + 1}, {key("IY"), n}}},
              {"OddZY:marg", {1}, {{key("IY"), n + 1}, {key("ZY"), n}}},
              {"OddZY:red", {0}, {{key("ZI"), m}}}};
    case PntFamily::OddZZ:
      return {{"OddZZ:joint", {0, 1}, {{key("ZZ"), n + 1}, {key("IZ"), n}}},
              {"OddZZ:marg", {1}, {{key("IZ"), n + 1}, {key("ZZ"), n}}},
              {"OddZZ:red", {0}, {{key("ZI"), m}}}};
  }
  throw std::logic_error("bad family");
}

}  // namespace

std::vector<PntCircuitSpec> generate_pnt_circuits(int junction, const std::vector<int>& depths, bool with_crosstalk) {
  std::vector<PntCircuitSpec> specs;
  for (const FamilyDef& def : kFamilies) {
    for (int n : depths) {
      if (n < 1) throw std::invalid_argument("depth parameter must be >= 1");
      PntCircuitSpec spec;
      spec.family = def.fam;
      spec.n = n;
      spec.cnots = def.odd ? 2 * n + 1 : 2 * n;
      spec.crosstalk = with_crosstalk;
      spec.circuit = Circuit(with_crosstalk ? 3 : 2);
      prep_qubit(spec.circuit, 0, def.prep0);
      prep_qubit(spec.circuit, 1, def.prep1);
      for (int k = 0; k < spec.cnots; ++k) {
        spec.circuit.add(Gate::cnot(0, 1, junction, with_crosstalk ? 2 : -1));
        if (def.cat_rotations) {
          spec.circuit.add(Gate::single(GateType::Rz, 0, M_PI / 2));
          spec.circuit.add(Gate::single(GateType::Rx, 1, M_PI / 2));
        }
      }
      spec.meas_basis = {def.meas0, def.meas1};
      spec.quantities = family_quantities(def.fam, n, spec.cnots);
      if (with_crosstalk) {
        spec.meas_basis.push_back(Pauli::Z);
        std::vector<Quantity> extra;
        for (const Quantity& q : spec.quantities) {
          Quantity d = q;
          d.series += ":D";
          d.qubits.push_back(2);
          for (auto& [k, p] : d.exponents) k += 1;  // block I -> block D
          extra.push_back(std::move(d));
        }
        if (def.fam == PntFamily::Inv) extra.push_back({"Inv:f0D", {2}, {{fid_key(0, true), spec.cnots}}});
        spec.quantities.insert(spec.quantities.end(), extra.begin(), extra.end());
      }
      specs.push_back(std::move(spec));
    }
  }
  return specs;
}

PntSignals measure_pnt(const std::vector<PntCircuitSpec>& specs, const NoiseModel& model, std::size_t n_rc,
                       std::size_t shots, Rng& rng) {
  PntSignals out;
  for (const auto& spec : specs) {
    PntSignals::Row row;
    row.family = spec.family;
    row.n = spec.n;
    row.cnots = spec.cnots;
    row.crosstalk = spec.crosstalk;
    row.quantities = spec.quantities;
    row.samples.resize(spec.quantities.size());
    const int nq = spec.circuit.num_qubits;
    if (shots == 0 || n_rc == 0) {
      DensityMatrix rho = run_circuit_channel(spec.circuit, model);
      for (std::size_t qi = 0; qi < spec.quantities.size(); ++qi) {
        std::vector<Pauli> word(static_cast<std::size_t>(nq), Pauli::I);
        for (int q : spec.quantities[qi].qubits) word[static_cast<std::size_t>(q)] = spec.meas_basis[static_cast<std::size_t>(q)];
        row.samples[qi].push_back(expectation(rho, PauliString(word)));
      }
    } else {
      for (std::size_t r = 0; r < n_rc; ++r) {
        DressedCircuit d = spec.crosstalk ? crc_dress(spec.circuit, rng) : rc_dress(spec.circuit, rng);
        Vector psi = run_circuit_trajectory(d.circuit, model, rng);
        ShotRecord rec = sample_shots_state(psi, spec.meas_basis, nq, shots, rng);
        for (std::size_t qi = 0; qi < spec.quantities.size(); ++qi)
          row.samples[qi].push_back(counts_expectation(rec, spec.quantities[qi].qubits));
      }
    }
    out.rows.push_back(std::move(row));
  }
  return out;
}

namespace {

struct FitRow {
  int series = 0;
  const std::vector<std::pair<int, int>>* exponents = nullptr;
  double mean = 0.0;
  double std_mean = 0.0;
};

// WLS of ln s = ln A_series + sum_k power * ln f_key. Returns ln f per key.
std::map<int, double> solve_log_wls(const std::vector<FitRow>& rows, int n_series) {
  std::set<int> keyset;
  for (const auto& r : rows)
    if (r.mean > 1e-9)
      for (const auto& [k, p] : r.exponents[0]) keyset.insert(k);
  std::map<int, int> keycol;
  for (int k : keyset) {
    int col = n_series + static_cast<int>(keycol.size());
    keycol[k] = col;
  }
  const int ncols = n_series + static_cast<int>(keycol.size());
  std::size_t nrows = 0;
  for (const auto& r : rows)
    if (r.mean > 1e-9) ++nrows;
  if (nrows < keyset.size() + 1) throw std::runtime_error("not enough positive signals to fit");
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(nrows), ncols);
  Eigen::VectorXd b(static_cast<Eigen::Index>(nrows));
  Eigen::Index i = 0;
  for (const auto& r : rows) {
    if (r.mean <= 1e-9) continue;
    double w = r.std_mean > 0.0 ? r.mean / r.std_mean : 1.0;
    w = std::min(w, 1e6);
    a(i, r.series) = w;
    for (const auto& [k, p] : r.exponents[0]) a(i, keycol.at(k)) += w * static_cast<double>(p);
    b(i) = w * std::log(r.mean);
    ++i;
  }
  Eigen::VectorXd x = a.colPivHouseholderQr().solve(b);
  std::map<int, double> lnf;
  for (const auto& [k, col] : keycol) lnf[k] = x(col);
  return lnf;
}

}  // namespace

TomographyResult fit_fidelities(const PntSignals& signals, int junction, std::size_t n_bootstrap, uint64_t seed) {
  if (signals.rows.empty()) throw std::invalid_argument("empty signal table");
  // series indexing
  std::map<std::string, int> series_id;
  bool crosstalk = false;
  for (const auto& row : signals.rows) {
    crosstalk = crosstalk || row.crosstalk;
    for (const auto& q : row.quantities)
      if (!series_id.count(q.series)) {
        int id = static_cast<int>(series_id.size());
        series_id[q.series] = id;
      }
  }
  const int n_series = static_cast<int>(series_id.size());

  auto build_rows = [&](const std::vector<std::vector<std::size_t>>* resample) {
    std::vector<FitRow> rows;
    for (std::size_t ri = 0; ri < signals.rows.size(); ++ri) {
      const auto& row = signals.rows[ri];
      for (std::size_t qi = 0; qi < row.quantities.size(); ++qi) {
        const auto& samples = row.samples[qi];
        if (samples.empty()) continue;
        double mean = 0.0, m2 = 0.0;
        std::size_t cnt = resample ? (*resample)[ri].size() : samples.size();
        for (std::size_t k = 0; k < cnt; ++k) {
          double v = resample ? samples[(*resample)[ri][k]] : samples[k];
          mean += v;
        }
        mean /= static_cast<double>(cnt);
        for (std::size_t k = 0; k < cnt; ++k) {
          double v = resample ? samples[(*resample)[ri][k]] : samples[k];
          m2 += (v - mean) * (v - mean);
        }
        double std_mean = cnt > 1 ? std::sqrt(m2 / static_cast<double>(cnt - 1) / static_cast<double>(cnt)) : 0.0;
        rows.push_back({series_id.at(row.quantities[qi].series), &row.quantities[qi].exponents, mean, std_mean});
      }
    }
    return rows;
  };

  auto lnf = solve_log_wls(build_rows(nullptr), n_series);

  // bootstrap over RC samples, indices shared across a row's quantities
  std::map<int, std::vector<double>> boot;
  bool have_samples = false;
  for (const auto& row : signals.rows)
    for (const auto& s : row.samples) have_samples = have_samples || s.size() > 1;
  if (have_samples && n_bootstrap > 0) {
    Rng rng(seed);
    for (std::size_t b = 0; b < n_bootstrap; ++b) {
      std::vector<std::vector<std::size_t>> idx(signals.rows.size());
      for (std::size_t ri = 0; ri < signals.rows.size(); ++ri) {
        std::size_t nsamp = signals.rows[ri].samples.empty() ? 0 : signals.rows[ri].samples[0].size();
        idx[ri].resize(nsamp);
        for (auto& v : idx[ri]) v = static_cast<std::size_t>(rng() % nsamp);
      }
      try {
        auto r = solve_log_wls(build_rows(&idx), n_series);
        for (const auto& [k, v] : r) boot[k].push_back(v);
      } catch (const std::runtime_error&) {
        // degenerate resample (all-negative signals); skip
      }
    }
  }

  TomographyResult res;
  res.junction = junction;
  res.crosstalk = crosstalk;
  res.f.assign(16, 1.0);
  res.f_std.assign(16, 0.0);
  if (crosstalk) {
    res.fD.assign(16, 1.0);
    res.fD_std.assign(16, 0.0);
  }
  // Robust spread of the bootstrap distribution: rare degenerate resamples can
  // produce unbounded least-squares solutions, so use quantiles instead of
  // moments (normal-consistent half the 16-84% interval).
  auto boot_std = [&](int k) {
    auto it = boot.find(k);
    if (it == boot.end() || it->second.size() < 8) return 0.0;
    std::vector<double> v = it->second;
    std::sort(v.begin(), v.end());
    auto quant = [&](double p) { return v[static_cast<std::size_t>(std::llround(p * (v.size() - 1)))]; };
    double center = quant(0.5);
    double lnstd = 0.5 * (quant(0.84) - quant(0.16));
    return std::exp(center) * lnstd;  // delta method back to fidelity scale
  };
  for (std::size_t pair = 0; pair < 16; ++pair) {
    int ki = fid_key(pair, false);
    if (pair != 0) {
      if (!lnf.count(ki)) throw std::runtime_error("fidelity " + PauliString(2, pair).str() + " not determined by signals");
      res.f[pair] = std::exp(lnf.at(ki));
      res.f_std[pair] = boot_std(ki);
    }
    if (crosstalk) {
      int kd = fid_key(pair, true);
      if (!lnf.count(kd)) throw std::runtime_error("crosstalk fidelity not determined by signals");
      res.fD[pair] = std::exp(lnf.at(kd));
      res.fD_std[pair] = boot_std(kd);
    }
  }
  res.anomaly.assign(16, false);
  for (std::size_t pair = 1; pair < 16; ++pair) res.anomaly[pair] = res.f[pair] > 1.0 + 3.0 * res.f_std[pair];
  return res;
}

ProbVector sanitize_for_emulation(const TomographyResult& result) {
  if (!result.crosstalk) {
    FidelityVector f(2, result.f);
    return sanitize_distribution(walsh_hadamard(f));
  }
  std::vector<double> f3(64);
  for (std::size_t pair = 0; pair < 16; ++pair)
    for (std::size_t kappa = 0; kappa < 4; ++kappa)
      f3[pair * 4 + kappa] = kappa == 0 ? result.f[pair] : result.fD[pair];
  f3[0] = 1.0;
  return sanitize_distribution(walsh_hadamard(FidelityVector(3, f3)));
}

}  // namespace ntkit
