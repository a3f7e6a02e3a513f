#include "ntkit/channels.hpp"

#include <cmath>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace ntkit {

FidelityVector make_depolarizing_2q(const DepolarizingParams2Q& params) {
  if (params.epsilon < 0.0 || params.epsilon > 1.0) throw std::invalid_argument("depolarizing epsilon out of [0,1]");
  std::vector<double> f(16, 1.0 - params.epsilon);
  f[0] = 1.0;
  return FidelityVector(2, std::move(f));
}

FidelityVector make_quasilocal_3q(const QuasiLocalParams3Q& params) {
  for (double e : {params.eps_cnot, params.eps_neigh, params.eps_glob})
    if (e < 0.0) throw std::invalid_argument("quasi-local epsilon must be >= 0");
  if (1.0 - params.eps_cnot - params.eps_neigh - params.eps_glob < 0.0)
    throw std::invalid_argument("quasi-local epsilons sum above 1");
  // Index = pair-word * 4 + neighbor digit (qubit order control, target,
  // neighbor). Neighbor-identity block: damping eps_cnot + eps_glob on pair
  // errors; neighbor-error blocks: eps_neigh + eps_glob, plus eps_cnot when
  // the pair word is also non-identity.
  std::vector<double> f(64, 0.0);
  for (std::size_t pair = 0; pair < 16; ++pair) {
    for (std::size_t kappa = 0; kappa < 4; ++kappa) {
      double v;
      if (kappa == 0) {
        v = pair == 0 ? 1.0 : 1.0 - params.eps_cnot - params.eps_glob;
      } else {
        v = pair == 0 ? 1.0 - params.eps_neigh - params.eps_glob
                      : 1.0 - params.eps_neigh - params.eps_cnot - params.eps_glob;
      }
      f[pair * 4 + kappa] = v;
    }
  }
  return FidelityVector(3, std::move(f));
}

FidelityVector compose_fidelities(const FidelityVector& a, const FidelityVector& b) {
  if (a.q != b.q) throw std::invalid_argument("fidelity vectors of different size");
  std::vector<double> f(a.dim());
  for (std::size_t i = 0; i < f.size(); ++i) f[i] = a.f[i] * b.f[i];
  return FidelityVector(a.q, std::move(f));
}

FidelityVector invert_fidelities(const FidelityVector& f) {
  std::vector<double> inv(f.dim());
  for (std::size_t i = 0; i < inv.size(); ++i) {
    if (f.f[i] == 0.0) throw std::invalid_argument("channel with a zero fidelity is not invertible");
    inv[i] = 1.0 / f.f[i];
  }
  return FidelityVector(f.q, std::move(inv));
}

namespace {

QuasiProbPlan plan_from_quasi(std::size_t q, std::vector<double> quasi) {
  QuasiProbPlan plan;
  plan.q = q;
  plan.gamma = 0.0;
  for (double v : quasi) plan.gamma += std::abs(v);
  plan.probs.resize(quasi.size());
  plan.signs.resize(quasi.size());
  for (std::size_t i = 0; i < quasi.size(); ++i) {
    plan.probs[i] = std::abs(quasi[i]) / plan.gamma;
    plan.signs[i] = quasi[i] < 0.0 ? -1 : 1;
  }
  plan.quasi = std::move(quasi);
  return plan;
}

}  // namespace

QuasiProbPlan tailor_plan(const FidelityVector& gate, const FidelityVector& target) {
  if (gate.q != target.q) throw std::invalid_argument("gate/target qubit count mismatch");
  std::vector<double> ratio(gate.dim());
  for (std::size_t i = 0; i < ratio.size(); ++i) {
    if (gate.f[i] == 0.0) throw std::invalid_argument("channel with a zero fidelity is not invertible");
    ratio[i] = target.f[i] / gate.f[i];
  }
  ProbVector quasi = walsh_hadamard(FidelityVector(gate.q, std::move(ratio)));
  return plan_from_quasi(gate.q, std::move(quasi.p));
}

double matched_epsilon(const FidelityVector& gate) {
  if (gate.q != 2) throw std::invalid_argument("matched_epsilon expects a 2-qubit channel");
  double mean = 0.0;
  for (std::size_t a = 1; a < 16; ++a) mean += gate.f[a];
  return 1.0 - mean / 15.0;
}

QuasiProbPlan q_dnt(const FidelityVector& gate, double epsilon) {
  if (gate.q != 2) throw std::invalid_argument("q_dnt expects a 2-qubit channel");
  std::vector<double> quasi(16);
  for (std::size_t a = 0; a < 16; ++a) {
    double acc = 0.0;
    for (std::size_t b = 1; b < 16; ++b) {
      if (gate.f[b] == 0.0) throw std::invalid_argument("channel with a zero fidelity is not invertible");
      acc += (symplectic_product(2, a, b) ? -1.0 : 1.0) / gate.f[b];
    }
    quasi[a] = (1.0 + (1.0 - epsilon) * acc) / 16.0;
  }
  return plan_from_quasi(2, std::move(quasi));
}

std::pair<PauliString, int> sample_dressing(const QuasiProbPlan& plan, Rng& rng) {
  std::size_t idx = sample_discrete(plan.probs, rng);
  return {PauliString(plan.q, idx), plan.signs[idx]};
}

ProbVector sanitize_distribution(const ProbVector& p) {
  std::vector<double> out(p.dim());
  double pos = 0.0;
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = p.p[i] > 0.0 ? p.p[i] : 0.0;
    pos += out[i];
  }
  if (pos <= 0.0) throw std::runtime_error("distribution has no positive mass left after clamping");
  for (double& v : out) v /= pos;
  return ProbVector(p.q, std::move(out));
}

std::string NoiseModelFile::to_json() const {
  nlohmann::json j;
  j["version"] = 1;
  auto& arr = j["junctions"] = nlohmann::json::array();
  for (const auto& e : entries) {
    nlohmann::json je;
    je["junction_id"] = e.junction;
    je["direction"] = e.direction;
    je["q"] = e.fidelities.q;
    if (e.neighbor >= 0) je["neighbor"] = e.neighbor;
    je["fidelities"] = e.fidelities.f;
    arr.push_back(je);
  }
  return j.dump(2);
}

NoiseModelFile NoiseModelFile::from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  if (j.at("version").get<int>() != 1) throw std::runtime_error("unsupported noise-model file version");
  NoiseModelFile file;
  for (const auto& je : j.at("junctions")) {
    Entry e;
    e.junction = je.at("junction_id").get<int>();
    e.direction = je.value("direction", std::string("forward"));
    e.neighbor = je.value("neighbor", -1);
    auto q = je.at("q").get<std::size_t>();
    e.fidelities = FidelityVector(q, je.at("fidelities").get<std::vector<double>>());
    file.entries.push_back(std::move(e));
  }
  return file;
}

const NoiseModelFile::Entry* NoiseModelFile::find(int junction) const {
  for (const auto& e : entries)
    if (e.junction == junction) return &e;
  return nullptr;
}

}  // namespace ntkit
