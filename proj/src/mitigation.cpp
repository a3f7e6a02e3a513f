#include "ntkit/mitigation.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace ntkit {

Circuit nec_circuit(const Circuit& c) {
  Circuit out(c.num_qubits);
  for (const auto& g : c.gates)
    if (g.type == GateType::Cnot) out.add(g);
  return out;
}

double nec_fidelity(const Circuit& nec, const NoiseModel& model, const PauliString& obs) {
  Vector psi = run_circuit_ideal(nec);
  double ideal = expectation_state(psi, obs, nec.num_qubits);
  if (std::abs(ideal) < 1e-9)
    throw std::invalid_argument("observable has zero ideal expectation on the noise-estimation circuit");
  double noisy = expectation(run_circuit_channel(nec, model), obs);
  return noisy / ideal;
}

double mitigate(double raw, double f_nec) {
  if (f_nec <= 0.0) throw std::invalid_argument("non-positive circuit fidelity");
  return raw / f_nec;
}

PauliString choose_nec_observable(const Circuit& nec, const PauliString& desired) {
  if (desired.is_identity()) return PauliString(std::vector<Pauli>(desired.qubits(), Pauli::Z));
  Vector psi = run_circuit_ideal(nec);
  if (std::abs(expectation_state(psi, desired, nec.num_qubits)) > 1e-9) return desired;
  // The NEC circuit fixes |0..0>, so Z-strings always survive; take the one
  // on the observable's support.
  std::vector<Pauli> word(desired.qubits(), Pauli::I);
  bool any = false;
  for (std::size_t k = 0; k < desired.qubits(); ++k)
    if (desired.at(k) != Pauli::I) {
      word[k] = Pauli::Z;
      any = true;
    }
  if (!any) word.assign(desired.qubits(), Pauli::Z);
  return PauliString(word);
}

namespace {

constexpr double kLambdaMax = 1.0 / 15.0;

struct TargetState {
  // one slot per junction: 2q junctions use lambda only
  std::map<int, double> lambda;
  std::map<int, QuasiLocalParams3Q> triple;
};

FidelityVector target_fidelities(const FidelityVector& gate, const TargetState& st, int j) {
  if (gate.q == 2) return make_depolarizing_2q({std::min(16.0 * st.lambda.at(j), 1.0)});
  return make_quasilocal_3q(st.triple.at(j));
}

struct Objective {
  const std::map<int, FidelityVector>* gates;
  const Circuit* nec;
  PauliString obs;
  std::map<int, int> n_cnot;

  // log sigma = sum_j N_j ln gamma_j - ln F_NEC(targets); +inf when the
  // target channel kills the observable entirely.
  double operator()(const TargetState& st) const {
    double logsig = 0.0;
    NoiseModel model;
    for (const auto& [j, gate] : *gates) {
      FidelityVector tgt = target_fidelities(gate, st, j);
      double gamma = tailor_plan(gate, tgt).gamma;
      logsig += n_cnot.at(j) * std::log(gamma);
      model.junctions.push_back({j, walsh_hadamard(tgt), gate.q == 3});
    }
    double fnec = nec_fidelity(*nec, model, obs);
    if (fnec <= 0.0) return std::numeric_limits<double>::infinity();
    return logsig - std::log(fnec);
  }
};

// golden-section refinement of a 1-d slice
template <typename F>
double golden(F&& f, double lo, double hi, int iters) {
  const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double x1 = b - phi * (b - a), x2 = a + phi * (b - a);
  double f1 = f(x1), f2 = f(x2);
  for (int i = 0; i < iters; ++i) {
    if (f1 < f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - phi * (b - a);
      f1 = f(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + phi * (b - a);
      f2 = f(x2);
    }
  }
  return f1 < f2 ? x1 : x2;
}

// grid + golden minimization of obj along one scalar coordinate
template <typename Setter>
void relax_coordinate(const Objective& obj, TargetState& st, double lo, double hi, int grid, int refine,
                      Setter&& set) {
  double best = std::numeric_limits<double>::infinity(), best_x = lo;
  for (int g = 0; g <= grid; ++g) {
    double x = lo + (hi - lo) * g / grid;
    set(st, x);
    double v = obj(st);
    if (v < best) {
      best = v;
      best_x = x;
    }
  }
  double step = (hi - lo) / grid;
  double a = std::max(lo, best_x - step), b = std::min(hi, best_x + step);
  double x = golden([&](double t) { set(st, t); return obj(st); }, a, b, refine);
  set(st, x);
  if (obj(st) > best) set(st, best_x);  // keep the grid point if refinement lost
}

}  // namespace

MitigationPlan optimize_target(const std::map<int, FidelityVector>& gates, const Circuit& nec,
                               const PauliString& observable, const OptimizeOptions& opt) {
  Objective obj;
  obj.gates = &gates;
  obj.nec = &nec;
  obj.obs = choose_nec_observable(nec, observable);
  for (const auto& g : nec.gates) {
    if (g.type != GateType::Cnot) continue;
    if (g.junction < 0 || !gates.count(g.junction))
      throw std::invalid_argument("noise-estimation circuit uses a junction with no gate channel");
    obj.n_cnot[g.junction]++;
  }
  for (const auto& [j, gate] : gates)
    if (!obj.n_cnot.count(j)) obj.n_cnot[j] = 0;

  TargetState st;
  for (const auto& [j, gate] : gates) {
    if (gate.q == 2)
      st.lambda[j] = 0.0;
    else
      st.triple[j] = {0.0, 0.0, 0.0};
  }

  for (int sweep = 0; sweep < opt.sweeps; ++sweep) {
    for (const auto& [j, gate] : gates) {
      int jj = j;
      if (gate.q == 2) {
        relax_coordinate(obj, st, 0.0, kLambdaMax, opt.grid, opt.refine_iters,
                         [jj](TargetState& s, double x) { s.lambda[jj] = x; });
      } else {
        // box search: relax each of the three strengths in turn
        auto setc = [jj](TargetState& s, double x) { s.triple[jj].eps_cnot = x; };
        auto setn = [jj](TargetState& s, double x) { s.triple[jj].eps_neigh = x; };
        auto setg = [jj](TargetState& s, double x) { s.triple[jj].eps_glob = x; };
        relax_coordinate(obj, st, 0.0, 0.2, opt.grid / 2, opt.refine_iters, setc);
        relax_coordinate(obj, st, 0.0, 0.2, opt.grid / 2, opt.refine_iters, setn);
        relax_coordinate(obj, st, 0.0, 0.2, opt.grid / 2, opt.refine_iters, setg);
      }
    }
  }

  MitigationPlan plan;
  plan.nec_observable = obj.obs;
  plan.n_cnot = obj.n_cnot;
  NoiseModel target_model;
  for (const auto& [j, gate] : gates) {
    FidelityVector tgt = target_fidelities(gate, st, j);
    if (gate.q == 2)
      plan.target_epsilon[j] = std::min(16.0 * st.lambda.at(j), 1.0);
    else
      plan.target_3q[j] = st.triple.at(j);
    plan.plans[j] = tailor_plan(gate, tgt);
    plan.plans[j].junction_id = j;
    plan.gamma[j] = plan.plans[j].gamma;
    target_model.junctions.push_back({j, walsh_hadamard(tgt), gate.q == 3});
  }
  plan.f_nec = nec_fidelity(nec, target_model, obj.obs);
  plan.log_sigma = -std::log(plan.f_nec);
  for (const auto& [j, g] : plan.gamma) plan.log_sigma += plan.n_cnot.at(j) * std::log(g);
  if (!std::isfinite(plan.log_sigma)) throw std::runtime_error("target optimization produced a non-finite sigma");
  return plan;
}

std::string MitigationPlan::to_json() const {
  nlohmann::json j;
  auto& tgt = j["targets"] = nlohmann::json::array();
  for (const auto& [jn, eps] : target_epsilon)
    tgt.push_back({{"junction", jn}, {"epsilon", eps}, {"gamma", gamma.at(jn)}, {"n_cnot", n_cnot.at(jn)}});
  for (const auto& [jn, t] : target_3q)
    tgt.push_back({{"junction", jn},
                   {"eps_cnot", t.eps_cnot},
                   {"eps_neigh", t.eps_neigh},
                   {"eps_glob", t.eps_glob},
                   {"gamma", gamma.at(jn)},
                   {"n_cnot", n_cnot.at(jn)}});
  j["f_nec"] = f_nec;
  j["log_sigma"] = log_sigma;
  j["nec_observable"] = nec_observable.qubits() ? nec_observable.str() : "";
  auto& qp = j["plans"] = nlohmann::json::array();
  for (const auto& [jn, plan] : plans)
    qp.push_back({{"junction", jn}, {"q", plan.q}, {"quasi", plan.quasi}});
  return j.dump(2);
}

MitigationPlan MitigationPlan::from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  MitigationPlan plan;
  plan.f_nec = j.at("f_nec").get<double>();
  plan.log_sigma = j.at("log_sigma").get<double>();
  std::string obs = j.at("nec_observable").get<std::string>();
  if (!obs.empty()) plan.nec_observable = PauliString(obs);
  for (const auto& t : j.at("targets")) {
    int jn = t.at("junction").get<int>();
    if (t.contains("epsilon"))
      plan.target_epsilon[jn] = t.at("epsilon").get<double>();
    else
      plan.target_3q[jn] = {t.at("eps_cnot").get<double>(), t.at("eps_neigh").get<double>(),
                            t.at("eps_glob").get<double>()};
    plan.gamma[jn] = t.at("gamma").get<double>();
    plan.n_cnot[jn] = t.at("n_cnot").get<int>();
  }
  for (const auto& p : j.at("plans")) {
    int jn = p.at("junction").get<int>();
    auto q = p.at("q").get<std::size_t>();
    auto quasi = p.at("quasi").get<std::vector<double>>();
    QuasiProbPlan qp;
    qp.q = q;
    qp.gamma = 0.0;
    for (double v : quasi) qp.gamma += std::abs(v);
    qp.probs.resize(quasi.size());
    qp.signs.resize(quasi.size());
    for (std::size_t i = 0; i < quasi.size(); ++i) {
      qp.probs[i] = std::abs(quasi[i]) / qp.gamma;
      qp.signs[i] = quasi[i] < 0.0 ? -1 : 1;
    }
    qp.quasi = std::move(quasi);
    qp.junction_id = jn;
    plan.plans[jn] = std::move(qp);
  }
  return plan;
}

}  // namespace ntkit
