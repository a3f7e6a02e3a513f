// Command-line driver: noise generation, tomography, plan optimization,
// trial execution, and report emission.

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include <nlohmann/json.hpp>

#include "ntkit/experiment.hpp"
#include "ntkit/tomography.hpp"

using namespace ntkit;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void spit(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

std::string config_hash(const std::string& text) {
  // FNV-1a, enough to tag a manifest
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : text) h = (h ^ c) * 1099511628211ull;
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

json config_json(const ExperimentConfig& cfg, const std::string& noise_path, const std::string& plan_path) {
  json j;
  j["bcs"] = {{"eps", cfg.bcs.eps}, {"g", cfg.bcs.g}, {"dt", cfg.bcs.dt}, {"steps", cfg.bcs.steps}};
  j["trial"] = trial_name(cfg.trial);
  j["n_nt"] = cfg.n_nt;
  j["shots_per_circuit"] = cfg.shots_per_circuit;
  j["seed"] = cfg.seed;
  j["workers"] = cfg.workers;
  j["inject_coherent"] = cfg.inject_coherent;
  j["inject_depol_1q"] = cfg.inject_depol_1q;
  j["noise"] = noise_path;
  j["plan"] = plan_path;
  return j;
}

void apply_config_file(ExperimentConfig& cfg, std::string& noise_path, std::string& plan_path,
                       const std::string& path) {
  json j = json::parse(slurp(path));
  if (j.contains("bcs")) {
    const auto& b = j["bcs"];
    if (b.contains("eps")) cfg.bcs.eps = b["eps"].get<std::vector<double>>();
    if (b.contains("g")) cfg.bcs.g = b["g"].get<double>();
    if (b.contains("dt")) cfg.bcs.dt = b["dt"].get<double>();
    if (b.contains("steps")) cfg.bcs.steps = b["steps"].get<int>();
  }
  if (j.contains("trial")) cfg.trial = trial_from_string(j["trial"].get<std::string>());
  if (j.contains("n_nt")) cfg.n_nt = j["n_nt"].get<int>();
  if (j.contains("shots_per_circuit")) cfg.shots_per_circuit = j["shots_per_circuit"].get<int>();
  if (j.contains("seed")) cfg.seed = j["seed"].get<std::uint64_t>();
  if (j.contains("workers")) cfg.workers = j["workers"].get<int>();
  if (j.contains("inject_coherent")) cfg.inject_coherent = j["inject_coherent"].get<double>();
  if (j.contains("inject_depol_1q")) cfg.inject_depol_1q = j["inject_depol_1q"].get<double>();
  if (j.contains("noise")) noise_path = j["noise"].get<std::string>();
  if (j.contains("plan")) plan_path = j["plan"].get<std::string>();
}

std::string per_circuit_csv(const TrialResult& r) {
  std::string out = "time_index,circuit";
  for (const auto& obs : r.observables) out += "," + obs.str();
  out += "\n";
  char buf[40];
  for (std::size_t t = 0; t < r.per_circuit.size(); ++t)
    for (std::size_t i = 0; i < r.per_circuit[t].size(); ++i) {
      out += std::to_string(t) + "," + std::to_string(i);
      for (double v : r.per_circuit[t][i]) {
        std::snprintf(buf, sizeof buf, ",%.17g", v);
        out += buf;
      }
      out += "\n";
    }
  return out;
}

json fit_json(const ExtrapolationFit& fit) {
  return json{{"a", fit.a}, {"b", fit.b}, {"var_a", fit.var_a}, {"var_b", fit.var_b}, {"cov_ab", fit.cov_ab}};
}

json diag_json(const DiagnosticsReport& d) {
  return json{{"zeta_inf", d.zeta_inf},
              {"zeta_finite", d.zeta_finite},
              {"zeta_full", d.zeta_full},
              {"dz_nt", d.dz_nt},
              {"dz_c_unk", d.dz_c_unk},
              {"dz_unk", d.dz_unk},
              {"dz_unk_std", d.dz_unk_std},
              {"no_nt_projection", d.no_nt_projection}};
}

void write_manifest(const fs::path& dir, const json& cfg, const std::vector<std::string>& files, double seconds) {
  json m;
  m["config"] = cfg;
  m["config_hash"] = config_hash(cfg.dump());
  m["format_version"] = 1;
  m["runtime_seconds"] = seconds;
  m["files"] = files;
  spit(dir / "manifest.json", m.dump(2) + "\n");
}

// tomography against an emulated device described by a noise file
NoiseModelFile run_pnt(const NoiseModelFile& truth, std::size_t n_rc, std::size_t shots, int n_d,
                       std::uint64_t seed, std::vector<TomographyResult>* details) {
  std::vector<int> depths;
  for (int d = 0; d < n_d; ++d) depths.push_back(1 << d);
  NoiseModelFile fitted;
  for (const auto& e : truth.entries) {
    bool crosstalk = e.fidelities.q == 3;
    auto specs = generate_pnt_circuits(e.junction, depths, crosstalk);
    NoiseModel device;
    device.junctions.push_back({e.junction, walsh_hadamard(e.fidelities), crosstalk});
    Rng rng(derive_seed(seed, 300, e.junction));
    auto signals = measure_pnt(specs, device, n_rc, shots, rng);
    auto res = fit_fidelities(signals, e.junction, shots ? 500 : 0, derive_seed(seed, 301, e.junction));
    if (details) details->push_back(res);
    NoiseModelFile::Entry out = e;
    if (crosstalk) {
      std::vector<double> f64(64);
      for (std::size_t pair = 0; pair < 16; ++pair)
        for (std::size_t k = 0; k < 4; ++k) f64[pair * 4 + k] = k == 3 ? res.fD[pair] : res.f[pair];
      f64[0] = 1.0;
      out.fidelities = FidelityVector(3, f64);
    } else {
      out.fidelities = FidelityVector(2, res.f);
    }
    fitted.entries.push_back(std::move(out));
  }
  return fitted;
}

json tomography_json(const std::vector<TomographyResult>& details) {
  json arr = json::array();
  for (const auto& r : details) {
    json e;
    e["junction"] = r.junction;
    e["crosstalk"] = r.crosstalk;
    e["f"] = r.f;
    e["f_std"] = r.f_std;
    if (r.crosstalk) {
      e["fD"] = r.fD;
      e["fD_std"] = r.fD_std;
    }
    e["anomaly"] = r.anomaly;
    arr.push_back(e);
  }
  return arr;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"noise tailoring and mitigation emulation toolkit"};
  app.require_subcommand(1);

  try {
    // ---- gen-noise ----
    auto* gen = app.add_subcommand("gen-noise", "generate a synthetic anisotropic Pauli noise model");
    SyntheticNoiseSpec spec;
    std::string gen_out = "noise.json";
    gen->add_option("--junctions", spec.junctions);
    gen->add_option("--mean-error", spec.mean_error);
    gen->add_option("--dispersion", spec.dispersion);
    gen->add_option("--seed", spec.seed);
    gen->add_option("-o,--out", gen_out);
    gen->callback([&] { spit(gen_out, gen_synthetic_noise(spec).to_json() + "\n"); });

    // ---- pnt ----
    auto* pnt = app.add_subcommand("pnt", "run noise tomography against a model and emit the fitted fidelities");
    std::string pnt_noise, pnt_out = "fitted.json", pnt_detail;
    std::size_t pnt_nrc = 200, pnt_shots = 100;
    int pnt_nd = 5;
    std::uint64_t pnt_seed = 1;
    bool pnt_analytic = false;
    pnt->add_option("--noise", pnt_noise)->required();
    pnt->add_option("--n-rc", pnt_nrc);
    pnt->add_option("--shots", pnt_shots);
    pnt->add_option("--depth-count", pnt_nd);
    pnt->add_option("--seed", pnt_seed);
    pnt->add_flag("--analytic", pnt_analytic, "exact signals instead of sampled circuits");
    pnt->add_option("-o,--out", pnt_out);
    pnt->add_option("--details", pnt_detail, "also write fit stds and anomaly flags");
    pnt->callback([&] {
      auto truth = NoiseModelFile::from_json(slurp(pnt_noise));
      std::vector<TomographyResult> details;
      auto fitted = run_pnt(truth, pnt_analytic ? 0 : pnt_nrc, pnt_analytic ? 0 : pnt_shots, pnt_nd, pnt_seed,
                            &details);
      spit(pnt_out, fitted.to_json() + "\n");
      if (!pnt_detail.empty()) spit(pnt_detail, tomography_json(details).dump(2) + "\n");
    });

    // ---- plan ----
    auto* plan_cmd = app.add_subcommand("plan", "optimize the tailoring target and emit the plan");
    std::string plan_noise, plan_out = "plan.json";
    BcsParams plan_bcs;
    plan_cmd->add_option("--noise", plan_noise)->required();
    plan_cmd->add_option("--steps", plan_bcs.steps);
    plan_cmd->add_option("--dt", plan_bcs.dt);
    plan_cmd->add_option("--g", plan_bcs.g);
    plan_cmd->add_option("--eps", plan_bcs.eps);
    plan_cmd->add_option("-o,--out", plan_out);
    plan_cmd->callback([&] {
      auto noise = NoiseModelFile::from_json(slurp(plan_noise));
      spit(plan_out, plan_for(noise, plan_bcs).to_json() + "\n");
    });

    // ---- run ----
    auto* run_cmd = app.add_subcommand("run", "execute a trial and emit expectations + manifest");
    ExperimentConfig cfg;
    std::string run_noise, run_plan, run_config, outdir = "out", trial_str;
    run_cmd->add_option("--config", run_config, "JSON config file; explicit flags override");
    run_cmd->add_option("--noise", run_noise);
    run_cmd->add_option("--plan", run_plan);
    run_cmd->add_option("--trial", trial_str);
    run_cmd->add_option("--n-nt", cfg.n_nt);
    run_cmd->add_option("--shots", cfg.shots_per_circuit);
    run_cmd->add_option("--seed", cfg.seed);
    run_cmd->add_option("--workers", cfg.workers);
    run_cmd->add_option("--steps", cfg.bcs.steps);
    run_cmd->add_option("--dt", cfg.bcs.dt);
    run_cmd->add_option("--inject-coherent", cfg.inject_coherent);
    run_cmd->add_option("--inject-depol-1q", cfg.inject_depol_1q);
    run_cmd->add_option("-o,--outdir", outdir);
    run_cmd->callback([&] {
      if (!run_config.empty()) apply_config_file(cfg, run_noise, run_plan, run_config);
      if (!trial_str.empty()) cfg.trial = trial_from_string(trial_str);
      if (run_noise.empty()) throw CLI::ValidationError("--noise (or a config entry) is required");
      auto noise = NoiseModelFile::from_json(slurp(run_noise));
      auto t0 = std::chrono::steady_clock::now();
      std::vector<std::string> files;
      json cj = config_json(cfg, run_noise, run_plan);
      fs::path dir(outdir);
      if (cfg.trial == Trial::Diag) {
        auto rep = run_diagnostics(cfg, noise);
        spit(dir / "expectations_inf.csv", expectations_csv(rep.inf));
        spit(dir / "expectations_finite.csv", expectations_csv(rep.finite));
        spit(dir / "expectations.csv", expectations_csv(rep.full));
        spit(dir / "per_circuit.csv", per_circuit_csv(rep.full));
        spit(dir / "curve.csv", curve_csv(rep.curve));
        spit(dir / "fit.json", fit_json(rep.fit).dump(2) + "\n");
        spit(dir / "diagnostics.json", diag_json(rep.decomposition).dump(2) + "\n");
        files = {"expectations_inf.csv", "expectations_finite.csv", "expectations.csv",
                 "per_circuit.csv",      "curve.csv",               "fit.json",
                 "diagnostics.json"};
      } else {
        TrialResult res;
        bool needs_plan = cfg.trial == Trial::T2 || cfg.trial == Trial::T3;
        if (needs_plan && !run_plan.empty()) {
          res = run_trial(cfg, noise, MitigationPlan::from_json(slurp(run_plan)));
        } else {
          res = run_trial(cfg, noise);
        }
        spit(dir / "expectations.csv", expectations_csv(res));
        files = {"expectations.csv"};
        if (!res.per_circuit.empty()) {
          spit(dir / "per_circuit.csv", per_circuit_csv(res));
          files.push_back("per_circuit.csv");
        }
      }
      double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      write_manifest(dir, cj, files, secs);
    });

    // ---- report ----
    auto* rep_cmd = app.add_subcommand("report", "batch curve + extrapolation from a sampled run directory");
    std::string rep_dir;
    std::size_t rep_batch = 100, rep_cut = 1000;
    rep_cmd->add_option("--dir", rep_dir)->required();
    rep_cmd->add_option("--batch-size", rep_batch);
    rep_cmd->add_option("--fit-max-n", rep_cut);
    rep_cmd->callback([&] {
      fs::path dir(rep_dir);
      // references from expectations.csv, samples from per_circuit.csv
      std::istringstream exp(slurp((dir / "expectations.csv").string()));
      std::string line;
      std::getline(exp, line);  // header
      std::vector<std::vector<double>> ref;
      std::map<std::string, int> obs_col;
      while (std::getline(exp, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream row(line);
        std::string field;
        std::vector<std::string> f;
        while (std::getline(row, field, ',')) f.push_back(field);
        if (f.size() < 8) continue;
        if (!obs_col.count(f[2])) obs_col[f[2]] = static_cast<int>(obs_col.size());
        if (obs_col[f[2]] == 0) ref.emplace_back();  // rows are time-major
        ref.back().push_back(std::stod(f[3]));
      }
      std::istringstream pc(slurp((dir / "per_circuit.csv").string()));
      std::getline(pc, line);
      std::vector<std::vector<std::vector<double>>> samples(ref.size());
      while (std::getline(pc, line)) {
        std::istringstream row(line);
        std::string field;
        std::vector<std::string> f;
        while (std::getline(row, field, ',')) f.push_back(field);
        if (f.size() < 3) continue;
        std::size_t t = std::stoul(f[0]);
        if (t >= samples.size()) throw std::runtime_error("per-circuit table references an unknown time index");
        std::vector<double> vals;
        for (std::size_t k = 2; k < f.size(); ++k) vals.push_back(std::stod(f[k]));
        samples[t].push_back(std::move(vals));
      }
      auto curve = bootstrap_curve(samples, ref, rep_batch);
      auto fit = extrapolate(curve, rep_cut);
      std::vector<AwaeRow> rows;
      for (std::size_t t = 0; t < ref.size(); ++t)
        for (std::size_t o = 0; o < ref[t].size(); ++o) {
          double mean = 0.0;
          for (const auto& c : samples[t]) mean += c[o];
          rows.push_back({ref[t][o], mean / double(samples[t].size())});
        }
      spit(dir / "report_curve.csv", curve_csv(curve));
      json rj;
      rj["zeta"] = awae(rows);
      rj["fit"] = fit_json(fit);
      spit(dir / "report.json", rj.dump(2) + "\n");
    });

    // ---- reproduce-figures ----
    auto* fig = app.add_subcommand("reproduce-figures", "small end-to-end pipeline emitting figure-shaped CSVs");
    std::string fig_out = "figures";
    int fig_nnt = 2000, fig_steps = 15;
    std::uint64_t fig_seed = 1;
    int fig_workers = 1;
    fig->add_option("-o,--outdir", fig_out);
    fig->add_option("--n-nt", fig_nnt);
    fig->add_option("--steps", fig_steps);
    fig->add_option("--seed", fig_seed);
    fig->add_option("--workers", fig_workers);
    fig->callback([&] {
      fs::path dir(fig_out);
      SyntheticNoiseSpec nspec;
      nspec.seed = fig_seed;
      auto noise = gen_synthetic_noise(nspec);
      spit(dir / "noise.json", noise.to_json() + "\n");

      // tomography panel: fidelities per junction
      std::vector<TomographyResult> details;
      auto fitted = run_pnt(noise, 0, 0, 5, fig_seed, &details);
      std::string f3 = "junction,pauli,fitted,true\n";
      for (const auto& r : details)
        for (std::size_t a = 1; a < 16; ++a) {
          char buf[96];
          std::snprintf(buf, sizeof buf, "%d,%s,%.10g,%.10g\n", r.junction, PauliString(2, a).str().c_str(), r.f[a],
                        noise.find(r.junction)->fidelities.f[a]);
          f3 += buf;
        }
      spit(dir / "fig_tomography.csv", f3);

      // trial-accuracy panel
      ExperimentConfig cfg;
      cfg.bcs.steps = fig_steps;
      cfg.seed = fig_seed;
      cfg.n_nt = fig_nnt;
      cfg.workers = fig_workers;
      MitigationPlan plan = plan_for(fitted, cfg.bcs);
      std::string f4 = "trial,zeta_all,zeta_last2\n";
      TrialResult t3res;
      for (Trial t : {Trial::T1, Trial::T2, Trial::T3, Trial::T4}) {
        cfg.trial = t;
        auto res = run_trial(cfg, fitted, plan);
        char buf[80];
        std::snprintf(buf, sizeof buf, "%s,%.10g,%.10g\n", trial_name(t).c_str(), res.zeta_all, res.zeta_last2);
        f4 += buf;
        if (t == Trial::T3) t3res = std::move(res);
      }
      spit(dir / "fig_trials.csv", f4);

      // sampling-convergence panel
      auto curve = bootstrap_curve(t3res.per_circuit, t3res.ideal);
      auto fitted_curve = extrapolate(curve);
      spit(dir / "fig_convergence.csv", curve_csv(curve));
      spit(dir / "fig_convergence_fit.json", fit_json(fitted_curve).dump(2) + "\n");
    });

    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
