// Batch experiment runner. One JSON config per invocation; subcommands
//   run <config.json>       execute and emit artifacts + manifest
//   sweep --param ... --values ... <config.json>
//   validate <config.json>  check the config and exit
// Exit codes: 0 ok, 2 validation (including JSON parse), 3 numerical, 4 IO.

#include <CLI11.hpp>

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "bridgelab/characteristics.hpp"
#include "bridgelab/dynamics.hpp"
#include "bridgelab/errors.hpp"
#include "bridgelab/io.hpp"
#include "bridgelab/model.hpp"
#include "bridgelab/nonlinearity.hpp"
#include "bridgelab/random.hpp"
#include "bridgelab/spectral.hpp"
#include "bridgelab/timestepper.hpp"

namespace fs = std::filesystem;
using bridgelab::json;
using bridgelab::Vector;

namespace {

const std::vector<std::string> kTags = {
    "simulate",       "spectrum", "resolvent-sweep", "f-xi",      "characteristics",
    "cross-validate", "decay",    "decompose",       "absorbing", "attractor"};

struct Numerics {
  int n_modes = 32;
  double dt = 1e-3;
  double T = 1.0;
  int stride = 1;
  int n_cells = 300;
  int snapshot_stride = 0;
  double lambda_max = 50.0;
  int n_grid = 500;
  std::string sigma_method = "svd";
  std::uint64_t seed = 12345;
  int ensemble_size = 8;
  double radius = 1.0;
  double window = 1.0;
  double tail_start = -1.0;
  double compare_every = 0.05;
  int samples = 200000;
  double scan_window = 0.0;
  double fit_begin = -1.0;
  double fit_end = -1.0;
};

json numerics_to_json(const Numerics& n) {
  return json{{"n_modes", n.n_modes},
              {"dt", n.dt},
              {"T", n.T},
              {"stride", n.stride},
              {"n_cells", n.n_cells},
              {"snapshot_stride", n.snapshot_stride},
              {"lambda_max", n.lambda_max},
              {"n_grid", n.n_grid},
              {"sigma_method", n.sigma_method},
              {"seed", n.seed},
              {"ensemble_size", n.ensemble_size},
              {"radius", n.radius},
              {"window", n.window},
              {"tail_start", n.tail_start},
              {"compare_every", n.compare_every},
              {"samples", n.samples},
              {"scan_window", n.scan_window},
              {"fit_begin", n.fit_begin},
              {"fit_end", n.fit_end}};
}

struct ExperimentConfig {
  std::string experiment;
  std::string output_dir = "out";
  bridgelab::ModelParams params;
  bridgelab::NonlinearitySpec spec;
  Numerics num;
  json initial;  // interpreted by build_initial
  std::vector<double> snapshot_times;
};

template <typename T>
T jget(const json& j, const char* section, const char* key, T def,
       std::vector<std::string>& issues) {
  if (!j.contains(key)) return def;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    issues.push_back(std::string(section) + "." + key + ": wrong type");
    return def;
  }
}

void check_initial(const json& ji, int n_modes, std::vector<std::string>& issues) {
  if (ji.is_null()) return;
  if (!ji.is_object()) {
    issues.push_back("initial: must be an object");
    return;
  }
  const std::string kind = ji.value("kind", "seeded");
  if (kind == "seeded") {
    if (ji.contains("norm") && !(ji.value("norm", 1.0) > 0.0))
      issues.push_back("initial.norm: must be positive");
  } else if (kind == "mode") {
    const int idx = ji.value("index", 0);
    if (idx < 0 || idx >= n_modes)
      issues.push_back("initial.index: outside [0, n_modes)");
    const std::string field = ji.value("field", "cable");
    if (field != "cable" && field != "deck")
      issues.push_back("initial.field: must be \"cable\" or \"deck\"");
    const std::string slot = ji.value("slot", "displacement");
    if (slot != "displacement" && slot != "velocity")
      issues.push_back("initial.slot: must be \"displacement\" or \"velocity\"");
  } else if (kind == "modes") {
    for (const char* key : {"a", "adot", "b", "bdot"}) {
      if (!ji.contains(key)) continue;
      if (!ji.at(key).is_array()) {
        issues.push_back(std::string("initial.") + key + ": must be an array");
        continue;
      }
      if (static_cast<int>(ji.at(key).size()) > n_modes)
        issues.push_back(std::string("initial.") + key + ": longer than n_modes");
    }
  } else {
    issues.push_back("initial.kind: unknown value \"" + kind +
                     "\" (allowed: \"seeded\", \"mode\", \"modes\")");
  }
}

ExperimentConfig parse_config(const json& j) {
  std::vector<std::string> issues;
  ExperimentConfig c;

  c.experiment = jget<std::string>(j, "", "experiment", "", issues);
  if (std::find(kTags.begin(), kTags.end(), c.experiment) == kTags.end()) {
    std::string allowed;
    for (const auto& t : kTags) allowed += (allowed.empty() ? "\"" : ", \"") + t + "\"";
    issues.push_back("experiment: unknown tag \"" + c.experiment +
                     "\" (allowed: " + allowed + ")");
  }
  c.output_dir = jget<std::string>(j, "", "output_dir", "out", issues);

  if (j.contains("params")) {
    try {
      c.params = j.at("params").get<bridgelab::ModelParams>();
    } catch (const json::exception& e) {
      issues.push_back(std::string("params: ") + e.what());
    }
  }
  for (const auto& v : bridgelab::check_params(c.params))
    issues.push_back("params: " + v);

  if (j.contains("nonlinearity")) {
    try {
      c.spec = j.at("nonlinearity").get<bridgelab::NonlinearitySpec>();
    } catch (const bridgelab::ValidationError& e) {
      for (const auto& v : e.issues()) issues.push_back("nonlinearity: " + v);
    } catch (const json::exception& e) {
      issues.push_back(std::string("nonlinearity: ") + e.what());
    }
  }
  for (const auto& v : bridgelab::check_spec(c.spec))
    issues.push_back("nonlinearity: " + v);

  const json jn = j.value("numerics", json::object());
  Numerics& n = c.num;
  n.n_modes = jget(jn, "numerics", "n_modes", n.n_modes, issues);
  n.dt = jget(jn, "numerics", "dt", n.dt, issues);
  n.T = jget(jn, "numerics", "T", n.T, issues);
  n.stride = jget(jn, "numerics", "stride", n.stride, issues);
  n.n_cells = jget(jn, "numerics", "n_cells", n.n_cells, issues);
  n.snapshot_stride = jget(jn, "numerics", "snapshot_stride", n.snapshot_stride, issues);
  n.lambda_max = jget(jn, "numerics", "lambda_max", n.lambda_max, issues);
  n.n_grid = jget(jn, "numerics", "n_grid", n.n_grid, issues);
  n.sigma_method = jget<std::string>(jn, "numerics", "sigma_method", n.sigma_method, issues);
  n.seed = jget<std::uint64_t>(jn, "numerics", "seed", n.seed, issues);
  n.ensemble_size = jget(jn, "numerics", "ensemble_size", n.ensemble_size, issues);
  n.radius = jget(jn, "numerics", "radius", n.radius, issues);
  n.window = jget(jn, "numerics", "window", n.window, issues);
  n.tail_start = jget(jn, "numerics", "tail_start", n.tail_start, issues);
  n.compare_every = jget(jn, "numerics", "compare_every", n.compare_every, issues);
  n.samples = jget(jn, "numerics", "samples", n.samples, issues);
  n.scan_window = jget(jn, "numerics", "scan_window", n.scan_window, issues);
  n.fit_begin = jget(jn, "numerics", "fit_begin", n.fit_begin, issues);
  n.fit_end = jget(jn, "numerics", "fit_end", n.fit_end, issues);

  if (n.n_modes < 1 || n.n_modes > 256)
    issues.push_back("numerics.n_modes: must be in [1, 256]");
  if (!(n.dt > 0.0)) issues.push_back("numerics.dt: must be positive");
  if (!(n.T >= 0.0)) issues.push_back("numerics.T: must be nonnegative");
  if (n.stride < 1) issues.push_back("numerics.stride: must be >= 1");
  if (n.n_cells < 2) issues.push_back("numerics.n_cells: must be >= 2");
  if (n.snapshot_stride < 0) issues.push_back("numerics.snapshot_stride: must be >= 0");
  if (!(n.lambda_max > 0.0)) issues.push_back("numerics.lambda_max: must be positive");
  if (n.n_grid < 2) issues.push_back("numerics.n_grid: must be >= 2");
  if (n.sigma_method != "svd" && n.sigma_method != "estimate")
    issues.push_back("numerics.sigma_method: must be \"svd\" or \"estimate\"");
  if (n.ensemble_size < 1) issues.push_back("numerics.ensemble_size: must be >= 1");
  if (c.experiment == "attractor" && n.ensemble_size < 2)
    issues.push_back("numerics.ensemble_size: attractor needs >= 2 members");
  if (!(n.radius > 0.0)) issues.push_back("numerics.radius: must be positive");
  if (!(n.window > 0.0)) issues.push_back("numerics.window: must be positive");
  if (!(n.compare_every > 0.0))
    issues.push_back("numerics.compare_every: must be positive");
  if (n.samples < 2) issues.push_back("numerics.samples: must be >= 2");

  if (c.spec.forcing.size() != 0 &&
      c.spec.forcing.size() != 4 * static_cast<Eigen::Index>(n.n_modes))
    issues.push_back("nonlinearity.forcing: length must be 4 * n_modes");

  c.initial = j.value("initial", json());
  check_initial(c.initial, n.n_modes, issues);

  if (j.contains("snapshot_times")) {
    try {
      c.snapshot_times = j.at("snapshot_times").get<std::vector<double>>();
    } catch (const json::exception&) {
      issues.push_back("snapshot_times: must be an array of numbers");
    }
  }

  if (!issues.empty()) throw bridgelab::ValidationError(issues);
  return c;
}

json config_to_json(const ExperimentConfig& c) {
  json j{{"experiment", c.experiment},
         {"output_dir", c.output_dir},
         {"params", c.params},
         {"nonlinearity", c.spec},
         {"numerics", numerics_to_json(c.num)}};
  if (!c.initial.is_null()) j["initial"] = c.initial;
  if (!c.snapshot_times.empty()) j["snapshot_times"] = c.snapshot_times;
  return j;
}

Vector build_initial(const ExperimentConfig& c, const bridgelab::DiscreteGenerator& gen) {
  const json& ji = c.initial;
  const int n = gen.n_modes;
  const std::string kind = ji.is_object() ? ji.value("kind", "seeded") : "seeded";
  if (kind == "seeded") {
    const std::uint64_t seed =
        ji.is_object() ? ji.value("seed", c.num.seed) : c.num.seed;
    const double norm = ji.is_object() ? ji.value("norm", 1.0) : 1.0;
    bridgelab::Rng rng(seed);
    Vector y = rng.normal_vector(gen.dim());
    y *= norm / y.norm();
    return bridgelab::from_energy(gen, y);
  }
  bridgelab::ModalState st = bridgelab::ModalState::zero(n);
  if (kind == "mode") {
    const int idx = ji.value("index", 0);
    const double amp = ji.value("amplitude", 1.0);
    const bool cable = ji.value("field", "cable") == std::string("cable");
    const bool disp = ji.value("slot", "displacement") == std::string("displacement");
    Vector& slot = cable ? (disp ? st.a : st.adot) : (disp ? st.b : st.bdot);
    slot[idx] = amp;
  } else {  // "modes"
    auto fill = [&](const char* key, Vector& dst) {
      if (!ji.contains(key)) return;
      const auto arr = ji.at(key).get<std::vector<double>>();
      for (std::size_t i = 0; i < arr.size(); ++i)
        dst[static_cast<Eigen::Index>(i)] = arr[i];
    };
    fill("a", st.a);
    fill("adot", st.adot);
    fill("b", st.b);
    fill("bdot", st.bdot);
  }
  return st.packed();
}

struct RunResult {
  json summary;
  std::vector<std::string> files;
};

RunResult exp_simulate(const ExperimentConfig& c, const std::string& dir) {
  const auto gen = bridgelab::assemble_generator(c.params, c.num.n_modes);
  const Vector u0 = build_initial(c, gen);
  const auto rec = bridgelab::simulate(gen, c.spec, u0, c.num.T, c.num.dt, c.num.stride);
  bridgelab::write_trajectory_csv(dir + "/trajectory.csv", rec);
  RunResult out;
  out.files = {"trajectory.csv"};
  json resid;
  if (c.num.stride == 1 && !rec.step_energy.empty() && rec.step_energy.front() > 0.0)
    resid = bridgelab::dissipation_residual(rec);
  out.summary = json{{"experiment", c.experiment},
                     {"scheme", bridgelab::to_string(rec.scheme)},
                     {"n_steps", rec.n_steps()},
                     {"initial_energy", rec.energies.front()},
                     {"final_energy", rec.energies.back()},
                     {"dissipation_residual", resid}};
  if (!c.snapshot_times.empty()) {
    json times = json::array(), states = json::array();
    for (double t : c.snapshot_times) {
      std::size_t best = 0;
      for (std::size_t i = 1; i < rec.times.size(); ++i)
        if (std::abs(rec.times[i] - t) < std::abs(rec.times[best] - t)) best = i;
      times.push_back(rec.times[best]);
      json st = json::array();
      for (int i = 0; i < rec.states[best].size(); ++i)
        st.push_back(rec.states[best][i]);
      states.push_back(std::move(st));
    }
    bridgelab::save_json(dir + "/states.json",
                         json{{"schema", "bridgelab/states/1"},
                              {"times", std::move(times)},
                              {"states", std::move(states)}});
    out.files.push_back("states.json");
  }
  return out;
}

RunResult exp_spectrum(const ExperimentConfig& c, const std::string& dir) {
  const auto gen = bridgelab::assemble_generator(c.params, c.num.n_modes);
  const auto rep = bridgelab::eigenvalues(gen);
  const auto cls = bridgelab::classify_damping_point(c.params);
  bridgelab::save_json(dir + "/spectrum.json", json{{"schema", "bridgelab/spectrum/1"},
                                                    {"params", c.params},
                                                    {"report", rep},
                                                    {"classification", cls}});
  RunResult out;
  out.files = {"spectrum.json"};
  out.summary = json{{"experiment", c.experiment},
                     {"spectral_abscissa", rep.spectral_abscissa},
                     {"axis_gap", rep.axis_gap},
                     {"classification", bridgelab::to_string(cls.tag)}};
  return out;
}

RunResult exp_resolvent(const ExperimentConfig& c, const std::string& dir) {
  const auto gen = bridgelab::assemble_generator(c.params, c.num.n_modes);
  const auto method = c.num.sigma_method == "svd" ? bridgelab::SigmaMinMethod::Svd
                                                  : bridgelab::SigmaMinMethod::Estimate;
  const auto sweep = bridgelab::pruss_sweep(gen, c.num.lambda_max, c.num.n_grid, method);
  bridgelab::write_resolvent_csv(dir + "/resolvent.csv", sweep);
  bridgelab::save_json(dir + "/resolvent.json",
                       json{{"schema", "bridgelab/resolvent/1"},
                            {"params", c.params},
                            {"sweep", sweep}});
  RunResult out;
  out.files = {"resolvent.csv", "resolvent.json"};
  out.summary = json{{"experiment", c.experiment},
                     {"sup_norm", sweep.sup_is_finite ? json(sweep.sup_norm) : json()},
                     {"sup_is_finite", sweep.sup_is_finite}};
  return out;
}

RunResult exp_fxi(const ExperimentConfig& c, const std::string& dir) {
  bridgelab::TransmissionInfOptions opt;
  opt.n_samples = c.num.samples;
  opt.window = c.num.scan_window;
  const auto rep = bridgelab::transmission_infimum(c.params, opt);
  const double span = rep.period > 0.0 ? rep.period : opt.window;
  std::vector<std::vector<double>> rows;
  rows.reserve(c.num.n_grid);
  for (int i = 0; i < c.num.n_grid; ++i) {
    const double lam = span * i / (c.num.n_grid - 1);
    rows.push_back({lam, bridgelab::transmission_function(lam, c.params)});
  }
  bridgelab::write_csv(dir + "/f_xi.csv", "transmission function over one period",
                       {"lambda", "F_xi"}, rows);
  bridgelab::save_json(dir + "/f_xi.json", json{{"schema", "bridgelab/f_xi/1"},
                                                {"params", c.params},
                                                {"report", rep}});
  RunResult out;
  out.files = {"f_xi.csv", "f_xi.json"};
  out.summary = json{{"experiment", c.experiment},
                     {"value", rep.value},
                     {"argmin", rep.argmin},
                     {"exhaustive", rep.exhaustive}};
  return out;
}

RunResult exp_characteristics(const ExperimentConfig& c, const std::string& dir) {
  const auto gen = bridgelab::assemble_generator(c.params, c.num.n_modes);
  const auto st = bridgelab::ModalState::from_packed(build_initial(c, gen));
  auto field = bridgelab::riemann_from_modal(st, c.params, c.num.n_cells);
  const auto run =
      bridgelab::run_characteristics(field, c.num.T, c.num.snapshot_stride);
  bridgelab::write_characteristics_csv(dir + "/energies.csv", run);
  RunResult out;
  out.files = {"energies.csv"};
  for (std::size_t s = 0; s < run.snapshots.size(); ++s) {
    char name[32];
    std::snprintf(name, sizeof(name), "snapshot_%03zu.csv", s);
    bridgelab::write_snapshot_csv(dir + "/" + name, run.snapshots[s]);
    out.files.push_back(name);
  }
  out.summary = json{{"experiment", c.experiment},
                     {"n_steps", run.times.size()},
                     {"initial_energy", run.energies.front()},
                     {"final_energy", run.energies.back()}};
  return out;
}

RunResult exp_cross_validate(const ExperimentConfig& c, const std::string& dir) {
  if (c.params.k != 0.0)
    throw bridgelab::ValidationError(
        {"params.k: cross-validation against characteristics needs k = 0"});
  const auto gen = bridgelab::assemble_generator(c.params, c.num.n_modes);
  const Vector u0 = build_initial(c, gen);
  const int stride = std::max(1, static_cast<int>(std::floor(
                                     c.num.compare_every / c.num.dt + 0.5)));
  const auto rec = bridgelab::simulate(gen, bridgelab::NonlinearitySpec::zero(), u0,
                                       c.num.T, c.num.dt, stride);
  auto field = bridgelab::riemann_from_modal(bridgelab::ModalState::from_packed(u0),
                                             c.params, c.num.n_cells);
  const double dt_c = field.dx / field.k1;
  int done = 0;
  double sup_gap = 0.0, max_skew = 0.0;
  std::vector<std::vector<double>> rows;
  for (std::size_t i = 0; i < rec.times.size(); ++i) {
    const double t = rec.times[i];
    const int target = static_cast<int>(std::floor(t / dt_c + 0.5));
    bridgelab::advance(field, target - done);
    done = target;
    const double gap = bridgelab::l2_gap_midpoints(
        field, bridgelab::ModalState::from_packed(rec.states[i]), c.params);
    sup_gap = std::max(sup_gap, gap);
    max_skew = std::max(max_skew, std::abs(field.t - t));
    rows.push_back({t, gap});
  }
  bridgelab::write_csv(dir + "/cross_validate.csv",
                       "L2 gap between spectral and characteristic cable solutions",
                       {"t", "l2_gap"}, rows);
  bridgelab::save_json(dir + "/cross_validate.json",
                       json{{"schema", "bridgelab/cross_validate/1"},
                            {"params", c.params},
                            {"sup_l2_gap", sup_gap},
                            {"max_time_skew", max_skew},
                            {"n_compared", rows.size()}});
  RunResult out;
  out.files = {"cross_validate.csv", "cross_validate.json"};
  out.summary = json{{"experiment", c.experiment},
                     {"sup_l2_gap", sup_gap},
                     {"max_time_skew", max_skew}};
  return out;
}

RunResult exp_decay(const ExperimentConfig& c, const std::string& dir) {
  const auto gen = bridgelab::assemble_generator(c.params, c.num.n_modes);
  const Vector u0 = build_initial(c, gen);
  const auto rec = bridgelab::simulate(gen, c.spec, u0, c.num.T, c.num.dt, c.num.stride);
  const auto fit = bridgelab::fit_decay_rate(rec, c.num.fit_begin, c.num.fit_end);
  bridgelab::write_trajectory_csv(dir + "/trajectory.csv", rec);
  bridgelab::save_json(dir + "/decay.json", json{{"schema", "bridgelab/decay/1"},
                                                 {"params", c.params},
                                                 {"fit", fit}});
  RunResult out;
  out.files = {"trajectory.csv", "decay.json"};
  out.summary = json{{"experiment", c.experiment},
                     {"mu_fit", fit.mu_fit},
                     {"fit_residual", fit.residual}};
  return out;
}

RunResult exp_decompose(const ExperimentConfig& c, const std::string& dir) {
  const auto gen = bridgelab::assemble_generator(c.params, c.num.n_modes);
  const Vector u0 = build_initial(c, gen);
  const auto rec =
      bridgelab::decompose(gen, c.spec, u0, c.num.T, c.num.dt, c.num.stride);
  const double tail = c.num.tail_start < 0.0 ? 0.0 : c.num.tail_start;
  const auto audit = bridgelab::splitting_audit(rec, gen, c.spec, tail);
  std::vector<std::vector<double>> rows;
  for (std::size_t i = 0; i < rec.times.size(); ++i)
    rows.push_back({rec.times[i], rec.u_norm[i], rec.w_norm[i], rec.v_norm[i],
                    rec.v_gen_norm[i], rec.v_time_deriv[i]});
  bridgelab::write_csv(dir + "/decompose.csv", "U = W + V splitting norms",
                       {"t", "u_norm", "w_norm", "v_norm", "Av_norm", "vt_norm"}, rows);
  json report{{"schema", "bridgelab/decompose/1"},
              {"params", c.params},
              {"max_additivity_gap", rec.max_additivity_gap},
              {"audit", audit}};
  if (c.spec.family == bridgelab::NonlinearFamily::Zero && c.spec.forcing.size() != 0) {
    const Vector target = bridgelab::linear_steady_state(gen, c.spec.forcing);
    const double tnorm = bridgelab::energy_norm(gen, target);
    const double gap =
        bridgelab::energy_norm(gen, Vector(rec.v_states.back() - target));
    report["steady_state_rel_gap"] = gap / std::max(1.0, tnorm);
    const double fnorm = bridgelab::energy_norm(gen, c.spec.forcing);
    report["gen_norm_vs_force"] =
        std::abs(audit.sup_gen_norm_tail - fnorm) / fnorm;
  }
  bridgelab::save_json(dir + "/decompose.json", report);
  RunResult out;
  out.files = {"decompose.csv", "decompose.json"};
  out.summary = json{{"experiment", c.experiment},
                     {"max_additivity_gap", rec.max_additivity_gap},
                     {"sup_gen_norm", audit.sup_gen_norm},
                     {"ratio", audit.finite ? json(audit.ratio) : json()}};
  return out;
}

RunResult exp_absorbing(const ExperimentConfig& c, const std::string& dir) {
  const auto gen = bridgelab::assemble_generator(c.params, c.num.n_modes);
  const auto rep =
      bridgelab::absorbing_probe(gen, c.spec, c.num.radius, c.num.ensemble_size,
                                 c.num.T, c.num.dt, c.num.stride, c.num.seed);
  bridgelab::save_json(dir + "/absorbing.json",
                       json{{"schema", "bridgelab/absorbing/1"},
                            {"params", c.params},
                            {"report", rep}});
  std::vector<std::vector<double>> rows;
  for (std::size_t k = 0; k < rep.times.size(); ++k) {
    double env = 0.0;
    for (const auto& m : rep.members) env = std::max(env, m.norms[k]);
    const double model =
        rep.c1 * std::exp(-rep.mu * rep.times[k]) * rep.radius + rep.c2;
    rows.push_back({rep.times[k], env, model});
  }
  bridgelab::write_csv(dir + "/envelope.csv", "ensemble norm envelope and fitted bound",
                       {"t", "envelope", "fit"}, rows);
  RunResult out;
  out.files = {"absorbing.json", "envelope.csv"};
  out.summary = json{{"experiment", c.experiment},
                     {"c2_hat", rep.c2_hat},
                     {"all_entered", rep.all_entered},
                     {"all_remained", rep.all_remained},
                     {"envelope_residual", rep.envelope_residual}};
  return out;
}

RunResult exp_attractor(const ExperimentConfig& c, const std::string& dir) {
  const auto gen = bridgelab::assemble_generator(c.params, c.num.n_modes);
  const auto inits = bridgelab::seeded_ensemble(gen, c.num.ensemble_size, c.num.radius,
                                                c.num.seed);
  const auto rep = bridgelab::attractor_probe(gen, c.spec, inits, c.num.T, c.num.dt,
                                              c.num.stride, c.num.window);
  bridgelab::save_json(dir + "/attractor.json",
                       json{{"schema", "bridgelab/attractor/1"},
                            {"params", c.params},
                            {"report", rep}});
  bridgelab::write_matrix_csv(dir + "/pairwise_energy.csv",
                              "final-time pairwise distances, energy norm",
                              rep.final_pairwise_energy);
  bridgelab::write_matrix_csv(dir + "/pairwise_hminus1.csv",
                              "final-time pairwise distances, extrapolation norm",
                              rep.final_pairwise_hminus1);
  std::vector<std::vector<double>> rows;
  for (std::size_t k = 0; k < rep.times.size(); ++k)
    rows.push_back({rep.times[k], rep.max_pair_energy[k], rep.max_pair_hminus1[k]});
  bridgelab::write_csv(dir + "/distances.csv", "max pairwise distance series",
                       {"t", "max_energy", "max_hminus1"}, rows);
  RunResult out;
  out.files = {"attractor.json", "pairwise_energy.csv", "pairwise_hminus1.csv",
               "distances.csv"};
  out.summary = json{{"experiment", c.experiment},
                     {"dimension", rep.box.dimension},
                     {"quasi_seminorm", rep.quasi_seminorm},
                     {"final_max_distance",
                      rep.max_pair_energy.empty() ? 0.0 : rep.max_pair_energy.back()}};
  return out;
}

RunResult dispatch(const ExperimentConfig& c, const std::string& dir) {
  if (c.experiment == "simulate") return exp_simulate(c, dir);
  if (c.experiment == "spectrum") return exp_spectrum(c, dir);
  if (c.experiment == "resolvent-sweep") return exp_resolvent(c, dir);
  if (c.experiment == "f-xi") return exp_fxi(c, dir);
  if (c.experiment == "characteristics") return exp_characteristics(c, dir);
  if (c.experiment == "cross-validate") return exp_cross_validate(c, dir);
  if (c.experiment == "decay") return exp_decay(c, dir);
  if (c.experiment == "decompose") return exp_decompose(c, dir);
  if (c.experiment == "absorbing") return exp_absorbing(c, dir);
  if (c.experiment == "attractor") return exp_attractor(c, dir);
  throw bridgelab::ValidationError({"experiment: unknown tag"});
}

RunResult run_into(const ExperimentConfig& c, const std::string& dir) {
  fs::create_directories(dir);
  bridgelab::save_json(dir + "/config.json", config_to_json(c));
  RunResult result = dispatch(c, dir);
  result.files.insert(result.files.begin(), "config.json");
  bridgelab::write_manifest(dir, result.files, result.summary);
  return result;
}

int do_run(const std::string& config_path) {
  const ExperimentConfig c = parse_config(bridgelab::load_json(config_path));
  const RunResult result = run_into(c, c.output_dir);
  std::cout << json{{"status", "ok"},
                    {"output_dir", c.output_dir},
                    {"summary", result.summary}}
                   .dump()
            << "\n";
  return 0;
}

int do_validate(const std::string& config_path) {
  const ExperimentConfig c = parse_config(bridgelab::load_json(config_path));
  std::cout << json{{"status", "ok"}, {"config", config_to_json(c)}}.dump(2) << "\n";
  return 0;
}

std::string sanitize(const std::string& value) {
  std::string out;
  for (char ch : value) {
    if (std::isalnum(static_cast<unsigned char>(ch)))
      out += ch;
    else if (ch == '/')
      out += '_';
    else if (ch == '.')
      out += 'p';
    else if (ch == '-')
      out += 'm';
    else
      out += '_';
  }
  return out.empty() ? "value" : out;
}

json parse_override_value(const std::string& param, const std::string& value) {
  const auto slash = value.find('/');
  if (slash != std::string::npos) {
    try {
      const long long num = std::stoll(value.substr(0, slash));
      const long long den = std::stoll(value.substr(slash + 1));
      return json{{"num", num}, {"den", den}};
    } catch (const std::exception&) {
      throw bridgelab::ValidationError(
          {"sweep value \"" + value + "\" is not a valid fraction"});
    }
  }
  try {
    std::size_t pos = 0;
    const double d = std::stod(value, &pos);
    if (pos == value.size()) {
      if (param == "n_modes" || param == "n_cells" || param == "n_grid" ||
          param == "stride" || param == "ensemble_size" || param == "seed" ||
          param == "samples" || param == "snapshot_stride")
        return static_cast<long long>(d);
      return d;
    }
  } catch (const std::exception&) {
  }
  return value;  // string override (e.g. sigma_method)
}

void apply_override(json& cfg, const std::string& param, const json& value) {
  static const std::vector<std::string> kParamKeys = {
      "ell", "beta0", "alpha", "alpha0", "k", "gamma", "gamma0", "xi"};
  const auto dot = param.find('.');
  if (dot != std::string::npos) {
    cfg[param.substr(0, dot)][param.substr(dot + 1)] = value;
    return;
  }
  if (std::find(kParamKeys.begin(), kParamKeys.end(), param) != kParamKeys.end()) {
    cfg["params"][param] = value;
    return;
  }
  cfg["numerics"][param] = value;
}

int do_sweep(const std::string& config_path, const std::string& param,
             const std::string& values_csv) {
  const json base = bridgelab::load_json(config_path);
  std::vector<std::string> values;
  std::string cur;
  for (char ch : values_csv) {
    if (ch == ',') {
      if (!cur.empty()) values.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  if (!cur.empty()) values.push_back(cur);
  if (values.empty())
    throw bridgelab::ValidationError({"sweep needs at least one value"});

  const std::string root = base.value("output_dir", "out");
  fs::create_directories(root);
  json rows = json::array();
  std::vector<std::vector<double>> csv_rows;
  std::vector<std::string> subdirs;
  for (std::size_t i = 0; i < values.size(); ++i) {
    json cfg = base;
    apply_override(cfg, param, parse_override_value(param, values[i]));
    ExperimentConfig c = parse_config(cfg);
    const std::string sub = sanitize(values[i]);
    subdirs.push_back(sub);
    c.output_dir = root + "/" + sub;
    const RunResult result = run_into(c, c.output_dir);
    rows.push_back(json{{"value", values[i]},
                        {"dir", sub},
                        {"summary", result.summary}});
    std::vector<double> row{static_cast<double>(i)};
    for (const auto& [key, val] : result.summary.items()) {
      (void)key;
      if (val.is_number()) row.push_back(val.get<double>());
    }
    csv_rows.push_back(std::move(row));
  }
  // Flat numeric view: one row per value, columns from the (sorted) numeric
  // summary keys of the first run.
  std::vector<std::string> columns{"value_index"};
  if (!rows.empty())
    for (const auto& [key, val] : rows.front()["summary"].items())
      if (val.is_number()) columns.push_back(key);
  bridgelab::write_csv(root + "/sweep_summary.csv",
                       "sweep over " + param + "; value strings in sweep.json", columns,
                       csv_rows);
  bridgelab::save_json(root + "/sweep.json", json{{"schema", "bridgelab/sweep/1"},
                                                  {"param", param},
                                                  {"values", values},
                                                  {"runs", rows}});
  bridgelab::write_manifest(root, {"sweep.json", "sweep_summary.csv"},
                            json{{"experiment", "sweep"},
                                 {"param", param},
                                 {"subdirs", subdirs}});
  std::cout << json{{"status", "ok"}, {"output_dir", root}, {"runs", values.size()}}
                   .dump()
            << "\n";
  return 0;
}

void print_error(const char* type, const std::string& message) {
  std::cerr << json{{"error", json{{"type", type}, {"message", message}}}}.dump()
            << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"coupled cable/deck numerical laboratory"};
  app.require_subcommand(1);

  std::string config_path, sweep_param, sweep_values;
  auto* run_cmd = app.add_subcommand("run", "run one experiment from a JSON config");
  run_cmd->add_option("config", config_path, "experiment config (JSON)")->required();
  auto* sweep_cmd =
      app.add_subcommand("sweep", "repeat the experiment over a list of values");
  sweep_cmd->add_option("--param", sweep_param, "parameter to vary (e.g. xi, gamma, dt)")
      ->required();
  sweep_cmd->add_option("--values", sweep_values, "comma-separated values (xi accepts p/q)")
      ->required();
  sweep_cmd->add_option("config", config_path, "experiment config (JSON)")->required();
  auto* validate_cmd = app.add_subcommand("validate", "validate a config and exit");
  validate_cmd->add_option("config", config_path, "experiment config (JSON)")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (run_cmd->parsed()) return do_run(config_path);
    if (sweep_cmd->parsed()) return do_sweep(config_path, sweep_param, sweep_values);
    if (validate_cmd->parsed()) return do_validate(config_path);
  } catch (const bridgelab::ValidationError& e) {
    print_error("validation", e.what());
    return 2;
  } catch (const json::parse_error& e) {
    print_error("parse", e.what());
    return 2;
  } catch (const bridgelab::IoError& e) {
    print_error("io", e.what());
    return 4;
  } catch (const fs::filesystem_error& e) {
    print_error("io", e.what());
    return 4;
  } catch (const bridgelab::DomainError& e) {
    print_error("numerical", e.what());
    return 3;
  } catch (const bridgelab::NumericalError& e) {
    print_error("numerical", e.what());
    return 3;
  } catch (const std::exception& e) {
    print_error("internal", e.what());
    return 3;
  }
  return 0;
}
