#include "bridgelab/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "bridgelab/errors.hpp"

namespace bridgelab {

namespace {

json finite_or_null(double x) {
  if (std::isfinite(x)) return x;
  return nullptr;
}

json complex_pair(const Complex& z) { return json::array({z.real(), z.imag()}); }

}  // namespace

void to_json(json& j, const Rational& r) { j = json{{"num", r.num}, {"den", r.den}}; }

void from_json(const json& j, Rational& r) {
  r.num = j.at("num").get<long long>();
  r.den = j.at("den").get<long long>();
}

void to_json(json& j, const ModelParams& p) {
  j = json{{"ell", p.ell},     {"beta0", p.beta0},   {"alpha", p.alpha},
           {"alpha0", p.alpha0}, {"k", p.k},         {"gamma", p.gamma},
           {"gamma0", p.gamma0}};
  if (p.xi_ratio)
    j["xi"] = *p.xi_ratio;
  else
    j["xi"] = p.xi;
}

void from_json(const json& j, ModelParams& p) {
  ModelParams d;
  p.ell = j.value("ell", d.ell);
  p.beta0 = j.value("beta0", d.beta0);
  p.alpha = j.value("alpha", d.alpha);
  p.alpha0 = j.value("alpha0", d.alpha0);
  p.k = j.value("k", d.k);
  p.gamma = j.value("gamma", d.gamma);
  p.gamma0 = j.value("gamma0", d.gamma0);
  p.xi_ratio.reset();
  if (j.contains("xi")) {
    if (j.at("xi").is_object()) {
      const Rational raw = j.at("xi").get<Rational>();
      const Rational red = reduce(raw.num, raw.den);
      p.xi_ratio = red;
      p.xi = p.ell * red.value();
    } else {
      p.xi = j.at("xi").get<double>();
    }
  } else {
    p.xi = d.xi;
  }
}

void to_json(json& j, const NonlinearitySpec& s) {
  switch (s.family) {
    case NonlinearFamily::Zero:
      j = json{{"family", "zero"}};
      break;
    case NonlinearFamily::PowerSeparated:
      j = json{{"family", "power"}, {"mu1", s.mu1},     {"alpha", s.exp_alpha},
               {"mu2", s.mu2},      {"beta", s.exp_beta}, {"radius", s.radius}};
      break;
    case NonlinearFamily::GradientPotential:
      j = json{{"family", "gradient"}, {"m", s.m}, {"n", s.n}, {"radius", s.radius}};
      break;
    case NonlinearFamily::OneSidedSpring:
      j = json{{"family", "spring"}, {"k", s.spring_k}};
      break;
  }
  if (s.forcing.size() != 0) {
    json arr = json::array();
    for (int i = 0; i < s.forcing.size(); ++i) arr.push_back(s.forcing[i]);
    j["forcing"] = std::move(arr);
  }
}

void from_json(const json& j, NonlinearitySpec& s) {
  s = NonlinearitySpec{};
  const std::string family = j.value("family", "zero");
  if (family == "zero") {
    s.family = NonlinearFamily::Zero;
  } else if (family == "power") {
    s.family = NonlinearFamily::PowerSeparated;
    s.mu1 = j.value("mu1", 0.0);
    s.exp_alpha = j.value("alpha", 1.0);
    s.mu2 = j.value("mu2", 0.0);
    s.exp_beta = j.value("beta", 1.0);
    s.radius = j.value("radius", 1.0);
  } else if (family == "gradient") {
    s.family = NonlinearFamily::GradientPotential;
    s.m = j.value("m", 1);
    s.n = j.value("n", 1);
    s.radius = j.value("radius", 1.0);
  } else if (family == "spring") {
    s.family = NonlinearFamily::OneSidedSpring;
    s.spring_k = j.value("k", 0.0);
  } else {
    throw ValidationError(
        {"family: unknown value \"" + family +
         "\" (allowed: \"zero\", \"power\", \"gradient\", \"spring\")"});
  }
  if (j.contains("forcing")) {
    const auto& arr = j.at("forcing");
    s.forcing = Vector(arr.size());
    for (std::size_t i = 0; i < arr.size(); ++i)
      s.forcing[static_cast<Eigen::Index>(i)] = arr.at(i).get<double>();
  }
}

void to_json(json& j, const DampingPointClass& c) {
  j = json{{"classification", to_string(c.tag)}, {"nearest_error", c.nearest_error}};
  j["ratio"] = c.ratio ? json(*c.ratio) : json(nullptr);
  j["witness_mode"] = c.witness_mode ? json(*c.witness_mode) : json(nullptr);
  j["nearest"] = c.nearest ? json(*c.nearest) : json(nullptr);
}

void to_json(json& j, const EnergyBreakdown& e) {
  j = json{{"cable_kinetic", e.cable_kinetic}, {"cable_potential", e.cable_potential},
           {"deck_kinetic", e.deck_kinetic},   {"deck_bending", e.deck_bending},
           {"deck_tension", e.deck_tension},   {"coupling", e.coupling},
           {"total", e.total}};
}

void to_json(json& j, const SpectrumReport& r) {
  json eigs = json::array();
  for (const auto& z : r.eigenvalues) eigs.push_back(complex_pair(z));
  j = json{{"n_modes", r.n_modes},
           {"eigenvalues", std::move(eigs)},
           {"spectral_abscissa", r.spectral_abscissa},
           {"axis_gap", r.axis_gap},
           {"undamped_witnesses", r.undamped_witnesses}};
}

void to_json(json& j, const ResolventSweep& r) {
  json norms = json::array();
  for (double v : r.norms) norms.push_back(finite_or_null(v));
  j = json{{"lambdas", r.lambdas},
           {"norms", std::move(norms)},
           {"sup_norm", finite_or_null(r.sup_norm)},
           {"sup_is_finite", r.sup_is_finite},
           {"method", r.method == SigmaMinMethod::Svd ? "svd" : "estimate"}};
}

void to_json(json& j, const TransmissionInfReport& r) {
  j = json{{"value", r.value},   {"raw_min", r.raw_min},       {"argmin", r.argmin},
           {"period", r.period}, {"exhaustive", r.exhaustive}, {"n_samples", r.n_samples}};
}

void to_json(json& j, const DecayFit& f) {
  j = json{{"mu_fit", f.mu_fit},   {"intercept", f.intercept}, {"t_begin", f.t_begin},
           {"t_end", f.t_end},     {"residual", f.residual},   {"n_points", f.n_points}};
}

void to_json(json& j, const WorkBoundReport& r) {
  j = json{{"eps", r.eps},     {"kappa0", r.kappa0}, {"c_eps", r.c_eps},
           {"g_max", r.g_max}, {"lhs", r.lhs}};
}

void to_json(json& j, const SplittingReport& r) {
  j = json{{"sup_gen_norm", r.sup_gen_norm},
           {"sup_time_deriv", r.sup_time_deriv},
           {"sup_gen_norm_tail", r.sup_gen_norm_tail},
           {"tail_start", r.tail_start},
           {"f0_norm", r.f0_norm},
           {"u0_norm", r.u0_norm},
           {"ratio", finite_or_null(r.ratio)},
           {"finite", r.finite}};
}

void to_json(json& j, const AbsorbingReport& r) {
  json members = json::array();
  for (const auto& m : r.members) {
    members.push_back(json{{"seed", m.seed},
                           {"initial_norm", m.initial_norm},
                           {"entry_time", finite_or_null(m.entry_time)},
                           {"entered", m.entered},
                           {"remained", m.remained},
                           {"norms", m.norms}});
  }
  j = json{{"ensemble_size", r.ensemble_size},
           {"radius", r.radius},
           {"tail_start", r.tail_start},
           {"c2_hat", r.c2_hat},
           {"ball_radius", r.ball_radius},
           {"c1", r.c1},
           {"mu", r.mu},
           {"c2", r.c2},
           {"envelope_residual", r.envelope_residual},
           {"all_entered", r.all_entered},
           {"all_remained", r.all_remained},
           {"times", r.times},
           {"members", std::move(members)}};
}

void to_json(json& j, const AttractorReport& r) {
  j = json{{"ensemble_size", r.ensemble_size},
           {"window", r.window},
           {"times", r.times},
           {"max_pair_energy", r.max_pair_energy},
           {"max_pair_hminus1", r.max_pair_hminus1},
           {"contraction_times", r.contraction_times},
           {"contraction_factors", r.contraction_factors},
           {"quasi_seminorm", r.quasi_seminorm},
           {"box",
            json{{"coords", r.box.coords},
                 {"epsilons", r.box.epsilons},
                 {"counts", r.box.counts},
                 {"dimension", r.box.dimension}}}};
}

json matrix_to_json(const Matrix& m) {
  json data = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c)
      data.push_back(json::array({m(r, c), 0.0}));
  return json{{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::move(data)}};
}

json matrix_to_json(const ComplexMatrix& m) {
  json data = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c) data.push_back(complex_pair(m(r, c)));
  return json{{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::move(data)}};
}

json generator_to_json(const DiscreteGenerator& gen) {
  return json{{"schema", "bridgelab/generator/1"},
              {"n_modes", gen.n_modes},
              {"params", gen.params},
              {"op_norm_estimate", gen.op_norm_estimate},
              {"A", matrix_to_json(gen.A)},
              {"A_E", matrix_to_json(gen.A_E)}};
}

json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in.is_open()) throw IoError("cannot open " + path + " for reading");
  return json::parse(in);
}

void save_json(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out.is_open()) throw IoError("cannot open " + path + " for writing");
  out << j.dump(2) << "\n";
  if (!out.good()) throw IoError("write to " + path + " failed");
}

std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

void write_csv(const std::string& path, const std::string& comment,
               const std::vector<std::string>& columns,
               const std::vector<std::vector<double>>& rows) {
  std::ofstream out(path);
  if (!out.is_open()) throw IoError("cannot open " + path + " for writing");
  out << "# " << comment << "\n";
  for (std::size_t i = 0; i < columns.size(); ++i)
    out << columns[i] << (i + 1 < columns.size() ? "," : "");
  out << "\n";
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i)
      out << format_double(row[i]) << (i + 1 < row.size() ? "," : "");
    out << "\n";
  }
  if (!out.good()) throw IoError("write to " + path + " failed");
}

void write_trajectory_csv(const std::string& path, const TrajectoryRecord& rec) {
  std::vector<std::vector<double>> rows;
  rows.reserve(rec.times.size());
  for (std::size_t i = 0; i < rec.times.size(); ++i) {
    const EnergyBreakdown& b = rec.breakdowns[i];
    rows.push_back({rec.times[i], b.total, b.cable_kinetic, b.cable_potential,
                    b.deck_kinetic, b.deck_bending, b.deck_tension, b.coupling,
                    rec.damping_power[i]});
  }
  write_csv(path,
            "energy series, scheme " + to_string(rec.scheme) +
                ", dt " + format_double(rec.dt),
            {"t", "E_total", "E_cable_kin", "E_cable_pot", "E_deck_kin", "E_deck_bend",
             "E_deck_tension", "E_coupling", "P_damp"},
            rows);
}

void write_resolvent_csv(const std::string& path, const ResolventSweep& sweep) {
  std::vector<std::vector<double>> rows;
  rows.reserve(sweep.lambdas.size());
  for (std::size_t i = 0; i < sweep.lambdas.size(); ++i)
    rows.push_back({sweep.lambdas[i], sweep.norms[i]});
  write_csv(path, "resolvent norm along the imaginary axis", {"lambda", "resolvent_norm"},
            rows);
}

void write_characteristics_csv(const std::string& path, const CharacteristicsRun& run) {
  std::vector<std::vector<double>> rows;
  rows.reserve(run.times.size());
  for (std::size_t i = 0; i < run.times.size(); ++i)
    rows.push_back({run.times[i], run.energies[i],
                    i > 0 ? run.interface_power[i - 1] : 0.0});
  write_csv(path, "characteristic-scheme energy series", {"t", "E", "P_interface"}, rows);
}

void write_snapshot_csv(const std::string& path, const RiemannField& field) {
  const FieldShape shape = from_riemann(field);
  std::vector<std::vector<double>> rows;
  const int n = static_cast<int>(field.p.size());
  rows.reserve(n);
  for (int i = 0; i < n; ++i) {
    const double x = (i + 0.5) * field.dx;
    rows.push_back({field.t, x, shape.v_mid[i], shape.vt_mid[i]});
  }
  write_csv(path, "field snapshot at cell midpoints", {"t", "x", "v", "v_t"}, rows);
}

void write_matrix_csv(const std::string& path, const std::string& comment,
                      const Matrix& m) {
  std::vector<std::vector<double>> rows;
  rows.reserve(m.rows());
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    std::vector<double> row(m.cols());
    for (Eigen::Index c = 0; c < m.cols(); ++c) row[c] = m(r, c);
    rows.push_back(std::move(row));
  }
  std::vector<std::string> columns(m.cols());
  for (Eigen::Index c = 0; c < m.cols(); ++c) columns[c] = "c" + std::to_string(c);
  write_csv(path, comment, columns, rows);
}

std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string file_hash(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in.is_open()) throw IoError("cannot open " + path + " for hashing");
  std::ostringstream ss;
  ss << in.rdbuf();
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(fnv1a64(ss.str())));
  return buf;
}

void write_manifest(const std::string& dir, const std::vector<std::string>& filenames,
                    const json& summary) {
  json files = json::array();
  for (const auto& name : filenames) {
    const std::string full = dir + "/" + name;
    std::ifstream in(full, std::ios::binary);
    if (!in.is_open()) throw IoError("cannot open " + full + " for hashing");
    std::ostringstream ss;
    ss << in.rdbuf();
    const std::string bytes = ss.str();
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx",
                  static_cast<unsigned long long>(fnv1a64(bytes)));
    files.push_back(json{{"path", name},
                         {"bytes", bytes.size()},
                         {"fnv1a64", std::string(buf)}});
  }
  const json manifest{{"schema", "bridgelab/manifest/1"},
                      {"files", std::move(files)},
                      {"summary", summary}};
  save_json(dir + "/manifest.json", manifest);
}

}  // namespace bridgelab
