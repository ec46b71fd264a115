#include "shellconv/cli.hpp"

#include <CLI11.hpp>
#include <boost/math/special_functions/erf.hpp>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <ostream>
#include <random>
#include <set>

#include "shellconv/dynamics.hpp"
#include "shellconv/io.hpp"
#include "shellconv/reduction.hpp"
#include "shellconv/spectrum.hpp"

namespace shellconv::cli {

using nlohmann::json;

namespace {

const char* const unvalidated = "unvalidated (no published closed form)";

// --- Config reading ----------------------------------------------------------

class Section {
 public:
  Section(const json& doc, std::string name) : name_(std::move(name)) {
    if (!doc.contains(name_)) return;
    obj_ = doc.at(name_);
    if (!obj_.is_object()) throw ConfigError("config section '" + name_ + "' must be an object");
  }

  void get(const char* key, double& out) { read(key, out, &json::is_number, "a number"); }
  void get(const char* key, int& out) { read(key, out, &json::is_number_integer, "an integer"); }
  void get(const char* key, bool& out) { read(key, out, &json::is_boolean, "a boolean"); }
  void get(const char* key, std::string& out) { read(key, out, &json::is_string, "a string"); }
  void get(const char* key, std::optional<double>& out) { read_optional(key, out); }
  void get(const char* key, std::optional<int>& out) { read_optional(key, out); }
  void get(const char* key, std::optional<std::vector<double>>& out) {
    used_.insert(key);
    if (!obj_.contains(key) || obj_.at(key).is_null()) return;
    const json& v = obj_.at(key);
    if (!v.is_array()) throw error(key, "an array of numbers");
    std::vector<double> vals;
    for (const auto& e : v) {
      if (!e.is_number()) throw error(key, "an array of numbers");
      vals.push_back(e.get<double>());
    }
    out = std::move(vals);
  }

  void finish() const {
    for (const auto& [k, v] : obj_.items()) {
      if (!used_.contains(k)) throw ConfigError("unknown config key '" + name_ + "." + k + "'");
    }
  }

 private:
  ConfigError error(const std::string& key, const std::string& what) const {
    return ConfigError("config key '" + name_ + "." + key + "' must be " + what);
  }

  template <class T>
  void read(const char* key, T& out, bool (json::*check)() const noexcept, const char* what) {
    used_.insert(key);
    if (!obj_.contains(key)) return;
    const json& v = obj_.at(key);
    if (!(v.*check)()) throw error(key, what);
    out = v.get<T>();
  }

  template <class T>
  void read_optional(const char* key, std::optional<T>& out) {
    if (obj_.contains(key) && obj_.at(key).is_null()) {
      used_.insert(key);
      out.reset();
      return;
    }
    if (!obj_.contains(key)) {
      used_.insert(key);
      return;
    }
    T v{};
    get(key, v);
    out = v;
  }

  std::string name_;
  json obj_ = json::object();
  std::set<std::string> used_;
};

void require(bool ok, const std::string& message) {
  if (!ok) throw ConfigError(message);
}

template <class T>
json optional_json(const std::optional<T>& v) {
  return v ? json(*v) : json(nullptr);
}

// --- Shared helpers ----------------------------------------------------------

PhysicalParams physical_params(const RunConfig& cfg) {
  PhysicalParams p;
  p.prandtl = cfg.physical.prandtl;
  p.r = cfg.physical.r;
  p.sigma0 = cfg.physical.sigma0;
  p.sigma1 = cfg.physical.sigma1;
  return p;
}

double resolve_lambda(const RunConfig& cfg, double lambda_c) {
  return cfg.physical.lambda.value_or(cfg.physical.lambda_factor * lambda_c);
}

ReductionOptions reduction_options(const RunConfig& cfg) {
  ReductionOptions o;
  o.l_max = cfg.reduce.grid_l_max;
  o.n_z = cfg.reduce.n_z;
  o.inner = cfg.reduce.inner == "energy" ? InnerProduct::energy : InnerProduct::l2;
  return o;
}

class Output {
 public:
  explicit Output(std::filesystem::path dir) : dir_(std::move(dir)) {
    std::error_code ec;
    std::filesystem::create_directories(dir_, ec);
    if (ec) throw ConfigError("cannot create output directory '" + dir_.string() + "': " + ec.message());
  }

  std::ofstream open(const std::string& name, bool binary = false) const {
    std::ofstream f(dir_ / name, binary ? std::ios::binary : std::ios::openmode{});
    if (!f) throw ConfigError("cannot write '" + (dir_ / name).string() + "'");
    return f;
  }

  std::string write_json(const std::string& name, const json& j) const {
    auto f = open(name);
    f << j.dump(2) << '\n';
    return (dir_ / name).string();
  }

  [[nodiscard]] std::string path(const std::string& name) const { return (dir_ / name).string(); }

 private:
  std::filesystem::path dir_;
};

json metadata(const std::string& command, const RunConfig& cfg) {
  json j;
  j["command"] = command;
  j["config"] = to_json(cfg);
  return j;
}

// --- Commands ----------------------------------------------------------------

void cmd_spectrum(const RunConfig& cfg, const Output& out, std::ostream& log) {
  PhysicalParams p = physical_params(cfg);
  p.validate();
  const CriticalPoint cp = critical_rayleigh(p);
  p.lambda = resolve_lambda(cfg, cp.lambda_c);
  p.validate();
  const auto rows = spectrum_scan(p, cfg.spectrum.l_max, cfg.spectrum.n_max);
  {
    auto f = out.open("spectrum.csv");
    io::write_spectrum_csv(f, rows);
  }
  json meta = metadata("spectrum", cfg);
  meta["lambda"] = p.lambda;
  meta["lambda_c"] = cp.lambda_c;
  meta["rows"] = rows.size();
  out.write_json("spectrum.json", meta);
  log << "spectrum: " << rows.size() << " modes at lambda = " << io::format_double(p.lambda) << " -> "
      << out.path("spectrum.csv") << '\n';
}

void cmd_critical(const RunConfig& cfg, const Output& out, std::ostream& log) {
  const PhysicalParams p = physical_params(cfg);
  p.validate();
  const CriticalPoint cp = critical_rayleigh(p, cfg.critical.l_scan);
  json j = metadata("critical", cfg);
  j["lambda_c"] = cp.lambda_c;
  j["R_c"] = cp.rayleigh();
  j["l_c"] = cp.l_c;
  j["degenerate"] = cp.degenerate;
  j["tied_l"] = cp.degenerate ? json(cp.tied_l) : json(nullptr);
  j["scanned_up_to"] = cp.scanned_up_to;
  out.write_json("critical.json", j);
  log << "critical: l_c = " << cp.l_c << ", R_c = " << io::format_double(cp.rayleigh())
      << (cp.degenerate ? " (degenerate)" : "") << '\n';
}

void cmd_reduce(const RunConfig& cfg, const Output& out, std::ostream& log) {
  PhysicalParams p = physical_params(cfg);
  p.validate();
  const CriticalPoint cp = critical_rayleigh(p);
  const int l_c = cfg.reduce.l_c.value_or(cp.l_c);
  p.lambda = resolve_lambda(cfg, cp.lambda_c);
  const Reduction red = reduce(p, l_c, reduction_options(cfg));
  const ReducedModel& m = red.model;

  json j = metadata("reduce", cfg);
  j["l_c"] = l_c;
  j["lambda_c"] = m.lambda_c;
  j["lambda"] = p.lambda;
  j["beta_plus"] = m.beta_plus(p.lambda);
  j["q"] = m.q;
  j["isotropy_residual"] = m.isotropy_residual;
  j["quadratic_residual"] = m.quadratic_residual;
  j["max_dropped"] = red.coeffs.max_dropped;
  j["nonzero_modes"] = red.coeffs.nonzero_modes().size();
  j["closed_form_q"] = optional_json(m.closed_form_q);
  if (m.closed_form_q) {
    const double rel = std::abs(m.q - *m.closed_form_q) / std::abs(*m.closed_form_q);
    j["relative_error"] = rel;
    j["status"] = rel <= 1e-6 ? "PASS" : "FAIL";
  } else {
    j["relative_error"] = nullptr;
    j["status"] = unvalidated;
  }
  if (l_c <= 2) {
    const auto table = closed_form_coefficients(p.prandtl, l_c);
    json blocks;
    for (const auto reading : {ClosedFormReading::resolved, ClosedFormReading::as_printed}) {
      const auto forms = closed_form_forms(table, reading);
      double worst = 0.0;
      for (const auto& [mode, form] : red.coeffs.forms) {
        const auto it = forms.find(mode);
        worst = std::max(worst, form_difference(form, it == forms.end() ? QuadraticForm{} : it->second));
      }
      blocks[reading == ClosedFormReading::resolved ? "resolved" : "as_printed"] = worst;
    }
    j["closed_form_block_difference"] = blocks;
  }
  if (p.lambda > 1.1 * m.lambda_c) j["caveat"] = "cubic truncation accuracy is not quantified this far above lambda_c";
  out.write_json("reduce.json", j);
  out.write_json("coefficients.json", io::forms_to_json(red.coeffs.forms));
  log << "reduce: l_c = " << l_c << ", q = " << io::format_double(m.q) << ", status: " << j["status"].get<std::string>()
      << '\n';
}

std::vector<double> random_direction(int dim, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<double> g(static_cast<std::size_t>(dim));
  double norm = 0.0;
  for (double& v : g) {
    const double u = (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
    v = std::numbers::sqrt2 * boost::math::erf_inv(2.0 * u - 1.0);
    norm += v * v;
  }
  norm = std::sqrt(norm);
  for (double& v : g) v /= norm;
  return g;
}

void cmd_evolve(const RunConfig& cfg, const Output& out, std::ostream& log) {
  PhysicalParams p = physical_params(cfg);
  p.validate();
  const CriticalPoint cp = critical_rayleigh(p);
  const int l_c = cfg.reduce.l_c.value_or(cp.l_c);
  const Reduction red = reduce(p, l_c, reduction_options(cfg));
  const double lambda = resolve_lambda(cfg, cp.lambda_c);
  require(lambda >= 0.0, "lambda must be non-negative");
  const AmplitudeEquation eq = AmplitudeEquation::from_model(red.model, lambda, cfg.evolve.full_cubic);

  const int dim = real_dimension(l_c);
  std::vector<double> x0;
  if (cfg.evolve.initial) {
    x0 = *cfg.evolve.initial;
    require(static_cast<int>(x0.size()) == dim,
            "evolve.initial must have " + std::to_string(dim) + " entries (x0, y1, z1, ...)");
  } else {
    const double scale = cfg.evolve.initial_scale * (eq.beta > 0.0 ? std::sqrt(eq.beta / eq.q) : 1.0);
    x0 = random_direction(dim, cfg.seed);
    for (double& v : x0) v *= scale;
  }
  const double t_end = cfg.evolve.t_end.value_or(eq.beta != 0.0 ? 20.0 / std::abs(eq.beta) : 20.0);

  IntegrationOptions io_opts;
  io_opts.rel_tol = cfg.evolve.rel_tol;
  io_opts.abs_tol = cfg.evolve.abs_tol;
  io_opts.output_dt = cfg.evolve.output_dt;
  const ReducedState s0 = ReducedState::from_real(l_c, x0);
  const auto traj = integrate(eq, s0, t_end, io_opts);
  {
    auto f = out.open("trajectory.csv");
    io::write_trajectory_csv(f, l_c, traj);
  }

  json j = metadata("evolve", cfg);
  j["l_c"] = l_c;
  j["lambda"] = lambda;
  j["lambda_c"] = cp.lambda_c;
  j["beta_plus"] = eq.beta;
  j["q"] = eq.q;
  j["t_end"] = t_end;
  j["initial"] = x0;
  j["points"] = traj.size();
  j["N_initial"] = traj.front().radial;
  j["N_final"] = traj.back().radial;
  if (!eq.full_cubic) {
    double worst = 0.0;
    for (const auto& pt : traj) {
      worst = std::max(worst, std::abs(pt.radial - logistic_radial(eq.beta, eq.q, traj.front().radial, pt.t - s0.time)));
    }
    j["logistic_max_error"] = worst;
  }
  if (eq.beta > 0.0) {
    const AttractorEstimate est = attractor(eq, static_cast<std::size_t>(cfg.evolve.samples), cfg.seed);
    json a;
    a["radius"] = est.radius;
    a["radius_sq_times_q"] = est.radius * est.radius * eq.q;
    a["samples"] = est.samples.size();
    a["all_steady"] = std::all_of(est.steady.begin(), est.steady.end(), [](bool b) { return b; });
    a["max_field_norm"] = est.field_norm.empty() ? 0.0 : *std::max_element(est.field_norm.begin(), est.field_norm.end());
    a["note"] = "cubic truncation: every point of the sphere is a degenerate steady state";
    j["attractor"] = a;
  } else {
    j["attractor"] = nullptr;
  }
  if (!red.model.validated) j["validation"] = unvalidated;
  if (lambda > 1.1 * cp.lambda_c) j["caveat"] = "cubic truncation accuracy is not quantified this far above lambda_c";

  if (cfg.evolve.reconstruct) {
    const int l_grid = cfg.reduce.grid_l_max < 0 ? 3 * l_c + 2 : cfg.reduce.grid_l_max;
    std::vector<double> z(static_cast<std::size_t>(cfg.evolve.grid_n_z));
    for (std::size_t k = 0; k < z.size(); ++k) z[k] = static_cast<double>(k) / static_cast<double>(z.size() - 1);
    const SphereGrid grid = SphereGrid::for_degree(l_grid, p.r).with_z_nodes(z);
    const ReducedState final_state = ReducedState::from_real(l_c, traj.back().coords, traj.back().t);
    const ShellField fields = reconstruct(red.coeffs, final_state, grid).values();
    json r;
    r["format"] = cfg.evolve.grid_format;
    r["max_imag"] = std::max({fields.u.theta.max_imag(), fields.u.phi.max_imag(), fields.w.max_imag(), fields.T.max_imag()});
    r["n_z"] = grid.n_z();
    r["n_theta"] = grid.n_theta();
    r["n_phi"] = grid.n_phi();
    if (cfg.evolve.grid_format == "binary") {
      auto f = out.open("reconstruction.bin", true);
      io::write_grid_binary(f, fields);
      r["file"] = "reconstruction.bin";
      r["layout"] = "float64 little-endian; arrays u_theta, u_phi, w, T; each z-major, then theta, then phi";
      r["z"] = std::vector<double>(grid.z().begin(), grid.z().end());
      r["theta"] = std::vector<double>(grid.theta().begin(), grid.theta().end());
      r["phi"] = std::vector<double>(grid.phi().begin(), grid.phi().end());
    } else {
      out.write_json("reconstruction.json", io::grid_dump_json(fields, grid));
      r["file"] = "reconstruction.json";
    }
    j["reconstruction"] = r;
  }
  out.write_json("evolve.json", j);
  log << "evolve: " << traj.size() << " points, N(t_end) = " << io::format_double(traj.back().radial) << " -> "
      << out.path("trajectory.csv") << '\n';
}

void cmd_friction(const RunConfig& cfg, const Output& out, std::ostream& log) {
  const auto& f = cfg.friction;
  const PatternSelection sel = friction_ratio_for_pattern(f.a, f.h, f.l_c, f.sigma0);
  json j = metadata("friction", cfg);
  j["sigma_ratio"] = sel.ratio;
  j["sigma0"] = sel.sigma0;
  j["sigma1"] = sel.sigma1;
  j["aspect"] = sel.aspect;
  j["alpha_sq"] = sel.alpha_sq;
  j["requested_l"] = sel.requested_l;
  j["selected_l"] = sel.selected_l;
  j["consistent"] = sel.consistent;
  j["half_prefactor_ratio"] = sel.half_prefactor_ratio;
  j["half_prefactor_selected_l"] = sel.half_prefactor_selected_l;
  out.write_json("friction.json", j);
  log << "friction: sigma0/sigma1 = " << io::format_double(sel.ratio) << ", selects l = " << sel.selected_l
      << (sel.consistent ? " (consistent)" : " (inconsistent)") << '\n';
}

}  // namespace

// --- Config ------------------------------------------------------------------

RunConfig parse_config(const json& doc) {
  if (!doc.is_object()) throw ConfigError("config must be a JSON object");
  static const std::set<std::string> sections = {"physical", "spectrum", "critical", "reduce", "evolve", "friction", "seed"};
  for (const auto& [k, v] : doc.items()) {
    if (!sections.contains(k)) throw ConfigError("unknown config key '" + k + "'");
  }
  RunConfig c;
  if (doc.contains("seed")) {
    require(doc.at("seed").is_number_unsigned(), "config key 'seed' must be a non-negative integer");
    c.seed = doc.at("seed").get<std::uint64_t>();
  }

  Section ph(doc, "physical");
  ph.get("prandtl", c.physical.prandtl);
  ph.get("r", c.physical.r);
  ph.get("lambda", c.physical.lambda);
  ph.get("lambda_factor", c.physical.lambda_factor);
  ph.get("sigma0", c.physical.sigma0);
  ph.get("sigma1", c.physical.sigma1);
  ph.finish();
  require(c.physical.prandtl > 0.0, "physical.prandtl must be positive");
  require(c.physical.r > 0.0, "physical.r must be positive");
  require(!c.physical.lambda || *c.physical.lambda >= 0.0, "physical.lambda must be non-negative");
  require(c.physical.lambda_factor >= 0.0, "physical.lambda_factor must be non-negative");
  require(c.physical.sigma0 >= 0.0 && c.physical.sigma1 >= 0.0, "physical.sigma0/sigma1 must be non-negative");

  Section sp(doc, "spectrum");
  sp.get("l_max", c.spectrum.l_max);
  sp.get("n_max", c.spectrum.n_max);
  sp.finish();
  require(c.spectrum.l_max >= 0 && c.spectrum.n_max >= 0, "spectrum.l_max and spectrum.n_max must be >= 0");

  Section cr(doc, "critical");
  cr.get("l_scan", c.critical.l_scan);
  cr.finish();
  require(c.critical.l_scan == -1 || c.critical.l_scan >= 1, "critical.l_scan must be -1 or >= 1");

  Section rd(doc, "reduce");
  rd.get("l_c", c.reduce.l_c);
  rd.get("grid_l_max", c.reduce.grid_l_max);
  rd.get("n_z", c.reduce.n_z);
  rd.get("inner", c.reduce.inner);
  rd.finish();
  require(!c.reduce.l_c || *c.reduce.l_c >= 1, "reduce.l_c must be >= 1");
  require(c.reduce.n_z >= 2, "reduce.n_z must be >= 2");
  require(c.reduce.inner == "l2" || c.reduce.inner == "energy", "reduce.inner must be \"l2\" or \"energy\"");

  Section ev(doc, "evolve");
  ev.get("t_end", c.evolve.t_end);
  ev.get("output_dt", c.evolve.output_dt);
  ev.get("rel_tol", c.evolve.rel_tol);
  ev.get("abs_tol", c.evolve.abs_tol);
  ev.get("initial", c.evolve.initial);
  ev.get("initial_scale", c.evolve.initial_scale);
  ev.get("samples", c.evolve.samples);
  ev.get("full_cubic", c.evolve.full_cubic);
  ev.get("reconstruct", c.evolve.reconstruct);
  ev.get("grid_format", c.evolve.grid_format);
  ev.get("grid_n_z", c.evolve.grid_n_z);
  ev.finish();
  require(!c.evolve.t_end || *c.evolve.t_end >= 0.0, "evolve.t_end must be non-negative");
  require(c.evolve.output_dt >= 0.0, "evolve.output_dt must be non-negative");
  require(c.evolve.rel_tol > 0.0 && c.evolve.abs_tol > 0.0, "evolve tolerances must be positive");
  require(c.evolve.initial_scale > 0.0, "evolve.initial_scale must be positive");
  require(c.evolve.samples >= 0, "evolve.samples must be >= 0");
  require(c.evolve.grid_format == "json" || c.evolve.grid_format == "binary",
          "evolve.grid_format must be \"json\" or \"binary\"");
  require(c.evolve.grid_n_z >= 2, "evolve.grid_n_z must be >= 2");

  Section fr(doc, "friction");
  fr.get("a", c.friction.a);
  fr.get("h", c.friction.h);
  fr.get("l_c", c.friction.l_c);
  fr.get("sigma0", c.friction.sigma0);
  fr.finish();
  require(c.friction.a > 0.0 && c.friction.h > 0.0 && c.friction.h < c.friction.a,
          "friction.a and friction.h must satisfy 0 < h < a");
  require(c.friction.l_c >= 1, "friction.l_c must be >= 1");
  require(c.friction.sigma0 > 0.0, "friction.sigma0 must be positive");
  return c;
}

json to_json(const RunConfig& c) {
  json j;
  j["seed"] = c.seed;
  j["physical"] = {{"prandtl", c.physical.prandtl},
                   {"r", c.physical.r},
                   {"lambda", optional_json(c.physical.lambda)},
                   {"lambda_factor", c.physical.lambda_factor},
                   {"sigma0", c.physical.sigma0},
                   {"sigma1", c.physical.sigma1}};
  j["spectrum"] = {{"l_max", c.spectrum.l_max}, {"n_max", c.spectrum.n_max}};
  j["critical"] = {{"l_scan", c.critical.l_scan}};
  j["reduce"] = {{"l_c", optional_json(c.reduce.l_c)},
                 {"grid_l_max", c.reduce.grid_l_max},
                 {"n_z", c.reduce.n_z},
                 {"inner", c.reduce.inner}};
  j["evolve"] = {{"t_end", optional_json(c.evolve.t_end)},
                 {"output_dt", c.evolve.output_dt},
                 {"rel_tol", c.evolve.rel_tol},
                 {"abs_tol", c.evolve.abs_tol},
                 {"initial", optional_json(c.evolve.initial)},
                 {"initial_scale", c.evolve.initial_scale},
                 {"samples", c.evolve.samples},
                 {"full_cubic", c.evolve.full_cubic},
                 {"reconstruct", c.evolve.reconstruct},
                 {"grid_format", c.evolve.grid_format},
                 {"grid_n_z", c.evolve.grid_n_z}};
  j["friction"] = {{"a", c.friction.a}, {"h", c.friction.h}, {"l_c", c.friction.l_c}, {"sigma0", c.friction.sigma0}};
  return j;
}

// --- Entry point -------------------------------------------------------------

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Linear stability, center-manifold reduction and amplitude dynamics for convection in a spherical shell",
               "shell_benard"};
  app.fallthrough();
  app.require_subcommand(1, 1);
  std::string config_path;
  std::string out_dir = ".";
  std::optional<std::uint64_t> seed;
  app.add_option("--config", config_path, "JSON run configuration");
  app.add_option("--out", out_dir, "output directory")->capture_default_str();
  app.add_option("--seed", seed, "random seed (overrides the config)");

  using Command = void (*)(const RunConfig&, const Output&, std::ostream&);
  const std::vector<std::tuple<const char*, const char*, Command>> commands = {
      {"spectrum", "eigenvalue table over (branch, l, m, n)", cmd_spectrum},
      {"critical", "critical Rayleigh number and degree", cmd_critical},
      {"reduce", "center-manifold coefficients and the cubic coefficient q", cmd_reduce},
      {"evolve", "integrate the amplitude equations and sample the attractor", cmd_evolve},
      {"friction", "friction ratio selecting a given degree", cmd_friction},
  };
  for (const auto& [name, help, fn] : commands) app.add_subcommand(name, help);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? exit_ok : exit_usage;
  }

  try {
    json doc = json::object();
    if (!config_path.empty()) {
      std::ifstream f(config_path);
      if (!f) throw ConfigError("cannot read config file '" + config_path + "'");
      try {
        doc = json::parse(f);
      } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
      }
    }
    RunConfig cfg = parse_config(doc);
    if (seed) cfg.seed = *seed;
    const Output output(out_dir);
    for (const auto& [name, help, fn] : commands) {
      if (app.got_subcommand(name)) fn(cfg, output, out);
    }
    return exit_ok;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return exit_usage;
  } catch (const std::logic_error& e) {
    // precondition violations (invalid_argument, domain_error) stem from the configuration
    err << "error: " << e.what() << '\n';
    return exit_usage;
  } catch (const json::exception& e) {
    err << "error: " << e.what() << '\n';
    return exit_usage;
  } catch (const std::exception& e) {
    err << "numerical failure: " << e.what() << '\n';
    return exit_numerical;
  }
}

}  // namespace shellconv::cli
