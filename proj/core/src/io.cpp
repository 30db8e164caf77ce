#include "gkdv/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace gkdv {

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

ModelParams ExperimentConfig::model_params() const {
  return ModelParams(m, lambda, eps, PotentialSpec(gamma));
}

SolverConfig ExperimentConfig::solver_config() const {
  SolverConfig cfg;
  cfg.half_length = half_length;
  cfg.n = n;
  cfg.dt = dt;
  cfg.dealias_fraction = dealias_fraction;
  cfg.cfl_safety = cfl_safety;
  return cfg;
}

RunControls ExperimentConfig::run_controls() const {
  RunControls rc;
  rc.x0 = x0;
  rc.c0 = c0;
  rc.exit_x = exit_x;
  rc.horizon = horizon;
  rc.snapshot_dt = snapshot_dt;
  rc.monitor_dt = monitor_dt;
  rc.boundary_strip = boundary_strip;
  rc.boundary_tol = boundary_tol;
  return rc;
}

OdeConfig ExperimentConfig::ode_config() const {
  OdeConfig oc;
  oc.dt = ode_dt;
  oc.kappa = ode_kappa;
  oc.paper_start_time = ode_paper_start;
  oc.horizon_factor = ode_horizon_factor;
  return oc;
}

std::string ExperimentConfig::serialize() const {
  std::ostringstream out;
  out << "[model]\n";
  out << "m = " << m << "\n";
  out << "lambda = " << fmt(lambda) << "\n";
  out << "eps = " << fmt(eps) << "\n";
  out << "gamma = " << fmt(gamma) << "\n";
  out << "[pde]\n";
  out << "L = " << fmt(half_length) << "\n";
  out << "N = " << n << "\n";
  out << "dt = " << fmt(dt) << "\n";
  out << "dealias_fraction = " << fmt(dealias_fraction) << "\n";
  out << "cfl_safety = " << fmt(cfl_safety) << "\n";
  out << "[run]\n";
  out << "x0 = " << fmt(x0) << "\n";
  out << "c0 = " << fmt(c0) << "\n";
  out << "exit_x = " << fmt(exit_x) << "\n";
  out << "horizon = " << fmt(horizon) << "\n";
  out << "snapshot_dt = " << fmt(snapshot_dt) << "\n";
  out << "monitor_dt = " << fmt(monitor_dt) << "\n";
  out << "boundary_strip = " << fmt(boundary_strip) << "\n";
  out << "boundary_tol = " << fmt(boundary_tol) << "\n";
  out << "[ode]\n";
  out << "dt = " << fmt(ode_dt) << "\n";
  out << "kappa = " << fmt(ode_kappa) << "\n";
  out << "paper_start = " << (ode_paper_start ? 1 : 0) << "\n";
  out << "horizon_factor = " << fmt(ode_horizon_factor) << "\n";
  return out.str();
}

ExperimentConfig ExperimentConfig::parse(const std::string& text) {
  ExperimentConfig cfg;
  std::istringstream in(text);
  std::string line, section;
  auto trim = [](std::string s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    const auto b = s.find_last_not_of(" \t\r\n");
    return a == std::string::npos ? std::string{} : s.substr(a, b - a + 1);
  };
  while (std::getline(in, line)) {
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    if (line.front() == '[' && line.back() == ']') {
      section = line.substr(1, line.size() - 2);
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("ExperimentConfig: bad line: " + line);
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    const std::string skey = section + "." + key;
    if (skey == "model.m") cfg.m = std::stoi(val);
    else if (skey == "model.lambda") cfg.lambda = std::stod(val);
    else if (skey == "model.eps") cfg.eps = std::stod(val);
    else if (skey == "model.gamma") cfg.gamma = std::stod(val);
    else if (skey == "pde.L") cfg.half_length = std::stod(val);
    else if (skey == "pde.N") cfg.n = std::stoi(val);
    else if (skey == "pde.dt") cfg.dt = std::stod(val);
    else if (skey == "pde.dealias_fraction") cfg.dealias_fraction = std::stod(val);
    else if (skey == "pde.cfl_safety") cfg.cfl_safety = std::stod(val);
    else if (skey == "run.x0") cfg.x0 = std::stod(val);
    else if (skey == "run.c0") cfg.c0 = std::stod(val);
    else if (skey == "run.exit_x") cfg.exit_x = std::stod(val);
    else if (skey == "run.horizon") cfg.horizon = std::stod(val);
    else if (skey == "run.snapshot_dt") cfg.snapshot_dt = std::stod(val);
    else if (skey == "run.monitor_dt") cfg.monitor_dt = std::stod(val);
    else if (skey == "run.boundary_strip") cfg.boundary_strip = std::stod(val);
    else if (skey == "run.boundary_tol") cfg.boundary_tol = std::stod(val);
    else if (skey == "ode.dt") cfg.ode_dt = std::stod(val);
    else if (skey == "ode.kappa") cfg.ode_kappa = std::stod(val);
    else if (skey == "ode.paper_start") cfg.ode_paper_start = std::stoi(val) != 0;
    else if (skey == "ode.horizon_factor") cfg.ode_horizon_factor = std::stod(val);
    else throw std::invalid_argument("ExperimentConfig: unknown key: " + skey);
  }
  return cfg;
}

ExperimentConfig ExperimentConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("ExperimentConfig: cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

void ExperimentConfig::save(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("ExperimentConfig: cannot open " + path);
  out << serialize();
}

void write_field_csv(const FieldState& state, const ModelParams& params,
                     const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_field_csv: cannot open " + path);
  char head[200];
  std::snprintf(head, sizeof(head), "# t=%.12g L=%.12g N=%d eps=%.12g lambda=%.12g m=%d gamma=%.12g\n",
                state.t, state.grid.half_length, state.grid.n, params.eps, params.lambda,
                params.m, params.potential.gamma);
  out << head << "x,u\n";
  char line[80];
  for (int j = 0; j < state.grid.n; ++j) {
    std::snprintf(line, sizeof(line), "%.12g,%.12g\n", state.grid.node(j), state.u[j]);
    out << line;
  }
}

void write_regime_report_json(const RegimeReport& report, const std::string& path) {
  nlohmann::json j;
  j["regime_measured"] = regime_name(report.regime_measured);
  j["regime_predicted"] = regime_name(report.regime_predicted);
  j["c_plus"] = report.c_plus;
  j["final_velocity"] = report.final_velocity;
  j["predicted"] = {{"c_inf", report.predicted.c_inf},
                    {"regime", regime_name(report.predicted.regime)},
                    {"final_velocity", report.predicted.final_velocity},
                    {"final_mass_ratio", report.predicted.final_mass_ratio},
                    {"kappa", report.predicted.kappa},
                    {"residual", report.predicted.residual}};
  j["velocity_error"] = report.velocity_error;
  j["scaling_error"] = report.scaling_error;
  j["defect_final"] = report.defect_final;
  j["final_mass"] = report.final_mass;
  j["predicted_final_mass"] = report.predicted_final_mass;
  j["mass_relative_error"] = report.mass_relative_error;
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_regime_report_json: cannot open " + path);
  out << j.dump(2) << "\n";
}

void write_residual_report_json(const std::vector<IdentityResidual>& residuals,
                                const std::string& grid_desc, const std::string& path) {
  nlohmann::json j;
  j["grid"] = grid_desc;
  nlohmann::json items = nlohmann::json::object();
  for (const auto& r : residuals) items[r.name] = r.max_residual;
  j["residuals"] = items;
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_residual_report_json: cannot open " + path);
  out << j.dump(2) << "\n";
}

void write_ode_run_json(const OdeRun& run, const std::string& path) {
  nlohmann::json j;
  j["m"] = run.params.m;
  j["lambda"] = run.params.lambda;
  j["eps"] = run.params.eps;
  j["gamma"] = run.params.potential.gamma;
  j["dt"] = run.config.dt;
  j["t_start"] = run.t_start;
  j["samples"] = run.samples.size();
  if (run.t0) j["t0"] = *run.t0;
  if (run.escape_time) j["escape_time"] = *run.escape_time;
  j["c_escape"] = run.c_escape;
  j["horizon_exhausted"] = run.horizon_exhausted;
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_ode_run_json: cannot open " + path);
  out << j.dump(2) << "\n";
}

void write_manifest_json(const ExperimentResult& result, const ExperimentConfig& config,
                         const std::vector<std::string>& snapshot_files,
                         const std::string& path) {
  nlohmann::json j;
  j["config"] = config.serialize();
  j["dt"] = result.dt;
  j["launch_mismatch"] = result.launch_mismatch;
  j["exited"] = result.exited;
  j["exit_side"] = result.exit_side;
  j["boundary_abort"] = result.boundary_abort;
  j["horizon_exhausted"] = result.horizon_exhausted;
  j["end_time"] = result.end_time;
  j["snapshots"] = snapshot_files;
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_manifest_json: cannot open " + path);
  out << j.dump(2) << "\n";
}

}  // namespace gkdv
