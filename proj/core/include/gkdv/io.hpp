#pragma once

#include <map>
#include <string>
#include <vector>

#include "gkdv/adiabatic.hpp"
#include "gkdv/experiment.hpp"
#include "gkdv/linops.hpp"
#include "gkdv/modulation.hpp"

namespace gkdv {

// Every physical and numerical knob of a run, in one flat record.  Serialized
// as diff-friendly "key = value" text grouped in [sections]; round-trips
// losslessly.
struct ExperimentConfig {
  // [model]
  int m = 3;
  double lambda = 0.45;
  double eps = 0.05;
  double gamma = 1.0;
  // [pde]
  double half_length = 200.0;
  int n = 4096;
  double dt = 0.0;
  double dealias_fraction = 2.0 / 3.0;
  double cfl_safety = 0.3;
  // [run]
  double x0 = 0.0;
  double c0 = 1.0;
  double exit_x = 0.0;
  double horizon = 0.0;
  double snapshot_dt = 1.0;
  double monitor_dt = 0.25;
  double boundary_strip = 10.0;
  double boundary_tol = 1e-5;
  // [ode]
  double ode_dt = 0.0;
  double ode_kappa = 0.0;
  bool ode_paper_start = false;
  double ode_horizon_factor = 12.0;

  ModelParams model_params() const;
  SolverConfig solver_config() const;
  RunControls run_controls() const;
  OdeConfig ode_config() const;

  std::string serialize() const;
  static ExperimentConfig parse(const std::string& text);
  static ExperimentConfig load(const std::string& path);
  void save(const std::string& path) const;
};

void write_field_csv(const FieldState& state, const ModelParams& params,
                     const std::string& path);

void write_regime_report_json(const RegimeReport& report, const std::string& path);

void write_residual_report_json(const std::vector<IdentityResidual>& residuals,
                                const std::string& grid_desc, const std::string& path);

void write_ode_run_json(const OdeRun& run, const std::string& path);

void write_manifest_json(const ExperimentResult& result, const ExperimentConfig& config,
                         const std::vector<std::string>& snapshot_files,
                         const std::string& path);

}  // namespace gkdv
