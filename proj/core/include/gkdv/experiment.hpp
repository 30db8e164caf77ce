#pragma once

#include <string>
#include <vector>

#include "gkdv/adiabatic.hpp"
#include "gkdv/modulation.hpp"
#include "gkdv/pde.hpp"

namespace gkdv {

struct RunControls {
  double x0 = 0.0;      // launch center; 0 picks -3/(gamma eps)
  double c0 = 1.0;      // launch scaling
  double exit_x = 0.0;  // |center| beyond which the run ends; 0 picks 0.75|x0|
  double horizon = 0.0;  // max simulated time; 0 picks 30|x0|
  double snapshot_dt = 1.0;
  double monitor_dt = 0.25;
  double boundary_strip = 10.0;
  double boundary_tol = 1e-5;  // tail-mass fraction triggering the abort
};

struct ExperimentResult {
  ModelParams params;
  SolverConfig solver_config;
  RunControls controls;
  double dt = 0.0;
  double launch_mismatch = 0.0;  // a(eps x0) - 1
  std::vector<FieldState> snapshots;
  InvariantTrace trace;
  std::vector<ModulationSample> mod_track;
  bool exited = false;
  int exit_side = 0;  // +1 right, -1 left
  bool boundary_abort = false;
  bool horizon_exhausted = false;
  double end_time = 0.0;
};

// Launch u0 = Q_{c0}(x - x0) deep in the a~1 region and integrate until the
// fitted center leaves [-exit_x, exit_x], the boundary strip fills, or the
// horizon runs out. Snapshots and the invariant trace are collected on the way;
// the modulation track is fitted at the end.
ExperimentResult run_experiment(const ModelParams& params, SolverConfig solver_config,
                                RunControls controls = {});

}  // namespace gkdv
