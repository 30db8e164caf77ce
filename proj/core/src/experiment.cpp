#include "gkdv/experiment.hpp"

#include <algorithm>
#include <cmath>

namespace gkdv {

ExperimentResult run_experiment(const ModelParams& params, SolverConfig solver_config,
                                RunControls controls) {
  if (controls.x0 == 0.0) controls.x0 = -3.0 / (params.potential.gamma * params.eps);
  if (controls.exit_x <= 0.0) controls.exit_x = 0.75 * std::fabs(controls.x0);
  if (controls.horizon <= 0.0) controls.horizon = 30.0 * std::fabs(controls.x0);

  ExperimentResult res;
  res.params = params;
  res.controls = controls;

  const Medium medium = Medium::ramp(params.potential, params.eps);
  GkdvSolver solver(solver_config, params.m, params.lambda, medium);
  res.solver_config = solver_config;
  res.dt = solver.dt();
  res.launch_mismatch = medium.a_at(controls.x0, 0) - 1.0;

  solver.set_initial([&](double x) {
    const double y = x - controls.x0;
    return std::fabs(y) < 50.0 / std::sqrt(controls.c0)
               ? soliton_qc(params.m, controls.c0, y)
               : 0.0;
  });

  const long steps_per_monitor =
      std::max<long>(1, std::lround(controls.monitor_dt / solver.dt()));
  const long steps_per_snapshot =
      std::max<long>(1, std::lround(controls.snapshot_dt / solver.dt()));

  res.snapshots.push_back(solver.state());
  res.trace.rows.push_back(solver.monitors());

  // the exit test arms once the center has entered the interaction window
  bool entered = std::fabs(controls.x0) < controls.exit_x;
  long step = 0;
  while (solver.time() < controls.horizon) {
    solver.step();
    ++step;
    if (step % steps_per_monitor == 0) res.trace.rows.push_back(solver.monitors());
    if (step % steps_per_snapshot == 0) {
      res.snapshots.push_back(solver.state());
      if (solver.boundary_tail_fraction(controls.boundary_strip) > controls.boundary_tol) {
        res.boundary_abort = true;
        break;
      }
      const auto peak = locate_peak(res.snapshots.back());
      if (peak) {
        if (!entered && std::fabs(peak->first) < 0.9 * controls.exit_x) entered = true;
        if (entered && std::fabs(peak->first) > controls.exit_x) {
          res.exited = true;
          res.exit_side = peak->first > 0.0 ? 1 : -1;
          break;
        }
      }
    }
  }
  res.horizon_exhausted = !res.exited && !res.boundary_abort;
  res.end_time = solver.time();
  res.trace.finalize();
  res.mod_track = track_soliton(res.snapshots, params.m, medium);
  return res;
}

}  // namespace gkdv
