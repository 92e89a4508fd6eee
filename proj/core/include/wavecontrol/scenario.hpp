#pragma once

#include <iosfwd>
#include <string>

#include "wavecontrol/run_config.hpp"

namespace wavecontrol {

struct ScenarioOutcome {
  RunMode mode = RunMode::Baseline;
  double uncontrolled_motion = 0.0;
  double controlled_motion = 0.0;
  double no_obstacle_ratio = 0.0;
  Termination termination = Termination::Converged;
  std::string summary;  // contents of summary.txt
};

/// Executes the configured scenario and writes summary.txt, history.csv, mesh.txt,
/// field.csv and, depending on the mode, control_u.csv, control_v.csv and eta.csv into
/// cfg.output_dir (created if needed).
ScenarioOutcome run_scenario(const RunConfig& cfg);

/// Adjoint-vs-FD check at the configured point; writes gradient_check.csv.
GradientCheckReport run_gradient_check(const RunConfig& cfg);

/// CSV "omega,h0,k,lambda,residual" for every depth, over the omega grid and the
/// optional extra periods.
void write_dispersion_table(const RunConfig& cfg, std::ostream& out);

}  // namespace wavecontrol
