#pragma once

#include <vector>

#include "robustsgd/losses.hpp"

namespace rsgd {

struct RobustnessTolerances {
  double derivative_jump = 1e-2;  // smoothness: max secant-slope jump
  double tail_slope = 1e-4;       // boundedness: |slope| at the left end
  double monotone_slack = 1e-12;  // allowed per-step increase
  double convexity_center = 1.0;  // ball for the local strong-convexity probe
  double convexity_radius = 0.5;
  int convexity_points = 201;
};

// Numerical report on the three robustness conditions: bounded tail,
// local strong convexity, smooth monotone decrease. The report records the
// probe grid and tolerances it was produced with; failures are recorded,
// never thrown.
struct ConditionReport {
  bool bounded = false;
  double max_value = 0.0;        // boundedness witness: max r on the grid
  double derivative_tail = 0.0;  // |finite-difference r'| at the left end
  double local_convexity_lambda = 0.0;
  bool monotone = false;
  bool smooth = false;
  double max_derivative_jump = 0.0;
  double grid_min = 0.0;
  double grid_max = 0.0;
  int grid_points = 0;
  RobustnessTolerances tolerances;

  bool all_pass() const {
    return bounded && monotone && smooth && local_convexity_lambda > 0.0;
  }
};

// 8001 uniform points on [-20, 20]. Fine enough that the secant-slope jump
// of every loss in the family stays below the 1e-2 tolerance while the
// hinge/ramp kinks still register as O(1) jumps.
std::vector<double> default_probe_grid();

ConditionReport check_robustness(const LossFunction& loss,
                                 const std::vector<double>& grid,
                                 const RobustnessTolerances& tol = {});

}  // namespace rsgd
