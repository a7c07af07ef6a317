#pragma once

#include <vector>

namespace rsgd {

struct SmoothRampFit {
  double alpha = 0.0;
  double beta = 0.0;
  double objective = 0.0;  // sum of squared differences over the probe grid
};

// Probe grid for the fit: uniform on [s* - 2, 3].
std::vector<double> default_fit_grid(double s_star, int n_points = 501);

// Picks (alpha, beta) minimizing the summed squared difference between the
// smooth ramp and the ramp with the same s* over the probe grid. Exhaustive
// coarse search (alpha 0.5..5 step 0.1, beta -1..1 step 0.01) followed by
// two local refinement rounds, so the result is deterministic.
SmoothRampFit fit_smooth_ramp(double s_star, const std::vector<double>& grid);

}  // namespace rsgd
