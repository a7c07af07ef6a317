#include "robustsgd/robustness_check.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rsgd {

std::vector<double> default_probe_grid() {
  const int n = 8001;
  std::vector<double> grid(n);
  for (int i = 0; i < n; ++i) grid[i] = -20.0 + 40.0 * i / (n - 1);
  return grid;
}

ConditionReport check_robustness(const LossFunction& loss,
                                 const std::vector<double>& grid,
                                 const RobustnessTolerances& tol) {
  if (grid.size() < 3)
    throw std::invalid_argument("check_robustness: grid needs >= 3 points");

  ConditionReport report;
  report.tolerances = tol;
  report.grid_min = grid.front();
  report.grid_max = grid.back();
  report.grid_points = static_cast<int>(grid.size());

  std::vector<double> values(grid.size());
  for (size_t i = 0; i < grid.size(); ++i) values[i] = loss_value(loss, grid[i]);
  report.max_value = *std::max_element(values.begin(), values.end());

  // Condition 1 (upper bound): the loss flattens out as z -> -inf, so the
  // secant slope at the most negative probe must vanish.
  const double left_slope =
      (values[1] - values[0]) / (grid[1] - grid[0]);
  report.derivative_tail = std::abs(left_slope);
  report.bounded = report.derivative_tail <= tol.tail_slope;

  // Condition 3a (monotone decreasing).
  report.monotone = true;
  for (size_t i = 0; i + 1 < values.size(); ++i) {
    if (values[i + 1] - values[i] > tol.monotone_slack) {
      report.monotone = false;
      break;
    }
  }

  // Condition 3b (continuously differentiable): consecutive secant slopes of
  // a C1 function differ by O(r'' * h); a kink shows up as an O(1) jump.
  double max_jump = 0.0;
  for (size_t i = 0; i + 2 < values.size(); ++i) {
    const double s0 = (values[i + 1] - values[i]) / (grid[i + 1] - grid[i]);
    const double s1 =
        (values[i + 2] - values[i + 1]) / (grid[i + 2] - grid[i + 1]);
    max_jump = std::max(max_jump, std::abs(s1 - s0));
  }
  report.max_derivative_jump = max_jump;
  report.smooth = max_jump <= tol.derivative_jump;

  // Condition 2 (local lambda-strong convexity): smallest second central
  // difference over the probe ball, floored at zero. That is the largest
  // lambda for which r(z) - (lambda/2) z^2 stays convex on the ball.
  const int m = tol.convexity_points;
  const double lo = tol.convexity_center - tol.convexity_radius;
  const double hi = tol.convexity_center + tol.convexity_radius;
  const double h = (hi - lo) / (m - 1);
  double min_second = std::numeric_limits<double>::infinity();
  double prev2 = loss_value(loss, lo);
  double prev1 = loss_value(loss, lo + h);
  for (int i = 2; i < m; ++i) {
    const double cur = loss_value(loss, lo + h * i);
    min_second = std::min(min_second, (prev2 - 2.0 * prev1 + cur) / (h * h));
    prev2 = prev1;
    prev1 = cur;
  }
  report.local_convexity_lambda = std::max(0.0, min_second);

  return report;
}

}  // namespace rsgd
