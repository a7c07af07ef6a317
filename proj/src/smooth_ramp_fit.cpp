#include "robustsgd/smooth_ramp_fit.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "robustsgd/losses.hpp"

namespace rsgd {

std::vector<double> default_fit_grid(double s_star, int n_points) {
  const double lo = s_star - 2.0;
  const double hi = 3.0;
  std::vector<double> grid(static_cast<size_t>(n_points));
  for (int i = 0; i < n_points; ++i)
    grid[static_cast<size_t>(i)] = lo + (hi - lo) * i / (n_points - 1);
  return grid;
}

namespace {

double ramp_value(double s_star, double z) {
  if (z >= 1.0) return 0.0;
  if (z >= s_star) return 1.0 - z;
  return 1.0 - s_star;
}

double sq_diff_sum(double s_star, double alpha, double beta,
                   const std::vector<double>& grid,
                   const std::vector<double>& ramp) {
  double sum = 0.0;
  for (size_t i = 0; i < grid.size(); ++i) {
    const double d =
        kernels::smooth_ramp_value(s_star, alpha, beta, grid[i]) - ramp[i];
    sum += d * d;
  }
  return sum;
}

}  // namespace

SmoothRampFit fit_smooth_ramp(double s_star, const std::vector<double>& grid) {
  if (s_star >= 1.0) throw std::invalid_argument("fit_smooth_ramp: s* must be < 1");
  std::vector<double> distinct(grid);
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  if (distinct.size() < 2)
    throw std::invalid_argument("fit_smooth_ramp: grid needs >= 2 distinct points");

  std::vector<double> ramp(grid.size());
  for (size_t i = 0; i < grid.size(); ++i) ramp[i] = ramp_value(s_star, grid[i]);

  SmoothRampFit best{0.0, 0.0, std::numeric_limits<double>::infinity()};
  auto consider = [&](double alpha, double beta) {
    if (alpha <= 0.0) return;
    const double v = sq_diff_sum(s_star, alpha, beta, grid, ramp);
    if (v < best.objective) best = {alpha, beta, v};
  };

  for (int ia = 0; ia <= 45; ++ia) {
    const double alpha = 0.5 + 0.1 * ia;
    for (int ib = 0; ib <= 200; ++ib) consider(alpha, -1.0 + 0.01 * ib);
  }

  // two refinement rounds, each scanning +-1 coarse step at 10x resolution
  for (const auto& [da, db] : {std::pair{0.1, 0.01}, std::pair{0.01, 0.001}}) {
    const SmoothRampFit center = best;
    for (int ia = -10; ia <= 10; ++ia)
      for (int ib = -10; ib <= 10; ++ib)
        consider(center.alpha + da * ia / 10.0, center.beta + db * ib / 10.0);
  }
  return best;
}

}  // namespace rsgd
