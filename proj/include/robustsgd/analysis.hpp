#pragma once

#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "robustsgd/dataset.hpp"
#include "robustsgd/losses.hpp"
#include "robustsgd/solver.hpp"
#include "robustsgd/types.hpp"

namespace rsgd {

// Objective handles used by the convexity probes; value and gradient of the
// full objective G, and of the per-instance objectives g_i.
struct ObjectiveFn {
  std::function<double(const VectorXd&)> value;
  std::function<VectorXd(const VectorXd&)> gradient;
};

struct InstanceObjectiveFn {
  int count = 0;
  std::function<double(int, const VectorXd&)> value;
  std::function<VectorXd(int, const VectorXd&)> gradient;
};

// Builds G(w) = (lambda/2)||w||^2 + mean_i r(z_i) and its analytic gradient
// over the dataset. bias_mode augmented expects w of length dimension + 1.
ObjectiveFn make_objective(const Dataset& data, const LossFunction& loss,
                           double lambda, BiasMode bias_mode);
InstanceObjectiveFn make_instance_objectives(const Dataset& data,
                                             const LossFunction& loss,
                                             double lambda, BiasMode bias_mode);

struct ConvexityProbeReport {
  VectorXd center;
  double radius = 0.0;
  int n_pairs = 0;
  double alpha_hat = 0.0;  // empirical restricted strong-convexity modulus
  double beta_hat = 0.0;   // empirical restricted smoothness modulus
  int violations = 0;      // sampled pairs with a negative Bregman gap of G
};

// Samples n_pairs (w, w~) uniformly in the ball B(w_star, gamma) and returns
// the smallest Bregman ratio 2 [G(w) - G(w~) - <grad G(w~), w - w~>] / ||w - w~||^2,
// floored at 0. Pairs are drawn as a sequential stream, so a larger n_pairs
// extends (never replaces) the sample of a smaller one with the same seed.
double probe_arsc(const ObjectiveFn& objective, const VectorXd& w_star,
                  double gamma, int n_pairs, uint64_t seed);

// Symmetric probe with max in place of min, over pairs and instances.
double probe_arsm(const InstanceObjectiveFn& objectives, const VectorXd& w_star,
                  double gamma, int n_pairs, uint64_t seed);

// Both probes over one shared pair sample.
ConvexityProbeReport probe_convexity(const ObjectiveFn& objective,
                                     const InstanceObjectiveFn& objectives,
                                     const VectorXd& w_star, double gamma,
                                     int n_pairs, uint64_t seed);

struct RateReport {
  std::vector<std::pair<int, double>> gaps;    // (T, G(w^T) - G_best)
  std::vector<std::pair<int, double>> scaled;  // (T, T * gap)
  double slope = 0.0;  // log-log least-squares decay exponent
};

// Gap decay against a supplied best-objective proxy. Needs >= 3 distinct T;
// non-positive gaps are excluded from the log-log fit.
RateReport estimate_rate(
    const std::vector<std::pair<int, double>>& final_objectives,
    double best_objective);

std::vector<std::pair<double, double>> phi_curve(const LossFunction& loss,
                                                 double z_min, double z_max,
                                                 int n_points);

// True when phi decreases strictly as z decreases over the curve's z < 0
// range (equivalently: increases with z).
bool phi_decreasing_into_outliers(
    const std::vector<std::pair<double, double>>& curve);

// Max over coordinates of |analytic - central difference| / max(1, |analytic|)
// for the per-instance gradient lambda w + r'(z) y x at one instance.
double gradient_check(const LossFunction& loss, double lambda,
                      const VectorXd& w, const Instance& instance, double h);

// Unbiased sample variance; needs >= 2 values.
double run_variance(const std::vector<double>& values);

}  // namespace rsgd
