#include "robustsgd/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "robustsgd/rng.hpp"

namespace rsgd {

namespace {

double instance_margin(const VectorXd& w, BiasMode bias_mode, int dimension,
                       const Instance& inst) {
  double score = sparse_dot(w, inst.features);
  if (bias_mode == BiasMode::augmented) score += w[dimension];
  return score * inst.label;
}

// lambda w + r'(z) y x, the analytic per-instance gradient.
VectorXd instance_gradient(const VectorXd& w, BiasMode bias_mode, int dimension,
                           const Instance& inst, const LossFunction& loss,
                           double lambda) {
  VectorXd grad = lambda * w;
  const double z = instance_margin(w, bias_mode, dimension, inst);
  const double slope = loss_derivative(loss, z) * inst.label;
  add_scaled(grad, inst.features, slope);
  if (bias_mode == BiasMode::augmented) grad[dimension] += slope;
  return grad;
}

VectorXd uniform_in_ball(const VectorXd& center, double radius, Rng& rng) {
  const Index d = center.size();
  VectorXd direction(d);
  for (Index i = 0; i < d; ++i) direction[i] = rng.normal();
  const double norm = direction.norm();
  if (norm == 0.0) return center;
  const double r =
      radius * std::pow(rng.next_double(), 1.0 / static_cast<double>(d));
  return center + (r / norm) * direction;
}

struct BallPair {
  VectorXd a;
  VectorXd b;
};

std::vector<BallPair> sample_pairs(const VectorXd& center, double gamma,
                                   int n_pairs, uint64_t seed) {
  if (!(gamma > 0.0)) throw std::invalid_argument("probe: gamma must be > 0");
  if (n_pairs < 1) throw std::invalid_argument("probe: n_pairs must be >= 1");
  Rng rng(seed);
  std::vector<BallPair> pairs;
  pairs.reserve(static_cast<size_t>(n_pairs));
  for (int i = 0; i < n_pairs; ++i) {
    VectorXd a = uniform_in_ball(center, gamma, rng);
    VectorXd b = uniform_in_ball(center, gamma, rng);
    pairs.push_back({std::move(a), std::move(b)});
  }
  return pairs;
}

// 2 [f(a) - f(b) - <grad f(b), a - b>] / ||a - b||^2
template <class ValueFn, class GradFn>
double bregman_ratio(const BallPair& pair, ValueFn&& value, GradFn&& gradient) {
  const VectorXd delta = pair.a - pair.b;
  const double dist_sq = delta.squaredNorm();
  if (dist_sq == 0.0) return std::numeric_limits<double>::quiet_NaN();
  const double gap =
      value(pair.a) - value(pair.b) - gradient(pair.b).dot(delta);
  return 2.0 * gap / dist_sq;
}

}  // namespace

ObjectiveFn make_objective(const Dataset& data, const LossFunction& loss,
                           double lambda, BiasMode bias_mode) {
  if (data.size() == 0) throw std::invalid_argument("make_objective: empty dataset");
  const int dimension = data.dimension;
  ObjectiveFn fn;
  fn.value = [&data, loss, lambda, bias_mode](const VectorXd& w) {
    return primal_objective(w, bias_mode, data, loss, lambda);
  };
  fn.gradient = [&data, loss, lambda, bias_mode, dimension](const VectorXd& w) {
    VectorXd grad = lambda * w;
    for (const auto& inst : data.instances) {
      const double z = instance_margin(w, bias_mode, dimension, inst);
      const double slope =
          loss_derivative(loss, z) * inst.label / data.size();
      add_scaled(grad, inst.features, slope);
      if (bias_mode == BiasMode::augmented) grad[dimension] += slope;
    }
    return grad;
  };
  return fn;
}

InstanceObjectiveFn make_instance_objectives(const Dataset& data,
                                             const LossFunction& loss,
                                             double lambda,
                                             BiasMode bias_mode) {
  if (data.size() == 0)
    throw std::invalid_argument("make_instance_objectives: empty dataset");
  const int dimension = data.dimension;
  InstanceObjectiveFn fn;
  fn.count = data.size();
  fn.value = [&data, loss, lambda, bias_mode, dimension](int i, const VectorXd& w) {
    const auto& inst = data.instances[static_cast<size_t>(i)];
    const double z = instance_margin(w, bias_mode, dimension, inst);
    return 0.5 * lambda * w.squaredNorm() + loss_value(loss, z);
  };
  fn.gradient = [&data, loss, lambda, bias_mode, dimension](int i,
                                                            const VectorXd& w) {
    return instance_gradient(w, bias_mode, dimension,
                             data.instances[static_cast<size_t>(i)], loss,
                             lambda);
  };
  return fn;
}

namespace {

std::pair<double, int> arsc_scan(const ObjectiveFn& objective,
                                 const std::vector<BallPair>& pairs) {
  double alpha_hat = std::numeric_limits<double>::infinity();
  int violations = 0;
  for (const auto& pair : pairs) {
    const double ratio = bregman_ratio(pair, objective.value, objective.gradient);
    if (std::isnan(ratio)) continue;
    alpha_hat = std::min(alpha_hat, ratio);
    if (ratio < 0.0) ++violations;
  }
  return {std::max(0.0, alpha_hat), violations};
}

}  // namespace

double probe_arsc(const ObjectiveFn& objective, const VectorXd& w_star,
                  double gamma, int n_pairs, uint64_t seed) {
  return arsc_scan(objective, sample_pairs(w_star, gamma, n_pairs, seed)).first;
}

double probe_arsm(const InstanceObjectiveFn& objectives, const VectorXd& w_star,
                  double gamma, int n_pairs, uint64_t seed) {
  const auto pairs = sample_pairs(w_star, gamma, n_pairs, seed);
  double beta_hat = -std::numeric_limits<double>::infinity();
  for (const auto& pair : pairs) {
    for (int i = 0; i < objectives.count; ++i) {
      const double ratio = bregman_ratio(
          pair, [&](const VectorXd& w) { return objectives.value(i, w); },
          [&](const VectorXd& w) { return objectives.gradient(i, w); });
      if (std::isnan(ratio)) continue;
      beta_hat = std::max(beta_hat, ratio);
    }
  }
  return beta_hat;
}

ConvexityProbeReport probe_convexity(const ObjectiveFn& objective,
                                     const InstanceObjectiveFn& objectives,
                                     const VectorXd& w_star, double gamma,
                                     int n_pairs, uint64_t seed) {
  ConvexityProbeReport report;
  report.center = w_star;
  report.radius = gamma;
  report.n_pairs = n_pairs;
  const auto [alpha_hat, violations] =
      arsc_scan(objective, sample_pairs(w_star, gamma, n_pairs, seed));
  report.alpha_hat = alpha_hat;
  report.violations = violations;
  report.beta_hat = probe_arsm(objectives, w_star, gamma, n_pairs, seed);
  return report;
}

RateReport estimate_rate(
    const std::vector<std::pair<int, double>>& final_objectives,
    double best_objective) {
  if (final_objectives.size() < 3)
    throw std::invalid_argument("estimate_rate: need >= 3 (T, objective) points");

  RateReport report;
  for (const auto& [T, objective] : final_objectives) {
    const double gap = objective - best_objective;
    report.gaps.emplace_back(T, gap);
    report.scaled.emplace_back(T, T * gap);
  }

  // least squares on (log T, log gap), positive gaps only
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int m = 0;
  for (const auto& [T, gap] : report.gaps) {
    if (!(gap > 0.0)) continue;
    const double x = std::log(static_cast<double>(T));
    const double y = std::log(gap);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++m;
  }
  if (m >= 2 && sxx * m - sx * sx > 0.0)
    report.slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
  return report;
}

std::vector<std::pair<double, double>> phi_curve(const LossFunction& loss,
                                                 double z_min, double z_max,
                                                 int n_points) {
  if (!(z_max < 1.0))
    throw std::invalid_argument("phi_curve: range must stay below z = 1");
  if (n_points < 1 || z_max < z_min)
    throw std::invalid_argument("phi_curve: bad range");
  std::vector<std::pair<double, double>> curve;
  curve.reserve(static_cast<size_t>(n_points));
  for (int i = 0; i < n_points; ++i) {
    const double z =
        n_points == 1 ? z_min
                      : z_min + (z_max - z_min) * i / (n_points - 1);
    curve.emplace_back(z, phi_weight(loss, z));
  }
  return curve;
}

bool phi_decreasing_into_outliers(
    const std::vector<std::pair<double, double>>& curve) {
  for (size_t i = 0; i + 1 < curve.size(); ++i) {
    const auto& [z0, phi0] = curve[i];
    const auto& [z1, phi1] = curve[i + 1];
    if (z1 > 0.0) continue;  // only the outlier side z < 0 is constrained
    if (!(phi1 > phi0)) return false;
  }
  return true;
}

double gradient_check(const LossFunction& loss, double lambda,
                      const VectorXd& w, const Instance& instance, double h) {
  if (!(h > 0.0)) throw std::invalid_argument("gradient_check: h must be > 0");
  const int dimension = static_cast<int>(w.size());
  const VectorXd analytic =
      instance_gradient(w, BiasMode::none, dimension, instance, loss, lambda);

  double max_rel = 0.0;
  VectorXd probe = w;
  for (Index j = 0; j < w.size(); ++j) {
    probe[j] = w[j] + h;
    const double up =
        0.5 * lambda * probe.squaredNorm() +
        loss_value(loss, instance_margin(probe, BiasMode::none, dimension, instance));
    probe[j] = w[j] - h;
    const double down =
        0.5 * lambda * probe.squaredNorm() +
        loss_value(loss, instance_margin(probe, BiasMode::none, dimension, instance));
    probe[j] = w[j];
    const double fd = (up - down) / (2.0 * h);
    const double rel = std::abs(analytic[j] - fd) / std::max(1.0, std::abs(analytic[j]));
    max_rel = std::max(max_rel, rel);
  }
  return max_rel;
}

double run_variance(const std::vector<double>& values) {
  if (values.size() < 2)
    throw std::invalid_argument("run_variance: need >= 2 values");
  const double n = static_cast<double>(values.size());
  double mean = 0.0;
  for (const double v : values) mean += v;
  mean /= n;
  double ss = 0.0;
  for (const double v : values) ss += (v - mean) * (v - mean);
  return ss / (n - 1.0);
}

}  // namespace rsgd
