#pragma once

#include <cmath>
#include <optional>
#include <string>

namespace rsgd {

// Margin losses r(z) with z = y * f_w(x). All five are non-increasing in z;
// the two robust ones (smooth_ramp, reversed_gompertz) are bounded, smooth
// and locally strongly convex, which is what tames label-noise outliers
// under stochastic gradient updates.
enum class LossKind { hinge, logistic, ramp, smooth_ramp, reversed_gompertz };

struct LossFunction {
  LossKind kind = LossKind::hinge;
  double s_star = 0.0;  // ramp / smooth_ramp plateau control, s* < 1
  double alpha = 0.0;   // smooth_ramp steepness, > 0
  double beta = 0.0;    // smooth_ramp shift
  double c_star = 0.0;  // reversed_gompertz steepness, > 0

  // Factories validate parameters up front; invalid parameters throw
  // std::invalid_argument before any evaluation can happen.
  static LossFunction hinge();
  static LossFunction logistic();
  static LossFunction ramp(double s_star);
  static LossFunction smooth_ramp(double s_star, double alpha, double beta);
  static LossFunction reversed_gompertz(double c_star);
};

// Scalar kernels. The tagged dispatchers below are what the rest of the
// library uses; the kernels are exposed for callers that already know the
// loss family.
namespace kernels {

template <class Scalar>
Scalar sigmoid(Scalar t) {
  if (t >= Scalar(0)) {
    const Scalar e = std::exp(-t);
    return Scalar(1) / (Scalar(1) + e);
  }
  const Scalar e = std::exp(t);
  return e / (Scalar(1) + e);
}

template <class Scalar>
Scalar smooth_ramp_value(Scalar s_star, Scalar alpha, Scalar beta, Scalar z) {
  return (Scalar(1) - s_star) * sigmoid(-alpha * (z + beta));
}

template <class Scalar>
Scalar smooth_ramp_derivative(Scalar s_star, Scalar alpha, Scalar beta,
                              Scalar z) {
  const Scalar u = alpha * (z + beta);
  return -(Scalar(1) - s_star) * alpha * sigmoid(u) * sigmoid(-u);
}

template <class Scalar>
Scalar reversed_gompertz_value(Scalar c_star, Scalar z) {
  return std::exp(-std::exp(c_star * z));
}

template <class Scalar>
Scalar reversed_gompertz_derivative(Scalar c_star, Scalar z) {
  const Scalar u = c_star * z;
  return -c_star * std::exp(u - std::exp(u));
}

}  // namespace kernels

double loss_value(const LossFunction& loss, double z);

// Analytic derivative r'(z); <= 0 everywhere for all five losses. At the
// hinge/ramp kinks the chosen subgradient is the one used when an update
// lands exactly on the kink: 0 at z = 1, -1 at z = s*.
double loss_derivative(const LossFunction& loss, double z);

// Plateau height for the bounded losses, nullopt for hinge/logistic.
std::optional<double> loss_upper_bound(const LossFunction& loss);

bool is_robust(const LossFunction& loss);

// Weighted parameter phi(z) = -r'(z)/(1 - z) for the robust losses: the
// per-instance influence on an update. Decays to 0 as a misclassified
// score deepens, which is the robustness mechanism. Requires z != 1.
double phi_weight(const LossFunction& loss, double z);

std::string loss_name(const LossFunction& loss);

}  // namespace rsgd
