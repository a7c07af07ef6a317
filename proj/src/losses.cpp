#include "robustsgd/losses.hpp"

#include <cmath>
#include <stdexcept>

namespace rsgd {

namespace {

void require(bool ok, const char* message) {
  if (!ok) throw std::invalid_argument(message);
}

}  // namespace

LossFunction LossFunction::hinge() { return {LossKind::hinge}; }

LossFunction LossFunction::logistic() { return {LossKind::logistic}; }

LossFunction LossFunction::ramp(double s_star) {
  require(s_star < 1.0, "ramp: s* must be < 1");
  LossFunction loss{LossKind::ramp};
  loss.s_star = s_star;
  return loss;
}

LossFunction LossFunction::smooth_ramp(double s_star, double alpha,
                                       double beta) {
  require(s_star < 1.0, "smooth_ramp: s* must be < 1");
  require(alpha > 0.0, "smooth_ramp: alpha must be > 0");
  require(std::isfinite(beta), "smooth_ramp: beta must be finite");
  LossFunction loss{LossKind::smooth_ramp};
  loss.s_star = s_star;
  loss.alpha = alpha;
  loss.beta = beta;
  return loss;
}

LossFunction LossFunction::reversed_gompertz(double c_star) {
  require(c_star > 0.0, "reversed_gompertz: c* must be > 0");
  LossFunction loss{LossKind::reversed_gompertz};
  loss.c_star = c_star;
  return loss;
}

double loss_value(const LossFunction& loss, double z) {
  switch (loss.kind) {
    case LossKind::hinge:
      return z >= 1.0 ? 0.0 : 1.0 - z;
    case LossKind::logistic:
      // log(1 + e^-z), written to avoid overflow on either side
      return z >= 0.0 ? std::log1p(std::exp(-z)) : -z + std::log1p(std::exp(z));
    case LossKind::ramp:
      if (z >= 1.0) return 0.0;
      if (z >= loss.s_star) return 1.0 - z;
      return 1.0 - loss.s_star;
    case LossKind::smooth_ramp:
      return kernels::smooth_ramp_value(loss.s_star, loss.alpha, loss.beta, z);
    case LossKind::reversed_gompertz:
      return kernels::reversed_gompertz_value(loss.c_star, z);
  }
  return 0.0;
}

double loss_derivative(const LossFunction& loss, double z) {
  switch (loss.kind) {
    case LossKind::hinge:
      return z >= 1.0 ? 0.0 : -1.0;
    case LossKind::logistic:
      return -kernels::sigmoid(-z);
    case LossKind::ramp:
      if (z >= 1.0) return 0.0;
      if (z >= loss.s_star) return -1.0;
      return 0.0;
    case LossKind::smooth_ramp:
      return kernels::smooth_ramp_derivative(loss.s_star, loss.alpha,
                                             loss.beta, z);
    case LossKind::reversed_gompertz:
      return kernels::reversed_gompertz_derivative(loss.c_star, z);
  }
  return 0.0;
}

std::optional<double> loss_upper_bound(const LossFunction& loss) {
  switch (loss.kind) {
    case LossKind::ramp:
    case LossKind::smooth_ramp:
      return 1.0 - loss.s_star;
    case LossKind::reversed_gompertz:
      return 1.0;
    case LossKind::hinge:
    case LossKind::logistic:
      return std::nullopt;
  }
  return std::nullopt;
}

bool is_robust(const LossFunction& loss) {
  return loss.kind == LossKind::smooth_ramp ||
         loss.kind == LossKind::reversed_gompertz;
}

double phi_weight(const LossFunction& loss, double z) {
  require(is_robust(loss), "phi_weight: loss must be smooth_ramp or reversed_gompertz");
  if (z == 1.0) throw std::domain_error("phi_weight: singular at z = 1");
  return -loss_derivative(loss, z) / (1.0 - z);
}

std::string loss_name(const LossFunction& loss) {
  switch (loss.kind) {
    case LossKind::hinge:
      return "hinge";
    case LossKind::logistic:
      return "logistic";
    case LossKind::ramp:
      return "ramp";
    case LossKind::smooth_ramp:
      return "smooth_ramp";
    case LossKind::reversed_gompertz:
      return "reversed_gompertz";
  }
  return "unknown";
}

}  // namespace rsgd
