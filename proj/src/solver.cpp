#include "robustsgd/solver.hpp"

#include <chrono>
#include <cmath>
#include <numeric>

#include "robustsgd/rng.hpp"

namespace rsgd {

namespace {

constexpr double kWeightGuard = 1e15;

void validate_config(const SolverConfig& config) {
  if (!(config.eta > 0.0)) throw std::invalid_argument("solver: eta must be > 0");
  if (!(config.lambda >= 0.0))
    throw std::invalid_argument("solver: lambda must be >= 0");
  if (config.max_epochs < 1)
    throw std::invalid_argument("solver: max_epochs must be >= 1");
  if (config.eta_schedule == EtaSchedule::inverse_t && !(config.lambda > 0.0))
    throw std::invalid_argument("solver: inverse_t schedule needs lambda > 0");
}

int weight_length(const Dataset& data, BiasMode bias_mode) {
  return data.dimension + (bias_mode == BiasMode::augmented ? 1 : 0);
}

double margin_score(const VectorXd& w, BiasMode bias_mode, int dimension,
                    const Instance& inst) {
  double score = sparse_dot(w, inst.features);
  if (bias_mode == BiasMode::augmented) score += w[dimension];
  return score * inst.label;
}

void check_finite(const VectorXd& w, int epoch, long step) {
  for (Index i = 0; i < w.size(); ++i) {
    const double v = w[i];
    if (!std::isfinite(v) || std::abs(v) > kWeightGuard)
      throw DivergenceError(epoch, step);
  }
}

double error_pct(const VectorXd& w, BiasMode bias_mode, int dimension,
                 const Dataset& data) {
  int wrong = 0;
  for (const auto& inst : data.instances) {
    double score = sparse_dot(w, inst.features);
    if (bias_mode == BiasMode::augmented) score += w[dimension];
    const int pred = score >= 0.0 ? 1 : -1;
    if (pred != inst.label) ++wrong;
  }
  return 100.0 * wrong / data.size();
}

EpochRecord evaluate_epoch(int epoch, const VectorXd& w, BiasMode bias_mode,
                           int dimension, const Dataset& train,
                           const LossFunction& loss, double lambda,
                           const Dataset* eval_set, double elapsed) {
  EpochRecord rec;
  rec.epoch = epoch;
  rec.objective = primal_objective(w, bias_mode, train, loss, lambda);
  rec.train_error_pct = error_pct(w, bias_mode, dimension, train);
  if (eval_set && eval_set->size() > 0)
    rec.test_error_pct = error_pct(w, bias_mode, dimension, *eval_set);
  rec.elapsed_seconds = elapsed;
  return rec;
}

// Shared epoch loop for the constant-rate SGD variants. FactorFn maps the
// margin score to the scalar multiplying eta * y * x in the update (the
// negated loss derivative); only that factor differs between SGDRL and the
// baseline losses.
template <class FactorFn>
TrainResult run_epoch_sgd(const Dataset& train, const LossFunction& loss,
                          const SolverConfig& config, const Dataset* eval_set,
                          FactorFn&& factor_fn, bool polyak_average) {
  validate_config(config);
  if (train.size() == 0) throw std::invalid_argument("solver: empty training set");

  const int dimension = train.dimension;
  const BiasMode bias = config.bias_mode;
  const int len = weight_length(train, bias);
  const int n = train.size();

  VectorXd w = VectorXd::Zero(len);
  VectorXd epoch_sum = VectorXd::Zero(len);   // option B accumulator
  VectorXd polyak_sum = VectorXd::Zero(len);  // ASGD accumulator
  long total_steps = 0;

  std::vector<int> order(static_cast<size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  Rng rng(config.seed);

  const auto t_start = std::chrono::steady_clock::now();
  auto elapsed = [&] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         t_start)
        .count();
  };

  TrainResult result;
  const double eta = config.eta;
  const double shrink = 1.0 - eta * config.lambda;

  for (int epoch = 1; epoch <= config.max_epochs; ++epoch) {
    fisher_yates(order, rng);
    if (config.average_option == AverageOption::B) epoch_sum.setZero();

    for (int t = 0; t < n; ++t) {
      const Instance& inst = train.instances[static_cast<size_t>(order[t])];
      const double g = margin_score(w, bias, dimension, inst);
      if (!std::isfinite(g)) throw DivergenceError(epoch, t + 1);

      const double factor = factor_fn(loss, g);
      w *= shrink;
      if (factor != 0.0) {
        const double step = eta * factor * inst.label;
        add_scaled(w, inst.features, step);
        if (bias == BiasMode::augmented) w[dimension] += step;
        for (const auto& [idx, val] : inst.features.entries) {
          const double v = w[idx - 1];
          if (!std::isfinite(v) || std::abs(v) > kWeightGuard)
            throw DivergenceError(epoch, t + 1);
        }
      }
      ++total_steps;
      if (config.average_option == AverageOption::B) epoch_sum += w;
      if (polyak_average) polyak_sum += w;
    }

    if (config.average_option == AverageOption::B) w = epoch_sum / n;
    check_finite(w, epoch, n);

    if (polyak_average) {
      const VectorXd avg = polyak_sum / static_cast<double>(total_steps);
      result.trace.push_back(evaluate_epoch(epoch, avg, bias, dimension, train,
                                            loss, config.lambda, eval_set,
                                            elapsed()));
    } else {
      result.trace.push_back(evaluate_epoch(epoch, w, bias, dimension, train,
                                            loss, config.lambda, eval_set,
                                            elapsed()));
    }
  }

  result.model.weights =
      polyak_average ? VectorXd(polyak_sum / static_cast<double>(total_steps))
                     : w;
  result.model.bias_mode = bias;
  result.model.loss = loss;
  result.model.config = config;
  result.model.dimension = dimension;
  return result;
}

}  // namespace

double sgdrl_update_factor(const LossFunction& loss, double g) {
  switch (loss.kind) {
    case LossKind::smooth_ramp: {
      // Update I: (1-s*) alpha f / (1+f)^2 with f = e^{alpha (g+beta)}.
      // For u > 0 the same ratio is evaluated as e^{-u}/(1+e^{-u})^2 so the
      // exponential never overflows.
      const double u = loss.alpha * (g + loss.beta);
      const double f = std::exp(u > 0.0 ? -u : u);
      return (1.0 - loss.s_star) * loss.alpha * f / ((1.0 + f) * (1.0 + f));
    }
    case LossKind::reversed_gompertz: {
      // Update II: c* e^{f(c*, g)} with f = c* g - e^{c* g}.
      const double u = loss.c_star * g;
      return loss.c_star * std::exp(u - std::exp(u));
    }
    default:
      throw std::invalid_argument(
          "sgdrl_update_factor: loss must be smooth_ramp or reversed_gompertz");
  }
}

TrainResult train_sgdrl(const Dataset& train, const LossFunction& loss,
                        const SolverConfig& config, const Dataset* eval_set) {
  if (!is_robust(loss))
    throw std::invalid_argument(
        "train_sgdrl: loss must be smooth_ramp (Update I) or reversed_gompertz "
        "(Update II)");
  return run_epoch_sgd(
      train, loss, config, eval_set,
      [](const LossFunction& l, double g) { return sgdrl_update_factor(l, g); },
      /*polyak_average=*/false);
}

TrainResult train_sgd_generic(const Dataset& train, const LossFunction& loss,
                              const SolverConfig& config,
                              const Dataset* eval_set) {
  if (is_robust(loss))
    throw std::invalid_argument(
        "train_sgd_generic: use train_sgdrl for the robust losses");
  return run_epoch_sgd(
      train, loss, config, eval_set,
      [](const LossFunction& l, double g) { return -loss_derivative(l, g); },
      /*polyak_average=*/false);
}

TrainResult train_asgd(const Dataset& train, const LossFunction& loss,
                       const SolverConfig& config, const Dataset* eval_set) {
  if (loss.kind != LossKind::logistic)
    throw std::invalid_argument("train_asgd: loss must be logistic");
  return run_epoch_sgd(
      train, loss, config, eval_set,
      [](const LossFunction& l, double g) { return -loss_derivative(l, g); },
      /*polyak_average=*/true);
}

TrainResult train_pegasos(const Dataset& train, const SolverConfig& config,
                          const Dataset* eval_set) {
  validate_config(config);
  if (!(config.lambda > 0.0))
    throw std::invalid_argument("train_pegasos: lambda must be > 0");
  if (train.size() == 0)
    throw std::invalid_argument("train_pegasos: empty training set");

  const LossFunction loss = LossFunction::hinge();
  const int dimension = train.dimension;
  const BiasMode bias = config.bias_mode;
  const int len = weight_length(train, bias);
  const int n = train.size();
  const double lambda = config.lambda;
  const double radius = 1.0 / std::sqrt(lambda);

  VectorXd w = VectorXd::Zero(len);
  Rng rng(config.seed);

  const auto t_start = std::chrono::steady_clock::now();
  auto elapsed = [&] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         t_start)
        .count();
  };

  TrainResult result;
  long t = 0;
  for (int epoch = 1; epoch <= config.max_epochs; ++epoch) {
    for (int step = 0; step < n; ++step) {
      ++t;
      const Instance& inst =
          train.instances[rng.uniform_below(static_cast<uint64_t>(n))];
      const double eta_t = 1.0 / (lambda * static_cast<double>(t));
      const double g = margin_score(w, bias, dimension, inst);
      if (!std::isfinite(g)) throw DivergenceError(epoch, step + 1);

      w *= 1.0 - eta_t * lambda;
      if (g < 1.0) {
        const double delta = eta_t * inst.label;
        add_scaled(w, inst.features, delta);
        if (bias == BiasMode::augmented) w[dimension] += delta;
      }
      const double norm = w.norm();
      if (norm > radius) w *= radius / norm;
    }
    check_finite(w, epoch, n);
    result.trace.push_back(evaluate_epoch(epoch, w, bias, dimension, train,
                                          loss, lambda, eval_set, elapsed()));
  }

  result.model.weights = w;
  result.model.bias_mode = bias;
  result.model.loss = loss;
  result.model.config = config;
  result.model.dimension = dimension;
  return result;
}

double predict_score(const Model& model, const SparseVector& x) {
  double score = sparse_dot(model.weights, x);
  if (model.bias_mode == BiasMode::augmented) score += model.weights[model.dimension];
  return score;
}

int classify(const Model& model, const SparseVector& x) {
  return predict_score(model, x) >= 0.0 ? 1 : -1;
}

double primal_objective(const VectorXd& weights, BiasMode bias_mode,
                        const Dataset& data, const LossFunction& loss,
                        double lambda) {
  if (data.size() == 0)
    throw std::invalid_argument("primal_objective: empty dataset");
  double loss_sum = 0.0;
  for (const auto& inst : data.instances) {
    double score = sparse_dot(weights, inst.features);
    if (bias_mode == BiasMode::augmented) score += weights[data.dimension];
    loss_sum += loss_value(loss, score * inst.label);
  }
  return 0.5 * lambda * weights.squaredNorm() + loss_sum / data.size();
}

double primal_objective(const Model& model, const Dataset& data,
                        const LossFunction& loss, double lambda) {
  return primal_objective(model.weights, model.bias_mode, data, loss, lambda);
}

double test_error_rate(const Model& model, const Dataset& test) {
  if (test.size() == 0)
    throw std::invalid_argument("test_error_rate: empty dataset");
  return error_pct(model.weights, model.bias_mode, model.dimension, test);
}

}  // namespace rsgd
