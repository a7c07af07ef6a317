#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "robustsgd/dataset.hpp"
#include "robustsgd/losses.hpp"
#include "robustsgd/types.hpp"

namespace rsgd {

enum class AverageOption { A, B };  // A: last iterate, B: within-epoch average
enum class BiasMode { augmented, none };
enum class EtaSchedule { constant, inverse_t };

struct SolverConfig {
  double lambda = 1e-4;
  double eta = 0.1;
  int max_epochs = 15;
  AverageOption average_option = AverageOption::A;
  uint64_t seed = 0;
  BiasMode bias_mode = BiasMode::augmented;
  EtaSchedule eta_schedule = EtaSchedule::constant;
};

struct Model {
  VectorXd weights;  // length dimension, +1 trailing bias weight if augmented
  BiasMode bias_mode = BiasMode::augmented;
  LossFunction loss;
  SolverConfig config;
  int dimension = 0;
};

struct EpochRecord {
  int epoch = 0;
  double objective = 0.0;
  double train_error_pct = 0.0;
  std::optional<double> test_error_pct;
  double elapsed_seconds = 0.0;
};

using EpochTrace = std::vector<EpochRecord>;

struct TrainResult {
  Model model;
  EpochTrace trace;
};

struct DivergenceError : std::runtime_error {
  DivergenceError(int epoch, long step)
      : std::runtime_error("weights diverged at epoch " + std::to_string(epoch) +
                           ", step " + std::to_string(step)),
        epoch(epoch),
        step(step) {}
  int epoch;
  long step;
};

// Gradient factor of Algorithm 1, i.e. the scalar multiplying x*y inside the
// bracket, with flipped sign: Update I gives (1-s*) alpha f/(1+f)^2 with
// f = e^{alpha (g+beta)}, Update II gives c* e^{c* g - e^{c* g}}. Kept as a
// literal transcription; it must agree with -loss_derivative(g) to 1e-12
// relative, which the tests pin.
double sgdrl_update_factor(const LossFunction& loss, double g);

// Algorithm: start from w = 0, reshuffle each epoch, visit all n instances
// sequentially, apply the robust-loss update; the epoch iterate is the last
// step (option A) or the within-epoch average (option B) and seeds the next
// epoch. Deterministic per config.seed.
TrainResult train_sgdrl(const Dataset& train, const LossFunction& loss,
                        const SolverConfig& config,
                        const Dataset* eval_set = nullptr);

// Same loop with the subgradient of a baseline loss (hinge, logistic, ramp).
TrainResult train_sgd_generic(const Dataset& train, const LossFunction& loss,
                              const SolverConfig& config,
                              const Dataset* eval_set = nullptr);

// Polyak-Ruppert averaging over every iterate of every epoch; the averaged
// vector is the model and is what the trace evaluates. Logistic loss.
TrainResult train_asgd(const Dataset& train, const LossFunction& loss,
                       const SolverConfig& config,
                       const Dataset* eval_set = nullptr);

// Hinge subgradient steps with eta_t = 1/(lambda t), single-instance blocks
// sampled uniformly, and projection onto the ball of radius 1/sqrt(lambda)
// after every step.
TrainResult train_pegasos(const Dataset& train, const SolverConfig& config,
                          const Dataset* eval_set = nullptr);

double predict_score(const Model& model, const SparseVector& x);
int classify(const Model& model, const SparseVector& x);  // sign(0) = +1

double primal_objective(const VectorXd& weights, BiasMode bias_mode,
                        const Dataset& data, const LossFunction& loss,
                        double lambda);
double primal_objective(const Model& model, const Dataset& data,
                        const LossFunction& loss, double lambda);

double test_error_rate(const Model& model, const Dataset& test);  // percent

}  // namespace rsgd
