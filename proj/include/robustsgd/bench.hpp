#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "robustsgd/dataset.hpp"
#include "robustsgd/solver.hpp"

#include <json.hpp>

namespace rsgd {

// One benchmark run: methods x noise levels, `repeats` seeded trials per
// cell, lambda chosen by k-fold cross validation on the (noisy) training
// split, testing error measured against clean test labels.
struct ExperimentSpec {
  std::string dataset_path;
  std::optional<double> test_fraction;  // used when test_path is absent
  std::optional<std::string> test_path;
  std::vector<double> noise_fractions{0.0, 0.2, 0.4, 0.6};
  std::vector<std::string> methods;
  int repeats = 10;
  int cv_folds = 10;
  std::vector<double> lambda_grid{1e-6, 1e-5, 1e-4, 1e-3,
                                  1e-2, 1e-1, 1.0,  10.0};
  double eta = 0.1;
  int epochs = 15;
  AverageOption average_option = AverageOption::A;
  BiasMode bias_mode = BiasMode::augmented;
  double s_star = -1.0;
  double sr_alpha = 2.0;
  double sr_beta = -0.03;
  double c_star = 2.0;
  uint64_t master_seed = 0;
  bool normalize = true;
  bool cv_per_trial = false;   // default: CV once per cell on trial 0's noise
  bool freeze_noise = false;   // default: fresh corruption per trial
};

ExperimentSpec load_experiment_spec(const std::string& path);
ExperimentSpec experiment_spec_from_json(const nlohmann::json& doc);

struct TrialOutcome {
  uint64_t train_seed = 0;
  uint64_t noise_seed = 0;
  double error_pct = 0.0;
  double objective = 0.0;
};

struct ResultRow {
  std::string method;
  double noise_fraction = 0.0;
  double mean_error_pct = 0.0;
  double std_error_pct = 0.0;
  double variance = 0.0;
  double mean_final_objective = 0.0;
  double lambda_selected = 0.0;
  int epochs = 0;
  std::vector<TrialOutcome> trials;
  bool failed = false;
  std::string error;
};

struct BenchReport {
  ExperimentSpec spec;
  std::vector<ResultRow> rows;  // method-major, noise order within

  bool any_failed() const {
    for (const auto& row : rows)
      if (row.failed) return true;
    return false;
  }
};

// Names accepted everywhere a method is configured.
// sgd-sramp, sgd-rgomp, sgd-hinge, sgd-log, sgd-ramp, asgd-log, pegasos
bool is_known_method(const std::string& name);

struct MethodConfig {
  enum class Trainer { sgdrl, generic, asgd, pegasos };
  std::string name;
  LossFunction loss;
  Trainer trainer = Trainer::generic;
};

MethodConfig resolve_method(const std::string& name, double s_star,
                            double sr_alpha, double sr_beta, double c_star);

// Pegasos converges after about 10/lambda single-instance steps; desk scale
// caps the step budget at 1e5 and converts to full passes (rounded up).
int pegasos_epochs(double lambda, int n_train);

TrainResult run_method(const MethodConfig& method, const Dataset& train,
                       const Dataset* eval_set, double lambda, double eta,
                       int epochs, AverageOption average_option,
                       BiasMode bias_mode, uint64_t seed);

// Mean validation error per lambda over k folds; picks the minimum, ties
// broken toward the larger lambda.
struct CvEntry {
  double lambda = 0.0;
  int fold = 0;
  double val_error_pct = 0.0;
};
struct CvResult {
  double selected_lambda = 0.0;
  std::vector<CvEntry> table;
};
CvResult cross_validate(const MethodConfig& method, const Dataset& train,
                        int folds, const std::vector<double>& lambda_grid,
                        double eta, int epochs, AverageOption average_option,
                        BiasMode bias_mode, uint64_t fold_seed,
                        uint64_t train_seed_base);

// Runs every (method, noise) cell; cells execute in parallel, capped by the
// ROBUST_SGD_THREADS environment variable. Output is independent of
// scheduling: every trial derives its own seeds from the master seed.
BenchReport run_bench(const ExperimentSpec& spec);

std::string bench_csv(const BenchReport& report);
nlohmann::json bench_json(const BenchReport& report);

}  // namespace rsgd
