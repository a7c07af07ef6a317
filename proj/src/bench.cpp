#include "robustsgd/bench.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <thread>

#include "robustsgd/libsvm_io.hpp"
#include "robustsgd/rng.hpp"

namespace rsgd {

namespace {

// Seed derivation, fixed and documented: every stream below chains
// mix_seed(master, purpose, a, b) with a distinct purpose tag, so re-running
// a spec reproduces every number exactly.
//   split       mix_seed(master, 1)
//   cv folds    mix_seed(master, 2, method_idx, noise_idx)
//   noise       mix_seed(master, 3, noise_idx, trial)   (method-independent)
//   trial       mix_seed(master, 4 + method_idx, noise_idx, trial)
constexpr uint64_t kSplitTag = 1;
constexpr uint64_t kCvTag = 2;
constexpr uint64_t kNoiseTag = 3;
constexpr uint64_t kTrialTagBase = 4;

AverageOption parse_average(const std::string& text) {
  if (text == "A") return AverageOption::A;
  if (text == "B") return AverageOption::B;
  throw std::invalid_argument("average_option must be A or B");
}

BiasMode parse_bias(const std::string& text) {
  if (text == "augmented") return BiasMode::augmented;
  if (text == "none") return BiasMode::none;
  throw std::invalid_argument("bias must be augmented or none");
}

int thread_cap() {
  if (const char* env = std::getenv("ROBUST_SGD_THREADS")) {
    const int v = std::atoi(env);
    if (v >= 1) return v;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

}  // namespace

bool is_known_method(const std::string& name) {
  static const std::vector<std::string> known{
      "sgd-sramp", "sgd-rgomp", "sgd-hinge", "sgd-log",
      "sgd-ramp",  "asgd-log",  "pegasos"};
  return std::find(known.begin(), known.end(), name) != known.end();
}

MethodConfig resolve_method(const std::string& name, double s_star,
                            double sr_alpha, double sr_beta, double c_star) {
  MethodConfig method;
  method.name = name;
  if (name == "sgd-sramp") {
    method.loss = LossFunction::smooth_ramp(s_star, sr_alpha, sr_beta);
    method.trainer = MethodConfig::Trainer::sgdrl;
  } else if (name == "sgd-rgomp") {
    method.loss = LossFunction::reversed_gompertz(c_star);
    method.trainer = MethodConfig::Trainer::sgdrl;
  } else if (name == "sgd-hinge") {
    method.loss = LossFunction::hinge();
    method.trainer = MethodConfig::Trainer::generic;
  } else if (name == "sgd-log") {
    method.loss = LossFunction::logistic();
    method.trainer = MethodConfig::Trainer::generic;
  } else if (name == "sgd-ramp") {
    method.loss = LossFunction::ramp(s_star);
    method.trainer = MethodConfig::Trainer::generic;
  } else if (name == "asgd-log") {
    method.loss = LossFunction::logistic();
    method.trainer = MethodConfig::Trainer::asgd;
  } else if (name == "pegasos") {
    method.loss = LossFunction::hinge();
    method.trainer = MethodConfig::Trainer::pegasos;
  } else {
    throw std::invalid_argument("unknown method: " + name);
  }
  return method;
}

int pegasos_epochs(double lambda, int n_train) {
  const double steps = std::min(10.0 / lambda, 1e5);
  return std::max(1, static_cast<int>(std::ceil(steps / n_train)));
}

TrainResult run_method(const MethodConfig& method, const Dataset& train,
                       const Dataset* eval_set, double lambda, double eta,
                       int epochs, AverageOption average_option,
                       BiasMode bias_mode, uint64_t seed) {
  SolverConfig config;
  config.lambda = lambda;
  config.eta = eta;
  config.max_epochs = epochs;
  config.average_option = average_option;
  config.seed = seed;
  config.bias_mode = bias_mode;

  switch (method.trainer) {
    case MethodConfig::Trainer::sgdrl:
      return train_sgdrl(train, method.loss, config, eval_set);
    case MethodConfig::Trainer::generic:
      return train_sgd_generic(train, method.loss, config, eval_set);
    case MethodConfig::Trainer::asgd:
      return train_asgd(train, method.loss, config, eval_set);
    case MethodConfig::Trainer::pegasos:
      config.eta_schedule = EtaSchedule::inverse_t;
      config.max_epochs = pegasos_epochs(lambda, train.size());
      return train_pegasos(train, config, eval_set);
  }
  throw std::logic_error("run_method: unreachable");
}

CvResult cross_validate(const MethodConfig& method, const Dataset& train,
                        int folds, const std::vector<double>& lambda_grid,
                        double eta, int epochs, AverageOption average_option,
                        BiasMode bias_mode, uint64_t fold_seed,
                        uint64_t train_seed_base) {
  if (lambda_grid.empty())
    throw std::invalid_argument("cross_validate: empty lambda grid");
  const auto fold_sets = kfold_indices(train.size(), folds, fold_seed);

  std::vector<char> in_fold(static_cast<size_t>(train.size()), 0);
  CvResult result;
  std::vector<double> means;
  means.reserve(lambda_grid.size());

  for (size_t li = 0; li < lambda_grid.size(); ++li) {
    const double lambda = lambda_grid[li];
    double err_sum = 0.0;
    for (int f = 0; f < folds; ++f) {
      std::fill(in_fold.begin(), in_fold.end(), 0);
      for (const int idx : fold_sets[static_cast<size_t>(f)])
        in_fold[static_cast<size_t>(idx)] = 1;

      Dataset fit, val;
      fit.dimension = val.dimension = train.dimension;
      for (int i = 0; i < train.size(); ++i)
        (in_fold[static_cast<size_t>(i)] ? val : fit)
            .instances.push_back(train.instances[static_cast<size_t>(i)]);

      const uint64_t seed =
          mix_seed(train_seed_base, li, static_cast<uint64_t>(f));
      const auto trained = run_method(method, fit, nullptr, lambda, eta,
                                      epochs, average_option, bias_mode, seed);
      const double err = test_error_rate(trained.model, val);
      result.table.push_back({lambda, f, err});
      err_sum += err;
    }
    means.push_back(err_sum / folds);
  }

  size_t best = 0;
  for (size_t li = 1; li < lambda_grid.size(); ++li)
    if (means[li] <= means[best]) best = li;  // ties go to the later = larger
  result.selected_lambda = lambda_grid[best];
  return result;
}

ExperimentSpec experiment_spec_from_json(const nlohmann::json& doc) {
  ExperimentSpec spec;
  spec.dataset_path = doc.at("dataset").get<std::string>();
  if (doc.contains("test_path"))
    spec.test_path = doc["test_path"].get<std::string>();
  if (doc.contains("test_fraction"))
    spec.test_fraction = doc["test_fraction"].get<double>();
  if (doc.contains("noise_fractions"))
    spec.noise_fractions = doc["noise_fractions"].get<std::vector<double>>();
  spec.methods = doc.at("methods").get<std::vector<std::string>>();
  if (doc.contains("repeats")) spec.repeats = doc["repeats"].get<int>();
  if (doc.contains("cv_folds")) spec.cv_folds = doc["cv_folds"].get<int>();
  if (doc.contains("lambda_grid"))
    spec.lambda_grid = doc["lambda_grid"].get<std::vector<double>>();
  if (doc.contains("eta")) spec.eta = doc["eta"].get<double>();
  if (doc.contains("epochs")) spec.epochs = doc["epochs"].get<int>();
  if (doc.contains("average_option"))
    spec.average_option = parse_average(doc["average_option"].get<std::string>());
  if (doc.contains("bias"))
    spec.bias_mode = parse_bias(doc["bias"].get<std::string>());
  if (doc.contains("s_star")) spec.s_star = doc["s_star"].get<double>();
  if (doc.contains("sr_alpha")) spec.sr_alpha = doc["sr_alpha"].get<double>();
  if (doc.contains("sr_beta")) spec.sr_beta = doc["sr_beta"].get<double>();
  if (doc.contains("c_star")) spec.c_star = doc["c_star"].get<double>();
  if (doc.contains("master_seed"))
    spec.master_seed = doc["master_seed"].get<uint64_t>();
  if (doc.contains("normalize")) spec.normalize = doc["normalize"].get<bool>();
  if (doc.contains("cv_per_trial"))
    spec.cv_per_trial = doc["cv_per_trial"].get<bool>();
  if (doc.contains("freeze_noise"))
    spec.freeze_noise = doc["freeze_noise"].get<bool>();

  if (spec.methods.empty())
    throw std::invalid_argument("bench spec: methods must be non-empty");
  for (const auto& m : spec.methods)
    if (!is_known_method(m))
      throw std::invalid_argument("bench spec: unknown method " + m);
  for (const double p : spec.noise_fractions)
    if (!(p >= 0.0 && p <= 1.0))
      throw std::invalid_argument("bench spec: noise fractions must be in [0,1]");
  if (spec.repeats < 1)
    throw std::invalid_argument("bench spec: repeats must be >= 1");
  if (spec.cv_folds < 2)
    throw std::invalid_argument("bench spec: cv_folds must be >= 2");
  return spec;
}

ExperimentSpec load_experiment_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open bench spec: " + path);
  nlohmann::json doc;
  in >> doc;
  return experiment_spec_from_json(doc);
}

namespace {

struct CellTask {
  size_t row_index;
  size_t method_idx;
  size_t noise_idx;
};

void run_cell(const ExperimentSpec& spec, const Dataset& train,
              const Dataset& test, const CellTask& task, ResultRow& row) {
  const std::string& method_name = spec.methods[task.method_idx];
  const double noise = spec.noise_fractions[task.noise_idx];
  row.method = method_name;
  row.noise_fraction = noise;

  try {
    const MethodConfig method = resolve_method(
        method_name, spec.s_star, spec.sr_alpha, spec.sr_beta, spec.c_star);

    auto noisy_train = [&](int trial) {
      const int src_trial = spec.freeze_noise ? 0 : trial;
      const uint64_t noise_seed = mix_seed(spec.master_seed, kNoiseTag,
                                           task.noise_idx,
                                           static_cast<uint64_t>(src_trial));
      if (noise <= 0.0) return std::pair<Dataset, uint64_t>(train, noise_seed);
      return std::pair<Dataset, uint64_t>(flip_labels(train, noise, noise_seed),
                                          noise_seed);
    };

    const uint64_t cv_seed =
        mix_seed(spec.master_seed, kCvTag, task.method_idx, task.noise_idx);
    double lambda = spec.lambda_grid.front();
    if (!spec.cv_per_trial) {
      const auto [cv_train, cv_noise_seed] = noisy_train(0);
      lambda = cross_validate(method, cv_train, spec.cv_folds, spec.lambda_grid,
                              spec.eta, spec.epochs, spec.average_option,
                              spec.bias_mode, cv_seed, cv_seed)
                   .selected_lambda;
    }

    for (int trial = 0; trial < spec.repeats; ++trial) {
      const auto [trial_train, noise_seed] = noisy_train(trial);
      const uint64_t train_seed =
          mix_seed(spec.master_seed, kTrialTagBase + task.method_idx,
                   task.noise_idx, static_cast<uint64_t>(trial));
      if (spec.cv_per_trial) {
        lambda = cross_validate(method, trial_train, spec.cv_folds,
                                spec.lambda_grid, spec.eta, spec.epochs,
                                spec.average_option, spec.bias_mode,
                                mix_seed(cv_seed, static_cast<uint64_t>(trial)),
                                train_seed)
                     .selected_lambda;
      }
      const auto trained =
          run_method(method, trial_train, nullptr, lambda, spec.eta,
                     spec.epochs, spec.average_option, spec.bias_mode,
                     train_seed);
      TrialOutcome outcome;
      outcome.train_seed = train_seed;
      outcome.noise_seed = noise_seed;
      outcome.error_pct = test_error_rate(trained.model, test);
      outcome.objective = trained.trace.back().objective;
      row.trials.push_back(outcome);
    }

    row.lambda_selected = lambda;
    row.epochs = method.trainer == MethodConfig::Trainer::pegasos
                     ? pegasos_epochs(lambda, train.size())
                     : spec.epochs;

    const int n = static_cast<int>(row.trials.size());
    double err_sum = 0.0, obj_sum = 0.0;
    for (const auto& t : row.trials) {
      err_sum += t.error_pct;
      obj_sum += t.objective;
    }
    row.mean_error_pct = err_sum / n;
    row.mean_final_objective = obj_sum / n;
    if (n >= 2) {
      double ss = 0.0;
      for (const auto& t : row.trials) {
        const double d = t.error_pct - row.mean_error_pct;
        ss += d * d;
      }
      row.variance = ss / (n - 1);
      row.std_error_pct = std::sqrt(row.variance);
    }
  } catch (const std::exception& e) {
    row.failed = true;
    row.error = e.what();
  }
}

}  // namespace

BenchReport run_bench(const ExperimentSpec& spec) {
  BenchReport report;
  report.spec = spec;

  Dataset raw_train = load_libsvm_file(spec.dataset_path);
  Dataset raw_test;
  if (spec.test_path) {
    raw_test = load_libsvm_file(*spec.test_path);
    raw_test.dimension = raw_train.dimension =
        std::max(raw_train.dimension, raw_test.dimension);
  } else {
    const double fraction = spec.test_fraction.value_or(0.2);
    const uint64_t split_seed = mix_seed(spec.master_seed, kSplitTag);
    std::tie(raw_train, raw_test) =
        split_train_test(raw_train, fraction, split_seed);
  }

  Dataset train = raw_train, test = raw_test;
  if (spec.normalize) {
    const auto params = normalize_fit(raw_train);
    train = normalize_apply(raw_train, params);
    test = normalize_apply(raw_test, params);
  }

  std::vector<CellTask> tasks;
  for (size_t m = 0; m < spec.methods.size(); ++m)
    for (size_t p = 0; p < spec.noise_fractions.size(); ++p)
      tasks.push_back({tasks.size(), m, p});
  report.rows.resize(tasks.size());

  const int workers =
      std::min<int>(thread_cap(), static_cast<int>(tasks.size()));
  if (workers <= 1) {
    for (const auto& task : tasks)
      run_cell(spec, train, test, task, report.rows[task.row_index]);
  } else {
    std::atomic<size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(static_cast<size_t>(workers));
    for (int t = 0; t < workers; ++t) {
      pool.emplace_back([&] {
        for (size_t i = next.fetch_add(1); i < tasks.size();
             i = next.fetch_add(1))
          run_cell(spec, train, test, tasks[i], report.rows[tasks[i].row_index]);
      });
    }
    for (auto& th : pool) th.join();
  }
  return report;
}

std::string bench_csv(const BenchReport& report) {
  std::string out = "method,noise,mean_err,std_err,variance,mean_obj,lambda,epochs\n";
  for (const auto& row : report.rows) {
    out += row.method;
    out += ',';
    out += format_double(row.noise_fraction);
    out += ',';
    out += format_double(row.mean_error_pct);
    out += ',';
    out += format_double(row.std_error_pct);
    out += ',';
    out += format_double(row.variance);
    out += ',';
    out += format_double(row.mean_final_objective);
    out += ',';
    out += format_double(row.lambda_selected);
    out += ',';
    out += std::to_string(row.epochs);
    out += '\n';
  }
  return out;
}

nlohmann::json bench_json(const BenchReport& report) {
  nlohmann::json doc;
  doc["schema_version"] = 1;
  const auto& spec = report.spec;
  nlohmann::json spec_doc;
  spec_doc["dataset"] = spec.dataset_path;
  if (spec.test_path) spec_doc["test_path"] = *spec.test_path;
  if (spec.test_fraction) spec_doc["test_fraction"] = *spec.test_fraction;
  spec_doc["noise_fractions"] = spec.noise_fractions;
  spec_doc["methods"] = spec.methods;
  spec_doc["repeats"] = spec.repeats;
  spec_doc["cv_folds"] = spec.cv_folds;
  spec_doc["lambda_grid"] = spec.lambda_grid;
  spec_doc["eta"] = spec.eta;
  spec_doc["epochs"] = spec.epochs;
  spec_doc["average_option"] =
      spec.average_option == AverageOption::A ? "A" : "B";
  spec_doc["bias"] = spec.bias_mode == BiasMode::augmented ? "augmented" : "none";
  spec_doc["s_star"] = spec.s_star;
  spec_doc["sr_alpha"] = spec.sr_alpha;
  spec_doc["sr_beta"] = spec.sr_beta;
  spec_doc["c_star"] = spec.c_star;
  spec_doc["master_seed"] = spec.master_seed;
  spec_doc["normalize"] = spec.normalize;
  spec_doc["cv_per_trial"] = spec.cv_per_trial;
  spec_doc["freeze_noise"] = spec.freeze_noise;
  spec_doc["pegasos_step_budget"] = "min(10/lambda, 1e5) single-instance steps";
  doc["spec"] = spec_doc;

  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : report.rows) {
    nlohmann::json r;
    r["method"] = row.method;
    r["noise"] = row.noise_fraction;
    r["mean_err"] = row.mean_error_pct;
    r["std_err"] = row.std_error_pct;
    r["variance"] = row.variance;
    r["mean_obj"] = row.mean_final_objective;
    r["lambda"] = row.lambda_selected;
    r["epochs"] = row.epochs;
    r["failed"] = row.failed;
    if (row.failed) r["error"] = row.error;
    nlohmann::json trials = nlohmann::json::array();
    for (const auto& t : row.trials) {
      trials.push_back({{"train_seed", t.train_seed},
                        {"noise_seed", t.noise_seed},
                        {"error_pct", t.error_pct},
                        {"objective", t.objective}});
    }
    r["trials"] = trials;
    rows.push_back(r);
  }
  doc["rows"] = rows;
  return doc;
}

}  // namespace rsgd
