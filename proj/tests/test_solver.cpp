#include <doctest.h>

#include <cmath>

#include "robustsgd/analysis.hpp"
#include "robustsgd/dataset.hpp"
#include "robustsgd/losses.hpp"
#include "robustsgd/rng.hpp"
#include "robustsgd/solver.hpp"

using namespace rsgd;

namespace {

Instance make_instance(std::vector<std::pair<int, double>> entries, int label) {
  Instance inst;
  inst.label = label;
  inst.features.entries = std::move(entries);
  return inst;
}

Dataset single_instance_set(Instance inst, int dimension) {
  Dataset d;
  d.dimension = dimension;
  d.instances.push_back(std::move(inst));
  return d;
}

const LossFunction kSRamp = LossFunction::smooth_ramp(-1.0, 2.0, -0.03);
const LossFunction kRGomp = LossFunction::reversed_gompertz(2.0);

}  // namespace

TEST_CASE("Update I/II factors equal the generic -r' to 1e-12 relative") {
  Rng rng(31);
  for (int i = 0; i < 10000; ++i) {
    const double s = -3.0 + 3.3 * rng.next_double();   // s* in [-3, 0.3]
    const double a = 0.5 + 4.5 * rng.next_double();
    const double b = -1.0 + 2.0 * rng.next_double();
    const double c = 0.5 + 4.5 * rng.next_double();
    // margin scores spanning moderate and extreme ranges
    const double mag = std::pow(10.0, 3.0 * rng.next_double() - 1.0);
    const double g = (rng.next_double() < 0.5 ? -1.0 : 1.0) * mag;

    const LossFunction sramp = LossFunction::smooth_ramp(s, a, b);
    const LossFunction rgomp = LossFunction::reversed_gompertz(c);
    const double f1 = sgdrl_update_factor(sramp, g);
    const double f2 = sgdrl_update_factor(rgomp, g);
    const double g1 = -loss_derivative(sramp, g);
    const double g2 = -loss_derivative(rgomp, g);
    CHECK(std::abs(f1 - g1) <= 1e-12 * std::max(1e-300, std::abs(g1)));
    CHECK(std::abs(f2 - g2) <= 1e-12 * std::max(1e-300, std::abs(g2)));
    CHECK(f1 >= 0.0);
    CHECK(f2 >= 0.0);
  }
  CHECK_THROWS_AS(sgdrl_update_factor(LossFunction::hinge(), 0.0),
                  std::invalid_argument);
}

TEST_CASE("one Update II step from w = 0 lands on eta c* y x e^{-1}") {
  const Dataset train =
      single_instance_set(make_instance({{1, 0.7}, {3, -0.4}}, -1), 3);
  SolverConfig config;
  config.lambda = 0.25;  // irrelevant at w = 0
  config.eta = 0.1;
  config.max_epochs = 1;
  config.bias_mode = BiasMode::none;

  const auto result = train_sgdrl(train, kRGomp, config);
  const double factor = 2.0 * std::exp(-1.0);  // c* e^{c*0 - e^0}
  CHECK(result.model.weights[0] ==
        doctest::Approx(0.1 * factor * -1 * 0.7).epsilon(1e-15));
  CHECK(result.model.weights[1] == 0.0);
  CHECK(result.model.weights[2] ==
        doctest::Approx(0.1 * factor * -1 * -0.4).epsilon(1e-15));
}

TEST_CASE("hinge step on a satisfied margin only shrinks the weights") {
  // single instance; after epoch 1 the margin exceeds 1, so epoch 2 applies
  // w <- (1 - eta lambda) w exactly
  const Dataset train = single_instance_set(make_instance({{1, 10.0}}, 1), 1);
  SolverConfig config;
  config.lambda = 0.5;
  config.eta = 0.1;
  config.max_epochs = 2;
  config.bias_mode = BiasMode::none;

  const auto one = [&] {
    SolverConfig c = config;
    c.max_epochs = 1;
    return train_sgd_generic(train, LossFunction::hinge(), c);
  }();
  const auto two = train_sgd_generic(train, LossFunction::hinge(), config);
  CHECK(one.model.weights[0] == 0.1 * 10.0);
  CHECK(two.model.weights[0] == (1.0 - 0.1 * 0.5) * one.model.weights[0]);
}

TEST_CASE("training is bit-deterministic for equal config and seed") {
  const Dataset train = synth_gaussian(200, 8, 2.0, 99);
  SolverConfig config;
  config.lambda = 1e-3;
  config.eta = 0.1;
  config.max_epochs = 5;
  config.seed = 1234;

  for (int variant = 0; variant < 2; ++variant) {
    config.average_option = variant == 0 ? AverageOption::A : AverageOption::B;
    const auto r1 = train_sgdrl(train, kSRamp, config);
    const auto r2 = train_sgdrl(train, kSRamp, config);
    REQUIRE(r1.model.weights.size() == r2.model.weights.size());
    for (Index i = 0; i < r1.model.weights.size(); ++i)
      CHECK(r1.model.weights[i] == r2.model.weights[i]);
    for (size_t e = 0; e < r1.trace.size(); ++e)
      CHECK(r1.trace[e].objective == r2.trace[e].objective);
  }
}

TEST_CASE("option B on a single instance equals option A") {
  const Dataset train = single_instance_set(make_instance({{1, 1.0}}, 1), 1);
  SolverConfig config;
  config.lambda = 1e-2;
  config.eta = 0.1;
  config.max_epochs = 4;
  config.bias_mode = BiasMode::none;

  SolverConfig b = config;
  b.average_option = AverageOption::B;
  const auto ra = train_sgdrl(train, kRGomp, config);
  const auto rb = train_sgdrl(train, kRGomp, b);
  CHECK(ra.model.weights[0] == rb.model.weights[0]);
}

TEST_CASE("diverging configuration raises a divergence error") {
  const Dataset train = single_instance_set(make_instance({{1, 1.0}}, 1), 1);
  SolverConfig config;
  config.lambda = 30.0;  // eta lambda = 3 -> shrink factor -2, |w| explodes
  config.eta = 0.1;
  config.max_epochs = 80;  // |w| ~ 0.1 * 2^epochs crosses the 1e15 guard
  config.bias_mode = BiasMode::none;

  CHECK_THROWS_AS(train_sgd_generic(train, LossFunction::hinge(), config),
                  DivergenceError);
  try {
    train_sgd_generic(train, LossFunction::hinge(), config);
  } catch (const DivergenceError& e) {
    CHECK(e.epoch >= 1);
    CHECK(e.step >= 1);
  }
}

TEST_CASE("solver validates loss kinds and config") {
  const Dataset train = single_instance_set(make_instance({{1, 1.0}}, 1), 1);
  SolverConfig config;
  CHECK_THROWS_AS(train_sgdrl(train, LossFunction::hinge(), config),
                  std::invalid_argument);
  CHECK_THROWS_AS(train_sgd_generic(train, kSRamp, config),
                  std::invalid_argument);
  CHECK_THROWS_AS(train_asgd(train, LossFunction::hinge(), config),
                  std::invalid_argument);
  CHECK_THROWS_AS(train_sgdrl(Dataset{}, kSRamp, config), std::invalid_argument);

  SolverConfig bad = config;
  bad.eta = 0.0;
  CHECK_THROWS_AS(train_sgdrl(train, kSRamp, bad), std::invalid_argument);
  bad = config;
  bad.lambda = -1.0;
  CHECK_THROWS_AS(train_sgdrl(train, kSRamp, bad), std::invalid_argument);
  bad = config;
  bad.max_epochs = 0;
  CHECK_THROWS_AS(train_sgdrl(train, kSRamp, bad), std::invalid_argument);
  bad = config;
  bad.lambda = 0.0;
  CHECK_THROWS_AS(train_pegasos(train, bad), std::invalid_argument);
}

TEST_CASE("pegasos: first step and ball projection") {
  // lambda = 1, small instance: w_1 = (1/lambda) y x, inside the ball
  const Dataset tiny = single_instance_set(make_instance({{1, 0.1}}, 1), 1);
  SolverConfig config;
  config.lambda = 1.0;
  config.eta = 0.1;
  config.max_epochs = 1;
  config.bias_mode = BiasMode::none;
  const auto first = train_pegasos(tiny, config);
  CHECK(first.model.weights[0] == 0.1);

  const Dataset train = synth_gaussian(100, 5, 2.0, 5);
  for (const double lambda : {1e-2, 1e-1, 1.0}) {
    SolverConfig c;
    c.lambda = lambda;
    c.eta = 0.1;
    c.max_epochs = 3;
    c.seed = 7;
    const auto result = train_pegasos(train, c);
    CHECK(result.model.weights.norm() <=
          1.0 / std::sqrt(lambda) * (1.0 + 1e-12));
  }
}

TEST_CASE("asgd returns the running mean of all iterates") {
  // n = 1 keeps the visit order trivial, so the iterates are reproducible
  // here by iterating the update formula directly
  const Instance inst = make_instance({{1, 0.5}}, 1);
  const Dataset train = single_instance_set(inst, 1);
  SolverConfig config;
  config.lambda = 0.05;
  config.eta = 0.2;
  config.max_epochs = 3;
  config.bias_mode = BiasMode::none;

  const auto result = train_asgd(train, LossFunction::logistic(), config);

  double w = 0.0, sum = 0.0;
  for (int t = 0; t < 3; ++t) {
    const double g = w * 0.5;
    const double factor = -loss_derivative(LossFunction::logistic(), g);
    w = (1.0 - 0.2 * 0.05) * w + 0.2 * factor * 0.5;
    sum += w;
  }
  CHECK(result.model.weights[0] == doctest::Approx(sum / 3.0).epsilon(1e-15));

  SolverConfig one_step = config;
  one_step.max_epochs = 1;
  const auto single = train_asgd(train, LossFunction::logistic(), one_step);
  CHECK(single.model.weights[0] ==
        doctest::Approx(0.2 * 0.5 * 0.5).epsilon(1e-15));  // -r'(0) = 0.5
}

TEST_CASE("primal objective: zero weights, zero lambda, trained model") {
  const Dataset train = synth_gaussian(300, 6, 3.0, 17);
  const VectorXd zero = VectorXd::Zero(6);

  for (const auto& loss : {kRGomp, kSRamp}) {
    CHECK(primal_objective(zero, BiasMode::none, train, loss, 0.3) ==
          doctest::Approx(loss_value(loss, 0.0)).epsilon(1e-12));
  }

  Rng rng(3);
  VectorXd w(6);
  for (Index i = 0; i < 6; ++i) w[i] = rng.normal();
  double mean_loss = 0.0;
  for (const auto& inst : train.instances)
    mean_loss += loss_value(kRGomp, sparse_dot(w, inst.features) * inst.label);
  mean_loss /= train.size();
  CHECK(primal_objective(w, BiasMode::none, train, kRGomp, 0.0) ==
        doctest::Approx(mean_loss).epsilon(1e-12));

  SolverConfig config;
  config.lambda = 1e-2;
  config.eta = 0.1;
  config.max_epochs = 10;
  const auto trained = train_sgdrl(train, kRGomp, config);
  const VectorXd zero_aug = VectorXd::Zero(7);
  CHECK(primal_objective(trained.model, train, kRGomp, config.lambda) <=
        primal_objective(zero_aug, BiasMode::augmented, train, kRGomp,
                         config.lambda));

  CHECK_THROWS_AS(primal_objective(zero, BiasMode::none, Dataset{}, kRGomp, 0.1),
                  std::invalid_argument);
}

TEST_CASE("classification and test error") {
  Model model;
  model.dimension = 2;
  model.bias_mode = BiasMode::none;
  model.weights = VectorXd::Zero(2);

  SparseVector x;
  x.entries.emplace_back(1, 2.0);
  CHECK(predict_score(model, x) == 0.0);
  CHECK(classify(model, x) == 1);  // sign(0) = +1

  model.weights[0] = 1.0;
  CHECK(predict_score(model, x) == 2.0);
  model.weights[0] = 10.0;  // positive rescaling keeps the class
  CHECK(classify(model, x) == 1);

  Dataset data;
  data.dimension = 2;
  data.instances.push_back(make_instance({{1, 1.0}}, 1));
  data.instances.push_back(make_instance({{1, 1.0}}, -1));
  data.instances.push_back(make_instance({{2, 1.0}}, -1));
  model.weights = VectorXd::Zero(2);
  // zero model predicts +1 everywhere: error = fraction of -1 labels
  CHECK(test_error_rate(model, data) == doctest::Approx(100.0 * 2 / 3));
  CHECK_THROWS_AS(test_error_rate(model, Dataset{}), std::invalid_argument);
}

TEST_CASE("a separable synthetic problem trains to < 1% test error") {
  const Dataset train = synth_gaussian(1000, 5, 10.0, 41);
  const Dataset fresh = synth_gaussian(1000, 5, 10.0, 42);
  SolverConfig config;
  config.lambda = 1e-3;
  config.eta = 0.1;
  config.max_epochs = 5;
  const auto result =
      train_sgd_generic(train, LossFunction::hinge(), config, &fresh);
  CHECK(test_error_rate(result.model, fresh) < 1.0);
  CHECK(result.trace.back().test_error_pct.value() < 1.0);
}

TEST_CASE("averaged stochastic gradient matches the objective gradient") {
  const Dataset data = synth_gaussian(30, 6, 2.0, 55);
  Rng rng(56);
  for (const auto& loss : {LossFunction::logistic(), kSRamp, kRGomp}) {
    const auto objective = make_objective(data, loss, 0.05, BiasMode::none);
    for (int rep = 0; rep < 7; ++rep) {
      VectorXd w(6);
      for (Index i = 0; i < 6; ++i) w[i] = rng.normal();
      const VectorXd analytic = objective.gradient(w);
      for (Index j = 0; j < 6; ++j) {
        VectorXd probe = w;
        const double h = 1e-6;
        probe[j] = w[j] + h;
        const double up = objective.value(probe);
        probe[j] = w[j] - h;
        const double down = objective.value(probe);
        const double fd = (up - down) / (2.0 * h);
        CHECK(std::abs(analytic[j] - fd) /
                  std::max(1.0, std::abs(analytic[j])) <
              1e-4);
      }
    }
  }
}

TEST_CASE("per-step update magnitude is capped by eta max|r'| ||x||") {
  Rng rng(61);
  const double sramp_cap = (1.0 - kSRamp.s_star) * kSRamp.alpha / 4.0;
  const double rgomp_cap = kRGomp.c_star * std::exp(-1.0);
  for (int i = 0; i < 10000; ++i) {
    const double g = 200.0 * rng.next_double() - 100.0;
    CHECK(sgdrl_update_factor(kSRamp, g) <= sramp_cap * (1.0 + 1e-12));
    CHECK(sgdrl_update_factor(kRGomp, g) <= rgomp_cap * (1.0 + 1e-12));
  }
}

TEST_CASE("epoch objective trend in the small-eta regime") {
  const Dataset train = synth_gaussian(1000, 10, 3.0, 71);
  SolverConfig config;
  config.lambda = 1e-2;
  config.eta = 1e-3;  // well inside the non-increasing regime
  config.max_epochs = 60;
  config.seed = 8;

  const auto best_run = train_sgdrl(train, kSRamp, config);
  const double g_best = best_run.trace.back().objective;

  double scaled_first = 0.0;
  for (const int T : {5, 10, 15, 30}) {
    SolverConfig c = config;
    c.max_epochs = T;
    const auto run = train_sgdrl(train, kSRamp, c);
    for (size_t e = 1; e < run.trace.size(); ++e)
      CHECK(run.trace[e].objective <= run.trace[e - 1].objective + 1e-3);
    const double scaled = T * (run.trace.back().objective - g_best);
    if (T == 5)
      scaled_first = scaled;
    else
      CHECK(scaled <= scaled_first * 1.5 + 1e-9);
  }
}
