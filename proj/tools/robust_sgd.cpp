// Command-line front end: dataset preparation, training, cross-validation,
// noise sweeps, benchmark runs and diagnostics for the robust-loss SGD
// family. See README.md for the subcommand reference.

#include <CLI11.hpp>

#include "robustsgd/cli_commands.hpp"

using namespace rsgd::cli;

int main(int argc, char** argv) {
  CLI::App app{"SGD with robust losses: training and benchmark toolkit"};
  app.require_subcommand(1);

  TrainOptions train;
  auto* train_cmd = app.add_subcommand("train", "train one model, write model JSON and trace CSV");
  train_cmd->add_option("--dataset", train.dataset, "training set, LIBSVM format")->required();
  train_cmd->add_option("--test", train.test, "held-out evaluation set");
  train_cmd->add_option("--method", train.method,
                        "sgd-sramp|sgd-rgomp|sgd-hinge|sgd-log|sgd-ramp|asgd-log|pegasos");
  train_cmd->add_option("--lambda", train.lambda, "regularization");
  train_cmd->add_option("--eta", train.eta, "learning rate");
  train_cmd->add_option("--epochs", train.epochs, "max epochs");
  train_cmd->add_option("--seed", train.seed, "shuffle seed");
  train_cmd->add_option("--average", train.average, "epoch epilogue: A (last) or B (mean)");
  train_cmd->add_option("--bias", train.bias, "augmented|none");
  train_cmd->add_option("--s-star", train.s_star, "ramp / smooth-ramp s*");
  train_cmd->add_option("--alpha", train.sr_alpha, "smooth-ramp alpha");
  train_cmd->add_option("--beta", train.sr_beta, "smooth-ramp beta");
  train_cmd->add_option("--c-star", train.c_star, "reversed-gompertz c*");
  train_cmd->add_flag("--normalize", train.normalize, "scale features to [0,1] (fit on train)");
  train_cmd->add_option("--out", train.out_model, "model JSON path");
  train_cmd->add_option("--trace", train.out_trace, "per-epoch trace CSV path");

  CvOptions cv;
  auto* cv_cmd = app.add_subcommand("cv", "k-fold cross validation over the lambda grid");
  cv_cmd->add_option("--dataset", cv.dataset)->required();
  cv_cmd->add_option("--method", cv.method);
  cv_cmd->add_option("--folds", cv.folds);
  cv_cmd->add_option("--lambda-grid", cv.lambda_grid, "grid values (default 1e-6..10)");
  cv_cmd->add_option("--eta", cv.eta);
  cv_cmd->add_option("--epochs", cv.epochs);
  cv_cmd->add_option("--seed", cv.seed);
  cv_cmd->add_option("--average", cv.average);
  cv_cmd->add_option("--bias", cv.bias);
  cv_cmd->add_option("--s-star", cv.s_star);
  cv_cmd->add_option("--alpha", cv.sr_alpha);
  cv_cmd->add_option("--beta", cv.sr_beta);
  cv_cmd->add_option("--c-star", cv.c_star);
  cv_cmd->add_flag("--normalize", cv.normalize);
  cv_cmd->add_option("--out", cv.out, "fold-error table CSV (stdout if omitted)");

  FlipOptions flip;
  auto* flip_cmd = app.add_subcommand("flip", "inject seeded label noise into a dataset");
  flip_cmd->add_option("--input", flip.input)->required();
  flip_cmd->add_option("--fraction", flip.fraction, "fraction of labels to negate");
  flip_cmd->add_option("--seed", flip.seed);
  flip_cmd->add_option("--output", flip.output)->required();

  BenchOptions bench;
  auto* bench_cmd = app.add_subcommand("bench", "run a benchmark spec, emit CSV + JSON report");
  bench_cmd->add_option("--spec", bench.spec_path, "experiment spec JSON")->required();
  bench_cmd->add_option("--out", bench.out_prefix, "output prefix")->required();

  CheckOptions check;
  auto* check_cmd = app.add_subcommand("check", "numerical diagnostics, JSON report");
  check_cmd->add_option("--loss", check.loss, "sramp|rgomp|hinge|log|ramp");
  check_cmd->add_option("--s-star", check.s_star);
  check_cmd->add_option("--alpha", check.sr_alpha);
  check_cmd->add_option("--beta", check.sr_beta);
  check_cmd->add_option("--c-star", check.c_star);
  check_cmd->add_flag("--grad", check.grad, "finite-difference gradient check");
  check_cmd->add_flag("--probe", check.probe, "restricted convexity/smoothness probes");
  check_cmd->add_flag("--phi", check.phi, "weighted-parameter decay checks");
  check_cmd->add_flag("--require-robust", check.require_robust,
                      "fail unless the loss passes all robustness conditions");
  check_cmd->add_option("--seed", check.seed);
  check_cmd->add_option("--out", check.out, "JSON path (stdout if omitted)");

  LosscurveOptions curve;
  auto* curve_cmd = app.add_subcommand("losscurve", "tabulate loss/derivative/phi over a z range");
  curve_cmd->add_option("--losses", curve.losses, "loss tokens")->required();
  curve_cmd->add_option("--zmin", curve.z_min);
  curve_cmd->add_option("--zmax", curve.z_max);
  curve_cmd->add_option("--n", curve.n_points);
  curve_cmd->add_option("--s-star", curve.s_star);
  curve_cmd->add_option("--alpha", curve.sr_alpha);
  curve_cmd->add_option("--beta", curve.sr_beta);
  curve_cmd->add_option("--c-star", curve.c_star);
  curve_cmd->add_option("--out", curve.out, "CSV path (stdout if omitted)");

  FitSrampOptions fit;
  auto* fit_cmd = app.add_subcommand("fit-sramp", "fit smooth-ramp (alpha, beta) to the ramp");
  fit_cmd->add_option("--s-star", fit.s_star)->required();
  fit_cmd->add_option("--grid-lo", fit.grid_lo, "probe grid start (default s* - 2)");
  fit_cmd->add_option("--grid-hi", fit.grid_hi, "probe grid end (default 3)");
  fit_cmd->add_option("--grid-n", fit.grid_n, "probe grid points");
  fit_cmd->add_option("--out", fit.out, "optional JSON output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitBadFlags;
  }

  if (train_cmd->parsed()) return cmd_train(train);
  if (cv_cmd->parsed()) return cmd_cv(cv);
  if (flip_cmd->parsed()) return cmd_flip(flip);
  if (bench_cmd->parsed()) return cmd_bench(bench);
  if (check_cmd->parsed()) return cmd_check(check);
  if (curve_cmd->parsed()) return cmd_losscurve(curve);
  if (fit_cmd->parsed()) return cmd_fit_sramp(fit);
  return kExitBadFlags;
}
