#include "robustsgd/cli_commands.hpp"

#include <fstream>
#include <iostream>

#include <json.hpp>

#include "robustsgd/analysis.hpp"
#include "robustsgd/bench.hpp"
#include "robustsgd/libsvm_io.hpp"
#include "robustsgd/robustness_check.hpp"
#include "robustsgd/rng.hpp"
#include "robustsgd/smooth_ramp_fit.hpp"
#include "robustsgd/solver.hpp"

namespace rsgd::cli {

namespace {

using nlohmann::json;

template <class Fn>
int guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kExitParseError;
  } catch (const DivergenceError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitDiverged;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitBadFlags;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitParseError;
  }
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write file: " + path);
  out << content;
}

void emit(const std::string& path, const std::string& content) {
  if (path.empty())
    std::cout << content;
  else
    write_text_file(path, content);
}

AverageOption parse_average(const std::string& text) {
  if (text == "A") return AverageOption::A;
  if (text == "B") return AverageOption::B;
  throw std::invalid_argument("--average must be A or B");
}

BiasMode parse_bias(const std::string& text) {
  if (text == "augmented") return BiasMode::augmented;
  if (text == "none") return BiasMode::none;
  throw std::invalid_argument("--bias must be augmented or none");
}

LossFunction loss_from_token(const std::string& token, double s_star,
                             double sr_alpha, double sr_beta, double c_star) {
  if (token == "sramp") return LossFunction::smooth_ramp(s_star, sr_alpha, sr_beta);
  if (token == "rgomp") return LossFunction::reversed_gompertz(c_star);
  if (token == "hinge") return LossFunction::hinge();
  if (token == "log") return LossFunction::logistic();
  if (token == "ramp") return LossFunction::ramp(s_star);
  throw std::invalid_argument("unknown loss: " + token +
                              " (expected sramp|rgomp|hinge|log|ramp)");
}

json loss_json(const LossFunction& loss) {
  json doc;
  doc["kind"] = loss_name(loss);
  switch (loss.kind) {
    case LossKind::ramp:
      doc["s_star"] = loss.s_star;
      break;
    case LossKind::smooth_ramp:
      doc["s_star"] = loss.s_star;
      doc["alpha"] = loss.alpha;
      doc["beta"] = loss.beta;
      break;
    case LossKind::reversed_gompertz:
      doc["c_star"] = loss.c_star;
      break;
    default:
      break;
  }
  return doc;
}

std::string trace_csv(const EpochTrace& trace) {
  std::string out = "epoch,objective,train_err_pct,test_err_pct,elapsed_s\n";
  for (const auto& rec : trace) {
    out += std::to_string(rec.epoch);
    out += ',';
    out += format_double(rec.objective);
    out += ',';
    out += format_double(rec.train_error_pct);
    out += ',';
    if (rec.test_error_pct) out += format_double(*rec.test_error_pct);
    out += ',';
    out += format_double(rec.elapsed_seconds);
    out += '\n';
  }
  return out;
}

}  // namespace

int cmd_train(const TrainOptions& options) {
  return guarded([&] {
    if (!is_known_method(options.method))
      throw std::invalid_argument("unknown method: " + options.method);
    const MethodConfig method =
        resolve_method(options.method, options.s_star, options.sr_alpha,
                       options.sr_beta, options.c_star);

    Dataset train = load_libsvm_file(options.dataset);
    Dataset test;
    const bool has_test = !options.test.empty();
    if (has_test) {
      test = load_libsvm_file(options.test);
      train.dimension = test.dimension =
          std::max(train.dimension, test.dimension);
    }

    json norm_doc;
    if (options.normalize) {
      const auto params = normalize_fit(train);
      train = normalize_apply(train, params);
      if (has_test) test = normalize_apply(test, params);
      json lo = json::array(), hi = json::array();
      for (const auto& [mn, mx] : params.min_max) {
        lo.push_back(mn);
        hi.push_back(mx);
      }
      norm_doc["min"] = lo;
      norm_doc["max"] = hi;
    }

    const auto result = run_method(
        method, train, has_test ? &test : nullptr, options.lambda, options.eta,
        options.epochs, parse_average(options.average),
        parse_bias(options.bias), options.seed);

    if (!options.out_trace.empty())
      write_text_file(options.out_trace, trace_csv(result.trace));

    if (!options.out_model.empty()) {
      json doc;
      doc["schema_version"] = 1;
      doc["method"] = options.method;
      doc["loss"] = loss_json(result.model.loss);
      json config;
      config["lambda"] = options.lambda;
      config["eta"] = options.eta;
      config["epochs"] = result.model.config.max_epochs;
      config["average_option"] = options.average;
      config["seed"] = options.seed;
      config["bias"] = options.bias;
      config["eta_schedule"] =
          result.model.config.eta_schedule == EtaSchedule::inverse_t
              ? "inverse_t"
              : "constant";
      doc["config"] = config;
      doc["dimension"] = result.model.dimension;
      json weights = json::array();
      for (Index i = 0; i < result.model.weights.size(); ++i)
        weights.push_back(result.model.weights[i]);
      doc["weights"] = weights;
      if (!norm_doc.is_null()) doc["normalization"] = norm_doc;
      write_text_file(options.out_model, doc.dump(2) + "\n");
    }
    return kExitOk;
  });
}

int cmd_cv(const CvOptions& options) {
  return guarded([&] {
    if (!is_known_method(options.method))
      throw std::invalid_argument("unknown method: " + options.method);
    if (options.folds < 2)
      throw std::invalid_argument("--folds must be >= 2");
    const MethodConfig method =
        resolve_method(options.method, options.s_star, options.sr_alpha,
                       options.sr_beta, options.c_star);
    std::vector<double> grid = options.lambda_grid;
    if (grid.empty())
      grid = {1e-6, 1e-5, 1e-4, 1e-3, 1e-2, 1e-1, 1.0, 10.0};

    Dataset train = load_libsvm_file(options.dataset);
    if (options.normalize)
      train = normalize_apply(train, normalize_fit(train));

    const auto cv = cross_validate(
        method, train, options.folds, grid, options.eta, options.epochs,
        parse_average(options.average), parse_bias(options.bias),
        mix_seed(options.seed, 1), mix_seed(options.seed, 2));

    std::string table = "lambda,fold,val_err_pct\n";
    for (const auto& entry : cv.table) {
      table += format_double(entry.lambda);
      table += ',';
      table += std::to_string(entry.fold);
      table += ',';
      table += format_double(entry.val_error_pct);
      table += '\n';
    }
    emit(options.out, table);
    std::cout << "selected_lambda " << format_double(cv.selected_lambda) << "\n";
    return kExitOk;
  });
}

int cmd_flip(const FlipOptions& options) {
  return guarded([&] {
    if (!(options.fraction >= 0.0 && options.fraction <= 1.0))
      throw std::invalid_argument("--fraction must be in [0, 1]");
    const Dataset data = load_libsvm_file(options.input);
    const Dataset flipped = flip_labels(data, options.fraction, options.seed);
    int changed = 0;
    for (int i = 0; i < data.size(); ++i)
      if (data.instances[static_cast<size_t>(i)].label !=
          flipped.instances[static_cast<size_t>(i)].label)
        ++changed;
    save_libsvm_file(flipped, options.output);
    std::cout << "flipped " << changed << " of " << data.size() << " labels\n";
    return kExitOk;
  });
}

int cmd_bench(const BenchOptions& options) {
  return guarded([&] {
    const ExperimentSpec spec = load_experiment_spec(options.spec_path);
    const BenchReport report = run_bench(spec);
    write_text_file(options.out_prefix + ".csv", bench_csv(report));
    write_text_file(options.out_prefix + ".json",
                    bench_json(report).dump(2) + "\n");
    if (report.any_failed()) {
      for (const auto& row : report.rows)
        if (row.failed)
          std::cerr << "cell failed: " << row.method << " noise "
                    << row.noise_fraction << ": " << row.error << "\n";
      return kExitFailure;
    }
    return kExitOk;
  });
}

int cmd_check(const CheckOptions& options) {
  return guarded([&] {
    const LossFunction loss =
        loss_from_token(options.loss, options.s_star, options.sr_alpha,
                        options.sr_beta, options.c_star);
    const bool robust = is_robust(loss);
    const bool smooth_loss = robust || loss.kind == LossKind::logistic;

    json doc;
    doc["schema_version"] = 1;
    doc["loss"] = loss_json(loss);
    std::vector<std::string> failures;

    if (options.conditions) {
      const auto report = check_robustness(loss, default_probe_grid());
      json c;
      c["bounded"] = report.bounded;
      c["max_value"] = report.max_value;
      c["derivative_tail"] = report.derivative_tail;
      c["local_convexity_lambda"] = report.local_convexity_lambda;
      c["monotone"] = report.monotone;
      c["smooth"] = report.smooth;
      c["max_derivative_jump"] = report.max_derivative_jump;
      c["grid"] = {{"min", report.grid_min},
                   {"max", report.grid_max},
                   {"points", report.grid_points}};
      c["tolerances"] = {
          {"derivative_jump", report.tolerances.derivative_jump},
          {"tail_slope", report.tolerances.tail_slope},
          {"monotone_slack", report.tolerances.monotone_slack},
          {"convexity_center", report.tolerances.convexity_center},
          {"convexity_radius", report.tolerances.convexity_radius},
          {"convexity_points", report.tolerances.convexity_points}};
      c["all_pass"] = report.all_pass();
      doc["conditions"] = c;
      if (robust && !report.all_pass())
        failures.push_back("conditions: robust loss failed the checks");
      if (options.require_robust && !report.all_pass())
        failures.push_back("conditions: loss is not robust");
    }

    if (options.grad) {
      if (!smooth_loss)
        throw std::invalid_argument("--grad needs a smooth loss (sramp|rgomp|log)");
      Rng rng(options.seed);
      double max_rel = 0.0;
      for (int rep = 0; rep < 100; ++rep) {
        const int dim = 1 + static_cast<int>(rng.uniform_below(8));
        VectorXd w(dim);
        for (int j = 0; j < dim; ++j) w[j] = 2.0 * rng.next_double() - 1.0;
        Instance inst;
        inst.label = rng.next_double() < 0.5 ? -1 : 1;
        for (int j = 0; j < dim; ++j)
          inst.features.entries.emplace_back(j + 1, 2.0 * rng.next_double() - 1.0);
        const double lambda = rng.next_double() * 0.1;
        max_rel =
            std::max(max_rel, gradient_check(loss, lambda, w, inst, 1e-6));
      }
      json g;
      g["max_rel_err"] = max_rel;
      g["configs"] = 100;
      g["pass"] = max_rel < 1e-5;
      doc["gradient_check"] = g;
      if (max_rel >= 1e-5) failures.push_back("gradient_check: max_rel_err >= 1e-5");
    }

    if (options.probe) {
      const Dataset data = synth_gaussian(200, 5, 3.0, mix_seed(options.seed, 11));
      SolverConfig config;
      config.lambda = 1e-2;
      config.eta = 0.1;
      config.max_epochs = 10;
      config.seed = mix_seed(options.seed, 12);
      config.bias_mode = BiasMode::none;
      const TrainResult trained =
          robust ? train_sgdrl(data, loss, config)
                 : train_sgd_generic(data, loss, config);
      const VectorXd& w_star = trained.model.weights;
      const double gamma = 0.1 * (1.0 + w_star.norm());
      const auto objective = make_objective(data, loss, config.lambda, BiasMode::none);
      const auto per_instance =
          make_instance_objectives(data, loss, config.lambda, BiasMode::none);
      const auto report = probe_convexity(objective, per_instance, w_star,
                                          gamma, 200, mix_seed(options.seed, 13));
      json p;
      p["radius"] = report.radius;
      p["n_pairs"] = report.n_pairs;
      p["alpha_hat"] = report.alpha_hat;
      p["beta_hat"] = report.beta_hat;
      p["violations"] = report.violations;
      const bool order_ok = report.beta_hat >= report.alpha_hat;
      const bool alpha_ok = !robust || report.alpha_hat > 0.0;
      p["pass"] = order_ok && alpha_ok;
      doc["probe"] = p;
      if (!order_ok) failures.push_back("probe: beta_hat < alpha_hat");
      if (!alpha_ok) failures.push_back("probe: alpha_hat not positive");
    }

    if (options.phi) {
      if (!robust)
        throw std::invalid_argument("--phi needs a robust loss (sramp|rgomp)");
      const auto curve = phi_curve(loss, -10.0, 0.9, 500);
      bool positive = true;
      for (const auto& [z, phi] : curve)
        if (!(phi > 0.0)) positive = false;
      const bool decreasing = phi_decreasing_into_outliers(curve);
      json p;
      p["z_min"] = -10.0;
      p["z_max"] = 0.9;
      p["points"] = 500;
      p["all_positive"] = positive;
      p["decreasing_into_outliers"] = decreasing;
      p["pass"] = positive && decreasing;
      doc["phi"] = p;
      if (!positive) failures.push_back("phi: non-positive value on z < 1");
      if (!decreasing) failures.push_back("phi: not decreasing into outliers");
    }

    doc["all_pass"] = failures.empty();
    emit(options.out, doc.dump(2) + "\n");
    if (!failures.empty()) {
      for (const auto& f : failures) std::cerr << "check failed: " << f << "\n";
      return kExitCheckFailed;
    }
    return kExitOk;
  });
}

int cmd_losscurve(const LosscurveOptions& options) {
  return guarded([&] {
    if (options.losses.empty())
      throw std::invalid_argument("--losses must name at least one loss");
    if (options.n_points < 1)
      throw std::invalid_argument("--n must be >= 1");
    if (options.z_max < options.z_min)
      throw std::invalid_argument("--zmax must be >= --zmin");
    if (options.n_points > 1 && options.z_max == options.z_min)
      throw std::invalid_argument("--n > 1 needs a non-degenerate range");

    std::vector<LossFunction> losses;
    std::string header = "z";
    for (const auto& token : options.losses) {
      losses.push_back(loss_from_token(token, options.s_star, options.sr_alpha,
                                       options.sr_beta, options.c_star));
      header += ',' + token + "_value," + token + "_deriv";
      if (is_robust(losses.back())) header += ',' + token + "_phi";
    }

    std::string out = header + "\n";
    for (int i = 0; i < options.n_points; ++i) {
      const double z =
          options.n_points == 1
              ? options.z_min
              : options.z_min +
                    (options.z_max - options.z_min) * i / (options.n_points - 1);
      out += format_double(z);
      for (const auto& loss : losses) {
        out += ',';
        out += format_double(loss_value(loss, z));
        out += ',';
        out += format_double(loss_derivative(loss, z));
        if (is_robust(loss)) {
          out += ',';
          if (z < 1.0) out += format_double(phi_weight(loss, z));
        }
      }
      out += '\n';
    }
    emit(options.out, out);
    return kExitOk;
  });
}

int cmd_fit_sramp(const FitSrampOptions& options) {
  return guarded([&] {
    std::vector<double> grid;
    if (options.grid_lo < options.grid_hi) {
      if (options.grid_n < 2)
        throw std::invalid_argument("--grid-n must be >= 2");
      grid.resize(static_cast<size_t>(options.grid_n));
      for (int i = 0; i < options.grid_n; ++i)
        grid[static_cast<size_t>(i)] =
            options.grid_lo +
            (options.grid_hi - options.grid_lo) * i / (options.grid_n - 1);
    } else {
      grid = default_fit_grid(options.s_star, options.grid_n);
    }
    const auto fit = fit_smooth_ramp(options.s_star, grid);
    std::cout << "alpha " << format_double(fit.alpha) << " beta "
              << format_double(fit.beta) << " objective "
              << format_double(fit.objective) << "\n";
    if (!options.out.empty()) {
      json doc;
      doc["schema_version"] = 1;
      doc["s_star"] = options.s_star;
      doc["alpha"] = fit.alpha;
      doc["beta"] = fit.beta;
      doc["objective"] = fit.objective;
      doc["grid"] = {{"min", grid.front()},
                     {"max", grid.back()},
                     {"points", static_cast<int>(grid.size())}};
      write_text_file(options.out, doc.dump(2) + "\n");
    }
    return kExitOk;
  });
}

}  // namespace rsgd::cli
