#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace rsgd::cli {

// Exit codes shared by every subcommand:
//   0 success, 2 bad flags, 3 dataset parse/IO error, 4 divergence,
//   5 failed diagnostic assertion, 1 partial bench failure.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitBadFlags = 2;
inline constexpr int kExitParseError = 3;
inline constexpr int kExitDiverged = 4;
inline constexpr int kExitCheckFailed = 5;

struct TrainOptions {
  std::string dataset;
  std::string test;  // optional eval set path
  std::string method = "sgd-sramp";
  double lambda = 1e-4;
  double eta = 0.1;
  int epochs = 15;
  uint64_t seed = 0;
  std::string average = "A";
  std::string bias = "augmented";
  double s_star = -1.0;
  double sr_alpha = 2.0;
  double sr_beta = -0.03;
  double c_star = 2.0;
  bool normalize = false;
  std::string out_model;
  std::string out_trace;
};
int cmd_train(const TrainOptions& options);

struct CvOptions {
  std::string dataset;
  std::string method = "sgd-sramp";
  int folds = 10;
  std::vector<double> lambda_grid;  // empty -> default grid
  double eta = 0.1;
  int epochs = 15;
  uint64_t seed = 0;
  std::string average = "A";
  std::string bias = "augmented";
  double s_star = -1.0;
  double sr_alpha = 2.0;
  double sr_beta = -0.03;
  double c_star = 2.0;
  bool normalize = false;
  std::string out;  // fold-error table CSV; stdout when empty
};
int cmd_cv(const CvOptions& options);

struct FlipOptions {
  std::string input;
  double fraction = 0.2;
  uint64_t seed = 0;
  std::string output;
};
int cmd_flip(const FlipOptions& options);

struct BenchOptions {
  std::string spec_path;
  std::string out_prefix;  // writes <prefix>.csv and <prefix>.json
};
int cmd_bench(const BenchOptions& options);

struct CheckOptions {
  std::string loss = "sramp";  // sramp | rgomp | hinge | log | ramp
  double s_star = -1.0;
  double sr_alpha = 2.0;
  double sr_beta = -0.03;
  double c_star = 2.0;
  bool conditions = true;
  bool grad = false;
  bool probe = false;
  bool phi = false;
  bool require_robust = false;
  uint64_t seed = 0;
  std::string out;  // JSON; stdout when empty
};
int cmd_check(const CheckOptions& options);

struct LosscurveOptions {
  std::vector<std::string> losses;  // tokens as in CheckOptions::loss
  double z_min = -5.0;
  double z_max = 5.0;
  int n_points = 101;
  double s_star = -1.0;
  double sr_alpha = 2.0;
  double sr_beta = -0.03;
  double c_star = 2.0;
  std::string out;  // CSV; stdout when empty
};
int cmd_losscurve(const LosscurveOptions& options);

struct FitSrampOptions {
  double s_star = -1.0;
  double grid_lo = 0.0;  // defaults to s* - 2 when lo >= hi
  double grid_hi = 0.0;
  int grid_n = 501;
  std::string out;  // optional JSON
};
int cmd_fit_sramp(const FitSrampOptions& options);

}  // namespace rsgd::cli
