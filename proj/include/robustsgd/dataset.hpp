#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "robustsgd/types.hpp"

namespace rsgd {

// Sparse feature vector: (index, value) pairs with strictly increasing
// 1-based indices. Omitted indices are zeros.
struct SparseVector {
  std::vector<std::pair<int, double>> entries;
};

struct Instance {
  SparseVector features;
  int label = 1;  // exactly -1 or +1
};

struct DatasetMeta {
  std::string source;
  double noise_fraction = 0.0;
  std::optional<uint64_t> seed;
};

struct Dataset {
  std::vector<Instance> instances;
  int dimension = 0;  // >= every feature index present
  DatasetMeta meta;

  int size() const { return static_cast<int>(instances.size()); }
};

// Per-feature (min, max) fitted on training data; index i holds feature i+1.
struct NormalizationParams {
  std::vector<std::pair<double, double>> min_max;
};

double sparse_dot(const VectorXd& w, const SparseVector& x);
void add_scaled(VectorXd& w, const SparseVector& x, double scale);
double sparse_norm_sq(const SparseVector& x);

// [0,1] feature scaling. Implicit zeros count toward a feature's range, so
// a feature absent from some instance has 0 inside [min, max].
NormalizationParams normalize_fit(const Dataset& train);

// v -> (v - min)/(max - min), clipped to [0, 1]; constant features map to 0.
// Features with min < 0 get their implicit zeros materialized, since those
// zeros map to a nonzero value.
Dataset normalize_apply(const Dataset& data, const NormalizationParams& params);

std::pair<Dataset, Dataset> split_train_test(const Dataset& data,
                                             double test_fraction,
                                             uint64_t seed);

// Negates the labels of exactly round(fraction * n) instances chosen
// uniformly without replacement. Features and order are untouched.
Dataset flip_labels(const Dataset& data, double fraction, uint64_t seed);

Dataset shuffle(const Dataset& data, uint64_t seed);

// Two spherical unit-variance Gaussians centered at +-(separation/2) e1,
// n/2 instances per class, labels matching the generating class.
Dataset synth_gaussian(int n, int dim, double separation, uint64_t seed);

// k disjoint folds partitioning 0..n-1, sizes differing by at most one.
std::vector<std::vector<int>> kfold_indices(int n, int k, uint64_t seed);

}  // namespace rsgd
