#include "robustsgd/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "robustsgd/rng.hpp"

namespace rsgd {

double sparse_dot(const VectorXd& w, const SparseVector& x) {
  double sum = 0.0;
  for (const auto& [idx, val] : x.entries) sum += w[idx - 1] * val;
  return sum;
}

void add_scaled(VectorXd& w, const SparseVector& x, double scale) {
  for (const auto& [idx, val] : x.entries) w[idx - 1] += scale * val;
}

double sparse_norm_sq(const SparseVector& x) {
  double sum = 0.0;
  for (const auto& [idx, val] : x.entries) sum += val * val;
  return sum;
}

NormalizationParams normalize_fit(const Dataset& train) {
  const size_t dim = static_cast<size_t>(train.dimension);
  constexpr double inf = std::numeric_limits<double>::infinity();
  std::vector<std::pair<double, double>> mm(dim, {inf, -inf});
  std::vector<int> counts(dim, 0);
  for (const auto& inst : train.instances) {
    for (const auto& [idx, val] : inst.features.entries) {
      auto& [lo, hi] = mm[static_cast<size_t>(idx - 1)];
      lo = std::min(lo, val);
      hi = std::max(hi, val);
      ++counts[static_cast<size_t>(idx - 1)];
    }
  }
  const int n = train.size();
  for (size_t j = 0; j < dim; ++j) {
    if (counts[j] < n) {  // implicit zeros participate in the range
      mm[j].first = std::min(mm[j].first, 0.0);
      mm[j].second = std::max(mm[j].second, 0.0);
    }
  }
  return {std::move(mm)};
}

Dataset normalize_apply(const Dataset& data, const NormalizationParams& params) {
  auto scale = [&](int idx, double v) {
    const auto& [lo, hi] = params.min_max[static_cast<size_t>(idx - 1)];
    if (hi <= lo) return 0.0;
    return std::clamp((v - lo) / (hi - lo), 0.0, 1.0);
  };

  Dataset out;
  out.dimension = data.dimension;
  out.meta = data.meta;
  out.instances.reserve(data.instances.size());

  // Features whose fitted min is negative map implicit zeros to a nonzero
  // value, so those entries have to be materialized.
  std::vector<int> materialize;
  for (size_t j = 0; j < params.min_max.size(); ++j)
    if (params.min_max[j].first < 0.0) materialize.push_back(static_cast<int>(j) + 1);

  for (const auto& inst : data.instances) {
    Instance mapped;
    mapped.label = inst.label;
    auto mat = materialize.begin();
    for (const auto& [idx, val] : inst.features.entries) {
      while (mat != materialize.end() && *mat < idx) {
        mapped.features.entries.emplace_back(*mat, scale(*mat, 0.0));
        ++mat;
      }
      if (mat != materialize.end() && *mat == idx) ++mat;
      mapped.features.entries.emplace_back(idx, scale(idx, val));
    }
    while (mat != materialize.end()) {
      mapped.features.entries.emplace_back(*mat, scale(*mat, 0.0));
      ++mat;
    }
    out.instances.push_back(std::move(mapped));
  }
  return out;
}

std::pair<Dataset, Dataset> split_train_test(const Dataset& data,
                                             double test_fraction,
                                             uint64_t seed) {
  if (!(test_fraction > 0.0 && test_fraction < 1.0))
    throw std::invalid_argument("split_train_test: fraction must be in (0, 1)");
  const int n = data.size();
  const int n_test = static_cast<int>(std::floor(test_fraction * n + 0.5));

  std::vector<int> order(static_cast<size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  Rng rng(seed);
  fisher_yates(order, rng);

  std::vector<char> in_test(static_cast<size_t>(n), 0);
  for (int i = 0; i < n_test; ++i) in_test[static_cast<size_t>(order[i])] = 1;

  Dataset train, test;
  train.dimension = test.dimension = data.dimension;
  train.meta = test.meta = data.meta;
  for (int i = 0; i < n; ++i) {
    (in_test[static_cast<size_t>(i)] ? test : train)
        .instances.push_back(data.instances[static_cast<size_t>(i)]);
  }
  return {std::move(train), std::move(test)};
}

Dataset flip_labels(const Dataset& data, double fraction, uint64_t seed) {
  if (!(fraction >= 0.0 && fraction <= 1.0))
    throw std::invalid_argument("flip_labels: fraction must be in [0, 1]");
  const int n = data.size();
  const int k = static_cast<int>(std::floor(fraction * n + 0.5));

  std::vector<int> order(static_cast<size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  Rng rng(seed);
  fisher_yates(order, rng);

  Dataset out = data;
  for (int i = 0; i < k; ++i)
    out.instances[static_cast<size_t>(order[i])].label *= -1;
  out.meta.noise_fraction = fraction;
  out.meta.seed = seed;
  return out;
}

Dataset shuffle(const Dataset& data, uint64_t seed) {
  Dataset out = data;
  Rng rng(seed);
  fisher_yates(out.instances, rng);
  return out;
}

Dataset synth_gaussian(int n, int dim, double separation, uint64_t seed) {
  if (n <= 0 || n % 2 != 0)
    throw std::invalid_argument("synth_gaussian: n must be positive and even");
  if (dim < 1) throw std::invalid_argument("synth_gaussian: dim must be >= 1");
  if (!(separation > 0.0))
    throw std::invalid_argument("synth_gaussian: separation must be > 0");

  Rng rng(seed);
  Dataset out;
  out.dimension = dim;
  out.meta.source = "synth_gaussian";
  out.meta.seed = seed;
  out.instances.reserve(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) {
    const int label = i < n / 2 ? 1 : -1;
    Instance inst;
    inst.label = label;
    inst.features.entries.reserve(static_cast<size_t>(dim));
    for (int j = 0; j < dim; ++j) {
      double v = rng.normal();
      if (j == 0) v += label * separation / 2.0;
      inst.features.entries.emplace_back(j + 1, v);
    }
    out.instances.push_back(std::move(inst));
  }
  return out;
}

std::vector<std::vector<int>> kfold_indices(int n, int k, uint64_t seed) {
  if (k < 2 || k > n)
    throw std::invalid_argument("kfold_indices: need 2 <= k <= n");
  std::vector<int> order(static_cast<size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  Rng rng(seed);
  fisher_yates(order, rng);

  // first n % k folds get the extra element
  std::vector<std::vector<int>> folds(static_cast<size_t>(k));
  int pos = 0;
  for (int f = 0; f < k; ++f) {
    const int size = n / k + (f < n % k ? 1 : 0);
    folds[static_cast<size_t>(f)].assign(order.begin() + pos,
                                         order.begin() + pos + size);
    pos += size;
  }
  return folds;
}

}  // namespace rsgd
