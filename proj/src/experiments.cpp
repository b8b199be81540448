/*
 * Copyright 2026 The nngpvs Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "nngpvs/experiments.hpp"

#include "nngpvs/errors.hpp"
#include "nngpvs/random.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace nngpvs {
namespace {

RowMatrix random_lhd(int n, int d, Rng& rng) {
  RowMatrix design(n, d);
  std::vector<int> perm(static_cast<std::size_t>(n));
  for (int j = 0; j < d; ++j) {
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng.engine());
    for (int i = 0; i < n; ++i) {
      double v = (perm[static_cast<std::size_t>(i)] + rng.uniform()) / n;
      design(i, j) = std::min(v, std::nextafter((perm[static_cast<std::size_t>(i)] + 1.0) / n, 0.0));
    }
  }
  return design;
}

Matrix squared_distances(const RowMatrix& X) {
  const auto n = X.rows();
  Matrix D = Matrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < i; ++j) D(i, j) = D(j, i) = (X.row(i) - X.row(j)).squaredNorm();
  return D;
}

// Minimum off-diagonal squared distance and how many pairs attain it.
std::pair<double, int> min_and_count(const Matrix& D) {
  double best = std::numeric_limits<double>::infinity();
  int count = 0;
  for (Eigen::Index i = 0; i < D.rows(); ++i)
    for (Eigen::Index j = 0; j < i; ++j) {
      if (D(i, j) < best) {
        best = D(i, j);
        count = 1;
      } else if (D(i, j) == best) {
        ++count;
      }
    }
  return {best, count};
}

}  // namespace

double pepelyshev(std::span<const double> x) {
  if (x.size() < 3) throw InputError("pepelyshev: need at least three coordinates");
  for (std::size_t i = 0; i < 3; ++i)
    if (!(x[i] >= 0.0 && x[i] <= 1.0)) throw DomainError("pepelyshev: coordinates must lie in [0, 1]");
  const double x1 = x[0], x2 = x[1], x3 = x[2];
  const double a = x1 - 2.0 + 8.0 * x2 - 8.0 * x2 * x2;
  const double b = 3.0 - 4.0 * x2;
  const double c = 2.0 * x3 - 1.0;
  return 4.0 * a * a + b * b + 16.0 * std::sqrt(x3 + 1.0) * c * c;
}

double min_pairwise_distance(const RowMatrix& design) {
  if (design.rows() < 2) return std::numeric_limits<double>::infinity();
  return std::sqrt(min_and_count(squared_distances(design)).first);
}

LhdResult maximin_lhd_detailed(int n, int d, std::uint64_t seed, int n_restarts) {
  if (n < 2 || d < 1) throw InputError("maximin_lhd: need n >= 2 and d >= 1");
  n_restarts = std::max(n_restarts, 1);
  LhdResult result;
  double best_min = -1.0;
  for (int r = 0; r < n_restarts; ++r) {
    Rng rng(mix_seed(seed, static_cast<std::uint64_t>(r)));
    RowMatrix cand = random_lhd(n, d, rng);
    const double md = min_pairwise_distance(cand);
    result.candidate_min_distances.push_back(md);
    if (md > best_min) {
      best_min = md;
      result.design = std::move(cand);
    }
  }

  // Swap two entries of one column; this keeps the Latin property.
  Rng rng(mix_seed(seed, static_cast<std::uint64_t>(n_restarts) + 1));
  RowMatrix& X = result.design;
  Matrix D = squared_distances(X);
  auto current = min_and_count(D);
  const int attempts = 100 * n;
  Vector old_r1(n), old_r2(n);
  for (int t = 0; t < attempts; ++t) {
    const int col = rng.uniform_int(0, d - 1);
    const int r1 = rng.uniform_int(0, n - 1);
    int r2 = rng.uniform_int(0, n - 2);
    if (r2 >= r1) ++r2;
    old_r1 = D.col(r1);
    old_r2 = D.col(r2);
    const double a = X(r1, col), b = X(r2, col);
    for (int j = 0; j < n; ++j) {
      if (j == r1 || j == r2) continue;
      const double xj = X(j, col);
      D(r1, j) = D(j, r1) = D(r1, j) - (a - xj) * (a - xj) + (b - xj) * (b - xj);
      D(r2, j) = D(j, r2) = D(r2, j) - (b - xj) * (b - xj) + (a - xj) * (a - xj);
    }
    const auto next = min_and_count(D);
    if (next.first > current.first || (next.first == current.first && next.second < current.second)) {
      std::swap(X(r1, col), X(r2, col));
      current = next;
    } else {
      D.col(r1) = old_r1;
      D.row(r1) = old_r1.transpose();
      D.col(r2) = old_r2;
      D.row(r2) = old_r2.transpose();
    }
  }
  // Recompute exactly so incremental rounding cannot leak into the result.
  result.min_distance = min_pairwise_distance(X);
  return result;
}

RowMatrix maximin_lhd(int n, int d, std::uint64_t seed, int n_restarts) {
  return maximin_lhd_detailed(n, d, seed, n_restarts).design;
}

std::pair<Dataset, Dataset> pepelyshev_dataset(const PepelyshevConfig& config, std::uint64_t seed) {
  if (config.d_total < 3) throw InputError("pepelyshev_dataset: need at least three dimensions");
  auto make = [&](int n, std::uint64_t stream) {
    Dataset data;
    data.X = maximin_lhd(n, config.d_total, mix_seed(seed, stream), config.lhd_restarts);
    data.y.resize(n);
    for (int i = 0; i < n; ++i) data.y(i) = pepelyshev(row_span(data.X, i));
    for (int j = 0; j < config.d_total; ++j) data.names.push_back("x" + std::to_string(j + 1));
    data.transform = Standardization::identity(config.d_total);
    return data;
  };
  const Dataset train_raw = make(config.n_train, 0);
  const Dataset test_raw = make(config.n_test, 1);
  const Dataset train = standardize(train_raw, StandardizeOptions{true, true, true});
  return {train, apply_standardization(test_raw, train.transform)};
}

SineSimConfig SineSimConfig::defaults() {
  SineSimConfig c;
  c.sigma = Matrix::Identity(20, 20);
  const auto set = [&](int i, int j, double v) { c.sigma(i - 1, j - 1) = c.sigma(j - 1, i - 1) = v; };
  set(3, 13, 0.4);
  set(3, 12, 0.3);
  set(4, 14, 0.4);
  set(4, 15, 0.3);
  return c;
}

void SineSimConfig::validate() const {
  if (n < 2) throw InputError("SineSimConfig: need at least two samples");
  if (sigma.rows() < 4 || sigma.rows() != sigma.cols())
    throw InputError("SineSimConfig: covariance must be square with at least four rows");
  if (!(noise_variance >= 0.0)) throw InputError("SineSimConfig: noise variance must be nonnegative");
  if ((sigma - sigma.transpose()).cwiseAbs().maxCoeff() > 0.0)
    throw InputError("SineSimConfig: covariance is not symmetric");
  Eigen::LLT<Matrix> llt(sigma);
  if (llt.info() != Eigen::Success) throw InputError("SineSimConfig: covariance is not positive definite");
}

Dataset simulate_sine_raw(const SineSimConfig& config, std::uint64_t seed) {
  config.validate();
  const Matrix L = config.sigma.llt().matrixL();
  const auto d = config.sigma.rows();
  Rng rng(seed);
  Dataset data;
  data.X.resize(config.n, d);
  data.y.resize(config.n);
  const double noise_sd = std::sqrt(config.noise_variance);
  Vector z(d);
  for (int i = 0; i < config.n; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) z(j) = rng.normal();
    data.X.row(i) = (L * z).transpose();
    data.y(i) = std::sin(data.X(i, 2)) + std::sin(5.0 * data.X(i, 3)) + noise_sd * rng.normal();
  }
  for (Eigen::Index j = 0; j < d; ++j) data.names.push_back("x" + std::to_string(j + 1));
  data.transform = Standardization::identity(static_cast<int>(d));
  return data;
}

Dataset simulate_sine(const SineSimConfig& config, std::uint64_t seed) {
  return standardize(simulate_sine_raw(config, seed), StandardizeOptions{true, true, true});
}

double mse(const Vector& yhat, const Vector& y) {
  if (yhat.size() != y.size() || y.size() == 0) throw InputError("mse: length mismatch");
  return (yhat - y).squaredNorm() / static_cast<double>(y.size());
}

double mad(const Vector& yhat, const Vector& y) {
  if (yhat.size() != y.size() || y.size() == 0) throw InputError("mad: length mismatch");
  return (yhat - y).cwiseAbs().sum() / static_cast<double>(y.size());
}

std::vector<std::vector<int>> kfold_split(int n, int k, std::uint64_t seed) {
  if (k < 2 || k > n) throw InputError("kfold_split: require 2 <= k <= n");
  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  Rng rng(seed);
  std::shuffle(order.begin(), order.end(), rng.engine());
  std::vector<std::vector<int>> folds(static_cast<std::size_t>(k));
  std::size_t pos = 0;
  for (int f = 0; f < k; ++f) {
    const int size = n / k + (f < n % k ? 1 : 0);
    for (int i = 0; i < size; ++i) folds[static_cast<std::size_t>(f)].push_back(order[pos++]);
    std::sort(folds[static_cast<std::size_t>(f)].begin(), folds[static_cast<std::size_t>(f)].end());
  }
  return folds;
}

}  // namespace nngpvs
