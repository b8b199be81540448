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

#pragma once

#include "nngpvs/dataset.hpp"
#include "nngpvs/types.hpp"

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace nngpvs {

/// Pepelyshev test function of the first three coordinates (each in [0, 1]):
/// 4 (x1 - 2 + 8 x2 - 8 x2^2)^2 + (3 - 4 x2)^2 + 16 sqrt(x3 + 1) (2 x3 - 1)^2.
double pepelyshev(std::span<const double> x);

struct PepelyshevConfig {
  int n_train = 31;
  int n_test = 100;
  int d_total = 20;  // 3 active coordinates plus inert ones
  int lhd_restarts = 20;
};

/// Training and test sets from independent maximin LHDs on [0, 1]^d_total.
/// Both splits are standardized (predictors and response) with the training
/// statistics.
std::pair<Dataset, Dataset> pepelyshev_dataset(const PepelyshevConfig& config, std::uint64_t seed);

struct LhdResult {
  RowMatrix design;
  std::vector<double> candidate_min_distances;  // one per random restart
  double min_distance = 0.0;
};

double min_pairwise_distance(const RowMatrix& design);

/// Latin hypercube with one jittered point per stratum [k/n, (k+1)/n) in each
/// column. The best of `n_restarts` random candidates is improved by
/// within-column swaps that raise the minimum pairwise distance.
LhdResult maximin_lhd_detailed(int n, int d, std::uint64_t seed, int n_restarts = 20);
RowMatrix maximin_lhd(int n, int d, std::uint64_t seed, int n_restarts = 20);

// y = sin(x3) + sin(5 x4) + eps, eps ~ N(0, noise_variance), x ~ N(0, Sigma).
struct SineSimConfig {
  int n = 100;
  double noise_variance = 0.0025;
  Matrix sigma;

  /// 20 x 20 Sigma with unit diagonal, 0.4 at (3,13) and (4,14), 0.3 at
  /// (3,12) and (4,15) (1-based), symmetric.
  static SineSimConfig defaults();
  /// Throws InputError unless sigma is symmetric positive definite.
  void validate() const;
};

/// Raw draws in original units.
Dataset simulate_sine_raw(const SineSimConfig& config, std::uint64_t seed);
/// Raw draws with predictors and response standardized over the whole set.
Dataset simulate_sine(const SineSimConfig& config, std::uint64_t seed);

double mse(const Vector& yhat, const Vector& y);
double mad(const Vector& yhat, const Vector& y);

/// Random partition of 0..n-1 into k folds whose sizes differ by at most one.
std::vector<std::vector<int>> kfold_split(int n, int k, std::uint64_t seed);

}  // namespace nngpvs
