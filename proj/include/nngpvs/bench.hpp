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
#include "nngpvs/experiments.hpp"
#include "nngpvs/mcmc.hpp"
#include "nngpvs/selection.hpp"

#include <cstdint>
#include <vector>

namespace nngpvs {

// Sampler settings shared by fit and the benchmark drivers.
struct FitSettings {
  int iterations = 6000;
  int burn_in = 1000;
  int thin = 1;
  int m = 10;
  SizeWeight size_weight = SizeWeight::reciprocal;
  double p_h = 0.6;
  HmcConfig hmc;
};

SamplerConfig make_sampler_config(int d, const FitSettings& settings);

// Fit on `train`, predict `test`; both already standardized.
struct FitResult {
  Chain chain;
  Vector yhat;  // standardized units
  Vector inclusion;
  double acceptance_step1 = 0.0;
  double acceptance_step3 = 0.0;
};

FitResult fit_and_predict(const Dataset& train, const RowMatrix& X_test, const FitSettings& settings,
                          std::uint64_t seed);

struct PepelyshevBenchResult {
  FitResult fit;
  double mse = 0.0;  // standardized test units
  double mad = 0.0;
};

PepelyshevBenchResult run_pepelyshev_bench(const PepelyshevConfig& data_config,
                                           const FitSettings& settings, std::uint64_t seed);

struct SineFold {
  std::vector<int> test_rows;
  double mse = 0.0;
  double mad = 0.0;
  Vector inclusion;
  double acceptance_step1 = 0.0;
  double acceptance_step3 = 0.0;
};

struct SineBenchResult {
  std::vector<SineFold> folds;
  double mean_mse = 0.0;
  double mean_mad = 0.0;
};

/// Simulates the sine data set once and runs k-fold cross validation with an
/// independent chain per fold.
SineBenchResult run_sine_bench(const SineSimConfig& data_config, int folds,
                               const FitSettings& settings, std::uint64_t seed);

}  // namespace nngpvs
