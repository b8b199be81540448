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

#include "nngpvs/bench.hpp"

#include "nngpvs/errors.hpp"
#include "nngpvs/predict.hpp"

#include <numeric>

namespace nngpvs {

SamplerConfig make_sampler_config(int d, const FitSettings& settings) {
  SamplerConfig config = SamplerConfig::defaults(d, settings.size_weight);
  config.proposal.p_h = settings.p_h;
  config.hmc = settings.hmc;
  config.validate(d);
  return config;
}

FitResult fit_and_predict(const Dataset& train, const RowMatrix& X_test, const FitSettings& settings,
                          std::uint64_t seed) {
  const Problem problem{train.X, train.y, settings.m};
  FitResult out;
  out.chain = run_chain(problem, make_sampler_config(train.dim(), settings), settings.iterations,
                        settings.burn_in, seed);
  out.yhat = predict_mean(out.chain, X_test, problem, settings.burn_in, settings.thin).yhat;
  out.inclusion = inclusion_probabilities(out.chain, settings.burn_in);
  const double iters = static_cast<double>(out.chain.iterations());
  out.acceptance_step1 = static_cast<double>(out.chain.accepted_step1()) / iters;
  out.acceptance_step3 = static_cast<double>(out.chain.accepted_step3()) / iters;
  return out;
}

PepelyshevBenchResult run_pepelyshev_bench(const PepelyshevConfig& data_config,
                                           const FitSettings& settings, std::uint64_t seed) {
  const auto [train, test] = pepelyshev_dataset(data_config, mix_seed(seed, 100));
  PepelyshevBenchResult r;
  r.fit = fit_and_predict(train, test.X, settings, mix_seed(seed, 200));
  r.mse = mse(r.fit.yhat, test.y);
  r.mad = mad(r.fit.yhat, test.y);
  return r;
}

SineBenchResult run_sine_bench(const SineSimConfig& data_config, int folds,
                               const FitSettings& settings, std::uint64_t seed) {
  const Dataset data = simulate_sine(data_config, mix_seed(seed, 100));
  const auto split = kfold_split(data.n(), folds, mix_seed(seed, 101));
  SineBenchResult result;
  for (std::size_t f = 0; f < split.size(); ++f) {
    std::vector<int> train_rows;
    for (std::size_t g = 0; g < split.size(); ++g)
      if (g != f) train_rows.insert(train_rows.end(), split[g].begin(), split[g].end());
    std::sort(train_rows.begin(), train_rows.end());
    const Dataset train = select_rows(data, train_rows);
    const Dataset test = select_rows(data, split[f]);
    const FitResult fit = fit_and_predict(train, test.X, settings, mix_seed(seed, 200 + f));
    SineFold fold{split[f], mse(fit.yhat, test.y), mad(fit.yhat, test.y), fit.inclusion,
                  fit.acceptance_step1, fit.acceptance_step3};
    result.folds.push_back(std::move(fold));
  }
  for (const auto& f : result.folds) {
    result.mean_mse += f.mse;
    result.mean_mad += f.mad;
  }
  result.mean_mse /= static_cast<double>(result.folds.size());
  result.mean_mad /= static_cast<double>(result.folds.size());
  return result;
}

}  // namespace nngpvs
