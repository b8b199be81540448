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

#include "nngpvs/mcmc.hpp"
#include "nngpvs/types.hpp"

namespace nngpvs {

struct PredictionResult {
  Vector yhat;
  int n_samples = 0;
};

/// NNGP conditional mean for one posterior sample:
///   u^T beta + b_u . (y_{N(u)} - X_{N(u)} beta),  b_u = K_{u,N(u)} K_{N(u)}^{-1},
/// with N(u) the m nearest training rows under the sample's active set.
/// A test point is a new measurement, so it shares no nugget with training
/// rows even when its coordinates coincide with one.
Vector sample_predictive_mean(const Sample& sample, const RowMatrix& X_star,
                              const Problem& problem);

/// Monte Carlo average of sample_predictive_mean over samples
/// burn_in, burn_in + thin, ...
PredictionResult predict_mean(const Chain& chain, const RowMatrix& X_star, const Problem& problem,
                              int burn_in, int thin = 1);

/// Fraction of retained samples whose active set contains each predictor.
Vector inclusion_probabilities(const Chain& chain, int burn_in);

}  // namespace nngpvs
