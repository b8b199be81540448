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

#include "nngpvs/predict.hpp"

#include "nngpvs/covariance.hpp"
#include "nngpvs/errors.hpp"
#include "nngpvs/neighbors.hpp"

#include <cmath>

namespace nngpvs {

Vector sample_predictive_mean(const Sample& sample, const RowMatrix& X_star,
                              const Problem& problem) {
  const RowMatrix& X = problem.X;
  if (X_star.cols() != X.cols()) throw InputError("predict: test design width does not match training");
  if (sample.beta.size() != X.cols()) throw InputError("predict: coefficient length mismatch");
  const ActiveSet active(sample.active, static_cast<int>(X.cols()));
  const Vector residual = problem.y - X * sample.beta;
  const Vector trend = X_star * sample.beta;

  Vector out(X_star.rows());
  for (Eigen::Index t = 0; t < X_star.rows(); ++t) {
    const auto u = row_span(X_star, t);
    const std::vector<int> nb = test_neighbors(u, X, active, problem.m);
    const auto q = static_cast<Eigen::Index>(nb.size());
    Matrix K(q, q);
    Vector k(q), r(q);
    for (Eigen::Index a = 0; a < q; ++a) {
      const auto xa = row_span(X, nb[static_cast<std::size_t>(a)]);
      k(a) = sample.gamma * matern52(active_distance(u, xa, active), sample.rho);
      r(a) = residual(nb[static_cast<std::size_t>(a)]);
      K(a, a) = 1.0;
      for (Eigen::Index c = 0; c < a; ++c) {
        const double dist = active_distance(xa, row_span(X, nb[static_cast<std::size_t>(c)]), active);
        K(a, c) = K(c, a) = corr_from_distance(dist, false, sample.gamma, sample.rho);
      }
    }
    Eigen::LLT<Matrix> llt(K);
    if (llt.info() != Eigen::Success)
      throw NumericalError("predict: neighbor correlation matrix not positive definite");
    out(t) = trend(t) + llt.solve(k).dot(r);
  }
  return out;
}

PredictionResult predict_mean(const Chain& chain, const RowMatrix& X_star, const Problem& problem,
                              int burn_in, int thin) {
  if (thin < 1) throw InputError("predict_mean: thin must be at least 1");
  if (burn_in < 0) throw InputError("predict_mean: burn_in must be nonnegative");
  PredictionResult result{Vector::Zero(X_star.rows()), 0};
  for (int s = burn_in; s < chain.iterations(); s += thin) {
    result.yhat += sample_predictive_mean(chain.samples[static_cast<std::size_t>(s)], X_star, problem);
    ++result.n_samples;
  }
  if (result.n_samples == 0) throw InputError("predict_mean: no samples left after burn-in and thinning");
  result.yhat /= static_cast<double>(result.n_samples);
  return result;
}

Vector inclusion_probabilities(const Chain& chain, int burn_in) {
  if (burn_in < 0 || burn_in >= chain.iterations())
    throw InputError("inclusion_probabilities: no samples left after burn-in");
  Vector counts = Vector::Zero(chain.dim);
  for (int s = burn_in; s < chain.iterations(); ++s)
    for (int a : chain.samples[static_cast<std::size_t>(s)].active) counts(a) += 1.0;
  return counts / static_cast<double>(chain.iterations() - burn_in);
}

}  // namespace nngpvs
