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

#include "nngpvs/neighbors.hpp"
#include "nngpvs/types.hpp"

#include <memory>
#include <vector>

namespace nngpvs {

// Sparse factorization Ktilde = B^{-1} F B^{-T} of the NNGP correlation
// matrix of the training rows. Row i of B is e_i - b_i placed on the
// neighbor columns N(i); f_i is the conditional variance of row i given N(i).
// Factors do not depend on sigma2.
struct NngpFactors {
  std::vector<Vector> b;
  Vector f;
  double gamma = 0.0;
  double rho = 0.0;
  std::shared_ptr<const NeighborGraph> graph;

  int size() const noexcept { return static_cast<int>(f.size()); }
  const ActiveSet& active() const { return graph->active; }

  bool matches(const ActiveSet& active, double gamma, double rho) const;
  // Throws ContractError when the factors were built for other parameters.
  void require(const ActiveSet& active, double gamma, double rho) const;
};

enum class CovParam { rho, gamma };

// Derivatives of the factor entries with respect to rho and gamma.
struct FactorDerivatives {
  std::vector<Vector> db_rho, db_gamma;
  Vector df_rho, df_gamma;
};

/// Solves each local |N(i)| x |N(i)| system by Cholesky. Throws
/// ConditioningError when a conditional variance drops below 1e-12.
NngpFactors build_factors(const RowMatrix& X, double gamma, double rho,
                          std::shared_ptr<const NeighborGraph> graph);
NngpFactors build_factors(const RowMatrix& X, const ActiveSet& active, double gamma, double rho,
                          std::shared_ptr<const NeighborGraph> graph);

FactorDerivatives factor_derivatives(const RowMatrix& X, const NngpFactors& factors);

double logdet_ktilde(const NngpFactors& factors);

/// B v, i.e. v_i - b_i . v_{N(i)}.
Vector apply_b(const NngpFactors& factors, const Vector& v);

/// Ktilde^{-1} v = B^T F^{-1} B v in O(n m).
Vector ktilde_inv_mul(const NngpFactors& factors, const Vector& v);

/// v^T Ktilde^{-1} v.
double ktilde_quadratic(const NngpFactors& factors, const Vector& v);

/// Full Gaussian log-density of y ~ N(X beta, sigma2 Ktilde), including the
/// -(n/2) log(2 pi) constant. beta must vanish outside the factors' active set.
double log_likelihood(const Vector& y, const RowMatrix& X, const Vector& beta,
                      const CovarianceParams& params, const NngpFactors& factors);

struct LikelihoodGradient {
  double value = 0.0;
  double d_rho = 0.0;
  double d_gamma = 0.0;
};

/// log_likelihood together with its partial derivatives in rho and gamma.
LikelihoodGradient log_likelihood_gradient(const Vector& y, const RowMatrix& X,
                                           const Vector& beta, const CovarianceParams& params,
                                           const NngpFactors& factors);

// Dense views. These allocate n x n and are meant for the reference prior and
// for tests.
Matrix dense_b(const NngpFactors& factors);
Matrix dense_ktilde(const NngpFactors& factors);

/// dKtilde/dtheta = -B^{-1} (A + A^T - dF) B^{-T} with A = dB B^{-1} F.
Matrix dktilde(const NngpFactors& factors, const RowMatrix& X, CovParam wrt);
Matrix dktilde(const NngpFactors& factors, const FactorDerivatives& derivs, CovParam wrt);

}  // namespace nngpvs
