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

#include "nngpvs/nngp.hpp"
#include "nngpvs/types.hpp"

namespace nngpvs {

// Dense quantities behind the reference prior for (sigma2, rho, gamma) given
// the active set. All matrices are n x n.
struct RefPriorWorkspace {
  Matrix P;        // I - X_A (X_A^T Kt^{-1} X_A)^{-1} X_A^T Kt^{-1}
  Matrix Q;        // Kt^{-1} P
  double S2 = 0;   // y^T Q y
  Matrix W_rho;    // dKt/drho Q
  Matrix W_gamma;  // dKt/dgamma Q
  Eigen::Matrix3d fisher = Eigen::Matrix3d::Zero();
  double log_det_gram = 0;  // log|X_A^T Kt^{-1} X_A|
};

/// Columns of X restricted to the active set, in index order.
Matrix active_columns(const RowMatrix& X, const ActiveSet& active);

/// Requires |A| < n and a nonsingular X_A^T Kt^{-1} X_A (NumericalError
/// otherwise).
RefPriorWorkspace build_workspace(const Vector& y, const RowMatrix& X, const NngpFactors& factors);

/// Half the log-determinant of a 3x3 Fisher matrix, or -infinity when an LDL^T
/// pivot is at or below 1e-12.
double half_log_det_fisher(const Eigen::Matrix3d& fisher);

/// log |I_R(rho, gamma)|^{1/2}. The 1/sigma2 factor of the prior is left to
/// the callers that need it; it does not involve rho or gamma.
// Fisher matrix of (sigma2, rho, gamma) computed in O(n^2 (m + k)) plus one
// triangular inverse; agrees with the dense workspace route.
Eigen::Matrix3d fisher_matrix(const RowMatrix& X, const NngpFactors& factors);

double log_reference_prior(const RowMatrix& X, const NngpFactors& factors);

/// Log of the likelihood with beta_A integrated out under a flat prior,
/// with the additive constant fixed to zero.
double integrated_log_likelihood(double sigma2, const Vector& y, const RowMatrix& X,
                                 const NngpFactors& factors);

}  // namespace nngpvs
