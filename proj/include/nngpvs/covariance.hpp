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

#include "nngpvs/types.hpp"

#include <span>

namespace nngpvs {

/// Euclidean distance restricted to the coordinates in `active`.
double active_distance(std::span<const double> x1, std::span<const double> x2,
                       const ActiveSet& active);

/// Matern-5/2 correlation (1 + sqrt5 r/rho + 5 r^2/(3 rho^2)) exp(-sqrt5 r/rho).
double matern52(double dist, double rho);

/// Derivative of matern52 with respect to rho.
double matern52_drho(double dist, double rho);

struct MaternEval {
  double value = 0.0;
  double drho = 0.0;
};
/// matern52 and matern52_drho sharing one exponential.
MaternEval matern52_eval(double dist, double rho);

/// Nugget-mixed correlation (1-gamma) * [same point] + gamma * K(dist, rho).
/// The nugget is attached by identity of the stored coordinates, not by
/// zero distance under `active`: two rows differing only in inert columns
/// share no nugget.
double corr(std::span<const double> x1, std::span<const double> x2, double gamma, double rho,
            const ActiveSet& active);
double corr_dgamma(std::span<const double> x1, std::span<const double> x2, double rho,
                   const ActiveSet& active);
double corr_drho(std::span<const double> x1, std::span<const double> x2, double gamma,
                 double rho, const ActiveSet& active);

// Forms used when the identity of the two measurements is already known
// (training rows compare by index).
inline double corr_from_distance(double dist, bool same, double gamma, double rho) {
  return (same ? 1.0 - gamma : 0.0) + gamma * matern52(dist, rho);
}
inline double corr_dgamma_from_distance(double dist, bool same, double rho) {
  return (same ? -1.0 : 0.0) + matern52(dist, rho);
}
inline double corr_drho_from_distance(double dist, double gamma, double rho) {
  return gamma * matern52_drho(dist, rho);
}

}  // namespace nngpvs
