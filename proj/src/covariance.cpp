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

#include "nngpvs/covariance.hpp"

#include "nngpvs/errors.hpp"

#include <algorithm>
#include <cmath>

namespace nngpvs {
namespace {

constexpr double kSqrt5 = 2.23606797749978969640917366873;

void check_dims(std::span<const double> x1, std::span<const double> x2, const ActiveSet& active) {
  if (x1.size() != x2.size() || static_cast<int>(x1.size()) != active.dim())
    throw InputError("active_distance: point length does not match active set dimension");
}

void check_rho(double rho) {
  if (!(rho > 0.0)) throw DomainError("matern52: rho must be positive");
}

}  // namespace

double active_distance(std::span<const double> x1, std::span<const double> x2,
                       const ActiveSet& active) {
  check_dims(x1, x2, active);
  double sum = 0.0;
  for (int i : active.indices()) {
    const double diff = x1[i] - x2[i];
    sum += diff * diff;
  }
  return std::sqrt(sum);
}

double matern52(double dist, double rho) {
  check_rho(rho);
  if (dist < 0.0) throw DomainError("matern52: distance must be nonnegative");
  const double r = kSqrt5 * dist / rho;
  return (1.0 + r + r * r / 3.0) * std::exp(-r);
}

double matern52_drho(double dist, double rho) {
  check_rho(rho);
  if (dist < 0.0) throw DomainError("matern52_drho: distance must be nonnegative");
  const double e = std::exp(-kSqrt5 * dist / rho);
  const double k = (1.0 + kSqrt5 * dist / rho + 5.0 * dist * dist / (3.0 * rho * rho)) * e;
  return (-kSqrt5 * dist / (rho * rho) - 10.0 * dist * dist / (3.0 * rho * rho * rho)) * e +
         k * kSqrt5 * dist / (rho * rho);
}

MaternEval matern52_eval(double dist, double rho) {
  check_rho(rho);
  if (dist < 0.0) throw DomainError("matern52: distance must be nonnegative");
  const double r = kSqrt5 * dist / rho;
  const double e = std::exp(-r);
  return {(1.0 + r + r * r / 3.0) * e, r * r / (3.0 * rho) * (1.0 + r) * e};
}

namespace {
bool identical(std::span<const double> x1, std::span<const double> x2) {
  return std::equal(x1.begin(), x1.end(), x2.begin(), x2.end());
}
}  // namespace

double corr(std::span<const double> x1, std::span<const double> x2, double gamma, double rho,
            const ActiveSet& active) {
  return corr_from_distance(active_distance(x1, x2, active), identical(x1, x2), gamma, rho);
}

double corr_dgamma(std::span<const double> x1, std::span<const double> x2, double rho,
                   const ActiveSet& active) {
  return corr_dgamma_from_distance(active_distance(x1, x2, active), identical(x1, x2), rho);
}

double corr_drho(std::span<const double> x1, std::span<const double> x2, double gamma,
                 double rho, const ActiveSet& active) {
  return corr_drho_from_distance(active_distance(x1, x2, active), gamma, rho);
}

}  // namespace nngpvs
