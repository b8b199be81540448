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

#include <Eigen/Dense>
#include <span>
#include <vector>

namespace nngpvs {

// Design matrices are row-major so that an observation is a contiguous span.
using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

inline std::span<const double> row_span(const RowMatrix& X, Eigen::Index i) {
  return {X.data() + i * X.cols(), static_cast<std::size_t>(X.cols())};
}

// Sorted set of distinct predictor indices, stored 0-based. Text formats
// (chain CSV, JSON) use 1-based indices.
class ActiveSet {
 public:
  ActiveSet(std::vector<int> indices, int dim);

  static ActiveSet full(int dim);
  static ActiveSet singleton(int index, int dim);

  const std::vector<int>& indices() const noexcept { return indices_; }
  int size() const noexcept { return static_cast<int>(indices_.size()); }
  int dim() const noexcept { return dim_; }
  bool contains(int index) const;

  // Adds `index` if absent, removes it otherwise. Removing the last member
  // throws.
  ActiveSet toggled(int index) const;

  // Bit mask over the dim predictors; only valid for dim <= 63.
  unsigned long long mask() const;

  friend bool operator==(const ActiveSet&, const ActiveSet&) = default;

 private:
  std::vector<int> indices_;
  int dim_;
};

// Process variance sigma2, signal fraction gamma and Matern range rho.
struct CovarianceParams {
  double sigma2 = 1.0;
  double gamma = 0.5;
  double rho = 1.0;

  // Throws DomainError unless sigma2 > 0, 0 < gamma < 1 and rho > 0.
  void validate() const;
};

}  // namespace nngpvs
