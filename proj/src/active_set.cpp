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

#include "nngpvs/errors.hpp"
#include "nngpvs/types.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace nngpvs {

ActiveSet::ActiveSet(std::vector<int> indices, int dim)
    : indices_(std::move(indices)), dim_(dim) {
  if (dim_ < 1) throw InputError("ActiveSet: dimension must be positive");
  std::sort(indices_.begin(), indices_.end());
  if (indices_.empty()) throw InputError("ActiveSet: set must be nonempty");
  if (std::adjacent_find(indices_.begin(), indices_.end()) != indices_.end())
    throw InputError("ActiveSet: duplicate predictor index");
  if (indices_.front() < 0 || indices_.back() >= dim_)
    throw InputError("ActiveSet: index out of range for dimension " + std::to_string(dim_));
}

ActiveSet ActiveSet::full(int dim) {
  std::vector<int> all(static_cast<std::size_t>(std::max(dim, 0)));
  std::iota(all.begin(), all.end(), 0);
  return ActiveSet(std::move(all), dim);
}

ActiveSet ActiveSet::singleton(int index, int dim) { return ActiveSet({index}, dim); }

bool ActiveSet::contains(int index) const {
  return std::binary_search(indices_.begin(), indices_.end(), index);
}

ActiveSet ActiveSet::toggled(int index) const {
  std::vector<int> next = indices_;
  auto it = std::lower_bound(next.begin(), next.end(), index);
  if (it != next.end() && *it == index) {
    next.erase(it);
  } else {
    next.insert(it, index);
  }
  return ActiveSet(std::move(next), dim_);
}

unsigned long long ActiveSet::mask() const {
  unsigned long long bits = 0;
  for (int i : indices_) bits |= (1ULL << i);
  return bits;
}

void CovarianceParams::validate() const {
  if (!(sigma2 > 0.0) || !std::isfinite(sigma2)) throw DomainError("sigma2 must be positive");
  if (!(gamma > 0.0 && gamma < 1.0)) throw DomainError("gamma must lie in (0, 1)");
  if (!(rho > 0.0) || !std::isfinite(rho)) throw DomainError("rho must be positive");
}

}  // namespace nngpvs
