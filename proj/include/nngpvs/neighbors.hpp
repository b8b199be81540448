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
#include <vector>

namespace nngpvs {

// Vecchia conditioning sets. Row i conditions on the (at most m) rows j < i
// closest to it under the active-set distance; ties go to the smaller index.
// Rows are taken in dataset order, so results depend on the row order of X.
struct NeighborGraph {
  std::vector<std::vector<int>> lists;  // 0-based, ordered by distance
  int m = 0;
  ActiveSet active = ActiveSet::full(1);
  // Optional distance cache filled by build_neighbor_graph: among[i] holds
  // the pairwise distances of row i's neighbors, to_row[i] their distances
  // to row i. Empty when the graph was assembled by hand.
  std::vector<Matrix> among;
  std::vector<Vector> to_row;

  int size() const noexcept { return static_cast<int>(lists.size()); }
  const std::vector<int>& operator[](int i) const { return lists[static_cast<std::size_t>(i)]; }
  bool has_distances() const noexcept { return among.size() == lists.size(); }
  friend bool operator==(const NeighborGraph& a, const NeighborGraph& b) {
    return a.lists == b.lists && a.m == b.m && a.active == b.active;
  }
};

NeighborGraph build_neighbor_graph(const RowMatrix& X, const ActiveSet& active, int m);

// Indices of the min(n, m) rows of X closest to u, nearest first.
std::vector<int> test_neighbors(std::span<const double> u, const RowMatrix& X,
                                const ActiveSet& active, int m);

}  // namespace nngpvs
