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

#include "nngpvs/neighbors.hpp"

#include "nngpvs/errors.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

namespace nngpvs {
namespace {

using Candidate = std::pair<double, int>;  // squared distance, index

double squared_active_distance(const double* a, const double* b, const std::vector<int>& idx) {
  double s = 0.0;
  for (int k : idx) {
    const double diff = a[k] - b[k];
    s += diff * diff;
  }
  return s;
}

std::vector<int> take_nearest(std::vector<Candidate>& cand, int m) {
  const auto keep = std::min<std::size_t>(cand.size(), static_cast<std::size_t>(m));
  std::partial_sort(cand.begin(), cand.begin() + static_cast<std::ptrdiff_t>(keep), cand.end());
  std::vector<int> out(keep);
  for (std::size_t k = 0; k < keep; ++k) out[k] = cand[k].second;
  return out;
}

}  // namespace

NeighborGraph build_neighbor_graph(const RowMatrix& X, const ActiveSet& active, int m) {
  if (X.rows() == 0) throw InputError("build_neighbor_graph: empty design matrix");
  if (m < 1) throw InputError("build_neighbor_graph: neighbor count must be positive");
  if (X.cols() != active.dim())
    throw InputError("build_neighbor_graph: design width does not match active set dimension");

  const int n = static_cast<int>(X.rows());
  const auto& idx = active.indices();
  NeighborGraph graph;
  graph.m = m;
  graph.active = active;
  graph.lists.resize(static_cast<std::size_t>(n));
  std::vector<Candidate> cand;
  cand.reserve(static_cast<std::size_t>(n));
  for (int i = 1; i < n; ++i) {
    cand.clear();
    const double* xi = X.data() + static_cast<std::ptrdiff_t>(i) * X.cols();
    for (int j = 0; j < i; ++j) {
      const double* xj = X.data() + static_cast<std::ptrdiff_t>(j) * X.cols();
      cand.emplace_back(squared_active_distance(xi, xj, idx), j);
    }
    graph.lists[static_cast<std::size_t>(i)] = take_nearest(cand, m);
  }

  graph.among.resize(static_cast<std::size_t>(n));
  graph.to_row.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const auto& nb = graph.lists[static_cast<std::size_t>(i)];
    const auto q = static_cast<Eigen::Index>(nb.size());
    Matrix& among = graph.among[static_cast<std::size_t>(i)];
    Vector& to_row = graph.to_row[static_cast<std::size_t>(i)];
    among = Matrix::Zero(q, q);
    to_row.resize(q);
    const double* xi = X.data() + static_cast<std::ptrdiff_t>(i) * X.cols();
    for (Eigen::Index a = 0; a < q; ++a) {
      const double* xa = X.data() + static_cast<std::ptrdiff_t>(nb[static_cast<std::size_t>(a)]) * X.cols();
      to_row(a) = std::sqrt(squared_active_distance(xi, xa, idx));
      for (Eigen::Index c = 0; c < a; ++c) {
        const double* xc =
            X.data() + static_cast<std::ptrdiff_t>(nb[static_cast<std::size_t>(c)]) * X.cols();
        among(a, c) = among(c, a) = std::sqrt(squared_active_distance(xa, xc, idx));
      }
    }
  }
  return graph;
}

std::vector<int> test_neighbors(std::span<const double> u, const RowMatrix& X,
                                const ActiveSet& active, int m) {
  if (X.rows() == 0) throw InputError("test_neighbors: empty design matrix");
  if (m < 1) throw InputError("test_neighbors: neighbor count must be positive");
  if (static_cast<Eigen::Index>(u.size()) != X.cols() || X.cols() != active.dim())
    throw InputError("test_neighbors: point length does not match design width");
  std::vector<Candidate> cand;
  cand.reserve(static_cast<std::size_t>(X.rows()));
  for (Eigen::Index j = 0; j < X.rows(); ++j)
    cand.emplace_back(
        squared_active_distance(u.data(), X.data() + j * X.cols(), active.indices()),
        static_cast<int>(j));
  return take_nearest(cand, m);
}

}  // namespace nngpvs
