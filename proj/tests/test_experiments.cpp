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
#include "nngpvs/experiments.hpp"

#include <doctest.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <set>

using namespace nngpvs;

TEST_CASE("Pepelyshev function") {
  CHECK(pepelyshev(std::array{0.0, 0.0, 0.0}) == doctest::Approx(41.0));
  // 8 x2 - 8 x2^2 = 2 - x1 zeroes the first term; x3 = 1/2 zeroes the third.
  CHECK(pepelyshev(std::array{0.0, 0.5, 0.5}) == doctest::Approx(1.0));
  CHECK(pepelyshev(std::array{1.0, 0.75, 0.5, 0.9, 0.1}) ==
        doctest::Approx(4.0 * std::pow(1.0 - 2.0 + 6.0 - 4.5, 2)));
  CHECK(pepelyshev(std::array{0.2, 0.3, 1.0}) ==
        doctest::Approx(4.0 * std::pow(0.2 - 2.0 + 2.4 - 0.72, 2) + 1.8 * 1.8 + 16.0 * std::sqrt(2.0)));
  CHECK_THROWS_AS(pepelyshev(std::array{0.0, 0.0}), InputError);
  CHECK_THROWS_AS(pepelyshev(std::array{0.0, 1.5, 0.0}), DomainError);
}

TEST_CASE("maximin Latin hypercube") {
  const int n = 31, d = 20;
  const LhdResult r = maximin_lhd_detailed(n, d, 7, 20);
  REQUIRE(r.design.rows() == n);
  REQUIRE(r.design.cols() == d);
  for (int j = 0; j < d; ++j) {
    std::set<int> strata;
    for (int i = 0; i < n; ++i) {
      const double v = r.design(i, j);
      CHECK(v >= 0.0);
      CHECK(v < 1.0);
      strata.insert(static_cast<int>(std::floor(v * n)));
    }
    CHECK(static_cast<int>(strata.size()) == n);
  }
  CHECK(r.candidate_min_distances.size() == 20);
  CHECK(r.min_distance == doctest::Approx(min_pairwise_distance(r.design)));
  CHECK(r.min_distance >= *std::max_element(r.candidate_min_distances.begin(),
                                            r.candidate_min_distances.end()));
  CHECK(maximin_lhd(n, d, 7, 20) == r.design);
  CHECK(maximin_lhd(n, d, 8, 20) != r.design);
}

TEST_CASE("Pepelyshev data set") {
  const auto [train, test] = pepelyshev_dataset(PepelyshevConfig{}, 3);
  CHECK(train.n() == 31);
  CHECK(test.n() == 100);
  CHECK(train.dim() == 20);
  CHECK(std::abs(train.y.mean()) < 1e-12);
  CHECK(train.y.squaredNorm() / 30.0 == doctest::Approx(1.0));
  CHECK(train.transform.y_scale == test.transform.y_scale);
  // Response recovered from the raw coordinates.
  std::array<double, 3> raw{};
  for (int j = 0; j < 3; ++j) raw[static_cast<std::size_t>(j)] = test.X(5, j) * test.transform.x_scale(j) + test.transform.x_mean(j);
  CHECK(test.y(5) * test.transform.y_scale + test.transform.y_mean == doctest::Approx(pepelyshev(raw)));
}

TEST_CASE("sine simulation") {
  SineSimConfig config = SineSimConfig::defaults();
  CHECK(config.sigma(2, 12) == 0.4);
  CHECK(config.sigma(11, 2) == 0.3);
  CHECK(config.sigma(3, 13) == 0.4);
  CHECK(config.sigma(14, 3) == 0.3);
  CHECK(config.sigma(0, 1) == 0.0);
  config.n = 20000;
  const Dataset raw = simulate_sine_raw(config, 11);
  const auto corr = [&](int a, int b) {
    const Vector x = raw.X.col(a).array() - raw.X.col(a).mean();
    const Vector y = raw.X.col(b).array() - raw.X.col(b).mean();
    return x.dot(y) / std::sqrt(x.squaredNorm() * y.squaredNorm());
  };
  const double tol = 4.0 / std::sqrt(config.n);
  CHECK(std::abs(corr(2, 12) - 0.4) < tol);
  CHECK(std::abs(corr(2, 11) - 0.3) < tol);
  CHECK(std::abs(corr(3, 13) - 0.4) < tol);
  CHECK(std::abs(corr(0, 5)) < tol);
  Vector noise(config.n);
  for (int i = 0; i < config.n; ++i)
    noise(i) = raw.y(i) - std::sin(raw.X(i, 2)) - std::sin(5.0 * raw.X(i, 3));
  CHECK(std::abs(noise.squaredNorm() / config.n - 0.0025) < 4.0 * 0.0025 * std::sqrt(2.0 / config.n));

  const Dataset s = simulate_sine(SineSimConfig::defaults(), 11);
  CHECK(s.n() == 100);
  CHECK(std::abs(s.y.mean()) < 1e-12);

  SineSimConfig bad = SineSimConfig::defaults();
  bad.sigma(0, 1) = 2.0;
  bad.sigma(1, 0) = 2.0;
  CHECK_THROWS_AS(bad.validate(), InputError);
}

TEST_CASE("k-fold split") {
  const auto folds = kfold_split(100, 5, 4);
  REQUIRE(folds.size() == 5);
  std::vector<int> all;
  for (const auto& f : folds) {
    CHECK(f.size() == 20);
    all.insert(all.end(), f.begin(), f.end());
  }
  std::sort(all.begin(), all.end());
  for (int i = 0; i < 100; ++i) CHECK(all[static_cast<std::size_t>(i)] == i);
  const auto uneven = kfold_split(11, 3, 4);
  CHECK(uneven[0].size() == 4);
  CHECK(uneven[2].size() == 3);
  CHECK(kfold_split(100, 5, 4) == folds);
  CHECK_THROWS_AS(kfold_split(3, 5, 1), InputError);
}

TEST_CASE("error metrics") {
  Vector a(3), b(3);
  a << 1, 2, 3;
  b << 1, 4, 0;
  CHECK(mse(a, b) == doctest::Approx(13.0 / 3.0));
  CHECK(mad(a, b) == doctest::Approx(5.0 / 3.0));
  CHECK_THROWS_AS(mse(a, Vector(2)), InputError);
}
