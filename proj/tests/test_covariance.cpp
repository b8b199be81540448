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
#include "oracles.hpp"

#include <doctest.h>

#include <random>

using namespace nngpvs;

TEST_CASE("matern52 at zero distance is one") {
  CHECK(matern52(0.0, 0.7) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("matern52 at r = rho") {
  const double s5 = std::sqrt(5.0);
  const double expected = (1.0 + s5 + 5.0 / 3.0) * std::exp(-s5);
  CHECK(matern52(1.3, 1.3) == doctest::Approx(expected).epsilon(1e-14));
  CHECK(matern52(1.3, 1.3) == doctest::Approx(0.5239941088318203).epsilon(1e-14));
}

TEST_CASE("matern52 is monotone decreasing in distance") {
  double prev = 1.0;
  for (double r = 0.05; r < 5.0; r += 0.05) {
    const double k = matern52(r, 0.8);
    CHECK(k < prev);
    CHECK(k > 0.0);
    prev = k;
  }
}

TEST_CASE("matern52 rejects bad arguments") {
  CHECK_THROWS_AS(matern52(1.0, 0.0), DomainError);
  CHECK_THROWS_AS(matern52(-1.0, 1.0), DomainError);
  CHECK_THROWS_AS(matern52_drho(1.0, -2.0), DomainError);
}

TEST_CASE("matern52_drho agrees with central differences and the shared-exp form") {
  std::mt19937_64 gen(11);
  std::uniform_real_distribution<double> ur(0.0, 4.0), urho(0.2, 3.0);
  for (int t = 0; t < 200; ++t) {
    const double r = ur(gen), rho = urho(gen);
    const double h = 1e-5 * rho;
    const double fd = (matern52(r, rho + h) - matern52(r, rho - h)) / (2.0 * h);
    CHECK(oracle::rel_err(matern52_drho(r, rho), fd) < 1e-8);
    CHECK(oracle::rel_err(matern52_drho(r, rho), oracle::matern_drho(r, rho)) < 1e-12);
    const MaternEval e = matern52_eval(r, rho);
    CHECK(e.value == doctest::Approx(matern52(r, rho)).epsilon(1e-14));
    CHECK(oracle::rel_err(e.drho, matern52_drho(r, rho)) < 1e-13);
  }
}

TEST_CASE("matern52_drho vanishes at zero distance and is positive elsewhere") {
  CHECK(matern52_drho(0.0, 1.7) == 0.0);
  for (double r = 0.1; r < 6.0; r += 0.1)
    for (double rho = 0.1; rho < 4.0; rho += 0.3) CHECK(matern52_drho(r, rho) > 0.0);
}

TEST_CASE("active distance ignores inactive coordinates") {
  CHECK(active_distance(std::vector<double>{1, 2, 3}, std::vector<double>{1, 0, 3},
                        ActiveSet({0, 2}, 3)) == 0.0);
  CHECK(active_distance(std::vector<double>{0, 0}, std::vector<double>{3, 4}, ActiveSet::full(2)) ==
        doctest::Approx(5.0));
  CHECK(active_distance(std::vector<double>{0, 5, 0}, std::vector<double>{0, 0, 2},
                        ActiveSet({0, 2}, 3)) == doctest::Approx(2.0));
  const std::vector<double> a{0.0, 5.0, 3.0}, b{4.0, -7.0, 0.0};
  CHECK(active_distance(a, b, ActiveSet({0, 2}, 3)) == doctest::Approx(5.0));
  CHECK(active_distance(a, b, ActiveSet({1}, 3)) == doctest::Approx(12.0));
  CHECK_THROWS_AS(active_distance(a, std::vector<double>{1.0}, ActiveSet({0}, 3)), InputError);
}

TEST_CASE("nugget attaches to identical coordinates only") {
  const ActiveSet A({0}, 2);
  const std::vector<double> x{0.3, 1.0}, same_active{0.3, 2.0};
  CHECK(corr(x, x, 0.7, 1.0, A) == doctest::Approx(1.0));
  // Zero active distance but a different point: no nugget.
  CHECK(corr(x, same_active, 0.7, 1.0, A) == doctest::Approx(0.7));
  CHECK(corr_dgamma(x, x, 1.0, A) == doctest::Approx(0.0));
  CHECK(corr_dgamma(x, same_active, 1.0, A) == doctest::Approx(1.0));
}

TEST_CASE("corr derivatives agree with central differences") {
  std::mt19937_64 gen(5);
  std::uniform_real_distribution<double> u(-1.0, 1.0), ug(0.05, 0.95), urho(0.2, 3.0);
  const ActiveSet A({0, 2, 3}, 4);
  for (int t = 0; t < 200; ++t) {
    std::vector<double> x1(4), x2(4);
    for (auto& v : x1) v = u(gen);
    for (auto& v : x2) v = u(gen);
    const double g = ug(gen), rho = urho(gen);
    const double hr = 1e-5 * rho, hg = 1e-5;
    const double fd_r = (corr(x1, x2, g, rho + hr, A) - corr(x1, x2, g, rho - hr, A)) / (2 * hr);
    const double fd_g = (corr(x1, x2, g + hg, rho, A) - corr(x1, x2, g - hg, rho, A)) / (2 * hg);
    CHECK(oracle::rel_err(corr_drho(x1, x2, g, rho, A), fd_r) < 1e-8);
    CHECK(oracle::rel_err(corr_dgamma(x1, x2, rho, A), fd_g) < 1e-8);
  }
}
