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
#include "nngpvs/nngp.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <memory>
#include <numbers>
#include <random>

using namespace nngpvs;

namespace {

NngpFactors factors_for(const RowMatrix& X, const ActiveSet& A, int m, double gamma, double rho) {
  auto g = std::make_shared<const NeighborGraph>(build_neighbor_graph(X, A, m));
  return build_factors(X, gamma, rho, g);
}

}  // namespace

TEST_CASE("single observation") {
  RowMatrix X(1, 1);
  X << 0.4;
  const auto f = factors_for(X, ActiveSet::full(1), 3, 0.6, 1.0);
  CHECK(f.b[0].size() == 0);
  CHECK(f.f(0) == 1.0);
  CHECK(logdet_ktilde(f) == 0.0);
  Vector v(1);
  v << 2.5;
  CHECK(ktilde_inv_mul(f, v)(0) == 2.5);
  Vector y = Vector::Zero(1), beta = Vector::Zero(1);
  CHECK(log_likelihood(y, X, beta, {1.0, 0.6, 1.0}, f) ==
        doctest::Approx(-0.5 * std::log(2.0 * std::numbers::pi)));
}

TEST_CASE("duplicate rows share the signal but not the nugget") {
  RowMatrix X(2, 1);
  X << 0.3, 0.3;
  const auto f = factors_for(X, ActiveSet::full(1), 1, 0.8, 1.0);
  CHECK(f.b[1](0) == doctest::Approx(0.8));
  CHECK(f.f(1) == doctest::Approx(0.36));
  CHECK(logdet_ktilde(f) == doctest::Approx(std::log(0.36)));
}

TEST_CASE("near-degenerate conditional variance is reported with the row") {
  RowMatrix X(3, 1);
  X << 0.1, 0.5, 0.5;
  auto g = std::make_shared<const NeighborGraph>(build_neighbor_graph(X, ActiveSet::full(1), 2));
  try {
    build_factors(X, 1.0 - 1e-14, 1.0, g);
    FAIL("expected ConditioningError");
  } catch (const ConditioningError& e) {
    CHECK(e.row() == 2);
  }
}

TEST_CASE("full conditioning reproduces the dense Gaussian process") {
  std::mt19937_64 gen(21);
  for (int rep = 0; rep < 10; ++rep) {
    const int n = 6 + 2 * rep, d = 4;
    const RowMatrix X = oracle::random_design(n, d, gen);
    const ActiveSet A({0, 2}, d);
    const double gamma = 0.3 + 0.06 * rep, rho = 0.5 + 0.2 * rep;
    const auto f = factors_for(X, A, n - 1, gamma, rho);
    const oracle::DenseGp dense = oracle::dense_gp(X, A.indices(), gamma, rho);

    CHECK(oracle::rel_err(dense_ktilde(f), dense.K) < 1e-8);
    CHECK(oracle::rel_err(logdet_ktilde(f), oracle::log_det(dense.K)) < 1e-8);
    const Vector v = oracle::random_vector(n, gen);
    CHECK(oracle::rel_err(ktilde_inv_mul(f, v), dense.K.llt().solve(v)) < 1e-8);
    CHECK(oracle::rel_err(ktilde_quadratic(f, v), v.dot(dense.K.llt().solve(v))) < 1e-8);

    Vector beta = Vector::Zero(d);
    beta(0) = 0.7;
    beta(2) = -1.1;
    const Vector y = oracle::random_vector(n, gen);
    const double sigma2 = 0.4 + 0.1 * rep;
    CHECK(oracle::rel_err(log_likelihood(y, X, beta, {sigma2, gamma, rho}, f),
                          oracle::log_likelihood(dense.K, y - X * beta, sigma2)) < 1e-8);
    // Unit diagonal at full conditioning.
    CHECK((dense_ktilde(f).diagonal().array() - 1.0).abs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("exact mean leaves only the determinant term") {
  std::mt19937_64 gen(22);
  const RowMatrix X = oracle::random_design(15, 3, gen);
  const ActiveSet A({1, 2}, 3);
  const auto f = factors_for(X, A, 4, 0.7, 0.9);
  Vector beta = Vector::Zero(3);
  beta(1) = 2.0;
  beta(2) = -0.5;
  const Vector y = X * beta;
  CHECK(log_likelihood(y, X, beta, {1.3, 0.7, 0.9}, f) ==
        doctest::Approx(-7.5 * std::log(2.0 * std::numbers::pi * 1.3) -
                        0.5 * f.f.array().log().sum()));
}

TEST_CASE("stale factors and off-support coefficients are contract violations") {
  std::mt19937_64 gen(23);
  const RowMatrix X = oracle::random_design(8, 3, gen);
  const ActiveSet A({0}, 3);
  const auto f = factors_for(X, A, 3, 0.7, 0.9);
  const Vector y = oracle::random_vector(8, gen);
  Vector beta = Vector::Zero(3);
  CHECK_THROWS_AS(log_likelihood(y, X, beta, {1.0, 0.6, 0.9}, f), ContractError);
  beta(1) = 1.0;
  CHECK_THROWS_AS(log_likelihood(y, X, beta, {1.0, 0.7, 0.9}, f), ContractError);
  CHECK_THROWS_AS(build_factors(X, ActiveSet({1}, 3), 0.7, 0.9, f.graph), ContractError);
}

TEST_CASE("sparse approximation stays positive definite") {
  std::mt19937_64 gen(24);
  const RowMatrix X = oracle::random_design(50, 5, gen);
  const auto f = factors_for(X, ActiveSet({0, 1, 4}, 5), 5, 0.95, 2.0);
  CHECK(f.f.minCoeff() > 0.0);
  CHECK(f.f(0) == 1.0);
  const Matrix K = dense_ktilde(f);
  CHECK((K - K.transpose()).cwiseAbs().maxCoeff() < 1e-10);
  CHECK(Eigen::SelfAdjointEigenSolver<Matrix>(K).eigenvalues().minCoeff() > 0.0);
}

TEST_CASE("dktilde matches finite differences of the reconstructed matrix") {
  std::mt19937_64 gen(25);
  for (int rep = 0; rep < 5; ++rep) {
    const int n = 12 + rep;
    const RowMatrix X = oracle::random_design(n, 3, gen);
    const ActiveSet A({0, 1}, 3);
    const double gamma = 0.5 + 0.08 * rep, rho = 0.7 + 0.3 * rep;
    const auto f = factors_for(X, A, 3, gamma, rho);
    const double h = 1e-6;
    const Matrix fd_rho = (dense_ktilde(build_factors(X, gamma, rho + h, f.graph)) -
                           dense_ktilde(build_factors(X, gamma, rho - h, f.graph))) /
                          (2 * h);
    const Matrix fd_gamma = (dense_ktilde(build_factors(X, gamma + h, rho, f.graph)) -
                             dense_ktilde(build_factors(X, gamma - h, rho, f.graph))) /
                            (2 * h);
    const Matrix d_rho = dktilde(f, X, CovParam::rho);
    const Matrix d_gamma = dktilde(f, X, CovParam::gamma);
    CHECK((d_rho - d_rho.transpose()).cwiseAbs().maxCoeff() < 1e-10);
    CHECK(oracle::rel_err(d_rho, fd_rho) < 1e-4);
    CHECK(oracle::rel_err(d_gamma, fd_gamma) < 1e-4);
    // Below full conditioning the diagonal of Kt moves with the parameters.
    CHECK(oracle::rel_err(Matrix(d_gamma.diagonal()), Matrix(fd_gamma.diagonal())) < 1e-4);
  }
}

TEST_CASE("full-conditioning dktilde equals the kernel derivative") {
  std::mt19937_64 gen(26);
  const RowMatrix X = oracle::random_design(10, 3, gen);
  const ActiveSet A({0, 1, 2}, 3);
  const auto f = factors_for(X, A, 9, 0.6, 1.4);
  const auto dense = oracle::dense_gp(X, A.indices(), 0.6, 1.4);
  CHECK(oracle::rel_err(dktilde(f, X, CovParam::rho), dense.dK_rho) < 1e-8);
  CHECK(oracle::rel_err(dktilde(f, X, CovParam::gamma), dense.dK_gamma) < 1e-8);
}

TEST_CASE("likelihood gradient matches finite differences") {
  std::mt19937_64 gen(27);
  std::uniform_real_distribution<double> ug(0.1, 0.9), ur(0.3, 3.0);
  const RowMatrix X = oracle::random_design(30, 4, gen);
  const ActiveSet A({1, 3}, 4);
  auto g = std::make_shared<const NeighborGraph>(build_neighbor_graph(X, A, 6));
  const Vector y = oracle::random_vector(30, gen);
  Vector beta = Vector::Zero(4);
  beta(1) = 0.3;
  for (int t = 0; t < 20; ++t) {
    const double gamma = ug(gen), rho = ur(gen), sigma2 = 0.8;
    auto ll = [&](double gm, double r) {
      return log_likelihood(y, X, beta, {sigma2, gm, r}, build_factors(X, gm, r, g));
    };
    const auto grad = log_likelihood_gradient(y, X, beta, {sigma2, gamma, rho},
                                              build_factors(X, gamma, rho, g));
    const double h = 1e-6;
    CHECK(grad.value == doctest::Approx(ll(gamma, rho)));
    CHECK(oracle::rel_err(grad.d_rho, (ll(gamma, rho + h) - ll(gamma, rho - h)) / (2 * h)) < 1e-5);
    CHECK(oracle::rel_err(grad.d_gamma, (ll(gamma + h, rho) - ll(gamma - h, rho)) / (2 * h)) < 1e-5);
  }
}
