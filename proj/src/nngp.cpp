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

#include "nngpvs/nngp.hpp"

#include "nngpvs/covariance.hpp"
#include "nngpvs/errors.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace nngpvs {
namespace {

constexpr double kMinConditionalVariance = 1e-12;

double row_distance(const RowMatrix& X, int i, int j, const std::vector<int>& idx) {
  const double* a = X.data() + static_cast<std::ptrdiff_t>(i) * X.cols();
  const double* b = X.data() + static_cast<std::ptrdiff_t>(j) * X.cols();
  double s = 0.0;
  for (int k : idx) {
    const double diff = a[k] - b[k];
    s += diff * diff;
  }
  return std::sqrt(s);
}

// Distances among the neighbors of row i and from row i to them.
struct LocalGeometry {
  Matrix among;
  Vector to_row;
};

LocalGeometry local_geometry(const RowMatrix& X, const NeighborGraph& graph, int i) {
  if (graph.has_distances())
    return {graph.among[static_cast<std::size_t>(i)], graph.to_row[static_cast<std::size_t>(i)]};
  const auto& nb = graph[i];
  const auto& idx = graph.active.indices();
  const auto q = static_cast<Eigen::Index>(nb.size());
  LocalGeometry g{Matrix(q, q), Vector(q)};
  for (Eigen::Index a = 0; a < q; ++a) {
    g.among(a, a) = 0.0;
    g.to_row(a) = row_distance(X, i, nb[static_cast<std::size_t>(a)], idx);
    for (Eigen::Index c = 0; c < a; ++c) {
      const double dist =
          row_distance(X, nb[static_cast<std::size_t>(a)], nb[static_cast<std::size_t>(c)], idx);
      g.among(a, c) = dist;
      g.among(c, a) = dist;
    }
  }
  return g;
}

Matrix local_corr(const Matrix& among, double gamma, double rho) {
  Matrix K(among.rows(), among.cols());
  for (Eigen::Index a = 0; a < among.rows(); ++a)
    for (Eigen::Index c = 0; c <= a; ++c)
      K(a, c) = K(c, a) = corr_from_distance(among(a, c), a == c, gamma, rho);
  return K;
}

Vector cross_corr(const Vector& to_row, double gamma, double rho) {
  Vector k(to_row.size());
  for (Eigen::Index a = 0; a < to_row.size(); ++a)
    k(a) = corr_from_distance(to_row(a), false, gamma, rho);
  return k;
}

void check_length(const NngpFactors& factors, const Vector& v, const char* what) {
  if (v.size() != factors.size())
    throw InputError(std::string(what) + ": vector length does not match factor size");
}

void check_beta_support(const Vector& beta, const ActiveSet& active) {
  if (beta.size() != active.dim())
    throw InputError("log_likelihood: coefficient vector length does not match dimension");
  for (Eigen::Index j = 0; j < beta.size(); ++j)
    if (beta(j) != 0.0 && !active.contains(static_cast<int>(j)))
      throw ContractError("log_likelihood: coefficient " + std::to_string(j + 1) +
                          " is nonzero outside the active set");
}

}  // namespace

bool NngpFactors::matches(const ActiveSet& a, double g, double r) const {
  return graph && graph->active == a && gamma == g && rho == r;
}

void NngpFactors::require(const ActiveSet& a, double g, double r) const {
  if (!matches(a, g, r))
    throw ContractError("NNGP factors are stale: built for different (active set, gamma, rho)");
}

NngpFactors build_factors(const RowMatrix& X, double gamma, double rho,
                          std::shared_ptr<const NeighborGraph> graph) {
  if (!graph) throw InputError("build_factors: missing neighbor graph");
  if (graph->size() != X.rows())
    throw InputError("build_factors: neighbor graph size does not match design rows");
  CovarianceParams{1.0, gamma, rho}.validate();

  const int n = graph->size();
  NngpFactors out;
  out.gamma = gamma;
  out.rho = rho;
  out.b.resize(static_cast<std::size_t>(n));
  out.f.resize(n);
  for (int i = 0; i < n; ++i) {
    const auto& nb = (*graph)[i];
    if (nb.empty()) {
      out.b[static_cast<std::size_t>(i)] = Vector();
      out.f(i) = 1.0;
      continue;
    }
    const LocalGeometry geo = local_geometry(X, *graph, i);
    const Matrix K = local_corr(geo.among, gamma, rho);
    const Vector k = cross_corr(geo.to_row, gamma, rho);
    Eigen::LLT<Matrix> llt(K);
    if (llt.info() != Eigen::Success)
      throw ConditioningError("build_factors: neighbor correlation matrix not positive definite at row " +
                                  std::to_string(i + 1),
                              i);
    Vector bi = llt.solve(k);
    const double fi = 1.0 - bi.dot(k);
    if (!(fi > kMinConditionalVariance))
      throw ConditioningError("build_factors: conditional variance " + std::to_string(fi) +
                                  " below tolerance at row " + std::to_string(i + 1),
                              i);
    out.b[static_cast<std::size_t>(i)] = std::move(bi);
    out.f(i) = fi;
  }
  out.graph = std::move(graph);
  return out;
}

NngpFactors build_factors(const RowMatrix& X, const ActiveSet& active, double gamma, double rho,
                          std::shared_ptr<const NeighborGraph> graph) {
  if (!graph || !(graph->active == active))
    throw ContractError("build_factors: neighbor graph was built for a different active set");
  return build_factors(X, gamma, rho, std::move(graph));
}

FactorDerivatives factor_derivatives(const RowMatrix& X, const NngpFactors& factors) {
  const int n = factors.size();
  const double gamma = factors.gamma;
  const double rho = factors.rho;
  FactorDerivatives d;
  d.db_rho.resize(static_cast<std::size_t>(n));
  d.db_gamma.resize(static_cast<std::size_t>(n));
  d.df_rho = Vector::Zero(n);
  d.df_gamma = Vector::Zero(n);
  for (int i = 0; i < n; ++i) {
    const auto& nb = (*factors.graph)[i];
    if (nb.empty()) continue;
    const LocalGeometry geo = local_geometry(X, *factors.graph, i);
    const auto q = static_cast<Eigen::Index>(nb.size());
    Matrix K(q, q), dK_rho(q, q), dK_gamma(q, q);
    Vector k(q), dk_rho(q), dk_gamma(q);
    for (Eigen::Index a = 0; a < q; ++a) {
      for (Eigen::Index c = 0; c <= a; ++c) {
        const MaternEval mv = matern52_eval(geo.among(a, c), rho);
        const double nugget = a == c ? 1.0 : 0.0;
        K(a, c) = K(c, a) = nugget * (1.0 - gamma) + gamma * mv.value;
        dK_rho(a, c) = dK_rho(c, a) = gamma * mv.drho;
        dK_gamma(a, c) = dK_gamma(c, a) = mv.value - nugget;
      }
      const MaternEval mv = matern52_eval(geo.to_row(a), rho);
      k(a) = gamma * mv.value;
      dk_rho(a) = gamma * mv.drho;
      dk_gamma(a) = mv.value;
    }
    Eigen::LLT<Matrix> llt(K);
    const Vector& bi = factors.b[static_cast<std::size_t>(i)];

    // The diagonal correlation is identically 1, so its derivatives vanish.
    Vector db_r = llt.solve(dk_rho - dK_rho * bi);
    Vector db_g = llt.solve(dk_gamma - dK_gamma * bi);
    d.df_rho(i) = -(db_r.dot(k) + bi.dot(dk_rho));
    d.df_gamma(i) = -(db_g.dot(k) + bi.dot(dk_gamma));
    d.db_rho[static_cast<std::size_t>(i)] = std::move(db_r);
    d.db_gamma[static_cast<std::size_t>(i)] = std::move(db_g);
  }
  return d;
}

double logdet_ktilde(const NngpFactors& factors) { return factors.f.array().log().sum(); }

Vector apply_b(const NngpFactors& factors, const Vector& v) {
  check_length(factors, v, "apply_b");
  Vector u = v;
  for (int i = 0; i < factors.size(); ++i) {
    const auto& nb = (*factors.graph)[i];
    const Vector& bi = factors.b[static_cast<std::size_t>(i)];
    for (std::size_t l = 0; l < nb.size(); ++l)
      u(i) -= bi(static_cast<Eigen::Index>(l)) * v(nb[l]);
  }
  return u;
}

Vector ktilde_inv_mul(const NngpFactors& factors, const Vector& v) {
  const Vector w = (apply_b(factors, v).array() / factors.f.array()).matrix();
  Vector out = w;
  for (int i = 0; i < factors.size(); ++i) {
    const auto& nb = (*factors.graph)[i];
    const Vector& bi = factors.b[static_cast<std::size_t>(i)];
    for (std::size_t l = 0; l < nb.size(); ++l)
      out(nb[l]) -= bi(static_cast<Eigen::Index>(l)) * w(i);
  }
  return out;
}

double ktilde_quadratic(const NngpFactors& factors, const Vector& v) {
  const Vector u = apply_b(factors, v);
  return (u.array().square() / factors.f.array()).sum();
}

double log_likelihood(const Vector& y, const RowMatrix& X, const Vector& beta,
                      const CovarianceParams& params, const NngpFactors& factors) {
  factors.require(factors.active(), params.gamma, params.rho);
  check_beta_support(beta, factors.active());
  check_length(factors, y, "log_likelihood");
  const double n = static_cast<double>(y.size());
  const Vector r = y - X * beta;
  return -0.5 * n * std::log(2.0 * std::numbers::pi * params.sigma2) -
         0.5 * logdet_ktilde(factors) - ktilde_quadratic(factors, r) / (2.0 * params.sigma2);
}

LikelihoodGradient log_likelihood_gradient(const Vector& y, const RowMatrix& X,
                                           const Vector& beta, const CovarianceParams& params,
                                           const NngpFactors& factors) {
  LikelihoodGradient g;
  g.value = log_likelihood(y, X, beta, params, factors);
  const FactorDerivatives d = factor_derivatives(X, factors);
  const Vector r = y - X * beta;
  const Vector u = apply_b(factors, r);
  double dq_rho = 0.0, dq_gamma = 0.0;  // derivatives of r^T Ktilde^{-1} r
  double dl_rho = 0.0, dl_gamma = 0.0;  // derivatives of log|Ktilde|
  for (int i = 0; i < factors.size(); ++i) {
    const double fi = factors.f(i);
    dl_rho += d.df_rho(i) / fi;
    dl_gamma += d.df_gamma(i) / fi;
    const auto& nb = (*factors.graph)[i];
    double du_rho = 0.0, du_gamma = 0.0;
    for (std::size_t l = 0; l < nb.size(); ++l) {
      const auto li = static_cast<Eigen::Index>(l);
      du_rho -= d.db_rho[static_cast<std::size_t>(i)](li) * r(nb[l]);
      du_gamma -= d.db_gamma[static_cast<std::size_t>(i)](li) * r(nb[l]);
    }
    const double ui = u(i);
    dq_rho += 2.0 * ui * du_rho / fi - ui * ui * d.df_rho(i) / (fi * fi);
    dq_gamma += 2.0 * ui * du_gamma / fi - ui * ui * d.df_gamma(i) / (fi * fi);
  }
  g.d_rho = -0.5 * dl_rho - dq_rho / (2.0 * params.sigma2);
  g.d_gamma = -0.5 * dl_gamma - dq_gamma / (2.0 * params.sigma2);
  return g;
}

Matrix dense_b(const NngpFactors& factors) {
  const int n = factors.size();
  Matrix B = Matrix::Identity(n, n);
  for (int i = 0; i < n; ++i) {
    const auto& nb = (*factors.graph)[i];
    for (std::size_t l = 0; l < nb.size(); ++l)
      B(i, nb[l]) = -factors.b[static_cast<std::size_t>(i)](static_cast<Eigen::Index>(l));
  }
  return B;
}

Matrix dense_ktilde(const NngpFactors& factors) {
  const int n = factors.size();
  const Matrix B = dense_b(factors);
  const Matrix Binv = B.triangularView<Eigen::UnitLower>().solve(Matrix::Identity(n, n));
  return Binv * factors.f.asDiagonal() * Binv.transpose();
}

Matrix dktilde(const NngpFactors& factors, const RowMatrix& X, CovParam wrt) {
  return dktilde(factors, factor_derivatives(X, factors), wrt);
}

Matrix dktilde(const NngpFactors& factors, const FactorDerivatives& derivs, CovParam wrt) {
  const int n = factors.size();
  const auto& db = wrt == CovParam::rho ? derivs.db_rho : derivs.db_gamma;
  const Vector& df = wrt == CovParam::rho ? derivs.df_rho : derivs.df_gamma;

  const Matrix B = dense_b(factors);
  const auto Bl = B.triangularView<Eigen::UnitLower>();
  const Matrix Binv = Bl.solve(Matrix::Identity(n, n));

  // dB has -db_i on the neighbor columns of row i; rows of dB * B^{-1} are
  // sparse combinations of rows of B^{-1}.
  Matrix A = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    const auto& nb = (*factors.graph)[i];
    for (std::size_t l = 0; l < nb.size(); ++l)
      A.row(i) -= db[static_cast<std::size_t>(i)](static_cast<Eigen::Index>(l)) * Binv.row(nb[l]);
  }
  A = A * factors.f.asDiagonal();
  Matrix S = A + A.transpose();
  S.diagonal() -= df;

  const Matrix T = Bl.solve(S);                   // B^{-1} S
  Matrix out = -Bl.solve(T.transpose()).transpose();  // B^{-1} S B^{-T}
  return 0.5 * (out + out.transpose());
}

}  // namespace nngpvs
