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

#include "nngpvs/refprior.hpp"

#include "nngpvs/errors.hpp"

#include <cmath>
#include <limits>

namespace nngpvs {
namespace {

constexpr double kMinPivot = 1e-12;

struct Projection {
  Matrix XA;
  Matrix Kinv_XA;
  Eigen::LLT<Matrix> gram;
  double log_det_gram = 0.0;
};

Projection projection(const RowMatrix& X, const NngpFactors& factors) {
  const ActiveSet& active = factors.active();
  const int n = factors.size();
  if (active.size() >= n)
    throw InputError("reference prior: active set size must be smaller than the sample size");
  if (X.rows() != n) throw InputError("reference prior: design rows do not match factors");
  Projection p;
  p.XA = active_columns(X, active);
  p.Kinv_XA.resize(n, p.XA.cols());
  for (Eigen::Index c = 0; c < p.XA.cols(); ++c)
    p.Kinv_XA.col(c) = ktilde_inv_mul(factors, p.XA.col(c));
  const Matrix G = p.XA.transpose() * p.Kinv_XA;
  p.gram.compute(G);
  if (p.gram.info() != Eigen::Success)
    throw NumericalError("reference prior: X_A^T Kt^{-1} X_A is singular");
  const Vector diag = Matrix(p.gram.matrixL()).diagonal();
  if (diag.minCoeff() <= std::sqrt(kMinPivot) * std::sqrt(G.diagonal().maxCoeff()))
    throw NumericalError("reference prior: X_A^T Kt^{-1} X_A is numerically singular");
  p.log_det_gram = 2.0 * diag.array().log().sum();
  return p;
}

Matrix projector(const Projection& p, int n) {
  return Matrix::Identity(n, n) - p.XA * p.gram.solve(p.Kinv_XA.transpose());
}

Matrix q_matrix(const NngpFactors& factors, const Matrix& P) {
  Matrix Q(P.rows(), P.cols());
  for (Eigen::Index c = 0; c < P.cols(); ++c) Q.col(c) = ktilde_inv_mul(factors, P.col(c));
  return Q;
}

// tr(A B) without forming the product.
double trace_of_product(const Matrix& A, const Matrix& B) {
  return A.cwiseProduct(B.transpose()).sum();
}

Eigen::Matrix3d assemble_fisher(int n, int k, const Matrix& W_rho, const Matrix& W_gamma) {
  Eigen::Matrix3d I;
  const double t_r = W_rho.trace();
  const double t_g = W_gamma.trace();
  const double t_rg = trace_of_product(W_rho, W_gamma);
  I(0, 0) = static_cast<double>(n - k);
  I(0, 1) = I(1, 0) = t_r;
  I(0, 2) = I(2, 0) = t_g;
  I(1, 1) = trace_of_product(W_rho, W_rho);
  I(1, 2) = I(2, 1) = t_rg;
  I(2, 2) = trace_of_product(W_gamma, W_gamma);
  return I;
}

}  // namespace

Matrix active_columns(const RowMatrix& X, const ActiveSet& active) {
  if (X.cols() != active.dim())
    throw InputError("active_columns: design width does not match active set dimension");
  Matrix XA(X.rows(), active.size());
  for (int c = 0; c < active.size(); ++c) XA.col(c) = X.col(active.indices()[static_cast<std::size_t>(c)]);
  return XA;
}

RefPriorWorkspace build_workspace(const Vector& y, const RowMatrix& X, const NngpFactors& factors) {
  const int n = factors.size();
  if (y.size() != n) throw InputError("build_workspace: response length does not match factors");
  const Projection proj = projection(X, factors);
  RefPriorWorkspace ws;
  ws.log_det_gram = proj.log_det_gram;
  ws.P = projector(proj, n);
  ws.Q = q_matrix(factors, ws.P);
  ws.S2 = std::max(0.0, y.dot(ws.Q * y));
  const FactorDerivatives d = factor_derivatives(X, factors);
  ws.W_rho = dktilde(factors, d, CovParam::rho) * ws.Q;
  ws.W_gamma = dktilde(factors, d, CovParam::gamma) * ws.Q;
  ws.fisher = assemble_fisher(n, factors.active().size(), ws.W_rho, ws.W_gamma);
  return ws;
}

double half_log_det_fisher(const Eigen::Matrix3d& fisher) {
  Eigen::LDLT<Eigen::Matrix3d> ldlt(fisher);
  if (ldlt.info() != Eigen::Success) return -std::numeric_limits<double>::infinity();
  const Eigen::Vector3d D = ldlt.vectorD();
  if (!(D.minCoeff() > kMinPivot)) return -std::numeric_limits<double>::infinity();
  return 0.5 * D.array().log().sum();
}

// Same matrix as build_workspace().fisher without any n x n products of
// dense operators. With Kt = B^{-1} F B^{-T}, dKt = -B^{-1} S B^{-T} and
// Q = B^T R B, where R = F^{-1} - Z G^{-1} Z^T and Z = F^{-1} B X_A, so
// tr(W) = -tr(S R) and tr(W_a W_b) = tr(S_a R S_b R) by similarity.
Eigen::Matrix3d fisher_matrix(const RowMatrix& X, const NngpFactors& factors) {
  const int n = factors.size();
  const ActiveSet& active = factors.active();
  if (active.size() >= n)
    throw InputError("reference prior: active set size must be smaller than the sample size");
  if (X.rows() != n) throw InputError("reference prior: design rows do not match factors");
  const int k = active.size();

  const Matrix XA = active_columns(X, active);
  Matrix BX(n, k);
  for (int c = 0; c < k; ++c) BX.col(c) = apply_b(factors, XA.col(c));
  const Vector finv = factors.f.cwiseInverse();
  const Matrix Z = finv.asDiagonal() * BX;
  const Matrix G = BX.transpose() * Z;
  Eigen::LLT<Matrix> gram(G);
  if (gram.info() != Eigen::Success)
    throw NumericalError("reference prior: X_A^T Kt^{-1} X_A is singular");
  if (Matrix(gram.matrixL()).diagonal().minCoeff() <=
      std::sqrt(kMinPivot) * std::sqrt(G.diagonal().maxCoeff()))
    throw NumericalError("reference prior: X_A^T Kt^{-1} X_A is numerically singular");
  const Matrix GinvZt = gram.solve(Z.transpose());

  const Matrix B = dense_b(factors);
  const Matrix Binv = B.triangularView<Eigen::UnitLower>().solve(Matrix::Identity(n, n));
  const FactorDerivatives d = factor_derivatives(X, factors);

  auto s_times_r = [&](CovParam wrt) {
    const auto& db = wrt == CovParam::rho ? d.db_rho : d.db_gamma;
    const Vector& df = wrt == CovParam::rho ? d.df_rho : d.df_gamma;
    Matrix A = Matrix::Zero(n, n);
    for (int i = 0; i < n; ++i) {
      const auto& nb = (*factors.graph)[i];
      for (std::size_t l = 0; l < nb.size(); ++l)
        A.row(i) -= db[static_cast<std::size_t>(i)](static_cast<Eigen::Index>(l)) * Binv.row(nb[l]);
    }
    A = A * factors.f.asDiagonal();
    Matrix S = A + A.transpose();
    S.diagonal() -= df;
    Matrix M = S * finv.asDiagonal();
    M.noalias() -= (S * Z) * GinvZt;
    return M;
  };
  const Matrix M_rho = s_times_r(CovParam::rho);
  const Matrix M_gamma = s_times_r(CovParam::gamma);

  Eigen::Matrix3d I;
  I(0, 0) = static_cast<double>(n - k);
  I(0, 1) = I(1, 0) = -M_rho.trace();
  I(0, 2) = I(2, 0) = -M_gamma.trace();
  I(1, 1) = trace_of_product(M_rho, M_rho);
  I(1, 2) = I(2, 1) = trace_of_product(M_rho, M_gamma);
  I(2, 2) = trace_of_product(M_gamma, M_gamma);
  return I;
}

double log_reference_prior(const RowMatrix& X, const NngpFactors& factors) {
  return half_log_det_fisher(fisher_matrix(X, factors));
}

double integrated_log_likelihood(double sigma2, const Vector& y, const RowMatrix& X,
                                 const NngpFactors& factors) {
  if (!(sigma2 > 0.0)) throw DomainError("integrated_log_likelihood: sigma2 must be positive");
  const int n = factors.size();
  if (y.size() != n) throw InputError("integrated_log_likelihood: response length mismatch");
  const Projection proj = projection(X, factors);
  // y^T Q y = y^T Kt^{-1} y - (X_A^T Kt^{-1} y)^T G^{-1} (X_A^T Kt^{-1} y)
  const Vector Xt_Kinv_y = proj.Kinv_XA.transpose() * y;
  const double S2 =
      std::max(0.0, ktilde_quadratic(factors, y) - Xt_Kinv_y.dot(proj.gram.solve(Xt_Kinv_y)));
  const double dof = static_cast<double>(n - factors.active().size());
  return -0.5 * dof * std::log(sigma2) - 0.5 * logdet_ktilde(factors) - 0.5 * proj.log_det_gram -
         S2 / (2.0 * sigma2);
}

}  // namespace nngpvs
