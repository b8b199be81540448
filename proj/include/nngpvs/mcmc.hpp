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

#include "nngpvs/neighbors.hpp"
#include "nngpvs/nngp.hpp"
#include "nngpvs/random.hpp"
#include "nngpvs/selection.hpp"
#include "nngpvs/types.hpp"

#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <utility>
#include <vector>

namespace nngpvs {

// Training data in the units the model works in (standardized predictors),
// plus the neighbor cap.
struct Problem {
  RowMatrix X;
  Vector y;
  int m = 10;

  int n() const noexcept { return static_cast<int>(X.rows()); }
  int dim() const noexcept { return static_cast<int>(X.cols()); }
  void validate() const;
};

struct HmcConfig {
  double epsilon = 0.3;
  int L = 2;
  double m_rho = 1.0;
  double m_gamma = 1.0;
  double fd_step = 1e-5;  // relative step for the reference-prior gradient

  void validate() const;
};

// Switches used by tests to isolate parts of the sampler.
struct ChainHooks {
  bool flat_likelihood = false;  // step 1 targets p(A) alone
  bool skip_sigma2 = false;
  bool skip_hmc = false;
  int audit_every = 100;         // 0 disables the cache audit
};

struct SamplerConfig {
  SelectionPrior prior;
  ProposalConfig proposal;
  HmcConfig hmc;
  ChainHooks hooks;

  static SamplerConfig defaults(int d, SizeWeight weight = SizeWeight::reciprocal);
  void validate(int d) const;
};

struct ChainState {
  Vector beta;  // zero outside the active set
  CovarianceParams params;
  ActiveSet active;
  std::shared_ptr<const NngpFactors> factors;  // for (active, gamma, rho)
};

/// Neighbor graph and factors for the given active set and correlation
/// parameters.
std::shared_ptr<const NngpFactors> make_factors(const Problem& problem, const ActiveSet& active,
                                                double gamma, double rho);

ChainState make_state(const Problem& problem, Vector beta, const CovarianceParams& params,
                      const ActiveSet& active);

// Gaussian full conditional of beta_A given (sigma2, gamma, rho, A):
// mean = (X_A^T Kt^{-1} X_A)^{-1} X_A^T Kt^{-1} y, cov = sigma2 (X_A^T Kt^{-1} X_A)^{-1}.
struct BetaConditional {
  ActiveSet active;
  Vector mean;       // length |A|
  Matrix cov_chol;   // lower Cholesky factor of the covariance
  double log_det_cov = 0.0;

  /// Maps |A| standard normals to a d-vector with zeros off the active set.
  Vector draw(std::span<const double> z) const;
  /// Normal log-density of beta restricted to the active set.
  double log_density(const Vector& beta) const;
  Vector full_mean() const;
};

BetaConditional beta_conditional(const Problem& problem, const NngpFactors& factors,
                                 double sigma2);

struct BetaDraw {
  Vector beta;
  double log_density;
};

BetaDraw sample_beta_conditional(const Problem& problem, const NngpFactors& factors,
                                 double sigma2, Rng& rng);

// A proposed (A', beta') pair with the ingredients of the step-1 ratio.
struct Step1Proposal {
  ActiveSet active;
  Vector beta;
  std::shared_ptr<const NngpFactors> factors;
  double log_q_set_forward = 0.0;
  double log_q_set_reverse = 0.0;
  double log_q_beta_forward = 0.0;  // log q(beta' | sigma2, gamma, rho, A')
};

/// Log Hastings ratio of the joint (A, beta) move.
double step1_log_ratio(const Problem& problem, const SamplerConfig& config,
                       const ChainState& state, const Step1Proposal& proposal);

/// One Metropolis-Hastings update of (A, beta). Returns whether the proposal
/// was accepted; numerical failures count as rejections.
bool step1_mh(ChainState& state, const Problem& problem, const SamplerConfig& config, Rng& rng);

double sample_inverse_gamma(double shape, double scale, Rng& rng);

/// Draws sigma2 from IG(n/2, r^T Kt^{-1} r / 2), r = y - X beta.
double step2_sigma2(const ChainState& state, const Problem& problem, Rng& rng);

// Unconstrained coordinates for HMC: gamma = logistic(gamma_t),
// rho = softplus(rho_t).
double logistic(double x);
double logit(double p);
double softplus(double x);
double softplus_inverse(double y);

/// log |d(rho, gamma) / d(rho_t, gamma_t)|.
double log_jacobian(double rho_t, double gamma_t);

/// Negative log conditional density of (rho_t, gamma_t); +infinity where the
/// density vanishes or cannot be evaluated.
double potential_energy(double rho_t, double gamma_t, const ChainState& state,
                        const Problem& problem, const HmcConfig& config);

/// (dE/drho_t, dE/dgamma_t): analytic for likelihood and Jacobian, central
/// differences for the reference-prior term.
Eigen::Vector2d grad_potential(double rho_t, double gamma_t, const ChainState& state,
                               const Problem& problem, const HmcConfig& config);

using GradientFn = std::function<Eigen::Vector2d(const Eigen::Vector2d&)>;

/// L leapfrog steps of size epsilon on position (rho_t, gamma_t) and momentum.
std::pair<Eigen::Vector2d, Eigen::Vector2d> leapfrog(Eigen::Vector2d position,
                                                     Eigen::Vector2d momentum,
                                                     const HmcConfig& config,
                                                     const GradientFn& grad);

bool step3_hmc(ChainState& state, const Problem& problem, const HmcConfig& config, Rng& rng);

struct Sample {
  Vector beta;
  double sigma2 = 0.0;
  double gamma = 0.0;
  double rho = 0.0;
  std::vector<int> active;  // 0-based
  bool accepted1 = false;
  bool accepted3 = false;
};

struct Chain {
  int dim = 0;
  int burn_in = 0;
  std::vector<Sample> samples;

  int iterations() const noexcept { return static_cast<int>(samples.size()); }
  long accepted_step1() const;
  long accepted_step3() const;
};

/// Starting point: a random singleton active set, gamma = 0.5, rho = median
/// pairwise active distance (1 if zero), sigma2 = sample variance of y and
/// beta = its conditional mean.
ChainState initial_state(const Problem& problem, Rng& rng);

/// Runs `iterations` sweeps of steps 1, 2, 3 and stores every state.
Chain run_chain(const Problem& problem, const SamplerConfig& config, int iterations, int burn_in,
                std::uint64_t seed);
Chain run_chain(const Problem& problem, const SamplerConfig& config, ChainState start,
                int iterations, int burn_in, std::uint64_t seed);

}  // namespace nngpvs
