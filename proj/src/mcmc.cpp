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

#include "nngpvs/mcmc.hpp"

#include "nngpvs/errors.hpp"
#include "nngpvs/logging.hpp"
#include "nngpvs/refprior.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace nngpvs {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Sample snapshot(const ChainState& s, bool acc1, bool acc3) {
  return Sample{s.beta, s.params.sigma2, s.params.gamma, s.params.rho, s.active.indices(), acc1,
                acc3};
}

double median_pairwise_distance(const RowMatrix& X, const ActiveSet& active) {
  std::vector<double> dist;
  const auto n = X.rows();
  dist.reserve(static_cast<std::size_t>(n * (n - 1) / 2));
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < i; ++j) {
      double s = 0.0;
      for (int k : active.indices()) {
        const double diff = X(i, k) - X(j, k);
        s += diff * diff;
      }
      dist.push_back(std::sqrt(s));
    }
  if (dist.empty()) return 1.0;
  auto mid = dist.begin() + static_cast<std::ptrdiff_t>(dist.size() / 2);
  std::nth_element(dist.begin(), mid, dist.end());
  double med = *mid;
  if (dist.size() % 2 == 0) {
    med = 0.5 * (med + *std::max_element(dist.begin(), mid));
  }
  return med > 0.0 ? med : 1.0;
}

// Energy and (optionally) its gradient at one unconstrained point.
struct EnergyEval {
  double energy = kInf;
  Eigen::Vector2d grad = Eigen::Vector2d::Constant(std::numeric_limits<double>::quiet_NaN());
  std::shared_ptr<const NngpFactors> factors;
};

std::shared_ptr<const NngpFactors> factors_at(const ChainState& state, const Problem& problem,
                                              double rho, double gamma) {
  return std::make_shared<const NngpFactors>(
      build_factors(problem.X, gamma, rho, state.factors->graph));
}

double prior_at(const ChainState& state, const Problem& problem, double rho_t, double gamma_t) {
  try {
    const auto f = factors_at(state, problem, softplus(rho_t), logistic(gamma_t));
    return log_reference_prior(problem.X, *f);
  } catch (const std::exception&) {
    return -kInf;
  }
}

double snap(double x) { return std::ldexp(std::round(std::ldexp(x, 30)), -30); }

EnergyEval evaluate_energy(double rho_t, double gamma_t, const ChainState& state,
                           const Problem& problem, const HmcConfig& config, bool with_grad) {
  EnergyEval out;
  const double rho = softplus(rho_t);
  const double gamma = logistic(gamma_t);
  if (!(rho > 0.0) || !(gamma > 0.0 && gamma < 1.0) || !std::isfinite(rho)) return out;
  try {
    out.factors = factors_at(state, problem, rho, gamma);
    const CovarianceParams params{state.params.sigma2, gamma, rho};
    const double log_prior = log_reference_prior(problem.X, *out.factors);
    if (!std::isfinite(log_prior)) return out;
    double log_lik = 0.0;
    Eigen::Vector2d grad_lik = Eigen::Vector2d::Zero();  // w.r.t. (rho, gamma)
    if (with_grad) {
      const LikelihoodGradient g =
          log_likelihood_gradient(problem.y, problem.X, state.beta, params, *out.factors);
      log_lik = g.value;
      grad_lik << g.d_rho, g.d_gamma;
    } else {
      log_lik = log_likelihood(problem.y, problem.X, state.beta, params, *out.factors);
    }
    const double e = -(log_lik + log_prior + log_jacobian(rho_t, gamma_t));
    if (!std::isfinite(e)) return out;
    out.energy = e;
    if (!with_grad) return out;

    // Differences are taken around q snapped to a 2^-30 grid. The prior carries
    // roundoff that the 1/h quotient amplifies; without snapping, positions
    // that differ only by rounding would see different forces and the
    // leapfrog map would not be reversible.
    const double rc = snap(rho_t), gc = snap(gamma_t);
    const double h_r = config.fd_step * std::max(1.0, std::abs(rc));
    const double h_g = config.fd_step * std::max(1.0, std::abs(gc));
    const double dprior_r =
        (prior_at(state, problem, rc + h_r, gc) - prior_at(state, problem, rc - h_r, gc)) / (2.0 * h_r);
    const double dprior_g =
        (prior_at(state, problem, rc, gc + h_g) - prior_at(state, problem, rc, gc - h_g)) / (2.0 * h_g);
    const double drho = logistic(rho_t);
    const double dgamma = gamma * (1.0 - gamma);
    out.grad(0) = -(grad_lik(0) * drho + dprior_r + (1.0 - logistic(rho_t)));
    out.grad(1) = -(grad_lik(1) * dgamma + dprior_g + (1.0 - 2.0 * gamma));
  } catch (const NumericalError&) {
    out.energy = kInf;
  } catch (const DomainError&) {
    out.energy = kInf;
  }
  return out;
}

}  // namespace

void Problem::validate() const {
  if (X.rows() < 2) throw InputError("Problem: at least two training rows are required");
  if (y.size() != X.rows()) throw InputError("Problem: response length does not match design rows");
  if (m < 1) throw InputError("Problem: neighbor count must be positive");
  if (!X.allFinite() || !y.allFinite()) throw InputError("Problem: non-finite training data");
}

void HmcConfig::validate() const {
  if (!(epsilon > 0.0)) throw InputError("HmcConfig: epsilon must be positive");
  if (L < 1) throw InputError("HmcConfig: L must be at least 1");
  if (!(m_rho > 0.0) || !(m_gamma > 0.0)) throw InputError("HmcConfig: masses must be positive");
  if (!(fd_step > 0.0)) throw InputError("HmcConfig: fd_step must be positive");
}

SamplerConfig SamplerConfig::defaults(int d, SizeWeight weight) {
  return SamplerConfig{SelectionPrior::make(d, weight), ProposalConfig::uniform(d), HmcConfig{},
                       ChainHooks{}};
}

void SamplerConfig::validate(int d) const {
  prior.validate();
  proposal.validate();
  hmc.validate();
  if (prior.dim() != d || proposal.move_weights.size() != d)
    throw InputError("SamplerConfig: prior/proposal dimension does not match the data");
}

std::shared_ptr<const NngpFactors> make_factors(const Problem& problem, const ActiveSet& active,
                                                double gamma, double rho) {
  auto graph = std::make_shared<const NeighborGraph>(build_neighbor_graph(problem.X, active, problem.m));
  return std::make_shared<const NngpFactors>(build_factors(problem.X, gamma, rho, std::move(graph)));
}

ChainState make_state(const Problem& problem, Vector beta, const CovarianceParams& params,
                      const ActiveSet& active) {
  params.validate();
  if (beta.size() != problem.dim()) throw InputError("make_state: coefficient length mismatch");
  for (Eigen::Index j = 0; j < beta.size(); ++j)
    if (beta(j) != 0.0 && !active.contains(static_cast<int>(j)))
      throw InputError("make_state: coefficient outside the active set is nonzero");
  return ChainState{std::move(beta), params, active,
                    make_factors(problem, active, params.gamma, params.rho)};
}

Vector BetaConditional::draw(std::span<const double> z) const {
  if (static_cast<Eigen::Index>(z.size()) != mean.size())
    throw InputError("BetaConditional::draw: wrong number of normal deviates");
  const Eigen::Map<const Vector> zv(z.data(), static_cast<Eigen::Index>(z.size()));
  const Vector local = mean + cov_chol.triangularView<Eigen::Lower>() * zv;
  Vector beta = Vector::Zero(active.dim());
  for (int c = 0; c < active.size(); ++c) beta(active.indices()[static_cast<std::size_t>(c)]) = local(c);
  return beta;
}

Vector BetaConditional::full_mean() const {
  const std::vector<double> zeros(static_cast<std::size_t>(mean.size()), 0.0);
  return draw(zeros);
}

double BetaConditional::log_density(const Vector& beta) const {
  Vector local(active.size());
  for (int c = 0; c < active.size(); ++c) local(c) = beta(active.indices()[static_cast<std::size_t>(c)]);
  const Vector z = cov_chol.triangularView<Eigen::Lower>().solve(local - mean);
  const double k = static_cast<double>(active.size());
  return -0.5 * k * std::log(2.0 * std::numbers::pi) - 0.5 * log_det_cov - 0.5 * z.squaredNorm();
}

BetaConditional beta_conditional(const Problem& problem, const NngpFactors& factors,
                                 double sigma2) {
  const ActiveSet& active = factors.active();
  if (active.size() >= problem.n())
    throw NumericalError("beta_conditional: active set not smaller than the sample size");
  const Matrix XA = active_columns(problem.X, active);
  Matrix Kinv_XA(XA.rows(), XA.cols());
  for (Eigen::Index c = 0; c < XA.cols(); ++c) Kinv_XA.col(c) = ktilde_inv_mul(factors, XA.col(c));
  const Matrix G = XA.transpose() * Kinv_XA;
  Eigen::LLT<Matrix> llt(G);
  if (llt.info() != Eigen::Success)
    throw NumericalError("beta_conditional: X_A^T Kt^{-1} X_A is singular");
  const Matrix L = llt.matrixL();
  if (L.diagonal().minCoeff() <= 1e-6 * std::sqrt(G.diagonal().maxCoeff()))
    throw NumericalError("beta_conditional: X_A^T Kt^{-1} X_A is numerically singular");

  BetaConditional out{active, Vector(), Matrix(), 0.0};
  out.mean = llt.solve(Kinv_XA.transpose() * problem.y);
  // cov = sigma2 G^{-1} = (L^{-T}) (L^{-1}) sigma2; its lower Cholesky factor
  // is obtained from the inverse of G directly.
  const Matrix Ginv = llt.solve(Matrix::Identity(G.rows(), G.cols()));
  Eigen::LLT<Matrix> cov_llt(sigma2 * Ginv);
  if (cov_llt.info() != Eigen::Success)
    throw NumericalError("beta_conditional: conditional covariance is not positive definite");
  out.cov_chol = cov_llt.matrixL();
  out.log_det_cov = 2.0 * out.cov_chol.diagonal().array().log().sum();
  return out;
}

BetaDraw sample_beta_conditional(const Problem& problem, const NngpFactors& factors,
                                 double sigma2, Rng& rng) {
  const BetaConditional cond = beta_conditional(problem, factors, sigma2);
  std::vector<double> z(static_cast<std::size_t>(cond.mean.size()));
  for (double& v : z) v = rng.normal();
  Vector beta = cond.draw(z);
  const double lp = cond.log_density(beta);
  return {std::move(beta), lp};
}

double step1_log_ratio(const Problem& problem, const SamplerConfig& config,
                       const ChainState& state, const Step1Proposal& proposal) {
  double log_r = log_prior_A(proposal.active, config.prior) - log_prior_A(state.active, config.prior) +
                 proposal.log_q_set_reverse - proposal.log_q_set_forward;
  if (config.hooks.flat_likelihood) return log_r;
  const CovarianceParams& p = state.params;
  const double log_q_beta_current =
      beta_conditional(problem, *state.factors, p.sigma2).log_density(state.beta);
  log_r += log_likelihood(problem.y, problem.X, proposal.beta, p, *proposal.factors) -
           log_likelihood(problem.y, problem.X, state.beta, p, *state.factors) +
           log_q_beta_current - proposal.log_q_beta_forward;
  return log_r;
}

bool step1_mh(ChainState& state, const Problem& problem, const SamplerConfig& config, Rng& rng) {
  try {
    SetProposal set = propose_A(state.active, config.proposal, rng);
    Step1Proposal prop{set.next, Vector(), nullptr, set.log_q_forward, set.log_q_reverse, 0.0};
    prop.factors = set.next == state.active
                       ? state.factors
                       : make_factors(problem, set.next, state.params.gamma, state.params.rho);
    BetaDraw draw = sample_beta_conditional(problem, *prop.factors, state.params.sigma2, rng);
    prop.beta = std::move(draw.beta);
    prop.log_q_beta_forward = draw.log_density;
    const double log_r = step1_log_ratio(problem, config, state, prop);
    const double u = rng.uniform();
    if (!std::isfinite(log_r) && !(log_r > 0.0)) return false;
    if (std::log(u) < log_r) {
      state.active = std::move(prop.active);
      state.beta = std::move(prop.beta);
      state.factors = std::move(prop.factors);
      return true;
    }
  } catch (const NumericalError& e) {
    log::warn(std::string("step 1 proposal rejected: ") + e.what());
  } catch (const DomainError& e) {
    log::warn(std::string("step 1 proposal rejected: ") + e.what());
  }
  return false;
}

double sample_inverse_gamma(double shape, double scale, Rng& rng) {
  if (!(shape > 0.0) || !(scale > 0.0)) throw DomainError("inverse gamma: shape and scale must be positive");
  return scale / rng.gamma(shape, 1.0);
}

double step2_sigma2(const ChainState& state, const Problem& problem, Rng& rng) {
  state.factors->require(state.active, state.params.gamma, state.params.rho);
  const Vector r = problem.y - problem.X * state.beta;
  double scale = 0.5 * ktilde_quadratic(*state.factors, r);
  if (!(scale > 0.0)) {
    log::warn("step 2: residual quadratic form is zero; using scale 1e-12");
    scale = 1e-12;
  }
  return sample_inverse_gamma(0.5 * static_cast<double>(problem.n()), scale, rng);
}

double logistic(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

double logit(double p) { return std::log(p) - std::log1p(-p); }

double softplus(double x) { return x > 0.0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x)); }

double softplus_inverse(double y) {
  if (!(y > 0.0)) throw DomainError("softplus_inverse: argument must be positive");
  return y > 30.0 ? y + std::log1p(-std::exp(-y)) : std::log(std::expm1(y));
}

double log_jacobian(double rho_t, double gamma_t) {
  // log[exp(rho_t - gamma_t) / ((1 + exp(-gamma_t))^2 (1 + exp(rho_t)))]
  return rho_t - gamma_t - 2.0 * softplus(-gamma_t) - softplus(rho_t);
}

double potential_energy(double rho_t, double gamma_t, const ChainState& state,
                        const Problem& problem, const HmcConfig& config) {
  return evaluate_energy(rho_t, gamma_t, state, problem, config, false).energy;
}

Eigen::Vector2d grad_potential(double rho_t, double gamma_t, const ChainState& state,
                               const Problem& problem, const HmcConfig& config) {
  return evaluate_energy(rho_t, gamma_t, state, problem, config, true).grad;
}

std::pair<Eigen::Vector2d, Eigen::Vector2d> leapfrog(Eigen::Vector2d q, Eigen::Vector2d v,
                                                     const HmcConfig& config,
                                                     const GradientFn& grad) {
  const Eigen::Vector2d inv_mass(1.0 / config.m_rho, 1.0 / config.m_gamma);
  const double eps = config.epsilon;
  Eigen::Vector2d g = grad(q);
  for (int j = 0; j < config.L; ++j) {
    v -= 0.5 * eps * g;
    q += eps * inv_mass.cwiseProduct(v);
    g = grad(q);
    v -= 0.5 * eps * g;
  }
  return {q, v};
}

bool step3_hmc(ChainState& state, const Problem& problem, const HmcConfig& config, Rng& rng) {
  const Eigen::Vector2d q0(softplus_inverse(state.params.rho), logit(state.params.gamma));
  const Eigen::Vector2d v0(std::sqrt(config.m_rho) * rng.normal(),
                           std::sqrt(config.m_gamma) * rng.normal());
  const double u = rng.uniform();

  // Energy comes with every gradient evaluation, so the start and end
  // energies reuse the first and last leapfrog evaluations.
  const EnergyEval start = evaluate_energy(q0(0), q0(1), state, problem, config, true);
  if (!std::isfinite(start.energy)) {
    log::warn("step 3: energy at the current state is not finite");
    return false;
  }
  bool finite = true;
  Eigen::Vector2d last_q = q0;
  EnergyEval last = start;
  const GradientFn grad = [&](const Eigen::Vector2d& q) -> Eigen::Vector2d {
    if (!finite || !q.allFinite()) {
      finite = false;
      return Eigen::Vector2d::Zero();
    }
    if (q != last_q) {
      last = evaluate_energy(q(0), q(1), state, problem, config, true);
      last_q = q;
    }
    if (!last.grad.allFinite()) finite = false;
    return finite ? last.grad : Eigen::Vector2d::Zero();
  };
  const auto [q1, v1] = leapfrog(q0, v0, config, grad);
  if (!finite || !q1.allFinite() || !v1.allFinite()) return false;

  const EnergyEval end =
      q1 == last_q ? last : evaluate_energy(q1(0), q1(1), state, problem, config, false);
  if (!std::isfinite(end.energy)) return false;
  const auto kinetic = [&](const Eigen::Vector2d& v) {
    return 0.5 * (v(0) * v(0) / config.m_rho + v(1) * v(1) / config.m_gamma);
  };
  const double log_r = kinetic(v0) + start.energy - kinetic(v1) - end.energy;
  if (!(std::log(u) < log_r)) return false;
  state.params.rho = softplus(q1(0));
  state.params.gamma = logistic(q1(1));
  state.factors = end.factors;
  return true;
}

long Chain::accepted_step1() const {
  return std::count_if(samples.begin(), samples.end(), [](const Sample& s) { return s.accepted1; });
}

long Chain::accepted_step3() const {
  return std::count_if(samples.begin(), samples.end(), [](const Sample& s) { return s.accepted3; });
}

ChainState initial_state(const Problem& problem, Rng& rng) {
  problem.validate();
  const int d = problem.dim();
  const ActiveSet active = ActiveSet::singleton(rng.uniform_int(0, d - 1), d);
  const double mean = problem.y.mean();
  double var = (problem.y.array() - mean).square().sum() / static_cast<double>(problem.n() - 1);
  if (!(var > 0.0)) var = 1.0;
  const CovarianceParams params{var, 0.5, median_pairwise_distance(problem.X, active)};
  auto factors = make_factors(problem, active, params.gamma, params.rho);
  Vector beta = beta_conditional(problem, *factors, params.sigma2).full_mean();
  return ChainState{std::move(beta), params, active, std::move(factors)};
}

Chain run_chain(const Problem& problem, const SamplerConfig& config, int iterations, int burn_in,
                std::uint64_t seed) {
  Rng init_rng(mix_seed(seed, 1));
  ChainState start = initial_state(problem, init_rng);
  return run_chain(problem, config, std::move(start), iterations, burn_in, seed);
}

Chain run_chain(const Problem& problem, const SamplerConfig& config, ChainState state,
                int iterations, int burn_in, std::uint64_t seed) {
  problem.validate();
  config.validate(problem.dim());
  if (!(iterations > burn_in) || burn_in < 0)
    throw InputError("run_chain: require iterations > burn_in >= 0");
  state.params.validate();
  state.factors->require(state.active, state.params.gamma, state.params.rho);

  Rng rng(seed);
  Chain chain;
  chain.dim = problem.dim();
  chain.burn_in = burn_in;
  chain.samples.reserve(static_cast<std::size_t>(iterations));
  const int audit = config.hooks.audit_every;
  for (int it = 0; it < iterations; ++it) {
    const bool acc1 = step1_mh(state, problem, config, rng);
    if (!config.hooks.skip_sigma2) state.params.sigma2 = step2_sigma2(state, problem, rng);
    const bool acc3 = config.hooks.skip_hmc ? false : step3_hmc(state, problem, config.hmc, rng);

    if (audit > 0 && (it + 1) % audit == 0) {
      const auto fresh = make_factors(problem, state.active, state.params.gamma, state.params.rho);
      const double cached =
          log_likelihood(problem.y, problem.X, state.beta, state.params, *state.factors);
      const double recomputed =
          log_likelihood(problem.y, problem.X, state.beta, state.params, *fresh);
      if (std::abs(cached - recomputed) > 1e-9 * std::max(1.0, std::abs(recomputed)))
        throw ContractError("run_chain: cached NNGP factors disagree with a fresh rebuild at iteration " +
                            std::to_string(it + 1));
    }
    chain.samples.push_back(snapshot(state, acc1, acc3));
  }
  return chain;
}

}  // namespace nngpvs
