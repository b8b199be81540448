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

#include "nngpvs/selection.hpp"

#include "nngpvs/errors.hpp"

#include <algorithm>
#include <cmath>
#include <iterator>
#include <limits>
#include <vector>

namespace nngpvs {
namespace {

double log_or_neg_inf(double x) {
  return x > 0.0 ? std::log(x) : -std::numeric_limits<double>::infinity();
}

double binomial_pmf(int k, int n, double p) {
  const double logc = std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
  return std::exp(logc + k * std::log(p) + (n - k) * std::log1p(-p));
}

double total_toggle_mass(const ActiveSet& current, const Vector& w) {
  double total = 0.0;
  for (int a = 0; a < current.dim(); ++a) total += pmf_alpha(a, current, w);
  return total;
}

}  // namespace

SizeWeight parse_size_weight(const std::string& name) {
  if (name == "reciprocal") return SizeWeight::reciprocal;
  if (name == "tbinom3") return SizeWeight::tbinom3;
  throw InputError("unknown size weight '" + name + "' (expected reciprocal or tbinom3)");
}

std::string to_string(SizeWeight w) { return w == SizeWeight::reciprocal ? "reciprocal" : "tbinom3"; }

void SelectionPrior::validate() const {
  if (importance.size() < 1 || size_weight.size() != importance.size())
    throw InputError("SelectionPrior: importance and size weights must both have length d");
  if ((importance.array() < 0.0).any() || std::abs(importance.sum() - 1.0) > 1e-12)
    throw InputError("SelectionPrior: importance must be nonnegative and sum to 1");
  if ((size_weight.array() < 0.0).any() || !(size_weight.maxCoeff() > 0.0))
    throw InputError("SelectionPrior: size weights must be nonnegative and not all zero");
}

SelectionPrior SelectionPrior::make(int d, SizeWeight weight) {
  if (d < 1) throw InputError("SelectionPrior: dimension must be positive");
  SelectionPrior prior;
  prior.importance = Vector::Constant(d, 1.0 / d);
  prior.size_weight.resize(d);
  const double p = 1.0 / d;
  const double truncation = 1.0 - std::pow(1.0 - p, d);
  for (int k = 1; k <= d; ++k) {
    if (weight == SizeWeight::reciprocal) {
      prior.size_weight(k - 1) = 1.0 / k;
    } else {
      // d = 1 puts all mass on k = 1 (p = 1, truncation = 1).
      const double pmf = d == 1 ? 1.0 : binomial_pmf(k, d, p) / truncation;
      prior.size_weight(k - 1) = pmf * pmf * pmf;
    }
  }
  return prior;
}

double log_prior_A(const ActiveSet& active, const SelectionPrior& prior) {
  if (active.dim() != prior.dim())
    throw InputError("log_prior_A: active set dimension does not match prior");
  double mass = 0.0;
  for (int i : active.indices()) mass += prior.importance(i);
  const int k = active.size();
  return log_or_neg_inf(mass / k * prior.size_weight(k - 1));
}

void ProposalConfig::validate() const {
  if (!(p_h >= 0.0 && p_h <= 1.0)) throw InputError("ProposalConfig: p_h must lie in [0, 1]");
  if (move_weights.size() < 1 || (move_weights.array() < 0.0).any() ||
      std::abs(move_weights.sum() - 1.0) > 1e-12)
    throw InputError("ProposalConfig: move weights must be nonnegative and sum to 1");
}

ProposalConfig ProposalConfig::uniform(int d, double p_h) {
  return ProposalConfig{p_h, Vector::Constant(d, 1.0 / d)};
}

double pmf_alpha(int alpha, const ActiveSet& current, const Vector& w) {
  if (alpha < 0 || alpha >= current.dim()) throw InputError("pmf_alpha: index out of range");
  if (w.size() != current.dim()) throw InputError("pmf_alpha: weight length mismatch");
  const bool inside = current.contains(alpha);
  if (current.size() > 1) {
    if (!inside) return w(alpha);
    if (w(alpha) == 0.0) return 0.0;
    double sum_w = 0.0, sum_inv = 0.0;
    for (int i : current.indices()) {
      if (w(i) == 0.0) return 0.0;
      sum_w += w(i);
      sum_inv += 1.0 / w(i);
    }
    return sum_w / (w(alpha) * sum_inv);
  }
  if (inside) return 0.0;
  double outside = 0.0;
  for (int i = 0; i < current.dim(); ++i)
    if (!current.contains(i)) outside += w(i);
  return outside > 0.0 ? w(alpha) / outside : 0.0;
}

double proposal_probability(const ActiveSet& next, const ActiveSet& current,
                            const ProposalConfig& config) {
  if (next.dim() != current.dim()) throw InputError("proposal_probability: dimension mismatch");
  if (next == current) {
    // With no legal toggle the chain cannot move at all.
    return total_toggle_mass(current, config.move_weights) > 0.0 ? 1.0 - config.p_h : 1.0;
  }
  std::vector<int> diff;
  std::set_symmetric_difference(next.indices().begin(), next.indices().end(),
                                current.indices().begin(), current.indices().end(),
                                std::back_inserter(diff));
  if (diff.size() != 1) return 0.0;
  const int alpha = diff.front();
  return config.p_h * pmf_alpha(alpha, current, config.move_weights);
}

SetProposal propose_A(const ActiveSet& current, const ProposalConfig& config, Rng& rng) {
  const int d = current.dim();
  const bool legal = total_toggle_mass(current, config.move_weights) > 0.0;
  if (!legal && config.p_h >= 1.0)
    throw InputError("propose_A: p_h = 1 but no index can be toggled from the current set");
  const bool move = rng.bernoulli(config.p_h);
  if (!move || !legal) {
    const double lq = std::log(proposal_probability(current, current, config));
    return {current, lq, lq};
  }
  double u = rng.uniform();
  int alpha = -1;
  for (int a = 0; a < d; ++a) {
    const double p = pmf_alpha(a, current, config.move_weights);
    if (p <= 0.0) continue;
    alpha = a;
    if (u < p) break;
    u -= p;
  }
  ActiveSet next = current.toggled(alpha);
  const double fwd = std::log(proposal_probability(next, current, config));
  const double rev = log_or_neg_inf(proposal_probability(current, next, config));
  return {std::move(next), fwd, rev};
}

}  // namespace nngpvs
