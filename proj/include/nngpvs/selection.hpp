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

#include "nngpvs/random.hpp"
#include "nngpvs/types.hpp"

#include <string>

namespace nngpvs {

enum class SizeWeight { reciprocal, tbinom3 };

SizeWeight parse_size_weight(const std::string& name);
std::string to_string(SizeWeight w);

// p(A = {a_1..a_k}) proportional to (p_{a_1} + ... + p_{a_k}) / k * ptilde(k).
struct SelectionPrior {
  Vector importance;   // p_1..p_d, sums to 1
  Vector size_weight;  // size_weight(k - 1) = ptilde(k), k = 1..d

  int dim() const noexcept { return static_cast<int>(importance.size()); }
  void validate() const;

  // Uniform importance 1/d with ptilde(k) = 1/k, or with ptilde(k) the cube of
  // the zero-truncated Binomial(d, 1/d) pmf.
  static SelectionPrior make(int d, SizeWeight weight);
};

double log_prior_A(const ActiveSet& active, const SelectionPrior& prior);

// Move indicator probability p_h and index weights ptilde_1..ptilde_d.
struct ProposalConfig {
  double p_h = 0.6;
  Vector move_weights;

  void validate() const;
  static ProposalConfig uniform(int d, double p_h = 0.6);
};

/// Probability that index `alpha` (0-based) is toggled given the current set,
/// conditional on a size change being proposed.
double pmf_alpha(int alpha, const ActiveSet& current, const Vector& move_weights);

/// Marginal proposal probability q(next | current), summed over the move
/// indicator.
double proposal_probability(const ActiveSet& next, const ActiveSet& current,
                            const ProposalConfig& config);

struct SetProposal {
  ActiveSet next;
  double log_q_forward;  // log q(next | current)
  double log_q_reverse;  // log q(current | next)
};

/// Draws c_h ~ Bernoulli(p_h); on c_h = 1 toggles one index drawn from
/// pmf_alpha. Never empties the set. Throws InputError when p_h = 1 and no
/// legal toggle exists.
SetProposal propose_A(const ActiveSet& current, const ProposalConfig& config, Rng& rng);

}  // namespace nngpvs
