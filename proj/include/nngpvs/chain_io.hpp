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

#include "nngpvs/mcmc.hpp"

#include <iosfwd>
#include <string>

namespace nngpvs {

// One row per iteration:
//   iter,sigma2,gamma,rho,k,A,beta,accepted1,accepted3
// A holds 1-based indices joined by ';', beta all d coefficients joined by ';'.
// Numbers use the shortest round-trip representation.
void write_chain_csv(std::ostream& out, const Chain& chain);
void write_chain_csv(const std::string& path, const Chain& chain);

/// Throws InputError with the offending line number on malformed input.
Chain read_chain_csv(std::istream& in, int burn_in = 0);
Chain read_chain_csv(const std::string& path, int burn_in = 0);

std::string format_double(double x);

}  // namespace nngpvs
