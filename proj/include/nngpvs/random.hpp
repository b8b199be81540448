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

#include <cstdint>
#include <random>

namespace nngpvs {

// Seeded pseudo-random source passed explicitly to every sampling routine.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform();                       // [0, 1)
  double normal();                        // N(0, 1)
  double gamma(double shape, double scale);
  bool bernoulli(double p);
  int uniform_int(int lo, int hi);        // inclusive bounds

  // Seed for an independent child stream, derived deterministically.
  std::uint64_t split();

  std::mt19937_64& engine() noexcept { return engine_; }

 private:
  std::mt19937_64 engine_;
};

// splitmix64 finalizer, used to derive per-task seeds from a base seed.
std::uint64_t mix_seed(std::uint64_t base, std::uint64_t stream);

}  // namespace nngpvs
