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

#include "nngpvs/bench.hpp"
#include "nngpvs/dataset.hpp"
#include "nngpvs/experiments.hpp"

#include <cstdint>
#include <string>

namespace CLI {
class App;
}

namespace nngpvs {

// Everything a CLI run depends on. The config file is a flat key = value
// list whose keys are the long option names below; command-line flags
// override file values.
struct RunConfig {
  // files
  std::string data;    // training CSV
  std::string test;    // CSV to predict (predict command)
  std::string chain;   // chain CSV (predict/importance); defaults to output_dir/chain.csv
  std::string target = "y";
  std::string output_dir = "nngpvs-out";

  // sampler
  std::uint64_t seed = 1;
  int iterations = 6000;
  int burn_in = 1000;
  int thin = 1;
  int m = 10;
  double p_h = 0.6;
  double epsilon = 0.3;
  int L = 2;
  double m_rho = 1.0;
  double m_gamma = 1.0;
  double fd_step = 1e-5;
  std::string size_weight = "reciprocal";

  // preprocessing
  bool center_y = true;
  bool scale_y = false;
  bool scale_x = true;

  // benchmarks
  int folds = 5;
  int n_train = 31;
  int n_test = 100;
  int d_total = 20;
  int lhd_restarts = 20;
  int sine_n = 100;

  FitSettings fit_settings() const;
  StandardizeOptions standardize_options() const;
  std::string chain_path() const;
  /// Throws InputError naming the first out-of-range field.
  void validate() const;
};

/// Registers every RunConfig field as a long option plus --config.
void add_config_options(CLI::App& app, RunConfig& config);

/// key = value rendering accepted back by --config.
std::string to_config_string(const RunConfig& config);

/// Parses a config file on its own (no command line).
RunConfig load_config(const std::string& path);

}  // namespace nngpvs
