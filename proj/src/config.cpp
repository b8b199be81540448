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


#include "nngpvs/config.hpp"

#include "nngpvs/errors.hpp"
#include "nngpvs/selection.hpp"

#include <CLI11.hpp>

#include <filesystem>

namespace nngpvs {

FitSettings RunConfig::fit_settings() const {
  FitSettings s;
  s.iterations = iterations;
  s.burn_in = burn_in;
  s.thin = thin;
  s.m = m;
  s.size_weight = parse_size_weight(size_weight);
  s.p_h = p_h;
  s.hmc = HmcConfig{epsilon, L, m_rho, m_gamma, fd_step};
  return s;
}

StandardizeOptions RunConfig::standardize_options() const {
  return StandardizeOptions{center_y, scale_y, scale_x};
}

std::string RunConfig::chain_path() const {
  if (!chain.empty()) return chain;
  return (std::filesystem::path(output_dir) / "chain.csv").string();
}

void RunConfig::validate() const {
  auto require = [](bool ok, const std::string& what) {
    if (!ok) throw InputError("config: " + what);
  };
  require(iterations >= 1, "iterations must be at least 1");
  require(burn_in >= 0 && burn_in < iterations, "burn_in must lie in [0, iterations)");
  require(thin >= 1, "thin must be at least 1");
  require(m >= 1, "m must be at least 1");
  require(p_h >= 0.0 && p_h <= 1.0, "p_h must lie in [0, 1]");
  require(epsilon > 0.0, "epsilon must be positive");
  require(L >= 1, "L must be at least 1");
  require(m_rho > 0.0 && m_gamma > 0.0, "masses must be positive");
  require(fd_step > 0.0 && fd_step < 1e-2, "fd_step must lie in (0, 0.01)");
  require(!target.empty(), "target must not be empty");
  require(!output_dir.empty(), "output_dir must not be empty");
  require(folds >= 2, "folds must be at least 2");
  require(n_train >= 2 && n_test >= 1, "n_train must be at least 2 and n_test at least 1");
  require(d_total >= 3, "d_total must be at least 3");
  require(lhd_restarts >= 1, "lhd_restarts must be at least 1");
  require(sine_n >= folds, "sine_n must be at least folds");
  parse_size_weight(size_weight);
}

void add_config_options(CLI::App& app, RunConfig& c) {
  app.option_defaults()->always_capture_default();
  app.set_config("--config", "", "key = value file; command-line flags take precedence");

  app.add_option("--data", c.data, "Training CSV")->group("Files");
  app.add_option("--test", c.test, "CSV with rows to predict")->group("Files");
  app.add_option("--chain", c.chain, "Chain CSV (default: <output_dir>/chain.csv)")->group("Files");
  app.add_option("--target", c.target, "Response column name")->group("Files");
  app.add_option("--output_dir", c.output_dir, "Directory for artifacts")->group("Files");

  app.add_option("--seed", c.seed, "Random seed")->group("Sampler");
  app.add_option("--iterations", c.iterations)->group("Sampler");
  app.add_option("--burn_in", c.burn_in)->group("Sampler");
  app.add_option("--thin", c.thin, "Keep every thin-th post-burn-in sample")->group("Sampler");
  app.add_option("--m", c.m, "Nearest neighbors per row")->group("Sampler");
  app.add_option("--p_h", c.p_h, "Probability of proposing an active-set change")->group("Sampler");
  app.add_option("--epsilon", c.epsilon, "Leapfrog step size")->group("Sampler");
  app.add_option("--L", c.L, "Leapfrog steps")->group("Sampler");
  app.add_option("--m_rho", c.m_rho, "HMC mass for rho")->group("Sampler");
  app.add_option("--m_gamma", c.m_gamma, "HMC mass for gamma")->group("Sampler");
  app.add_option("--fd_step", c.fd_step, "Relative step for the prior gradient")->group("Sampler");
  app.add_option("--size_weight", c.size_weight, "Model-size weight")
      ->check(CLI::IsMember({"reciprocal", "tbinom3"}))
      ->group("Sampler");

  app.add_option("--center_y", c.center_y, "Center the response")->group("Preprocessing");
  app.add_option("--scale_y", c.scale_y, "Scale the response to unit sd")->group("Preprocessing");
  app.add_option("--scale_x", c.scale_x, "Scale predictors to unit sd")->group("Preprocessing");

  app.add_option("--folds", c.folds, "Cross-validation folds (sine bench)")->group("Bench");
  app.add_option("--n_train", c.n_train)->group("Bench");
  app.add_option("--n_test", c.n_test)->group("Bench");
  app.add_option("--d_total", c.d_total, "Predictors including inert ones")->group("Bench");
  app.add_option("--lhd_restarts", c.lhd_restarts)->group("Bench");
  app.add_option("--sine_n", c.sine_n, "Simulated sample size")->group("Bench");
}

std::string to_config_string(const RunConfig& config) {
  RunConfig copy = config;
  CLI::App app;
  add_config_options(app, copy);
  return app.config_to_str(true, false);
}

RunConfig load_config(const std::string& path) {
  if (!std::filesystem::exists(path)) throw InputError("file not found: " + path);
  RunConfig config;
  CLI::App app;
  add_config_options(app, config);
  const std::vector<std::string> args{"--config", path};
  try {
    app.parse(std::vector<std::string>(args.rbegin(), args.rend()));
  } catch (const CLI::ParseError& e) {
    throw InputError("config " + path + ": " + e.what());
  }
  return config;
}

}  // namespace nngpvs
