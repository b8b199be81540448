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


// nngpvs: variable selection for Gaussian process regression with
// nearest-neighbor GPs.
//
//   nngpvs fit        --config run.ini
//   nngpvs predict    --config run.ini --test new.csv
//   nngpvs importance --config run.ini
//   nngpvs bench sine --config run.ini
//
// Exit codes: 0 success, 2 bad input (missing file, malformed CSV, invalid
// config or command line), 1 anything else.

#include "nngpvs/commands.hpp"
#include "nngpvs/config.hpp"
#include "nngpvs/errors.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv) {
  nngpvs::RunConfig config;
  CLI::App app{"Bayesian variable selection with nearest-neighbor Gaussian processes", "nngpvs"};
  app.require_subcommand(1);
  nngpvs::add_config_options(app, config);

  auto* fit = app.add_subcommand("fit", "Run the sampler on --data; writes chain.csv and summary.json");
  auto* predict = app.add_subcommand("predict", "Posterior mean predictions for --test");
  auto* importance = app.add_subcommand("importance", "Inclusion probabilities from a chain");
  auto* bench = app.add_subcommand("bench", "Simulation study: pepelyshev or sine");
  std::string which;
  bench->add_option("study", which, "pepelyshev | sine")
      ->required()
      ->check(CLI::IsMember({"pepelyshev", "sine"}));
  for (auto* sub : {fit, predict, importance, bench}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*fit) nngpvs::cmd_fit(config);
    else if (*predict) nngpvs::cmd_predict(config);
    else if (*importance) nngpvs::cmd_importance(config);
    else nngpvs::cmd_bench(which, config);
  } catch (const nngpvs::InputError& e) {
    std::cerr << "nngpvs: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "nngpvs: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
