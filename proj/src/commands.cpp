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


#include "nngpvs/commands.hpp"

#include "nngpvs/chain_io.hpp"
#include "nngpvs/errors.hpp"
#include "nngpvs/logging.hpp"
#include "nngpvs/predict.hpp"

#include <fmt/format.h>
#include <json.hpp>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <utility>

namespace nngpvs {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

json to_json(const Vector& v) { return json(std::vector<double>(v.data(), v.data() + v.size())); }

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot open '" + path.string() + "' for writing");
  out << text;
}

void write_json(const fs::path& path, const json& j) { write_text(path, j.dump(2) + "\n"); }

fs::path prepare_output(const RunConfig& config) {
  config.validate();
  const fs::path dir(config.output_dir);
  fs::create_directories(dir);
  write_text(dir / "config.ini", to_config_string(config));
  return dir;
}

Dataset load_training(const RunConfig& config) {
  if (config.data.empty()) throw InputError("config: data is required");
  Dataset raw = load_csv(config.data, config.target);
  raw.validate();
  return standardize(raw, config.standardize_options());
}

// Given names, padded with x<j> for unnamed columns.
std::vector<std::string> column_names(std::vector<std::string> names, int d) {
  for (int j = static_cast<int>(names.size()); j < d; ++j) names.push_back("x" + std::to_string(j + 1));
  return names;
}

json inclusion_json(const Vector& inclusion, const std::vector<std::string>& names) {
  json out = json::array();
  for (Eigen::Index j = 0; j < inclusion.size(); ++j)
    out.push_back({{"variable", j + 1},
                   {"name", names[static_cast<std::size_t>(j)]},
                   {"probability", inclusion(j)}});
  return out;
}

}  // namespace

void cmd_fit(const RunConfig& config) {
  const fs::path dir = prepare_output(config);
  const Dataset train = load_training(config);
  const FitSettings settings = config.fit_settings();
  const Problem problem{train.X, train.y, settings.m};

  const auto t0 = std::chrono::steady_clock::now();
  const Chain chain = run_chain(problem, make_sampler_config(train.dim(), settings),
                                settings.iterations, settings.burn_in, config.seed);
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  write_chain_csv((dir / "chain.csv").string(), chain);

  const Vector inclusion = inclusion_probabilities(chain, settings.burn_in);
  const auto n_iter = static_cast<double>(chain.iterations());
  json trace = {{"iter", json::array()}, {"k", json::array()}, {"gamma", json::array()},
                {"rho", json::array()}, {"sigma2", json::array()}};
  double mean_gamma = 0.0, mean_rho = 0.0, mean_sigma2 = 0.0;
  for (int t = 0; t < chain.iterations(); ++t) {
    const Sample& s = chain.samples[static_cast<std::size_t>(t)];
    trace["iter"].push_back(t + 1);
    trace["k"].push_back(s.active.size());
    trace["gamma"].push_back(s.gamma);
    trace["rho"].push_back(s.rho);
    trace["sigma2"].push_back(s.sigma2);
    if (t >= settings.burn_in) {
      mean_gamma += s.gamma;
      mean_rho += s.rho;
      mean_sigma2 += s.sigma2;
    }
  }
  const double kept = static_cast<double>(chain.iterations() - settings.burn_in);
  json summary = {
      {"n", train.n()},
      {"d", train.dim()},
      {"iterations", chain.iterations()},
      {"burn_in", settings.burn_in},
      {"seed", config.seed},
      {"acceptance_step1", static_cast<double>(chain.accepted_step1()) / n_iter},
      {"acceptance_step3", static_cast<double>(chain.accepted_step3()) / n_iter},
      {"inclusion", inclusion_json(inclusion, column_names(train.names, train.dim()))},
      {"posterior_mean", {{"gamma", mean_gamma / kept}, {"rho", mean_rho / kept},
                          {"sigma2", mean_sigma2 / kept}}},
      {"transform", {{"x_mean", to_json(train.transform.x_mean)},
                     {"x_scale", to_json(train.transform.x_scale)},
                     {"y_mean", train.transform.y_mean},
                     {"y_scale", train.transform.y_scale}}},
      {"trace", trace}};
  write_json(dir / "summary.json", summary);
  // Wall-clock time lives apart so summary.json is reproducible bit for bit.
  write_json(dir / "runtime.json", {{"seconds", seconds}});
  log::info(fmt::format("fit: {} iterations in {:.2f} s, step-1 acceptance {:.3f}, step-3 acceptance {:.3f}",
            chain.iterations(), seconds, summary["acceptance_step1"].get<double>(),
            summary["acceptance_step3"].get<double>()));
}

void cmd_predict(const RunConfig& config) {
  const fs::path dir = prepare_output(config);
  if (config.test.empty()) throw InputError("config: test is required for predict");
  const Dataset train = load_training(config);
  const Chain chain = read_chain_csv(config.chain_path(), config.burn_in);
  if (chain.dim != train.dim())
    throw InputError("chain has " + std::to_string(chain.dim) + " coefficients, training data has " +
                     std::to_string(train.dim()) + " predictors");
  if (config.burn_in >= chain.iterations())
    throw InputError("burn_in leaves no samples in " + config.chain_path());

  const Dataset test_raw = load_csv(config.test, config.target, /*require_target=*/false);
  if (test_raw.names != train.names)
    throw InputError("test columns do not match the training predictors");
  const Dataset test = apply_standardization(test_raw, train.transform);

  const Problem problem{train.X, train.y, config.m};
  const PredictionResult pred = predict_mean(chain, test.X, problem, config.burn_in, config.thin);
  const Vector yhat = inverse_transform_y(pred.yhat, train.transform);

  std::string text = "row,yhat\n";
  for (Eigen::Index i = 0; i < yhat.size(); ++i)
    text += std::to_string(i + 1) + "," + format_double(yhat(i)) + "\n";
  write_text(dir / "predictions.csv", text);
  if (!test_raw.target.empty())
    log::info(fmt::format("predict: {} rows, MSE {:.6g} in original units", yhat.size(),
                          mse(yhat, test_raw.y)));
}

void cmd_importance(const RunConfig& config) {
  const fs::path dir = prepare_output(config);
  const Chain chain = read_chain_csv(config.chain_path(), config.burn_in);
  if (config.burn_in >= chain.iterations())
    throw InputError("burn_in leaves no samples in " + config.chain_path());
  std::vector<std::string> names;
  if (!config.data.empty()) {
    names = load_csv(config.data, config.target).names;
    if (static_cast<int>(names.size()) != chain.dim)
      throw InputError("chain dimension does not match the predictors in " + config.data);
  }
  names = column_names(std::move(names), chain.dim);
  const Vector inclusion = inclusion_probabilities(chain, config.burn_in);
  std::string text = "variable,name,inclusion\n";
  for (Eigen::Index j = 0; j < inclusion.size(); ++j)
    text += std::to_string(j + 1) + "," + names[static_cast<std::size_t>(j)] + "," +
            format_double(inclusion(j)) + "\n";
  write_text(dir / "importance.csv", text);
}

void cmd_bench(const std::string& which, const RunConfig& config) {
  if (which != "pepelyshev" && which != "sine")
    throw InputError("bench: unknown study '" + which + "' (expected pepelyshev or sine)");
  const fs::path dir = prepare_output(config);
  const FitSettings settings = config.fit_settings();
  json out = {{"bench", which}, {"seed", config.seed}, {"iterations", settings.iterations},
              {"burn_in", settings.burn_in}};
  const auto t0 = std::chrono::steady_clock::now();

  if (which == "pepelyshev") {
    const PepelyshevConfig data{config.n_train, config.n_test, config.d_total, config.lhd_restarts};
    const PepelyshevBenchResult r = run_pepelyshev_bench(data, settings, config.seed);
    out["mse"] = r.mse;
    out["mad"] = r.mad;
    out["acceptance_step1"] = r.fit.acceptance_step1;
    out["acceptance_step3"] = r.fit.acceptance_step3;
    out["inclusion"] = inclusion_json(r.fit.inclusion, column_names({}, config.d_total));
  } else {
    SineSimConfig data = SineSimConfig::defaults();
    data.n = config.sine_n;
    const SineBenchResult r = run_sine_bench(data, config.folds, settings, config.seed);
    const auto names = column_names({}, static_cast<int>(data.sigma.rows()));
    out["mse"] = r.mean_mse;
    out["mad"] = r.mean_mad;
    out["folds"] = json::array();
    for (std::size_t f = 0; f < r.folds.size(); ++f) {
      const SineFold& fold = r.folds[f];
      json rows = json::array();
      for (int i : fold.test_rows) rows.push_back(i + 1);
      out["folds"].push_back({{"fold", f + 1},
                              {"test_rows", rows},
                              {"mse", fold.mse},
                              {"mad", fold.mad},
                              {"acceptance_step1", fold.acceptance_step1},
                              {"acceptance_step3", fold.acceptance_step3},
                              {"inclusion", inclusion_json(fold.inclusion, names)}});
    }
  }
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  write_json(dir / ("bench_" + which + ".json"), out);
  write_json(dir / "runtime.json", {{"seconds", seconds}});
}

}  // namespace nngpvs
