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

#include "nngpvs/config.hpp"

#include <string>

namespace nngpvs {

// Each command validates the config, creates output_dir, echoes the config
// there as config.ini and writes its artifacts. Errors propagate as
// exceptions; the executable maps InputError to exit code 2.

/// chain.csv, summary.json (acceptance, inclusion, posterior means, trace
/// data) and runtime.json.
void cmd_fit(const RunConfig& config);

/// predictions.csv (row,yhat) in the original response units.
void cmd_predict(const RunConfig& config);

/// importance.csv (variable,name,inclusion) from an existing chain.
void cmd_importance(const RunConfig& config);

/// bench_<which>.json with MSE, MAD, inclusion probabilities and, for the
/// sine study, one record per fold. `which` is "pepelyshev" or "sine".
void cmd_bench(const std::string& which, const RunConfig& config);

}  // namespace nngpvs
