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

#include "nngpvs/types.hpp"

#include <string>
#include <vector>

namespace nngpvs {

// Affine maps applied to a dataset: x' = (x - x_mean) / x_scale per column,
// y' = (y - y_mean) / y_scale.
struct Standardization {
  Vector x_mean;
  Vector x_scale;
  double y_mean = 0.0;
  double y_scale = 1.0;
  std::vector<int> constant_columns;  // left unscaled (0-based)

  static Standardization identity(int d);
};

struct Dataset {
  RowMatrix X;
  Vector y;
  std::vector<std::string> names;  // predictor column names
  std::string target = "y";
  Standardization transform;

  int n() const noexcept { return static_cast<int>(X.rows()); }
  int dim() const noexcept { return static_cast<int>(X.cols()); }
  // Throws InputError on shape mismatches, non-finite entries or n < 2.
  void validate() const;
};

/// Header row, comma separated, dot decimal. Every column other than
/// `target_column` becomes a predictor, in file order. With
/// require_target = false a missing target column is allowed: y is then zero
/// and `target` empty.
Dataset load_csv(const std::string& path, const std::string& target_column,
                 bool require_target = true);
void write_csv(const std::string& path, const Dataset& data);

struct StandardizeOptions {
  bool center_y = true;
  bool scale_y = false;
  bool scale_x = true;
};

/// Estimates the transform from `data` (sample sd with n - 1) and applies it.
/// Zero-variance columns stay unchanged and are reported with a warning.
Dataset standardize(const Dataset& data, const StandardizeOptions& options);

/// Applies a transform estimated elsewhere (e.g. on the training split).
Dataset apply_standardization(const Dataset& data, const Standardization& transform);

/// Maps standardized responses back to the original units.
Vector inverse_transform_y(const Vector& y, const Standardization& transform);

Dataset select_rows(const Dataset& data, const std::vector<int>& rows);

}  // namespace nngpvs
