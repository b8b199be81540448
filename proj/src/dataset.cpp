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

#include "nngpvs/dataset.hpp"

#include "nngpvs/chain_io.hpp"
#include "nngpvs/errors.hpp"
#include "nngpvs/logging.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace nngpvs {
namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) out.push_back(trim(field));
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double parse_cell(const std::string& text, int row, const std::string& column) {
  const std::string where = "row " + std::to_string(row) + ", column '" + column + "'";
  if (text.empty()) throw InputError("CSV: blank cell at " + where);
  double value = 0.0;
  const char* first = text.data();
  if (*first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size())
    throw InputError("CSV: non-numeric cell '" + text + "' at " + where);
  if (!std::isfinite(value)) throw InputError("CSV: non-finite cell at " + where);
  return value;
}

}  // namespace

Standardization Standardization::identity(int d) {
  return Standardization{Vector::Zero(d), Vector::Ones(d), 0.0, 1.0, {}};
}

void Dataset::validate() const {
  if (X.rows() < 2) throw InputError("Dataset: at least two rows are required");
  if (y.size() != X.rows()) throw InputError("Dataset: response length does not match rows");
  if (!names.empty() && static_cast<Eigen::Index>(names.size()) != X.cols())
    throw InputError("Dataset: column names do not match predictor count");
  if (!X.allFinite() || !y.allFinite()) throw InputError("Dataset: non-finite entries");
}

Dataset load_csv(const std::string& path, const std::string& target_column, bool require_target) {
  if (!std::filesystem::exists(path)) throw InputError("file not found: " + path);
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path + "'");
  std::string line;
  if (!std::getline(in, line)) throw InputError("CSV '" + path + "': missing header row");
  const auto header = split_fields(line);
  const auto target_it = std::find(header.begin(), header.end(), target_column);
  const bool has_target = target_it != header.end();
  if (!has_target && require_target)
    throw InputError("CSV '" + path + "': target column '" + target_column + "' not found");
  const auto target_pos = has_target ? static_cast<std::size_t>(target_it - header.begin())
                                     : header.size();

  std::vector<std::vector<double>> rows;
  int row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (trim(line).empty()) continue;
    const auto fields = split_fields(line);
    if (fields.size() != header.size())
      throw InputError("CSV '" + path + "': row " + std::to_string(row) + " has " +
                       std::to_string(fields.size()) + " fields, header has " +
                       std::to_string(header.size()));
    std::vector<double> values(fields.size());
    for (std::size_t c = 0; c < fields.size(); ++c) values[c] = parse_cell(fields[c], row, header[c]);
    rows.push_back(std::move(values));
  }
  Dataset data;
  data.target = has_target ? target_column : std::string();
  for (std::size_t c = 0; c < header.size(); ++c)
    if (c != target_pos) data.names.push_back(header[c]);
  const auto n = static_cast<Eigen::Index>(rows.size());
  const auto d = static_cast<Eigen::Index>(data.names.size());
  data.X.resize(n, d);
  data.y = Vector::Zero(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    Eigen::Index col = 0;
    for (std::size_t c = 0; c < header.size(); ++c) {
      if (c == target_pos) data.y(i) = rows[static_cast<std::size_t>(i)][c];
      else data.X(i, col++) = rows[static_cast<std::size_t>(i)][c];
    }
  }
  data.transform = Standardization::identity(static_cast<int>(d));
  return data;
}

void write_csv(const std::string& path, const Dataset& data) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot open '" + path + "' for writing");
  for (Eigen::Index j = 0; j < data.X.cols(); ++j) {
    const std::string name = j < static_cast<Eigen::Index>(data.names.size())
                                 ? data.names[static_cast<std::size_t>(j)]
                                 : "x" + std::to_string(j + 1);
    out << name << ',';
  }
  out << data.target << '\n';
  for (Eigen::Index i = 0; i < data.X.rows(); ++i) {
    for (Eigen::Index j = 0; j < data.X.cols(); ++j) out << format_double(data.X(i, j)) << ',';
    out << format_double(data.y(i)) << '\n';
  }
}

Dataset standardize(const Dataset& data, const StandardizeOptions& options) {
  data.validate();
  const double n = static_cast<double>(data.n());
  Standardization t = Standardization::identity(data.dim());
  if (options.scale_x) {
    for (int j = 0; j < data.dim(); ++j) {
      const double mean = data.X.col(j).mean();
      const double sd = std::sqrt((data.X.col(j).array() - mean).square().sum() / (n - 1.0));
      if (!(sd > 0.0)) {
        t.constant_columns.push_back(j);
        const std::string name = j < static_cast<int>(data.names.size())
                                      ? data.names[static_cast<std::size_t>(j)]
                                      : std::to_string(j + 1);
        log::warn("standardize: column '" + name + "' has zero variance and is left unscaled");
        continue;
      }
      t.x_mean(j) = mean;
      t.x_scale(j) = sd;
    }
  }
  if (options.center_y) t.y_mean = data.y.mean();
  if (options.scale_y) {
    const double sd = std::sqrt((data.y.array() - data.y.mean()).square().sum() / (n - 1.0));
    if (sd > 0.0) t.y_scale = sd;
    else log::warn("standardize: response has zero variance and is left unscaled");
  }
  return apply_standardization(data, t);
}

Dataset apply_standardization(const Dataset& data, const Standardization& t) {
  if (t.x_mean.size() != data.dim() || t.x_scale.size() != data.dim())
    throw InputError("apply_standardization: transform width does not match the data");
  Dataset out = data;
  for (int j = 0; j < data.dim(); ++j)
    out.X.col(j) = (data.X.col(j).array() - t.x_mean(j)) / t.x_scale(j);
  out.y = (data.y.array() - t.y_mean) / t.y_scale;
  out.transform = t;
  return out;
}

Vector inverse_transform_y(const Vector& y, const Standardization& t) {
  return (y.array() * t.y_scale + t.y_mean).matrix();
}

Dataset select_rows(const Dataset& data, const std::vector<int>& rows) {
  Dataset out;
  out.names = data.names;
  out.target = data.target;
  out.transform = data.transform;
  out.X.resize(static_cast<Eigen::Index>(rows.size()), data.X.cols());
  out.y.resize(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i] < 0 || rows[i] >= data.n()) throw InputError("select_rows: row index out of range");
    out.X.row(static_cast<Eigen::Index>(i)) = data.X.row(rows[i]);
    out.y(static_cast<Eigen::Index>(i)) = data.y(rows[i]);
  }
  return out;
}

}  // namespace nngpvs
