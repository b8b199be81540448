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

#include "nngpvs/chain_io.hpp"

#include "nngpvs/errors.hpp"

#include <charconv>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <vector>

namespace nngpvs {
namespace {

constexpr const char* kHeader = "iter,sigma2,gamma,rho,k,A,beta,accepted1,accepted3";

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  std::istringstream ss(s);
  while (std::getline(ss, cur, sep)) parts.push_back(cur);
  if (!s.empty() && s.back() == sep) parts.emplace_back();
  return parts;
}

template <class T>
T parse_number(const std::string& text, int line, const char* field) {
  T value{};
  const char* first = text.data();
  const char* last = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last || text.empty())
    throw InputError("chain CSV line " + std::to_string(line) + ": bad " + field + " value '" + text +
                     "'");
  return value;
}

}  // namespace

std::string format_double(double x) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, ptr);
}

void write_chain_csv(std::ostream& out, const Chain& chain) {
  out << kHeader << '\n';
  int iter = 1;
  for (const Sample& s : chain.samples) {
    out << iter++ << ',' << format_double(s.sigma2) << ',' << format_double(s.gamma) << ','
        << format_double(s.rho) << ',' << s.active.size() << ',';
    for (std::size_t i = 0; i < s.active.size(); ++i) out << (i ? ";" : "") << s.active[i] + 1;
    out << ',';
    for (Eigen::Index j = 0; j < s.beta.size(); ++j) out << (j ? ";" : "") << format_double(s.beta(j));
    out << ',' << (s.accepted1 ? 1 : 0) << ',' << (s.accepted3 ? 1 : 0) << '\n';
  }
}

void write_chain_csv(const std::string& path, const Chain& chain) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot open '" + path + "' for writing");
  write_chain_csv(out, chain);
}

Chain read_chain_csv(std::istream& in, int burn_in) {
  std::string line;
  if (!std::getline(in, line)) throw InputError("chain CSV: empty input");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kHeader) throw InputError("chain CSV line 1: unexpected header '" + line + "'");
  Chain chain;
  chain.burn_in = burn_in;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto f = split(line, ',');
    if (f.size() != 9)
      throw InputError("chain CSV line " + std::to_string(lineno) + ": expected 9 fields, got " +
                       std::to_string(f.size()));
    Sample s;
    s.sigma2 = parse_number<double>(f[1], lineno, "sigma2");
    s.gamma = parse_number<double>(f[2], lineno, "gamma");
    s.rho = parse_number<double>(f[3], lineno, "rho");
    const int k = parse_number<int>(f[4], lineno, "k");
    for (const auto& a : split(f[5], ';')) s.active.push_back(parse_number<int>(a, lineno, "A") - 1);
    const auto betas = split(f[6], ';');
    s.beta.resize(static_cast<Eigen::Index>(betas.size()));
    for (std::size_t j = 0; j < betas.size(); ++j)
      s.beta(static_cast<Eigen::Index>(j)) = parse_number<double>(betas[j], lineno, "beta");
    s.accepted1 = parse_number<int>(f[7], lineno, "accepted1") != 0;
    s.accepted3 = parse_number<int>(f[8], lineno, "accepted3") != 0;
    if (static_cast<int>(s.active.size()) != k)
      throw InputError("chain CSV line " + std::to_string(lineno) + ": k does not match A");
    if (chain.dim == 0) chain.dim = static_cast<int>(s.beta.size());
    if (s.beta.size() != chain.dim)
      throw InputError("chain CSV line " + std::to_string(lineno) + ": inconsistent beta length");
    for (int a : s.active)
      if (a < 0 || a >= chain.dim)
        throw InputError("chain CSV line " + std::to_string(lineno) + ": index out of range");
    chain.samples.push_back(std::move(s));
  }
  if (chain.samples.empty()) throw InputError("chain CSV: no samples");
  return chain;
}

Chain read_chain_csv(const std::string& path, int burn_in) {
  if (!std::filesystem::exists(path)) throw InputError("file not found: " + path);
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open '" + path + "'");
  return read_chain_csv(in, burn_in);
}

}  // namespace nngpvs
