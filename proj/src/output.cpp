// Copyright 2026 The Unravel Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "unravel/output.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace unravel {

std::string format_number(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string header_line(const OutputStamp& stamp) {
  return "# config_hash=" + stamp.config_hash + " seed=" + std::to_string(stamp.seed);
}

void write_ensemble_csv(std::ostream& out, const EnsembleEstimate& est, const OutputStamp& stamp) {
  out << header_line(stamp) << '\n' << "t";
  const Eigen::Index d = est.rho_hat.empty() ? 0 : est.rho_hat.front().rows();
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) {
      out << ",rho_" << i << '_' << j << "_re,rho_" << i << '_' << j << "_im";
    }
  }
  out << ",std_error\n";
  for (std::size_t r = 0; r < est.times.size(); ++r) {
    out << format_number(est.times[r]);
    const auto& rho = est.rho_hat[r];
    for (Eigen::Index i = 0; i < d; ++i) {
      for (Eigen::Index j = 0; j < d; ++j) {
        out << ',' << format_number(rho(i, j).real()) << ',' << format_number(rho(i, j).imag());
      }
    }
    out << ',' << format_number(est.std_error[r]) << '\n';
  }
}

void write_trajectory_csv(std::ostream& out, const Trajectory& tr, const OutputStamp& stamp) {
  out << header_line(stamp) << '\n' << "t";
  const Eigen::Index d = tr.states.empty() ? 0 : tr.states.front().size();
  for (Eigen::Index i = 0; i < d; ++i) out << ",psi_" << i << "_re,psi_" << i << "_im";
  out << '\n';
  for (std::size_t r = 0; r < tr.times.size(); ++r) {
    out << format_number(tr.times[r]);
    for (Eigen::Index i = 0; i < d; ++i) {
      out << ',' << format_number(tr.states[r](i).real()) << ',' << format_number(tr.states[r](i).imag());
    }
    out << '\n';
  }
}

void write_series_csv(std::ostream& out, const std::vector<double>& times, const std::vector<std::string>& names,
                      const std::vector<std::vector<double>>& columns, const OutputStamp& stamp) {
  if (names.size() != columns.size()) throw std::invalid_argument("write_series_csv: names and columns differ");
  out << header_line(stamp) << '\n' << "t";
  for (const auto& n : names) out << ',' << n;
  out << '\n';
  for (std::size_t r = 0; r < times.size(); ++r) {
    out << format_number(times[r]);
    for (const auto& c : columns) out << ',' << format_number(c.at(r));
    out << '\n';
  }
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open '" + path + "' for writing");
  f << content;
  if (!f) throw std::runtime_error("write to '" + path + "' failed");
}

}  // namespace unravel
