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

#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "unravel/json_io.hpp"
#include "unravel/sde.hpp"

namespace unravel {

/// Decimal with 17 significant digits; round-trips every double.
std::string format_number(double x);

/// Identifies the run that produced an output file.
struct OutputStamp {
  std::string config_hash;
  std::uint64_t seed = 0;
};

/// "# config_hash=<hash> seed=<seed>"
std::string header_line(const OutputStamp& stamp);

/// Columns: t, rho_<i>_<j>_re, rho_<i>_<j>_im (row-major over i, j), std_error.
void write_ensemble_csv(std::ostream& out, const EnsembleEstimate& est, const OutputStamp& stamp);
/// Columns: t, psi_<i>_re, psi_<i>_im.
void write_trajectory_csv(std::ostream& out, const Trajectory& tr, const OutputStamp& stamp);
/// Columns: t, then one column per series.
void write_series_csv(std::ostream& out, const std::vector<double>& times, const std::vector<std::string>& names,
                      const std::vector<std::vector<double>>& columns, const OutputStamp& stamp);

/// Writes `content` to `path`, throwing std::runtime_error on I/O failure.
void write_text_file(const std::string& path, const std::string& content);

}  // namespace unravel
