// Copyright 2026 The spectral-lab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Serialization of experiment results: one CSV row per configuration, a JSON
// document with full detail, and (series, x, y, yerr) plot data. Wall-clock
// runtimes go to a separate timing file so the other three stay bit-identical
// across runs.

#ifndef SPECTRAL_REPORT_HPP_
#define SPECTRAL_REPORT_HPP_

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "spectral/experiments.hpp"

namespace spectral {

// CSV header, in order:
//   mode, m, d, k, T, trials, seed,
//   empirical_mean, empirical_stderr, empirical_mean_sq, empirical_stderr_sq,
//   max_sample, first_order_prediction,
//   assumption_delta, assumption_required_gap, assumption_satisfied,
// then bound_<label>, ratio_<label> for each label in kBoundLabels, with
// main_explicit following main. Missing values are empty cells.
const std::vector<std::string>& summary_csv_columns();

void write_summary_csv(std::ostream& out, const std::vector<ExperimentSummary>& summaries);
void write_plot_data(std::ostream& out, const std::vector<ExperimentSummary>& summaries,
                     const std::string& x_field = "T");

// Non-finite doubles are written as the strings "inf", "-inf" and "nan".
nlohmann::json to_json(const BoundValue& bound);
nlohmann::json to_json(const ExperimentSummary& summary);
nlohmann::json to_json(const LinearFit& fit);
nlohmann::json to_json(const ScalingResult& result);
BoundValue bound_from_json(const nlohmann::json& j);
ExperimentSummary summary_from_json(const nlohmann::json& j);

struct ReportFiles {
  std::filesystem::path csv;
  std::filesystem::path json;
  std::filesystem::path plot;
  std::filesystem::path timing;
};

// Writes summary.csv, summary.json, plot_data.csv and timing.json into dir.
ReportFiles emit_report(const std::vector<ExperimentSummary>& summaries,
                        const std::filesystem::path& dir);
// As emit_report, plus scaling.json with the fitted slopes; plot x is the
// swept dimension.
ReportFiles emit_scaling_report(const ScalingResult& result, const std::filesystem::path& dir);

std::vector<ExperimentSummary> read_summary_json(const std::filesystem::path& path);

}  // namespace spectral

#endif  // SPECTRAL_REPORT_HPP_
