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

#include "spectral/report.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <ostream>

#include "spectral/errors.hpp"
#include "spectral/matrix_io.hpp"

namespace spectral {

namespace {

using nlohmann::json;

json number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return x;
}

double number_from(const json& j) {
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
    throw InputError("report: unexpected number string '" + s + "'");
  }
  return j.get<double>();
}

std::string cell(double x) { return format_double(x); }

std::optional<double> bound_column(const ExperimentSummary& s, const std::string& label) {
  if (label == "main_explicit") {
    const auto* b = s.bound("main");
    if (b == nullptr) return std::nullopt;
    return b->value.explicit_constant;
  }
  const auto* b = s.bound(label);
  if (b == nullptr) return std::nullopt;
  return b->value.sans_constant;
}

std::vector<std::string> column_labels() {
  std::vector<std::string> labels;
  for (const auto& label : kBoundLabels) {
    labels.push_back(label);
    if (label == "main") labels.push_back("main_explicit");
  }
  return labels;
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot open " + path.string() + " for writing");
  return out;
}

void check_written(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) throw InputError("failed writing " + path.string());
}

void prepare_dir(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw InputError("cannot create directory " + dir.string() + ": " + ec.message());
}

double x_value(const ExperimentSummary& s, const std::string& field) {
  if (field == "m") return s.m;
  if (field == "d") return s.d;
  if (field == "k") return s.k;
  return s.T;
}

json timing(const std::vector<ExperimentSummary>& summaries) {
  json j = json::array();
  for (const auto& s : summaries) {
    j.push_back({{"mode", s.mode}, {"m", s.m}, {"d", s.d}, {"k", s.k}, {"T", number(s.T)},
                 {"runtime_seconds", s.runtime_seconds}});
  }
  return j;
}

ReportFiles write_all(const std::vector<ExperimentSummary>& summaries,
                      const std::filesystem::path& dir, const std::string& x_field) {
  if (summaries.empty()) throw InputError("emit_report: no summaries");
  prepare_dir(dir);
  ReportFiles files{dir / "summary.csv", dir / "summary.json", dir / "plot_data.csv",
                    dir / "timing.json"};
  {
    auto out = open_output(files.csv);
    write_summary_csv(out, summaries);
    check_written(out, files.csv);
  }
  {
    json doc = json::array();
    for (const auto& s : summaries) doc.push_back(to_json(s));
    auto out = open_output(files.json);
    out << doc.dump(2) << '\n';
    check_written(out, files.json);
  }
  {
    auto out = open_output(files.plot);
    write_plot_data(out, summaries, x_field);
    check_written(out, files.plot);
  }
  {
    auto out = open_output(files.timing);
    out << timing(summaries).dump(2) << '\n';
    check_written(out, files.timing);
  }
  return files;
}

}  // namespace

const std::vector<std::string>& summary_csv_columns() {
  static const std::vector<std::string> columns = [] {
    std::vector<std::string> c = {
        "mode", "m", "d", "k", "T", "trials", "seed",
        "empirical_mean", "empirical_stderr", "empirical_mean_sq", "empirical_stderr_sq",
        "max_sample", "first_order_prediction",
        "assumption_delta", "assumption_required_gap", "assumption_satisfied",
    };
    for (const auto& label : column_labels()) {
      c.push_back("bound_" + label);
      c.push_back("ratio_" + label);
    }
    return c;
  }();
  return columns;
}

void write_summary_csv(std::ostream& out, const std::vector<ExperimentSummary>& summaries) {
  const auto& columns = summary_csv_columns();
  for (std::size_t i = 0; i < columns.size(); ++i) out << (i ? "," : "") << columns[i];
  out << '\n';
  for (const auto& s : summaries) {
    out << s.mode << ',' << s.m << ',' << s.d << ',' << s.k << ',' << cell(s.T) << ','
        << s.trials << ',' << s.seed << ',' << cell(s.empirical_mean) << ','
        << cell(s.empirical_stderr) << ',' << cell(s.empirical_mean_sq) << ','
        << cell(s.empirical_stderr_sq) << ',' << cell(s.max_sample) << ','
        << cell(s.first_order_prediction) << ',';
    if (s.assumption) {
      out << cell(s.assumption->delta) << ',' << cell(s.assumption->required_gap) << ','
          << (s.assumption->overall ? "true" : "false");
    } else {
      out << ",,";
    }
    for (const auto& label : column_labels()) {
      const auto b = bound_column(s, label);
      const auto r = s.ratio(label);
      out << ',' << (b ? cell(*b) : "") << ',' << (r ? cell(*r) : "");
    }
    out << '\n';
  }
}

void write_plot_data(std::ostream& out, const std::vector<ExperimentSummary>& summaries,
                     const std::string& x_field) {
  out << "series,x,y,yerr\n";
  for (const auto& s : summaries) {
    const double x = x_value(s, x_field);
    const std::string prefix = s.mode + "/";
    out << prefix << "empirical," << cell(x) << ',' << cell(s.empirical_mean) << ','
        << cell(s.empirical_stderr) << '\n';
    out << prefix << "empirical_rms," << cell(x) << ',' << cell(std::sqrt(s.empirical_mean_sq))
        << ",0\n";
    if (s.first_order_prediction > 0) {
      out << prefix << "first_order_rms," << cell(x) << ','
          << cell(std::sqrt(s.first_order_prediction)) << ",0\n";
    }
    for (const auto& label : column_labels()) {
      const auto b = bound_column(s, label);
      if (b && std::isfinite(*b)) {
        out << prefix << "bound_" << label << ',' << cell(x) << ',' << cell(*b) << ",0\n";
      }
    }
  }
}

json to_json(const BoundValue& bound) {
  json details = json::array();
  for (const auto& [name, value] : bound.details) {
    details.push_back({{"name", name}, {"value", number(value)}});
  }
  return {
      {"kind", to_string(bound.kind)},
      {"sans_constant", number(bound.sans_constant)},
      {"explicit_constant",
       bound.explicit_constant ? number(*bound.explicit_constant) : json(nullptr)},
      {"flags", bound.flags},
      {"details", details},
  };
}

BoundValue bound_from_json(const json& j) {
  BoundValue b{bound_kind_from_string(j.at("kind").get<std::string>())};
  b.sans_constant = number_from(j.at("sans_constant"));
  if (!j.at("explicit_constant").is_null()) {
    b.explicit_constant = number_from(j.at("explicit_constant"));
  }
  b.flags = j.at("flags").get<std::vector<std::string>>();
  for (const auto& entry : j.at("details")) {
    b.details.emplace_back(entry.at("name").get<std::string>(), number_from(entry.at("value")));
  }
  return b;
}

json to_json(const ExperimentSummary& s) {
  json j = {
      {"mode", s.mode},
      {"m", s.m},
      {"d", s.d},
      {"k", s.k},
      {"T", number(s.T)},
      {"trials", s.trials},
      {"seed", s.seed},
      {"empirical_mean", number(s.empirical_mean)},
      {"empirical_stderr", number(s.empirical_stderr)},
      {"empirical_mean_sq", number(s.empirical_mean_sq)},
      {"empirical_stderr_sq", number(s.empirical_stderr_sq)},
      {"max_sample", number(s.max_sample)},
      {"first_order_prediction", number(s.first_order_prediction)},
      {"warnings", s.warnings},
  };
  json bounds = json::array();
  for (const auto& b : s.bounds) {
    json entry = to_json(b.value);
    entry["label"] = b.label;
    bounds.push_back(entry);
  }
  j["bounds"] = bounds;
  json ratios = json::array();
  for (const auto& [label, value] : s.ratios) {
    ratios.push_back({{"label", label}, {"value", number(value)}});
  }
  j["ratios"] = ratios;
  if (s.assumption) {
    const auto& a = *s.assumption;
    json gaps = json::array();
    for (double g : a.gaps) gaps.push_back(number(g));
    j["assumption"] = {
        {"delta", number(a.delta)},
        {"delta_valid", a.validity == DeltaValidity::kValid},
        {"required_gap", number(a.required_gap)},
        {"gaps", gaps},
        {"satisfied", std::vector<bool>(a.satisfied.begin(), a.satisfied.end())},
        {"overall", a.overall},
    };
  } else {
    j["assumption"] = nullptr;
  }
  return j;
}

ExperimentSummary summary_from_json(const json& j) {
  ExperimentSummary s;
  s.mode = j.at("mode").get<std::string>();
  s.m = j.at("m").get<int>();
  s.d = j.at("d").get<int>();
  s.k = j.at("k").get<int>();
  s.T = number_from(j.at("T"));
  s.trials = j.at("trials").get<int>();
  s.seed = j.at("seed").get<std::uint64_t>();
  s.empirical_mean = number_from(j.at("empirical_mean"));
  s.empirical_stderr = number_from(j.at("empirical_stderr"));
  s.empirical_mean_sq = number_from(j.at("empirical_mean_sq"));
  s.empirical_stderr_sq = number_from(j.at("empirical_stderr_sq"));
  s.max_sample = number_from(j.at("max_sample"));
  s.first_order_prediction = number_from(j.at("first_order_prediction"));
  s.warnings = j.at("warnings").get<std::vector<std::string>>();
  for (const auto& entry : j.at("bounds")) {
    s.bounds.push_back({entry.at("label").get<std::string>(), bound_from_json(entry)});
  }
  for (const auto& entry : j.at("ratios")) {
    s.ratios.emplace_back(entry.at("label").get<std::string>(), number_from(entry.at("value")));
  }
  const auto& a = j.at("assumption");
  if (!a.is_null()) {
    AssumptionReport r;
    r.delta = number_from(a.at("delta"));
    r.validity = a.at("delta_valid").get<bool>() ? DeltaValidity::kValid
                                                 : DeltaValidity::kOutOfRange;
    r.required_gap = number_from(a.at("required_gap"));
    for (const auto& g : a.at("gaps")) r.gaps.push_back(number_from(g));
    r.satisfied = a.at("satisfied").get<std::vector<bool>>();
    r.overall = a.at("overall").get<bool>();
    s.assumption = r;
  }
  return s;
}

json to_json(const LinearFit& fit) {
  return {{"slope", number(fit.slope)},
          {"intercept", number(fit.intercept)},
          {"slope_stderr", number(fit.slope_stderr)},
          {"ci_low", number(fit.ci_low)},
          {"ci_high", number(fit.ci_high)}};
}

json to_json(const ScalingResult& result) {
  return {{"swept", result.swept},
          {"values", result.values},
          {"empirical", to_json(result.empirical)},
          {"dkw_whp", to_json(result.dkw_whp)},
          {"dkw_proxy", to_json(result.dkw_proxy)},
          {"subspace", to_json(result.subspace)}};
}

ReportFiles emit_report(const std::vector<ExperimentSummary>& summaries,
                        const std::filesystem::path& dir) {
  return write_all(summaries, dir, "T");
}

ReportFiles emit_scaling_report(const ScalingResult& result, const std::filesystem::path& dir) {
  auto files = write_all(result.points, dir, result.swept);
  const auto path = dir / "scaling.json";
  auto out = open_output(path);
  out << to_json(result).dump(2) << '\n';
  check_written(out, path);
  return files;
}

std::vector<ExperimentSummary> read_summary_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw InputError(path.string() + ": " + e.what());
  }
  std::vector<ExperimentSummary> out;
  for (const auto& entry : doc) out.push_back(summary_from_json(entry));
  return out;
}

}  // namespace spectral
