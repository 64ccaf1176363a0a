// Copyright 2026 The structprobe Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef STRUCTPROBE_CHART_HPP
#define STRUCTPROBE_CHART_HPP

#include <filesystem>
#include <span>
#include <string>
#include <string_view>

#include "structprobe/report.hpp"

namespace structprobe {

struct ChartOptions {
  // Series name for rows whose layer tag is an integer.
  std::string model = "probe";
  // Defaults to "<METRIC> across layers".
  std::string title;
};

// Metric names the chart understands: dspr, nspr, uuas, root_acc.
bool is_chart_metric(std::string_view metric) noexcept;

/// Renders a self-contained SVG line chart of `metric` against layer.
///
/// Rows with an integer layer tag form one series per probe rank (named
/// after `options.model`, with the rank appended when several ranks are
/// present). Rows with any other tag are baselines and are drawn as flat
/// dashed lines across the layer range. The y axis spans [0, 1], or
/// [-1, 1] when a value is negative. Output bytes depend only on the input.
/// Throws ValidationError for an unknown metric or when no row carries it.
std::string render_chart(std::span<const ReportRow> rows, std::string_view metric,
                         const ChartOptions& options = {});

void emit_chart(std::span<const ReportRow> rows, std::string_view metric,
                const std::filesystem::path& out_path,
                const ChartOptions& options = {});

}  // namespace structprobe

#endif  // STRUCTPROBE_CHART_HPP
