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

#include "structprobe/chart.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <map>
#include <optional>
#include <set>

#include <fmt/core.h>

#include "structprobe/error.hpp"
#include "structprobe/file_util.hpp"

namespace structprobe {

namespace {

constexpr double kWidth = 720;
constexpr double kHeight = 420;
constexpr double kLeft = 64;
constexpr double kRight = 180;  // legend column
constexpr double kTop = 48;
constexpr double kBottom = 56;

constexpr std::array<std::string_view, 8> kPalette = {
    "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
    "#9467bd", "#8c564b", "#e377c2", "#17becf"};

std::optional<long> integer_layer(std::string_view tag) {
  long value = 0;
  const auto [ptr, ec] = std::from_chars(tag.data(), tag.data() + tag.size(), value);
  if (ec != std::errc{} || ptr != tag.data() + tag.size() || tag.empty())
    return std::nullopt;
  return value;
}

std::string escape_xml(std::string_view text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string upper(std::string_view s) {
  std::string out(s);
  for (char& c : out)
    if (c >= 'a' && c <= 'z') c = static_cast<char>(c - 'a' + 'A');
  return out;
}

struct Series {
  std::string name;
  bool baseline = false;
  std::vector<std::pair<double, double>> points;  // (layer, value)
};

}  // namespace

bool is_chart_metric(std::string_view metric) noexcept {
  return metric == "dspr" || metric == "nspr" || metric == "uuas" ||
         metric == "root_acc";
}

std::string render_chart(std::span<const ReportRow> rows, std::string_view metric,
                         const ChartOptions& options) {
  if (!is_chart_metric(metric))
    throw ValidationError(fmt::format("unknown chart metric '{}'", metric));

  std::vector<const ReportRow*> selected;
  for (const auto& row : rows)
    if (row.metric == metric) selected.push_back(&row);
  if (selected.empty())
    throw ValidationError(fmt::format("no report rows for metric '{}'", metric));

  std::set<std::size_t> ranks;
  std::optional<long> min_layer, max_layer;
  bool negative = false;
  for (const ReportRow* row : selected) {
    if (const auto layer = integer_layer(row->layer)) {
      ranks.insert(row->rank);
      min_layer = min_layer ? std::min(*min_layer, *layer) : *layer;
      max_layer = max_layer ? std::max(*max_layer, *layer) : *layer;
    }
    if (row->value && *row->value < 0.0) negative = true;
  }

  double x_lo = 0.0, x_hi = 1.0;
  if (min_layer) {
    x_lo = static_cast<double>(*min_layer);
    x_hi = static_cast<double>(*max_layer);
    if (x_lo == x_hi) {
      x_lo -= 0.5;
      x_hi += 0.5;
    }
  }
  const double y_lo = negative ? -1.0 : 0.0;
  const double y_hi = 1.0;

  // Layer series keyed by rank, then baselines in first-seen order.
  std::map<std::size_t, Series> layer_series;
  std::vector<Series> baselines;
  for (const ReportRow* row : selected) {
    if (!row->value) continue;
    if (const auto layer = integer_layer(row->layer)) {
      Series& s = layer_series[row->rank];
      if (s.name.empty())
        s.name = ranks.size() > 1 ? fmt::format("{} (rank {})", options.model, row->rank)
                                  : options.model;
      s.points.emplace_back(static_cast<double>(*layer), *row->value);
      continue;
    }
    std::string name = row->layer;
    if (ranks.size() > 1) name += fmt::format(" (rank {})", row->rank);
    auto it = std::find_if(baselines.begin(), baselines.end(),
                           [&](const Series& s) { return s.name == name; });
    if (it == baselines.end()) {
      baselines.push_back(Series{name, true, {}});
      it = std::prev(baselines.end());
    }
    it->points = {{x_lo, *row->value}, {x_hi, *row->value}};
  }
  std::vector<Series> series;
  for (auto& [rank, s] : layer_series) {
    std::sort(s.points.begin(), s.points.end());
    series.push_back(std::move(s));
  }
  for (auto& s : baselines) series.push_back(std::move(s));

  const double plot_w = kWidth - kLeft - kRight;
  const double plot_h = kHeight - kTop - kBottom;
  auto px = [&](double x) { return kLeft + (x - x_lo) / (x_hi - x_lo) * plot_w; };
  auto py = [&](double y) { return kTop + (y_hi - y) / (y_hi - y_lo) * plot_h; };

  const std::string title =
      options.title.empty() ? fmt::format("{} across layers", upper(metric)) : options.title;

  std::string svg;
  svg += fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{0:.0f}\" height=\"{1:.0f}\" "
      "viewBox=\"0 0 {0:.0f} {1:.0f}\" font-family=\"sans-serif\" font-size=\"12\">\n",
      kWidth, kHeight);
  svg += fmt::format("<rect x=\"0\" y=\"0\" width=\"{:.0f}\" height=\"{:.0f}\" fill=\"white\"/>\n",
                     kWidth, kHeight);
  svg += fmt::format("<text x=\"{:.2f}\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">{}</text>\n",
                     kLeft + plot_w / 2, escape_xml(title));

  // Axes and grid.
  svg += "<g class=\"axes\" stroke=\"#444\" stroke-width=\"1\">\n";
  svg += fmt::format("<line x1=\"{0:.2f}\" y1=\"{1:.2f}\" x2=\"{0:.2f}\" y2=\"{2:.2f}\"/>\n",
                     kLeft, kTop, kTop + plot_h);
  svg += fmt::format("<line x1=\"{0:.2f}\" y1=\"{1:.2f}\" x2=\"{2:.2f}\" y2=\"{1:.2f}\"/>\n",
                     kLeft, kTop + plot_h, kLeft + plot_w);
  svg += "</g>\n";

  const double y_step = negative ? 0.25 : 0.2;
  const int y_ticks = static_cast<int>((y_hi - y_lo) / y_step + 0.5);
  svg += "<g class=\"y-ticks\">\n";
  for (int t = 0; t <= y_ticks; ++t) {
    const double v = y_lo + t * y_step;
    svg += fmt::format(
        "<line x1=\"{:.2f}\" y1=\"{:.2f}\" x2=\"{:.2f}\" y2=\"{:.2f}\" stroke=\"#ddd\"/>\n",
        kLeft, py(v), kLeft + plot_w, py(v));
    svg += fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\" text-anchor=\"end\">{:.2f}</text>\n",
                       kLeft - 6, py(v) + 4, v);
  }
  svg += "</g>\n";

  svg += "<g class=\"x-ticks\">\n";
  if (min_layer) {
    for (long layer = *min_layer; layer <= *max_layer; ++layer) {
      const double x = px(static_cast<double>(layer));
      svg += fmt::format("<line x1=\"{0:.2f}\" y1=\"{1:.2f}\" x2=\"{0:.2f}\" y2=\"{2:.2f}\" stroke=\"#444\"/>\n",
                         x, kTop + plot_h, kTop + plot_h + 4);
      svg += fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\" text-anchor=\"middle\">{}</text>\n",
                         x, kTop + plot_h + 18, layer);
    }
  }
  svg += "</g>\n";
  svg += fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\" text-anchor=\"middle\">layer</text>\n",
                     kLeft + plot_w / 2, kHeight - 14);
  svg += fmt::format(
      "<text x=\"16\" y=\"{0:.2f}\" text-anchor=\"middle\" transform=\"rotate(-90 16 {0:.2f})\">{1}</text>\n",
      kTop + plot_h / 2, escape_xml(upper(metric)));

  // Series and legend.
  for (std::size_t i = 0; i < series.size(); ++i) {
    const Series& s = series[i];
    const std::string_view color = kPalette[i % kPalette.size()];
    const std::string dash = s.baseline ? " stroke-dasharray=\"6 4\"" : "";
    std::string points;
    for (const auto& [x, y] : s.points) {
      if (!points.empty()) points += ' ';
      points += fmt::format("{:.2f},{:.2f}", px(x), py(y));
    }
    svg += fmt::format(
        "<polyline class=\"series\" data-name=\"{}\" fill=\"none\" stroke=\"{}\" "
        "stroke-width=\"2\"{} points=\"{}\"/>\n",
        escape_xml(s.name), color, dash, points);
    if (!s.baseline)
      for (const auto& [x, y] : s.points)
        svg += fmt::format("<circle cx=\"{:.2f}\" cy=\"{:.2f}\" r=\"3\" fill=\"{}\"/>\n",
                           px(x), py(y), color);

    const double ly = kTop + 10 + 20 * static_cast<double>(i);
    const double lx = kLeft + plot_w + 16;
    svg += fmt::format(
        "<line x1=\"{:.2f}\" y1=\"{:.2f}\" x2=\"{:.2f}\" y2=\"{:.2f}\" stroke=\"{}\" "
        "stroke-width=\"2\"{}/>\n",
        lx, ly, lx + 24, ly, color, dash);
    svg += fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\">{}</text>\n", lx + 30, ly + 4,
                       escape_xml(s.name));
  }
  svg += "</svg>\n";
  return svg;
}

void emit_chart(std::span<const ReportRow> rows, std::string_view metric,
                const std::filesystem::path& out_path, const ChartOptions& options) {
  write_file_atomic(out_path, render_chart(rows, metric, options));
}

}  // namespace structprobe
