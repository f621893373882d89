// Copyright 2026 The GAEX Toolkit Authors. All rights reserved.
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

#include "gaex/charts.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

#include "gaex/errors.hpp"

namespace gaex {
namespace {

Real metric_value(const MetricsRecord& r, const std::string& metric) {
  if (metric == "ext_return") return r.ext_return;
  if (metric == "int_return") return r.int_return;
  if (metric == "max_state") return r.max_state;
  if (metric == "d_real") return r.d_real;
  if (metric == "d_fake") return r.d_fake;
  if (metric == "d_loss") return r.d_loss;
  if (metric == "g_loss") return r.g_loss;
  if (metric == "td_loss") return r.td_loss;
  if (metric == "epsilon") return r.epsilon;
  throw ContractError("unknown metric '" + metric + "'");
}

std::string escape(const std::string& text) {
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

std::string num(Real v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

std::string tick(Real v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4g", v);
  return buf;
}

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#17becf"};

}  // namespace

std::vector<ChartSeries> aggregate_metric(const std::vector<MetricsRecord>& series, const std::string& metric,
                                          std::size_t max_points) {
  // run -> episode -> values over seeds
  std::map<std::string, std::map<int, std::vector<Real>>> grouped;
  std::vector<std::string> order;
  for (const auto& r : series) {
    if (!grouped.count(r.run)) order.push_back(r.run);
    const Real v = metric_value(r, metric);
    auto& cell = grouped[r.run][r.episode];
    if (!std::isnan(v)) cell.push_back(v);
  }
  std::vector<ChartSeries> out;
  for (const auto& run : order) {
    const auto& episodes = grouped[run];
    std::vector<std::pair<int, const std::vector<Real>*>> rows;
    for (const auto& [ep, values] : episodes)
      if (!values.empty()) rows.emplace_back(ep, &values);
    ChartSeries cs;
    cs.run = run;
    const std::size_t bucket = std::max<std::size_t>(1, (rows.size() + max_points - 1) / std::max<std::size_t>(max_points, 1));
    for (std::size_t start = 0; start < rows.size(); start += bucket) {
      const std::size_t stop = std::min(rows.size(), start + bucket);
      Real x = 0, m = 0, lo = 0, hi = 0;
      for (std::size_t i = start; i < stop; ++i) {
        const auto& v = *rows[i].second;
        x += rows[i].first;
        Real s = 0;
        for (Real e : v) s += e;
        m += s / static_cast<Real>(v.size());
        lo += *std::min_element(v.begin(), v.end());
        hi += *std::max_element(v.begin(), v.end());
      }
      const Real k = static_cast<Real>(stop - start);
      cs.x.push_back(x / k);
      cs.mean.push_back(m / k);
      cs.lo.push_back(lo / k);
      cs.hi.push_back(hi / k);
    }
    out.push_back(std::move(cs));
  }
  return out;
}

std::string render_svg(const std::vector<ChartSeries>& curves, const std::string& title, const std::string& y_label) {
  constexpr Real kW = 720, kH = 420, kLeft = 70, kRight = 170, kTop = 40, kBottom = 50;
  Real x0 = std::numeric_limits<Real>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
  for (const auto& c : curves) {
    for (std::size_t i = 0; i < c.x.size(); ++i) {
      x0 = std::min(x0, c.x[i]);
      x1 = std::max(x1, c.x[i]);
      y0 = std::min(y0, c.lo[i]);
      y1 = std::max(y1, c.hi[i]);
    }
  }
  if (!std::isfinite(x0)) x0 = 0, x1 = 1, y0 = 0, y1 = 1;
  if (x1 <= x0) x1 = x0 + 1;
  if (y1 <= y0) y1 = y0 + 1;
  const Real pw = kW - kLeft - kRight, ph = kH - kTop - kBottom;
  auto px = [&](Real x) { return kLeft + (x - x0) / (x1 - x0) * pw; };
  auto py = [&](Real y) { return kTop + (1 - (y - y0) / (y1 - y0)) * ph; };

  std::ostringstream svg;
  svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kW << "\" height=\"" << kH << "\" viewBox=\"0 0 "
      << kW << ' ' << kH << "\">\n"
      << "<rect x=\"0\" y=\"0\" width=\"" << kW << "\" height=\"" << kH << "\" fill=\"white\"/>\n"
      << "<text x=\"" << kW / 2 << "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"16\">"
      << escape(title) << "</text>\n"
      << "<g stroke=\"black\" stroke-width=\"1\">\n"
      << "<line x1=\"" << kLeft << "\" y1=\"" << kTop + ph << "\" x2=\"" << kLeft + pw << "\" y2=\"" << kTop + ph
      << "\"/>\n"
      << "<line x1=\"" << kLeft << "\" y1=\"" << kTop << "\" x2=\"" << kLeft << "\" y2=\"" << kTop + ph << "\"/>\n"
      << "</g>\n<g font-family=\"sans-serif\" font-size=\"11\">\n";
  for (int i = 0; i <= 4; ++i) {
    const Real xv = x0 + (x1 - x0) * i / 4, yv = y0 + (y1 - y0) * i / 4;
    svg << "<text x=\"" << num(px(xv)) << "\" y=\"" << num(kTop + ph + 16) << "\" text-anchor=\"middle\">" << tick(xv)
        << "</text>\n"
        << "<text x=\"" << num(kLeft - 6) << "\" y=\"" << num(py(yv) + 4) << "\" text-anchor=\"end\">" << tick(yv)
        << "</text>\n";
  }
  svg << "<text x=\"" << num(kLeft + pw / 2) << "\" y=\"" << num(kH - 12) << "\" text-anchor=\"middle\">episode</text>\n"
      << "<text x=\"16\" y=\"" << num(kTop + ph / 2) << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
      << num(kTop + ph / 2) << ")\">" << escape(y_label) << "</text>\n</g>\n";

  for (std::size_t k = 0; k < curves.size(); ++k) {
    const auto& c = curves[k];
    const char* color = kPalette[k % std::size(kPalette)];
    if (c.x.empty()) continue;
    svg << "<polygon fill=\"" << color << "\" fill-opacity=\"0.18\" stroke=\"none\" points=\"";
    for (std::size_t i = 0; i < c.x.size(); ++i) svg << num(px(c.x[i])) << ',' << num(py(c.hi[i])) << ' ';
    for (std::size_t i = c.x.size(); i-- > 0;) svg << num(px(c.x[i])) << ',' << num(py(c.lo[i])) << ' ';
    svg << "\"/>\n<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < c.x.size(); ++i) svg << num(px(c.x[i])) << ',' << num(py(c.mean[i])) << ' ';
    svg << "\"/>\n";
    const Real ly = kTop + 14 + 18 * static_cast<Real>(k);
    svg << "<line x1=\"" << num(kLeft + pw + 12) << "\" y1=\"" << num(ly - 4) << "\" x2=\"" << num(kLeft + pw + 32)
        << "\" y2=\"" << num(ly - 4) << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n"
        << "<text x=\"" << num(kLeft + pw + 38) << "\" y=\"" << num(ly)
        << "\" font-family=\"sans-serif\" font-size=\"11\">" << escape(c.run) << "</text>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

std::vector<std::filesystem::path> emit_charts(const std::vector<MetricsRecord>& series,
                                               const std::filesystem::path& dir) {
  if (series.empty()) throw ContractError("no metrics to chart");
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  const std::vector<std::pair<std::string, std::string>> metrics{
      {"ext_return", "extrinsic return"}, {"int_return", "intrinsic return"}, {"max_state", "max state reached"},
      {"d_loss", "discriminator loss"},   {"g_loss", "generator loss"},       {"td_loss", "TD loss"}};
  std::vector<std::filesystem::path> written;
  for (const auto& [metric, label] : metrics) {
    const auto path = dir / (metric + ".svg");
    std::ofstream out(path);
    if (!out) throw Error("cannot write chart " + path.string());
    out << render_svg(aggregate_metric(series, metric), label, label);
    if (!out) throw Error("failed writing chart " + path.string());
    written.push_back(path);
  }
  return written;
}

}  // namespace gaex
