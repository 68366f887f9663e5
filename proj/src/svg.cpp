// Copyright 2026 The moonlab Authors.
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

#include "moonlab/svg.hpp"

#include <cstdio>

#include "moonlab/csv_io.hpp"
#include "moonlab/error.hpp"

namespace moonlab {

namespace {

constexpr double kMargin = 60.0;

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", x);
  return buf;
}

}  // namespace

std::string render_svg(const std::vector<CurvePoint>& points, const std::vector<Overlay>& overlays,
                       const PlotStyle& style) {
  const double w = style.width, h = style.height;
  const double pw = w - 2 * kMargin, ph = h - 2 * kMargin;
  auto px = [&](double x) { return kMargin + x * pw; };
  auto py = [&](double y) { return h - kMargin - y * ph; };

  std::string s;
  s += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(style.width) + "\" height=\"" +
       std::to_string(style.height) + "\" viewBox=\"0 0 " + std::to_string(style.width) + " " +
       std::to_string(style.height) + "\">\n";
  s += "<rect x=\"0\" y=\"0\" width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  if (!style.title.empty()) {
    s += "<text x=\"" + num(w / 2) + "\" y=\"" + num(kMargin / 2) +
         "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"16\">" + escape(style.title) + "</text>\n";
  }
  s += "<g stroke=\"black\" stroke-width=\"1\" fill=\"none\">\n";
  s += "<rect x=\"" + num(px(0)) + "\" y=\"" + num(py(1)) + "\" width=\"" + num(pw) + "\" height=\"" + num(ph) +
       "\"/>\n";
  for (int i = 0; i <= 10; ++i) {
    const double t = i / 10.0;
    s += "<line x1=\"" + num(px(t)) + "\" y1=\"" + num(py(0)) + "\" x2=\"" + num(px(t)) + "\" y2=\"" +
         num(py(0) + 5) + "\"/>\n";
    s += "<line x1=\"" + num(px(0) - 5) + "\" y1=\"" + num(py(t)) + "\" x2=\"" + num(px(0)) + "\" y2=\"" +
         num(py(t)) + "\"/>\n";
  }
  s += "</g>\n";
  s += "<g font-family=\"sans-serif\" font-size=\"11\">\n";
  for (int i = 0; i <= 10; ++i) {
    char label[8];
    std::snprintf(label, sizeof label, "%.1f", i / 10.0);
    s += "<text x=\"" + num(px(i / 10.0)) + "\" y=\"" + num(py(0) + 18) + "\" text-anchor=\"middle\">" + label +
         "</text>\n";
    s += "<text x=\"" + num(px(0) - 8) + "\" y=\"" + num(py(i / 10.0) + 4) + "\" text-anchor=\"end\">" + label +
         "</text>\n";
  }
  s += "<text x=\"" + num(w / 2) + "\" y=\"" + num(h - 15) + "\" text-anchor=\"middle\" font-size=\"13\">" +
       escape(style.x_label) + "</text>\n";
  s += "<text x=\"15\" y=\"" + num(h / 2) + "\" text-anchor=\"middle\" font-size=\"13\" transform=\"rotate(-90 15 " +
       num(h / 2) + ")\">" + escape(style.y_label) + "</text>\n";
  s += "</g>\n";

  s += "<g fill=\"" + escape(style.point_color) + "\" fill-opacity=\"0.6\">\n";
  for (const auto& p : points) {
    s += "<circle cx=\"" + num(px(p.maj)) + "\" cy=\"" + num(py(p.min)) + "\" r=\"" + num(style.radius) + "\"/>\n";
  }
  s += "</g>\n";

  for (const auto& o : overlays) {
    if (o.markers) {
      s += "<g fill=\"" + escape(o.color) + "\" fill-opacity=\"0.6\" data-name=\"" + escape(o.name) + "\">\n";
      for (const auto& p : o.points) {
        s += "<circle cx=\"" + num(px(p.maj)) + "\" cy=\"" + num(py(p.min)) + "\" r=\"" + num(style.radius) +
             "\"/>\n";
      }
      s += "</g>\n";
      continue;
    }
    s += "<polyline fill=\"none\" stroke=\"" + escape(o.color) + "\" stroke-width=\"2\" data-name=\"" +
         escape(o.name) + "\" points=\"";
    for (std::size_t i = 0; i < o.points.size(); ++i) {
      if (i) s.push_back(' ');
      s += num(px(o.points[i].maj)) + "," + num(py(o.points[i].min));
    }
    s += "\"/>\n";
  }
  s += "</svg>\n";
  return s;
}

void emit_plot(const std::vector<CurvePoint>& points, const std::vector<Overlay>& overlays, const PlotStyle& style,
               const std::filesystem::path& path) {
  if (points.empty()) fail(ErrorCode::invalid_argument, "plot needs at least one point");
  write_file_atomic(path, render_svg(points, overlays, style));
}

}  // namespace moonlab
