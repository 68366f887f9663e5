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

#ifndef MOONLAB_SVG_HPP
#define MOONLAB_SVG_HPP

#include <filesystem>
#include <string>
#include <vector>

#include "moonlab/analysis.hpp"

namespace moonlab {

struct Overlay {
  std::string name;
  std::vector<CurvePoint> points;
  std::string color = "#d62728";
  bool markers = false;  // draw as circles instead of a polyline
};

struct PlotStyle {
  std::string title;
  std::string x_label = "majority accuracy";
  std::string y_label = "minority accuracy";
  int width = 640;
  int height = 640;
  double radius = 2.5;
  std::string point_color = "#1f77b4";
};

/// Unit-square scatter: ticks every 0.1 on both axes, one <circle> per
/// point, one <polyline> per line overlay (marker overlays add circles
/// instead). Points outside the square are drawn
/// where they fall.
std::string render_svg(const std::vector<CurvePoint>& points, const std::vector<Overlay>& overlays,
                       const PlotStyle& style);

// render_svg, written atomically. Throws invalid-argument on no points.
void emit_plot(const std::vector<CurvePoint>& points, const std::vector<Overlay>& overlays, const PlotStyle& style,
               const std::filesystem::path& path);

// Samples f on [lo, hi] at n evenly spaced points.
template <typename F>
Overlay sample_curve(std::string name, F&& f, double lo, double hi, int n, std::string color) {
  Overlay o{std::move(name), {}, std::move(color)};
  for (int i = 0; i < n; ++i) {
    const double x = lo + (hi - lo) * i / (n - 1);
    o.points.push_back({x, f(x)});
  }
  return o;
}

}  // namespace moonlab

#endif  // MOONLAB_SVG_HPP
