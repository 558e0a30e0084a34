// Copyright 2026 The topicflow Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Static SVG 1.1 charts. Every function is pure: identical input gives
// byte-identical output (fixed number formatting, no timestamps).
//
// Data elements carry a class attribute ("point", "bar", "mean", ...) so
// they can be counted in the output.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "topicflow/coherence.hpp"
#include "topicflow/common.hpp"
#include "topicflow/eval.hpp"
#include "topicflow/project.hpp"

namespace topicflow::viz {

inline const std::vector<std::string>& default_palette() {
  static const std::vector<std::string> kPalette = {
      "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b",
      "#e377c2", "#7f7f7f", "#bcbd22", "#17becf", "#393b79", "#ad494a"};
  return kPalette;
}

struct Margins {
  double left = 70;
  double right = 170;
  double top = 50;
  double bottom = 60;
};

struct PlotSpec {
  double width = 800;
  double height = 600;
  Margins margins;
  std::vector<std::string> palette = default_palette();
  std::string title;
  std::string x_label;
  std::string y_label;
  bool legend = true;

  void validate() const {
    require(width > margins.left + margins.right && height > margins.top + margins.bottom,
            "plot: dimensions must exceed margins");
    require(!palette.empty(), "plot: empty palette");
  }
};

namespace detail {

inline std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  std::string s = buf;
  if (s == "-0.00") s = "0.00";
  return s;
}

inline std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
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

inline std::string tick_label(double v) {
  char buf[64];
  if (std::abs(v) >= 1e6 || (std::abs(v) < 1e-3 && v != 0.0)) {
    std::snprintf(buf, sizeof buf, "%.3g", v);
  } else {
    std::snprintf(buf, sizeof buf, "%.4g", v);
  }
  std::string s = buf;
  if (s == "-0") s = "0";
  return s;
}

// Ticks at 1, 2 or 5 times a power of ten covering [lo, hi].
inline std::vector<double> nice_ticks(double lo, double hi, int target = 5) {
  const double span = hi - lo;
  if (!(span > 0)) return {lo};
  const double raw = span / target;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  double step = mag;
  for (double m : {1.0, 2.0, 5.0, 10.0}) {
    if (raw <= m * mag) {
      step = m * mag;
      break;
    }
  }
  std::vector<double> ticks;
  for (double t = std::ceil(lo / step) * step; t <= hi + step * 1e-9; t += step) {
    ticks.push_back(std::abs(t) < step * 1e-9 ? 0.0 : t);
  }
  return ticks;
}

struct Frame {
  double x0, x1, y0, y1;  // data range
  double left, right, top, bottom;  // pixel box

  double px(double x) const { return left + (x - x0) / (x1 - x0) * (right - left); }
  double py(double y) const { return bottom - (y - y0) / (y1 - y0) * (bottom - top); }
};

inline Frame make_frame(const PlotSpec& spec, double x0, double x1, double y0, double y1) {
  return {x0, x1, y0, y1, spec.margins.left, spec.width - spec.margins.right, spec.margins.top,
          spec.height - spec.margins.bottom};
}

inline std::string header(const PlotSpec& spec) {
  std::string s = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  s += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" + num(spec.width) +
       "\" height=\"" + num(spec.height) + "\" viewBox=\"0 0 " + num(spec.width) + " " +
       num(spec.height) + "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  s += "<rect x=\"0\" y=\"0\" width=\"" + num(spec.width) + "\" height=\"" + num(spec.height) +
       "\" fill=\"#ffffff\"/>\n";
  if (!spec.title.empty()) {
    s += "<text class=\"title\" x=\"" + num(spec.width / 2) + "\" y=\"" + num(spec.margins.top / 2 + 6) +
         "\" text-anchor=\"middle\" font-size=\"16\">" + escape(spec.title) + "</text>\n";
  }
  return s;
}

inline std::string axes(const PlotSpec& spec, const Frame& f, const std::vector<double>& xticks,
                        const std::vector<double>& yticks) {
  std::string s = "<g class=\"axes\" stroke=\"#333333\" fill=\"none\">\n";
  s += "<line x1=\"" + num(f.left) + "\" y1=\"" + num(f.bottom) + "\" x2=\"" + num(f.right) +
       "\" y2=\"" + num(f.bottom) + "\"/>\n";
  s += "<line x1=\"" + num(f.left) + "\" y1=\"" + num(f.top) + "\" x2=\"" + num(f.left) +
       "\" y2=\"" + num(f.bottom) + "\"/>\n";
  s += "</g>\n<g class=\"ticks\" fill=\"#333333\">\n";
  for (double t : xticks) {
    if (t < f.x0 || t > f.x1) continue;
    s += "<text x=\"" + num(f.px(t)) + "\" y=\"" + num(f.bottom + 16) + "\" text-anchor=\"middle\">" +
         tick_label(t) + "</text>\n";
  }
  for (double t : yticks) {
    if (t < f.y0 || t > f.y1) continue;
    s += "<text x=\"" + num(f.left - 6) + "\" y=\"" + num(f.py(t) + 4) + "\" text-anchor=\"end\">" +
         tick_label(t) + "</text>\n";
  }
  s += "</g>\n";
  if (!spec.x_label.empty()) {
    s += "<text class=\"xlabel\" x=\"" + num((f.left + f.right) / 2) + "\" y=\"" +
         num(spec.height - 15) + "\" text-anchor=\"middle\">" + escape(spec.x_label) + "</text>\n";
  }
  if (!spec.y_label.empty()) {
    s += "<text class=\"ylabel\" x=\"18\" y=\"" + num((f.top + f.bottom) / 2) +
         "\" text-anchor=\"middle\" transform=\"rotate(-90 18 " + num((f.top + f.bottom) / 2) + ")\">" +
         escape(spec.y_label) + "</text>\n";
  }
  return s;
}

inline std::string legend(const PlotSpec& spec, const std::vector<std::pair<std::string, std::string>>& entries) {
  if (!spec.legend || entries.empty()) return {};
  std::string s = "<g class=\"legend\">\n";
  const double x = spec.width - spec.margins.right + 15;
  double y = spec.margins.top;
  for (const auto& [color, full] : entries) {
    const std::string label = full.size() > 24 ? full.substr(0, 21) + "..." : full;
    s += "<g class=\"legend-entry\"><rect x=\"" + num(x) + "\" y=\"" + num(y) +
         "\" width=\"12\" height=\"12\" fill=\"" + color + "\"/><text x=\"" + num(x + 18) + "\" y=\"" +
         num(y + 10) + "\">" + escape(label) + "</text></g>\n";
    y += 18;
  }
  s += "</g>\n";
  return s;
}

// Range with a minimum span of one unit, padded by 5% on both sides.
inline std::pair<double, double> padded_range(double lo, double hi) {
  if (hi - lo < 1.0) {
    const double mid = 0.5 * (lo + hi);
    lo = mid - 0.5;
    hi = mid + 0.5;
  }
  const double pad = 0.05 * (hi - lo);
  return {lo - pad, hi + pad};
}

}  // namespace detail

struct ScatterInput {
  Embedding2D points;
  std::vector<int> labels;
  std::vector<bool> representative;     // empty: all representative
  std::map<int, std::string> annotations;  // topic -> text, drawn at the cluster medoid
};

// Member minimising the summed distance to the other members; for clusters
// above 2000 points, the member nearest the cluster mean.
inline std::size_t medoid(const Embedding2D& pts, const std::vector<std::size_t>& members) {
  if (members.size() > 2000) {
    double mx = 0, my = 0;
    for (auto i : members) {
      mx += pts[i].x;
      my += pts[i].y;
    }
    mx /= static_cast<double>(members.size());
    my /= static_cast<double>(members.size());
    std::size_t best = members.front();
    double bd = std::numeric_limits<double>::infinity();
    for (auto i : members) {
      const double d = (pts[i].x - mx) * (pts[i].x - mx) + (pts[i].y - my) * (pts[i].y - my);
      if (d < bd) {
        bd = d;
        best = i;
      }
    }
    return best;
  }
  std::size_t best = members.front();
  double bd = std::numeric_limits<double>::infinity();
  for (auto i : members) {
    double s = 0.0;
    for (auto j : members) s += std::hypot(pts[i].x - pts[j].x, pts[i].y - pts[j].y);
    if (s < bd) {
      bd = s;
      best = i;
    }
  }
  return best;
}

inline std::string scatter(const ScatterInput& in, const PlotSpec& spec = {}) {
  spec.validate();
  if (in.points.empty()) throw InvalidArgument("scatter: empty point set");
  require(in.labels.size() == in.points.size(), "scatter: one label per point");
  require(in.representative.empty() || in.representative.size() == in.points.size(),
          "scatter: one representative flag per point");
  for (int l : in.labels) {
    if (l < 0 || static_cast<std::size_t>(l) >= spec.palette.size()) {
      throw InvalidArgument("scatter: label " + std::to_string(l) + " outside the palette");
    }
  }
  double xmin = in.points[0].x, xmax = xmin, ymin = in.points[0].y, ymax = ymin;
  for (const auto& p : in.points) {
    require(std::isfinite(p.x) && std::isfinite(p.y), "scatter: non-finite coordinate");
    xmin = std::min(xmin, p.x);
    xmax = std::max(xmax, p.x);
    ymin = std::min(ymin, p.y);
    ymax = std::max(ymax, p.y);
  }
  const auto [x0, x1] = detail::padded_range(xmin, xmax);
  const auto [y0, y1] = detail::padded_range(ymin, ymax);
  const auto f = detail::make_frame(spec, x0, x1, y0, y1);

  std::string s = detail::header(spec);
  s += detail::axes(spec, f, detail::nice_ticks(x0, x1), detail::nice_ticks(y0, y1));
  // background points first so representatives stay visible on top
  for (int pass = 0; pass < 2; ++pass) {
    s += pass == 0 ? "<g class=\"background\">\n" : "<g class=\"representatives\">\n";
    for (std::size_t i = 0; i < in.points.size(); ++i) {
      const bool rep = in.representative.empty() || in.representative[i];
      if (rep != (pass == 1)) continue;
      s += "<circle class=\"point\" cx=\"" + detail::num(f.px(in.points[i].x)) + "\" cy=\"" +
           detail::num(f.py(in.points[i].y)) + "\" r=\"3\" fill=\"" +
           spec.palette[static_cast<std::size_t>(in.labels[i])] + "\" fill-opacity=\"" +
           (rep ? "1.00" : "0.20") + "\"/>\n";
    }
    s += "</g>\n";
  }

  std::map<int, std::vector<std::size_t>> members;
  for (std::size_t i = 0; i < in.labels.size(); ++i) members[in.labels[i]].push_back(i);
  if (!in.annotations.empty()) {
    s += "<g class=\"annotations\" font-size=\"13\" font-weight=\"bold\">\n";
    for (const auto& [topic, label] : in.annotations) {
      auto it = members.find(topic);
      if (it == members.end()) continue;
      const auto& p = in.points[medoid(in.points, it->second)];
      s += "<text class=\"annotation\" x=\"" + detail::num(f.px(p.x)) + "\" y=\"" +
           detail::num(f.py(p.y) - 6) + "\" text-anchor=\"middle\">" + detail::escape(label) + "</text>\n";
    }
    s += "</g>\n";
  }
  std::vector<std::pair<std::string, std::string>> entries;
  for (const auto& [topic, idx] : members) {
    auto ann = in.annotations.find(topic);
    entries.emplace_back(spec.palette[static_cast<std::size_t>(topic)],
                         ann != in.annotations.end() ? ann->second : "Topic " + std::to_string(topic));
  }
  s += detail::legend(spec, entries);
  s += "</svg>\n";
  return s;
}

// Mean with +/- one standard deviation bars per x, a line through the means
// and a ring on the selected x.
inline std::string error_bar_curve(const std::vector<double>& xs, const std::vector<double>& mean,
                                   const std::vector<double>& stddev, std::optional<double> selected,
                                   const PlotSpec& spec = {}) {
  spec.validate();
  if (xs.size() != mean.size() || xs.size() != stddev.size()) {
    throw InvalidArgument("error_bar_curve: series lengths differ");
  }
  if (xs.empty()) throw InvalidArgument("error_bar_curve: empty series");
  double xmin = *std::min_element(xs.begin(), xs.end()), xmax = *std::max_element(xs.begin(), xs.end());
  double ymin = mean[0] - stddev[0], ymax = mean[0] + stddev[0];
  for (std::size_t i = 0; i < xs.size(); ++i) {
    ymin = std::min(ymin, mean[i] - stddev[i]);
    ymax = std::max(ymax, mean[i] + stddev[i]);
  }
  const auto [x0, x1] = detail::padded_range(xmin, xmax);
  double ypad = std::max(0.05 * (ymax - ymin), 0.01);
  const auto f = detail::make_frame(spec, x0, x1, ymin - ypad, ymax + ypad);
  std::string s = detail::header(spec);
  s += detail::axes(spec, f, detail::nice_ticks(x0, x1), detail::nice_ticks(f.y0, f.y1));
  const std::string color = spec.palette[0];
  if (xs.size() > 1) {
    s += "<polyline class=\"mean-line\" fill=\"none\" stroke=\"" + color + "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < xs.size(); ++i) {
      s += (i ? " " : "") + detail::num(f.px(xs[i])) + "," + detail::num(f.py(mean[i]));
    }
    s += "\"/>\n";
  }
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double cx = f.px(xs[i]);
    const double lo = f.py(mean[i] - stddev[i]), hi = f.py(mean[i] + stddev[i]);
    s += "<g class=\"errorbar\" stroke=\"" + color + "\">";
    s += "<line x1=\"" + detail::num(cx) + "\" y1=\"" + detail::num(lo) + "\" x2=\"" + detail::num(cx) +
         "\" y2=\"" + detail::num(hi) + "\"/>";
    s += "<line x1=\"" + detail::num(cx - 4) + "\" y1=\"" + detail::num(lo) + "\" x2=\"" + detail::num(cx + 4) +
         "\" y2=\"" + detail::num(lo) + "\"/>";
    s += "<line x1=\"" + detail::num(cx - 4) + "\" y1=\"" + detail::num(hi) + "\" x2=\"" + detail::num(cx + 4) +
         "\" y2=\"" + detail::num(hi) + "\"/></g>\n";
    s += "<circle class=\"mean\" cx=\"" + detail::num(cx) + "\" cy=\"" + detail::num(f.py(mean[i])) +
         "\" r=\"3.5\" fill=\"" + color + "\"/>\n";
    if (selected && *selected == xs[i]) {
      s += "<circle class=\"selected\" cx=\"" + detail::num(cx) + "\" cy=\"" + detail::num(f.py(mean[i])) +
           "\" r=\"8\" fill=\"none\" stroke=\"#d62728\" stroke-width=\"2\"/>\n";
    }
  }
  s += "</svg>\n";
  return s;
}

inline std::string sweep_chart(const SweepReport& report, PlotSpec spec = {}) {
  std::vector<double> xs, m, sd;
  for (const auto& e : report.entries) {
    xs.push_back(e.k);
    m.push_back(e.mean);
    sd.push_back(e.std);
  }
  if (spec.x_label.empty()) spec.x_label = "Number of topics";
  if (spec.y_label.empty()) spec.y_label = "C_V coherence";
  spec.legend = false;
  return error_bar_curve(xs, m, sd, static_cast<double>(report.selected_k), spec);
}

// Precision and recall against k.
inline std::string pr_curves(const PrAtKReport& report, PlotSpec spec = {}) {
  spec.validate();
  if (report.rows.empty()) throw InvalidArgument("pr_curves: empty report");
  if (spec.x_label.empty()) spec.x_label = "k";
  const double kmax = static_cast<double>(report.rows.back().k);
  const auto [x0, x1] = detail::padded_range(1.0, kmax);
  const auto f = detail::make_frame(spec, x0, x1, 0.0, 1.05);
  std::string s = detail::header(spec);
  s += detail::axes(spec, f, detail::nice_ticks(x0, x1), detail::nice_ticks(0.0, 1.0));
  const std::array<std::pair<const char*, std::string>, 2> series = {
      std::pair<const char*, std::string>{"precision", spec.palette[0]},
      std::pair<const char*, std::string>{"recall", spec.palette[1 % spec.palette.size()]}};
  for (const auto& [name, color] : series) {
    const bool is_p = std::string(name) == "precision";
    s += "<polyline class=\"" + std::string(name) + "\" fill=\"none\" stroke=\"" + color +
         "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < report.rows.size(); ++i) {
      const auto& r = report.rows[i];
      s += (i ? " " : "") + detail::num(f.px(static_cast<double>(r.k))) + "," +
           detail::num(f.py(is_p ? r.precision : r.recall));
    }
    s += "\"/>\n";
    for (const auto& r : report.rows) {
      s += "<circle class=\"" + std::string(name) + "-point\" cx=\"" + detail::num(f.px(static_cast<double>(r.k))) +
           "\" cy=\"" + detail::num(f.py(is_p ? r.precision : r.recall)) + "\" r=\"3\" fill=\"" + color + "\"/>\n";
    }
  }
  s += detail::legend(spec, {{series[0].second, "Precision@k"}, {series[1].second, "Recall@k"}});
  s += "</svg>\n";
  return s;
}

enum class BarMode { Totals, Means };

// Likes, replies and retweets per topic on a shared y axis.
inline std::string grouped_bars(const EngagementReport& report, BarMode mode, PlotSpec spec = {}) {
  spec.validate();
  if (report.topics.empty()) throw InvalidArgument("grouped_bars: no topics");
  if (spec.x_label.empty()) spec.x_label = "Topic";
  if (spec.y_label.empty()) spec.y_label = mode == BarMode::Totals ? "Total count" : "Mean per post";
  auto values = [&](const TopicEngagement& e) {
    return mode == BarMode::Totals
               ? std::array<double, 3>{static_cast<double>(e.likes), static_cast<double>(e.replies),
                                       static_cast<double>(e.retweets)}
               : std::array<double, 3>{e.mean_likes, e.mean_replies, e.mean_retweets};
  };
  double ymax = 0.0;
  for (const auto& e : report.topics) {
    for (double v : values(e)) ymax = std::max(ymax, v);
  }
  if (ymax <= 0.0) ymax = 1.0;
  const double groups = static_cast<double>(report.topics.size());
  const auto f = detail::make_frame(spec, 0.0, groups, 0.0, ymax * 1.05);
  std::string s = detail::header(spec);
  s += detail::axes(spec, f, {}, detail::nice_ticks(0.0, ymax * 1.05));
  const std::array<const char*, 3> names = {"likes", "replies", "retweets"};
  const double group_w = (f.right - f.left) / groups;
  const double bar_w = group_w * 0.8 / 3.0;
  for (std::size_t g = 0; g < report.topics.size(); ++g) {
    const auto& e = report.topics[g];
    const auto v = values(e);
    const double gx = f.left + group_w * static_cast<double>(g) + group_w * 0.1;
    s += "<g class=\"group\" data-topic=\"" + std::to_string(e.topic) + "\">";
    for (std::size_t m = 0; m < 3; ++m) {
      const double top = f.py(v[m]);
      s += "<rect class=\"bar " + std::string(names[m]) + "\" x=\"" + detail::num(gx + bar_w * static_cast<double>(m)) +
           "\" y=\"" + detail::num(top) + "\" width=\"" + detail::num(bar_w) + "\" height=\"" +
           detail::num(f.bottom - top) + "\" fill=\"" + spec.palette[m % spec.palette.size()] + "\"/>";
    }
    s += "</g>\n<text x=\"" + detail::num(gx + group_w * 0.4) + "\" y=\"" + detail::num(f.bottom + 16) +
         "\" text-anchor=\"middle\">" + std::to_string(e.topic) + "</text>\n";
  }
  s += detail::legend(spec, {{spec.palette[0], "Likes"},
                             {spec.palette[1 % spec.palette.size()], "Replies"},
                             {spec.palette[2 % spec.palette.size()], "Retweets"}});
  s += "</svg>\n";
  return s;
}

inline void write_text(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write: " + path);
  out << content;
  if (!out) throw IoError("write failed: " + path);
}

}  // namespace topicflow::viz
