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


#include <gtest/gtest.h>

#include <cstdlib>
#include <regex>

#include "test_util.hpp"
#include "topicflow/viz.hpp"

namespace topicflow::viz {
namespace {

std::size_t count(const std::string& s, const std::string& needle) {
  std::size_t n = 0;
  for (auto pos = s.find(needle); pos != std::string::npos; pos = s.find(needle, pos + 1)) ++n;
  return n;
}

// Compares against tests/data/<name>; TOPICFLOW_UPDATE_GOLDEN=1 rewrites it.
void expect_golden(const std::string& name, const std::string& svg) {
  const std::string path = std::string(TOPICFLOW_TEST_DATA) + "/" + name;
  if (std::getenv("TOPICFLOW_UPDATE_GOLDEN")) write_text(path, svg);
  EXPECT_EQ(testing::slurp(path), svg) << "golden mismatch: " << path;
}

ScatterInput three_clusters() {
  ScatterInput in;
  for (int i = 0; i < 30; ++i) {
    const int t = i % 3;
    in.points.push_back({t * 5.0 + 0.1 * (i % 7), t * -2.0 + 0.13 * (i % 5)});
    in.labels.push_back(t);
    in.representative.push_back(i % 4 != 0);
  }
  in.annotations = {{0, "paz, acuerdo, farc"}, {2, "votar & <plebiscito>"}};
  return in;
}

SweepReport small_sweep() {
  SweepReport r;
  const double means[] = {0.41, 0.47, 0.52, 0.49};
  for (int i = 0; i < 4; ++i) {
    SweepEntry e;
    e.k = i + 2;
    e.mean = means[i];
    e.std = 0.01 * (i + 1);
    r.entries.push_back(e);
  }
  r.selected_k = 4;
  return r;
}

PrAtKReport small_pr() {
  PrAtKReport r;
  r.test_size = 10;
  r.label_count = 3;
  r.rows = {{1, 0.6, 0.6, 6}, {2, 0.4, 0.8, 8}, {3, 1.0 / 3.0, 1.0, 10}};
  return r;
}

EngagementReport engagement(std::size_t topics) {
  EngagementReport r;
  for (std::size_t t = 0; t < topics; ++t) {
    TopicEngagement e;
    e.topic = static_cast<int>(t);
    e.posts = 10;
    e.likes = 100 + 10 * t;
    e.retweets = 30 + t;
    e.replies = 20;
    e.mean_likes = static_cast<double>(e.likes) / 10;
    e.mean_retweets = static_cast<double>(e.retweets) / 10;
    e.mean_replies = 2;
    r.topics.push_back(e);
  }
  return r;
}

TEST(Scatter, OneCirclePerPointAndAnnotations) {
  const auto in = three_clusters();
  const auto svg = scatter(in);
  EXPECT_EQ(count(svg, "<circle class=\"point\""), 30u);
  EXPECT_EQ(count(svg, "fill-opacity=\"0.20\""), 8u);
  EXPECT_EQ(count(svg, "class=\"annotation\""), 2u);
  EXPECT_EQ(count(svg, "class=\"legend-entry\""), 3u);
  EXPECT_NE(svg.find("&lt;plebiscito&gt;"), std::string::npos);
  EXPECT_EQ(svg.find("<plebiscito>"), std::string::npos);
  EXPECT_EQ(svg.substr(svg.size() - 7), "</svg>\n");
}

TEST(Scatter, CoordinatesStayInsidePlotArea) {
  const auto svg = scatter(three_clusters());
  const std::regex circle("<circle class=\"point\" cx=\"([-0-9.]+)\" cy=\"([-0-9.]+)\"");
  PlotSpec spec;
  for (auto it = std::sregex_iterator(svg.begin(), svg.end(), circle); it != std::sregex_iterator(); ++it) {
    const double cx = std::stod((*it)[1]), cy = std::stod((*it)[2]);
    EXPECT_GE(cx, spec.margins.left);
    EXPECT_LE(cx, spec.width - spec.margins.right);
    EXPECT_GE(cy, spec.margins.top);
    EXPECT_LE(cy, spec.height - spec.margins.bottom);
  }
}

TEST(Scatter, IdenticalPointsGetAFiniteViewport) {
  ScatterInput in;
  in.points = {{2, 2}, {2, 2}, {2, 2}};
  in.labels = {0, 0, 1};
  const auto svg = scatter(in);
  EXPECT_EQ(svg.find("nan"), std::string::npos);
  EXPECT_EQ(svg.find("inf"), std::string::npos);
  EXPECT_EQ(count(svg, "cx=\"350.00\" cy=\"295.00\""), 3u);  // centre of the plot box
}

TEST(Scatter, RejectsBadInput) {
  ScatterInput in;
  EXPECT_THROW(scatter(in), InvalidArgument);
  in.points = {{0, 0}};
  in.labels = {0, 1};
  EXPECT_THROW(scatter(in), InvalidArgument);
  in.labels = {12};
  EXPECT_THROW(scatter(in), InvalidArgument);
  in.labels = {0};
  in.points[0].x = std::nan("");
  EXPECT_THROW(scatter(in), InvalidArgument);
}

TEST(ErrorBars, ElementsPerPointAndSelection) {
  const auto svg = sweep_chart(small_sweep());
  EXPECT_EQ(count(svg, "class=\"errorbar\""), 4u);
  EXPECT_EQ(count(svg, "class=\"mean\""), 4u);
  EXPECT_EQ(count(svg, "class=\"selected\""), 1u);
  EXPECT_EQ(count(svg, "class=\"mean-line\""), 1u);
  EXPECT_EQ(count(svg, "class=\"legend\""), 0u);
}

TEST(ErrorBars, SinglePointDrawsNoLine) {
  const auto svg = error_bar_curve({5}, {0.5}, {0.0}, 5.0);
  EXPECT_EQ(count(svg, "class=\"mean-line\""), 0u);
  EXPECT_EQ(count(svg, "class=\"errorbar\""), 1u);
  EXPECT_EQ(svg.find("nan"), std::string::npos);
  EXPECT_THROW(error_bar_curve({1, 2}, {0.5}, {0.1, 0.1}, std::nullopt), InvalidArgument);
  EXPECT_THROW(error_bar_curve({}, {}, {}, std::nullopt), InvalidArgument);
}

TEST(PrCurves, TwoSeriesOnePointPerK) {
  const auto svg = pr_curves(small_pr());
  EXPECT_EQ(count(svg, "<polyline class=\"precision\""), 1u);
  EXPECT_EQ(count(svg, "<polyline class=\"recall\""), 1u);
  EXPECT_EQ(count(svg, "class=\"precision-point\""), 3u);
  EXPECT_EQ(count(svg, "class=\"recall-point\""), 3u);
  EXPECT_THROW(pr_curves(PrAtKReport{}), InvalidArgument);
}

TEST(GroupedBars, ThreeBarsPerTopic) {
  const auto svg = grouped_bars(engagement(12), BarMode::Totals);
  EXPECT_EQ(count(svg, "<rect class=\"bar "), 36u);
  EXPECT_EQ(count(svg, "class=\"group\""), 12u);
  const auto means = grouped_bars(engagement(12), BarMode::Means);
  EXPECT_NE(means.find("Mean per post"), std::string::npos);
  EXPECT_THROW(grouped_bars(EngagementReport{}, BarMode::Totals), InvalidArgument);
}

TEST(GroupedBars, AllZeroValuesStayFinite) {
  EngagementReport r;
  r.topics.resize(2);
  r.topics[1].topic = 1;
  const auto svg = grouped_bars(r, BarMode::Means);
  EXPECT_EQ(svg.find("nan"), std::string::npos);
}

TEST(Plots, Deterministic) {
  EXPECT_EQ(scatter(three_clusters()), scatter(three_clusters()));
  EXPECT_EQ(sweep_chart(small_sweep()), sweep_chart(small_sweep()));
}

TEST(Plots, GoldenFiles) {
  PlotSpec spec;
  spec.title = "Topics";
  expect_golden("scatter.svg", scatter(three_clusters(), spec));
  expect_golden("sweep.svg", sweep_chart(small_sweep()));
  expect_golden("pr.svg", pr_curves(small_pr()));
  expect_golden("bars.svg", grouped_bars(engagement(3), BarMode::Totals));
}

TEST(Plots, PlotSpecValidation) {
  PlotSpec spec;
  spec.width = 100;
  EXPECT_THROW(sweep_chart(small_sweep(), spec), InvalidArgument);
  spec = PlotSpec{};
  spec.palette.clear();
  EXPECT_THROW(pr_curves(small_pr(), spec), InvalidArgument);
}

}  // namespace
}  // namespace topicflow::viz
