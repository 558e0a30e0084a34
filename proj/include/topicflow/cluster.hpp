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

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <numeric>
#include <span>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "topicflow/common.hpp"

namespace topicflow {

struct KMeansConfig {
  std::size_t k = 12;
  int max_iter = 300;
  double tol = 1e-6;  // relative inertia change
  int restarts = 10;
  std::uint64_t seed = 42;
  unsigned threads = 1;

  void validate() const {
    require(k >= 1, "kmeans: k must be >= 1");
    require(restarts >= 1, "kmeans: restarts must be >= 1");
    require(max_iter >= 1, "kmeans: max_iter must be >= 1");
    require(tol >= 0, "kmeans: tol must be >= 0");
  }
};

struct KMeansModel {
  KMeansConfig config;
  Matrix<double> centroids;  // k x dim
  double inertia = 0.0;
};

struct KMeansRun {
  std::vector<double> inertia_history;  // after every assignment step
  bool converged = false;               // stopped on a fixed point
  int iterations = 0;
};

struct KMeansFit {
  KMeansModel model;
  std::vector<std::size_t> assignments;
  std::vector<double> distances;  // Euclidean, to the assigned centroid
  std::vector<KMeansRun> runs;
  std::size_t best_run = 0;
};

namespace kmeans_detail {

// Nearest centroid by squared distance; ties go to the lowest index.
inline std::pair<std::size_t, double> nearest(const Matrix<double>& centroids,
                                              std::span<const double> x) {
  std::size_t best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t c = 0; c < centroids.rows(); ++c) {
    const double d = squared_distance(centroids.row(c), x);
    if (d < best_d) {
      best_d = d;
      best = c;
    }
  }
  return {best, best_d};
}

inline Matrix<double> plus_plus_seeds(const Matrix<double>& points, std::size_t k, Rng& rng) {
  const std::size_t n = points.rows();
  Matrix<double> centroids(k, points.cols());
  std::vector<double> d2(n, std::numeric_limits<double>::infinity());
  std::size_t pick = rng.below(n);
  for (std::size_t c = 0; c < k; ++c) {
    std::copy(points.row(pick).begin(), points.row(pick).end(), centroids.row(c).begin());
    if (c + 1 == k) break;
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      d2[i] = std::min(d2[i], squared_distance(points.row(i), centroids.row(c)));
      total += d2[i];
    }
    if (total <= 0.0) {
      pick = rng.below(n);
      continue;
    }
    double u = rng.uniform() * total;
    pick = n - 1;
    for (std::size_t i = 0; i < n; ++i) {
      u -= d2[i];
      if (u < 0.0 && d2[i] > 0.0) {
        pick = i;
        break;
      }
    }
  }
  return centroids;
}

struct LloydResult {
  Matrix<double> centroids;
  std::vector<std::size_t> labels;
  std::vector<double> d2;
  double inertia = 0.0;
  KMeansRun run;
};

inline LloydResult lloyd(const Matrix<double>& points, Matrix<double> centroids,
                         const KMeansConfig& cfg) {
  const std::size_t n = points.rows();
  const std::size_t k = centroids.rows();
  const std::size_t dim = points.cols();
  LloydResult res;
  res.labels.assign(n, 0);
  res.d2.assign(n, 0.0);
  std::vector<std::size_t> previous;

  for (int iter = 0; iter < cfg.max_iter; ++iter) {
    parallel_for(n, cfg.threads, [&](std::size_t b, std::size_t e, unsigned) {
      for (std::size_t i = b; i < e; ++i) {
        std::tie(res.labels[i], res.d2[i]) = nearest(centroids, points.row(i));
      }
    });
    // empty clusters take the point farthest from its centroid
    std::vector<std::size_t> sizes(k, 0);
    for (auto l : res.labels) ++sizes[l];
    for (std::size_t c = 0; c < k; ++c) {
      if (sizes[c] != 0) continue;
      std::size_t far = n;
      for (std::size_t i = 0; i < n; ++i) {
        if (sizes[res.labels[i]] > 1 && (far == n || res.d2[i] > res.d2[far])) far = i;
      }
      if (far == n) break;
      --sizes[res.labels[far]];
      ++sizes[c];
      res.labels[far] = c;
      res.d2[far] = 0.0;
      std::copy(points.row(far).begin(), points.row(far).end(), centroids.row(c).begin());
    }
    const double inertia = std::accumulate(res.d2.begin(), res.d2.end(), 0.0);
    res.run.inertia_history.push_back(inertia);
    res.run.iterations = iter + 1;
    res.inertia = inertia;

    if (res.labels == previous) {
      res.run.converged = true;
      break;
    }
    if (res.run.inertia_history.size() >= 2) {
      const double prev = res.run.inertia_history[res.run.inertia_history.size() - 2];
      if (prev <= 0.0 || (prev - inertia) / prev < cfg.tol) break;
    }
    previous = res.labels;

    Matrix<double> sums(k, dim, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      auto s = sums.row(res.labels[i]);
      const auto x = points.row(i);
      for (std::size_t j = 0; j < dim; ++j) s[j] += x[j];
    }
    for (std::size_t c = 0; c < k; ++c) {
      if (sizes[c] == 0) continue;
      for (std::size_t j = 0; j < dim; ++j) centroids(c, j) = sums(c, j) / static_cast<double>(sizes[c]);
    }
  }
  res.centroids = std::move(centroids);
  return res;
}

}  // namespace kmeans_detail

// k-means++ seeding followed by Lloyd iterations; the restart with the
// lowest inertia wins (ties: earliest restart). Restart r is seeded with
// seed + r, so results do not depend on the thread count.
inline KMeansFit fit_kmeans(const Matrix<double>& points, const KMeansConfig& cfg) {
  cfg.validate();
  if (points.rows() < cfg.k) {
    throw InvalidArgument("kmeans: " + std::to_string(points.rows()) + " points for k = " +
                          std::to_string(cfg.k));
  }
  if (!all_finite<double>(points.data())) throw InvalidArgument("kmeans: non-finite input");

  const auto restarts = static_cast<std::size_t>(cfg.restarts);
  std::vector<kmeans_detail::LloydResult> results(restarts);
  KMeansConfig inner = cfg;
  if (cfg.threads > 1 && restarts > 1) inner.threads = 1;
  const unsigned outer = cfg.threads > 1 && restarts > 1 ? cfg.threads : 1;
  parallel_for(restarts, outer, [&](std::size_t b, std::size_t e, unsigned) {
    for (std::size_t r = b; r < e; ++r) {
      Rng rng(cfg.seed + r);
      results[r] = kmeans_detail::lloyd(points, kmeans_detail::plus_plus_seeds(points, cfg.k, rng), inner);
    }
  });

  KMeansFit fit;
  for (std::size_t r = 0; r < restarts; ++r) {
    fit.runs.push_back(results[r].run);
    if (results[r].inertia < results[fit.best_run].inertia) fit.best_run = r;
  }
  auto& best = results[fit.best_run];
  fit.model.config = cfg;
  fit.model.centroids = std::move(best.centroids);
  fit.model.inertia = best.inertia;
  fit.assignments = std::move(best.labels);
  fit.distances.reserve(best.d2.size());
  for (double d : best.d2) fit.distances.push_back(std::sqrt(d));
  return fit;
}

inline std::size_t assign(const KMeansModel& model, std::span<const double> x) {
  if (x.size() != model.centroids.cols()) {
    throw InvalidArgument("assign: vector has dimension " + std::to_string(x.size()) + ", model " +
                          std::to_string(model.centroids.cols()));
  }
  return kmeans_detail::nearest(model.centroids, x).first;
}

// Empirical quantile with linear interpolation between order statistics.
inline double interpolated_quantile(std::vector<double> values, double q) {
  require(!values.empty(), "quantile of an empty set");
  std::sort(values.begin(), values.end());
  const double pos = q * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, values.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return frac == 0.0 ? values[lo] : values[lo] + frac * (values[hi] - values[lo]);
}

// Per cluster, members whose distance to the centroid is at most the
// `percentile` quantile of the cluster's member distances.
inline std::map<std::size_t, std::vector<std::size_t>> kmeans_representatives(
    const KMeansModel& model, const Matrix<double>& points,
    const std::vector<std::size_t>& assignments, double percentile) {
  require(percentile > 0.0 && percentile <= 1.0, "representatives: percentile must be in (0, 1]");
  require(assignments.size() == points.rows(), "representatives: one assignment per point");
  const std::size_t k = model.centroids.rows();
  std::vector<std::vector<std::size_t>> members(k);
  std::vector<double> dist(points.rows());
  for (std::size_t i = 0; i < points.rows(); ++i) {
    members.at(assignments[i]).push_back(i);
    dist[i] = std::sqrt(squared_distance(points.row(i), model.centroids.row(assignments[i])));
  }
  std::map<std::size_t, std::vector<std::size_t>> out;
  for (std::size_t c = 0; c < k; ++c) {
    auto& reps = out[c];
    if (members[c].empty()) continue;
    std::vector<double> d;
    for (auto i : members[c]) d.push_back(dist[i]);
    const double threshold = interpolated_quantile(d, percentile);
    for (auto i : members[c]) {
      if (dist[i] <= threshold) reps.push_back(i);
    }
  }
  return out;
}

inline constexpr std::string_view kKMeansMagic = "TFKM1";

inline void save_kmeans(const KMeansModel& model, const std::string& path) {
  BinaryWriter w(path);
  w.magic(kKMeansMagic);
  w.put<std::uint64_t>(model.config.k);
  w.put<std::uint32_t>(static_cast<std::uint32_t>(model.config.max_iter));
  w.put<double>(model.config.tol);
  w.put<std::uint32_t>(static_cast<std::uint32_t>(model.config.restarts));
  w.put<std::uint64_t>(model.config.seed);
  w.put<double>(model.inertia);
  w.put<std::uint64_t>(model.centroids.rows());
  w.put<std::uint64_t>(model.centroids.cols());
  w.put_array<double>(model.centroids.data());
  w.close();
}

inline KMeansModel load_kmeans(const std::string& path) {
  BinaryReader r(path);
  r.expect_magic(kKMeansMagic);
  KMeansModel model;
  model.config.k = r.get<std::uint64_t>();
  model.config.max_iter = static_cast<int>(r.get<std::uint32_t>());
  model.config.tol = r.get<double>();
  model.config.restarts = static_cast<int>(r.get<std::uint32_t>());
  model.config.seed = r.get<std::uint64_t>();
  model.inertia = r.get<double>();
  const auto rows = r.get<std::uint64_t>();
  const auto cols = r.get<std::uint64_t>();
  auto data = r.get_array<double>();
  if (rows != model.config.k || data.size() != rows * cols) {
    throw DataError(path + ": centroid dimensions do not match header");
  }
  model.centroids = Matrix<double>(rows, cols);
  model.centroids.data() = std::move(data);
  return model;
}

}  // namespace topicflow
