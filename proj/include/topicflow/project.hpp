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

// 2D projection of document vectors in the style of UMAP: exact k-NN graph,
// fuzzy simplicial set with per-point bandwidths, and a stochastic
// attractive/repulsive force layout.
//
// k-NN is brute force, O(n^2 * dim).

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "topicflow/common.hpp"

namespace topicflow {

struct ProjectionConfig {
  std::size_t n_neighbors = 15;
  double min_dist = 0.1;
  double spread = 1.0;
  int epochs = 200;
  std::size_t neg_rate = 5;
  std::uint64_t seed = 42;
  unsigned threads = 1;

  void validate() const {
    require(n_neighbors >= 2, "projection: n_neighbors must be >= 2");
    require(min_dist > 0, "projection: min_dist must be > 0");
    require(epochs >= 1, "projection: epochs must be >= 1");
  }
};

struct Neighbor {
  std::size_t index = 0;
  double distance = 0.0;
};

using KnnGraph = std::vector<std::vector<Neighbor>>;

// Exact Euclidean k nearest neighbours of every point, self excluded,
// ordered by distance then index.
inline KnnGraph knn_graph(const Matrix<double>& points, std::size_t k, unsigned threads = 1) {
  const std::size_t n = points.rows();
  if (n <= k) {
    throw InvalidArgument("knn_graph: need more than " + std::to_string(k) + " points, got " +
                          std::to_string(n));
  }
  KnnGraph graph(n);
  parallel_for(n, threads, [&](std::size_t b, std::size_t e, unsigned) {
    std::vector<Neighbor> cand(n - 1);
    for (std::size_t i = b; i < e; ++i) {
      std::size_t c = 0;
      for (std::size_t j = 0; j < n; ++j) {
        if (j == i) continue;
        cand[c++] = {j, std::sqrt(squared_distance(points.row(i), points.row(j)))};
      }
      auto less = [](const Neighbor& a, const Neighbor& b) {
        return a.distance != b.distance ? a.distance < b.distance : a.index < b.index;
      };
      std::partial_sort(cand.begin(), cand.begin() + static_cast<std::ptrdiff_t>(k), cand.end(), less);
      graph[i].assign(cand.begin(), cand.begin() + static_cast<std::ptrdiff_t>(k));
    }
  });
  return graph;
}

struct Edge {
  std::size_t a = 0;
  std::size_t b = 0;  // a < b
  double weight = 0.0;
};

struct FuzzyGraph {
  std::size_t size = 0;
  std::vector<Edge> edges;      // symmetric weights, one entry per unordered pair
  std::vector<double> rho;      // distance to the nearest neighbour
  std::vector<double> sigma;    // bandwidth
  std::vector<double> residual; // |sum_j w_ij - log2(k)| per point
};

// Bandwidth search: sum_j exp(-max(0, d_ij - rho_i) / sigma_i) = log2(k) by
// bisection on sigma (64 steps). Directed memberships are symmetrized with
// the probabilistic union a + b - ab.
inline FuzzyGraph fuzzy_graph(const KnnGraph& knn) {
  FuzzyGraph g;
  const std::size_t n = knn.size();
  g.size = n;
  g.rho.resize(n);
  g.sigma.resize(n);
  g.residual.resize(n);
  std::vector<std::vector<std::pair<std::size_t, double>>> directed(n);

  for (std::size_t i = 0; i < n; ++i) {
    const auto& nb = knn[i];
    const double target = std::log2(static_cast<double>(nb.size()));
    double rho = std::numeric_limits<double>::infinity();
    for (const auto& x : nb) rho = std::min(rho, x.distance);
    if (nb.empty()) rho = 0.0;
    auto membership = [&](double sigma) {
      double s = 0.0;
      for (const auto& x : nb) s += std::exp(-std::max(0.0, x.distance - rho) / sigma);
      return s;
    };
    double lo = 0.0;
    double hi = 1.0;
    for (int i2 = 0; i2 < 1100 && membership(hi) < target; ++i2) hi *= 2.0;
    for (int step = 0; step < 64; ++step) {
      const double mid = 0.5 * (lo + hi);
      if (mid <= 0.0) break;
      if (membership(mid) < target) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    const double sigma = hi;
    g.rho[i] = rho;
    g.sigma[i] = sigma;
    double total = 0.0;
    for (const auto& x : nb) {
      const double w = std::exp(-std::max(0.0, x.distance - rho) / sigma);
      directed[i].emplace_back(x.index, w);
      total += w;
    }
    g.residual[i] = std::abs(total - target);
  }

  // symmetrize over the union of directed edges
  std::vector<std::vector<std::pair<std::size_t, double>>> out_edges(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (const auto& [j, w] : directed[i]) out_edges[std::min(i, j)].emplace_back(std::max(i, j), 0.0);
  }
  auto directed_weight = [&](std::size_t from, std::size_t to) {
    for (const auto& [j, w] : directed[from]) {
      if (j == to) return w;
    }
    return 0.0;
  };
  for (std::size_t a = 0; a < n; ++a) {
    auto& list = out_edges[a];
    std::sort(list.begin(), list.end());
    list.erase(std::unique(list.begin(), list.end(),
                           [](const auto& x, const auto& y) { return x.first == y.first; }),
               list.end());
    for (const auto& [b, unused] : list) {
      const double wa = directed_weight(a, b);
      const double wb = directed_weight(b, a);
      g.edges.push_back({a, b, wa + wb - wa * wb});
    }
  }
  return g;
}

inline double symmetrize(double a, double b) { return a + b - a * b; }

// (a, b) such that 1 / (1 + a d^(2b)) best fits, in least squares over
// d in [0, 3 * spread], the curve that is 1 below min_dist and decays as
// exp(-(d - min_dist) / spread) above it. Levenberg-Marquardt.
inline std::pair<double, double> fit_ab(double min_dist, double spread = 1.0) {
  constexpr int kSamples = 300;
  std::vector<double> xs(kSamples), ys(kSamples);
  for (int i = 0; i < kSamples; ++i) {
    xs[i] = 3.0 * spread * i / (kSamples - 1);
    ys[i] = xs[i] < min_dist ? 1.0 : std::exp(-(xs[i] - min_dist) / spread);
  }
  auto residuals = [&](double a, double b, std::vector<double>& r, std::vector<double>* ja,
                       std::vector<double>* jb) {
    double sse = 0.0;
    for (int i = 0; i < kSamples; ++i) {
      const double x = xs[i];
      const double p = x > 0.0 ? std::pow(x, 2.0 * b) : 0.0;
      const double f = 1.0 / (1.0 + a * p);
      r[i] = f - ys[i];
      sse += r[i] * r[i];
      if (ja != nullptr) {
        (*ja)[i] = -f * f * p;
        (*jb)[i] = x > 0.0 ? -f * f * a * p * 2.0 * std::log(x) : 0.0;
      }
    }
    return sse;
  };
  double a = 1.0, b = 1.0, damping = 1e-3;
  std::vector<double> r(kSamples), ja(kSamples), jb(kSamples), r_try(kSamples);
  double sse = residuals(a, b, r, &ja, &jb);
  for (int iter = 0; iter < 500; ++iter) {
    double haa = 0, hab = 0, hbb = 0, ga = 0, gb = 0;
    for (int i = 0; i < kSamples; ++i) {
      haa += ja[i] * ja[i];
      hab += ja[i] * jb[i];
      hbb += jb[i] * jb[i];
      ga += ja[i] * r[i];
      gb += jb[i] * r[i];
    }
    bool improved = false;
    for (int attempt = 0; attempt < 30 && !improved; ++attempt) {
      const double m00 = haa * (1 + damping), m11 = hbb * (1 + damping);
      const double det = m00 * m11 - hab * hab;
      const double da = -(m11 * ga - hab * gb) / det;
      const double db = -(m00 * gb - hab * ga) / det;
      const double na = a + da, nb = b + db;
      if (na > 0 && nb > 0) {
        const double trial = residuals(na, nb, r_try, nullptr, nullptr);
        if (trial < sse) {
          const bool done = std::abs(sse - trial) < 1e-15 * std::max(1.0, sse);
          a = na;
          b = nb;
          sse = residuals(a, b, r, &ja, &jb);
          damping = std::max(damping / 10, 1e-12);
          improved = true;
          if (done) return {a, b};
          continue;
        }
      }
      damping *= 10;
    }
    if (!improved) break;
  }
  return {a, b};
}

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

using Embedding2D = std::vector<Point2>;

// Edges are sampled in proportion to their weight (an edge of weight w is
// visited every max_w / w epochs). Each visit pulls both endpoints together
// and pushes the head away from neg_rate uniformly drawn points.
inline Embedding2D layout(const FuzzyGraph& graph, const ProjectionConfig& cfg) {
  cfg.validate();
  const std::size_t n = graph.size;
  Rng rng(cfg.seed);
  Embedding2D y(n);
  for (auto& p : y) {
    p.x = rng.uniform(-10.0, 10.0);
    p.y = rng.uniform(-10.0, 10.0);
  }
  if (n < 2 || graph.edges.empty()) return y;
  const auto [a, b] = fit_ab(cfg.min_dist, cfg.spread);

  double max_w = 0.0;
  for (const auto& e : graph.edges) max_w = std::max(max_w, e.weight);
  std::vector<double> per_sample(graph.edges.size(), -1.0), next_due(graph.edges.size(), 0.0);
  for (std::size_t i = 0; i < graph.edges.size(); ++i) {
    const double w = graph.edges[i].weight;
    // edges too weak to be sampled in the run are skipped
    if (w > 0.0 && w >= max_w / cfg.epochs) {
      per_sample[i] = max_w / w;
      next_due[i] = per_sample[i];
    }
  }

  auto clip = [](double v) { return std::clamp(v, -4.0, 4.0); };
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    const double lr = 1.0 - static_cast<double>(epoch) / cfg.epochs;
    for (std::size_t i = 0; i < graph.edges.size(); ++i) {
      if (per_sample[i] < 0.0 || next_due[i] > epoch + 1) continue;
      next_due[i] += per_sample[i];
      const std::size_t head = graph.edges[i].a;
      const std::size_t tail = graph.edges[i].b;
      {
        const double dx = y[head].x - y[tail].x;
        const double dy = y[head].y - y[tail].y;
        const double d2 = dx * dx + dy * dy;
        double coeff = 0.0;
        if (d2 > 0.0) {
          coeff = -2.0 * a * b * std::pow(d2, b - 1.0) / (1.0 + a * std::pow(d2, b));
        }
        const double gx = clip(coeff * dx), gy = clip(coeff * dy);
        y[head].x += gx * lr;
        y[head].y += gy * lr;
        y[tail].x -= gx * lr;
        y[tail].y -= gy * lr;
      }
      for (std::size_t s = 0; s < cfg.neg_rate; ++s) {
        const std::size_t other = rng.below(n);
        if (other == head) continue;
        const double dx = y[head].x - y[other].x;
        const double dy = y[head].y - y[other].y;
        const double d2 = dx * dx + dy * dy;
        double gx = 4.0, gy = 4.0;
        if (d2 > 0.0) {
          const double coeff = 2.0 * b / ((0.001 + d2) * (1.0 + a * std::pow(d2, b)));
          gx = clip(coeff * dx);
          gy = clip(coeff * dy);
        }
        y[head].x += gx * lr;
        y[head].y += gy * lr;
      }
      if (!std::isfinite(y[head].x) || !std::isfinite(y[head].y) || !std::isfinite(y[tail].x) ||
          !std::isfinite(y[tail].y)) {
        throw NumericalError("layout: non-finite coordinate in epoch " + std::to_string(epoch));
      }
    }
  }
  return y;
}

inline Embedding2D project(const Matrix<double>& points, const ProjectionConfig& cfg) {
  cfg.validate();
  if (points.rows() == 1) {
    Rng rng(cfg.seed);
    const double x = rng.uniform(-10.0, 10.0);
    return {{x, rng.uniform(-10.0, 10.0)}};
  }
  const std::size_t k = std::min(cfg.n_neighbors, points.rows() - 1);
  return layout(fuzzy_graph(knn_graph(points, k, cfg.threads)), cfg);
}

// Trustworthiness of a low-dimensional embedding: 1 minus the normalized
// rank penalty of points that are k-NN in the embedding but not in the
// original space. Normalization assumes k < n/2; the score is clamped to [0, 1].
inline double trustworthiness(const Matrix<double>& high, const Matrix<double>& low, std::size_t k) {
  const std::size_t n = high.rows();
  require(low.rows() == n, "trustworthiness: point counts differ");
  if (k < 1 || k >= n) throw InvalidArgument("trustworthiness: k must be in [1, n)");
  // rank[i][j]: position of j among i's neighbours in the original space (1-based)
  std::vector<std::size_t> order(n), rank(n);
  std::vector<double> dh(n), dl(n);
  double penalty = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      dh[j] = squared_distance(high.row(i), high.row(j));
      dl[j] = squared_distance(low.row(i), low.row(j));
    }
    auto by = [&](const std::vector<double>& d) {
      std::iota(order.begin(), order.end(), std::size_t{0});
      std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (a == i || b == i) return a == i && b != i;
        return d[a] != d[b] ? d[a] < d[b] : a < b;
      });
    };
    by(dh);
    for (std::size_t r = 1; r < n; ++r) rank[order[r]] = r;
    by(dl);
    for (std::size_t r = 1; r <= k; ++r) {
      const std::size_t j = order[r];
      if (rank[j] > k) penalty += static_cast<double>(rank[j] - k);
    }
  }
  if (penalty == 0.0) return 1.0;
  const double nn = static_cast<double>(n), kk = static_cast<double>(k);
  const double norm = nn * kk * (2.0 * nn - 3.0 * kk - 1.0);
  if (norm <= 0.0) return 0.0;
  return std::clamp(1.0 - 2.0 / norm * penalty, 0.0, 1.0);
}

inline Matrix<double> to_matrix(const Embedding2D& e) {
  Matrix<double> m(e.size(), 2);
  for (std::size_t i = 0; i < e.size(); ++i) {
    m(i, 0) = e[i].x;
    m(i, 1) = e[i].y;
  }
  return m;
}

}  // namespace topicflow
