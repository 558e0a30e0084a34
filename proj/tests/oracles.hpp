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


// Brute-force reference implementations shared by unit and acceptance tests.
// Each is written from the definition, without reusing library internals.

#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>
#include <string>
#include <vector>

#include "topicflow/common.hpp"

namespace topicflow::oracle {

using Doc = std::vector<std::string>;

// Every sliding window of every document as a set of words; documents shorter
// than the window form one window.
inline std::vector<std::set<std::string>> windows(const std::vector<Doc>& docs, std::size_t width) {
  std::vector<std::set<std::string>> out;
  for (const auto& d : docs) {
    if (d.empty()) continue;
    if (d.size() <= width) {
      out.emplace_back(d.begin(), d.end());
      continue;
    }
    for (std::size_t s = 0; s + width <= d.size(); ++s) out.emplace_back(d.begin() + s, d.begin() + s + width);
  }
  return out;
}

inline std::size_t count_windows(const std::vector<std::set<std::string>>& ws, const std::string& a,
                                 const std::string& b) {
  return static_cast<std::size_t>(
      std::count_if(ws.begin(), ws.end(), [&](const auto& w) { return w.count(a) && w.count(b); }));
}

inline double npmi(double pab, double pa, double pb, double eps) {
  if (pab >= 1.0) return 1.0;
  return std::log((pab + eps) / (pa * pb)) / -std::log(pab + eps);
}

// C_V with one-set segmentation, NPMI context vectors (gamma = 1) and cosine
// confirmation, averaged over the topic's words.
inline double topic_cv(const std::vector<Doc>& docs, const std::vector<std::string>& topic, std::size_t width,
                       double eps = 1e-12) {
  const auto ws = windows(docs, width);
  const double n = static_cast<double>(ws.size());
  const std::size_t m = topic.size();
  std::vector<std::vector<double>> v(m, std::vector<double>(m));
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      const double pi = static_cast<double>(count_windows(ws, topic[i], topic[i])) / n;
      const double pj = static_cast<double>(count_windows(ws, topic[j], topic[j])) / n;
      const double pij = static_cast<double>(count_windows(ws, topic[i], topic[j])) / n;
      v[i][j] = std::clamp(npmi(pij, pi, pj, eps), -1.0, 1.0);
    }
  }
  std::vector<double> total(m, 0.0);
  for (const auto& row : v) {
    for (std::size_t j = 0; j < m; ++j) total[j] += row[j];
  }
  double sum = 0.0;
  for (const auto& row : v) {
    double dot = 0, a = 0, b = 0;
    for (std::size_t j = 0; j < m; ++j) {
      dot += row[j] * total[j];
      a += row[j] * row[j];
      b += total[j] * total[j];
    }
    sum += dot / std::sqrt(a * b);
  }
  return sum / static_cast<double>(m);
}

// Minimum k-means inertia over every assignment of n points to k labels in
// which all labels are used. Feasible for n <= 10.
inline double best_partition_inertia(const Matrix<double>& x, std::size_t k, std::vector<std::size_t>* best_labels = nullptr) {
  const std::size_t n = x.rows(), dim = x.cols();
  std::vector<std::size_t> labels(n, 0);
  double best = std::numeric_limits<double>::infinity();
  while (true) {
    std::vector<std::vector<double>> sum(k, std::vector<double>(dim, 0.0));
    std::vector<double> cnt(k, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      cnt[labels[i]] += 1;
      for (std::size_t j = 0; j < dim; ++j) sum[labels[i]][j] += x(i, j);
    }
    if (std::all_of(cnt.begin(), cnt.end(), [](double c) { return c > 0; })) {
      double inertia = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < dim; ++j) {
          const double d = x(i, j) - sum[labels[i]][j] / cnt[labels[i]];
          inertia += d * d;
        }
      }
      if (inertia < best) {
        best = inertia;
        if (best_labels) *best_labels = labels;
      }
    }
    std::size_t pos = 0;
    while (pos < n && ++labels[pos] == k) labels[pos++] = 0;
    if (pos == n) break;
  }
  return best;
}

// Indices of the k nearest neighbours of point i by exhaustive comparison.
inline std::vector<std::size_t> knn(const Matrix<double>& x, std::size_t i, std::size_t k) {
  std::vector<std::pair<double, std::size_t>> all;
  for (std::size_t j = 0; j < x.rows(); ++j) {
    if (j != i) all.emplace_back(squared_distance(x.row(i), x.row(j)), j);
  }
  std::sort(all.begin(), all.end());
  std::vector<std::size_t> out;
  for (std::size_t r = 0; r < k; ++r) out.push_back(all[r].second);
  return out;
}

// Trustworthiness by explicit rank tables.
inline double trustworthiness(const Matrix<double>& high, const Matrix<double>& low, std::size_t k) {
  const std::size_t n = high.rows();
  double penalty = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto full = knn(high, i, n - 1);
    std::map<std::size_t, std::size_t> rank;
    for (std::size_t r = 0; r < full.size(); ++r) rank[full[r]] = r + 1;
    const auto high_k = knn(high, i, k);
    for (std::size_t j : knn(low, i, k)) {
      if (std::find(high_k.begin(), high_k.end(), j) == high_k.end()) {
        penalty += static_cast<double>(rank[j]) - static_cast<double>(k);
      }
    }
  }
  const double nn = static_cast<double>(n), kk = static_cast<double>(k);
  return 1.0 - 2.0 / (nn * kk * (2 * nn - 3 * kk - 1)) * penalty;
}

}  // namespace topicflow::oracle
