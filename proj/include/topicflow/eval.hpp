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

// Reply labelling by parent topic, stratified splits, precision/recall at k,
// per-topic engagement aggregates and clustering agreement (NMI).

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <numeric>
#include <string>
#include <unordered_map>
#include <vector>

#include "topicflow/common.hpp"
#include "topicflow/corpus.hpp"
#include "topicflow/embed.hpp"

namespace topicflow {

enum class SourceModel { Lda, EmbedKMeans };

inline const char* to_string(SourceModel s) { return s == SourceModel::Lda ? "lda" : "embed"; }

struct LabeledComment {
  int label = 0;
  std::vector<std::string> tokens;
  std::string parent_id;
  std::string reply_id;
  SourceModel source = SourceModel::EmbedKMeans;
};

struct LabeledBuild {
  std::vector<LabeledComment> items;
  std::size_t orphans = 0;
  std::size_t empty = 0;
  std::size_t unlabeled_parent = 0;  // parent news post absent from the topic map
};

// Preprocessed: the news pipeline. Raw: lowercased whitespace tokens.
enum class ReplyTokens { Preprocessed, Raw };

// Every non-orphan reply to news post i becomes (topic of i, tokens of reply).
inline LabeledBuild build_labeled(const std::map<std::string, int>& topic_of_news,
                                  const std::vector<PostRecord>& records,
                                  const PreprocessConfig& cfg, SourceModel source,
                                  ReplyTokens mode = ReplyTokens::Preprocessed) {
  LabeledBuild out;
  for (const auto& r : records) {
    if (r.kind != PostKind::Reply) continue;
    if (r.orphan || !r.parent_id) {
      ++out.orphans;
      continue;
    }
    auto it = topic_of_news.find(*r.parent_id);
    if (it == topic_of_news.end()) {
      ++out.unlabeled_parent;
      continue;
    }
    std::vector<std::string> tokens;
    if (mode == ReplyTokens::Preprocessed) {
      tokens = preprocess(r.text, cfg);
    } else {
      for (auto t : text::split_whitespace(r.text)) {
        auto cps = text::decode_utf8(t);
        for (auto& c : cps) c = text::to_lower(c);
        tokens.push_back(text::encode_utf8(cps));
      }
    }
    if (tokens.empty()) {
      ++out.empty;
      continue;
    }
    out.items.push_back({it->second, std::move(tokens), *r.parent_id, r.id, source});
  }
  if (out.items.empty()) throw DataError("build_labeled: no labelled replies");
  return out;
}

struct Split {
  std::vector<LabeledComment> train;
  std::vector<LabeledComment> test;
  std::vector<std::string> warnings;
};

// Stratified by label: each label contributes round(fraction * n) items to
// the test side, clamped so both sides keep one item when n >= 2.
inline Split split(const std::vector<LabeledComment>& items, double test_fraction, std::uint64_t seed) {
  require(test_fraction > 0.0 && test_fraction < 1.0, "split: test_fraction must be in (0, 1)");
  std::map<int, std::vector<std::size_t>> by_label;
  for (std::size_t i = 0; i < items.size(); ++i) by_label[items[i].label].push_back(i);
  Rng rng(seed);
  Split out;
  for (auto& [label, idx] : by_label) {
    rng.shuffle(idx);
    const std::size_t n = idx.size();
    std::size_t n_test = 0;
    if (n == 1) {
      out.warnings.push_back("label " + std::to_string(label) + " has a single item; kept in train");
    } else {
      n_test = static_cast<std::size_t>(std::llround(test_fraction * static_cast<double>(n)));
      n_test = std::clamp<std::size_t>(n_test, 1, n - 1);
    }
    for (std::size_t j = 0; j < n; ++j) {
      (j < n_test ? out.test : out.train).push_back(items[idx[j]]);
    }
  }
  return out;
}

struct PrAtKRow {
  std::size_t k = 0;
  double precision = 0.0;
  double recall = 0.0;
  std::size_t hits = 0;
};

struct PrAtKReport {
  std::vector<PrAtKRow> rows;  // k = 1..k_max
  std::size_t test_size = 0;
  std::size_t label_count = 0;
};

// One true label per item: hits@k counts items whose label is in the top k;
// recall@k = hits/|test|, precision@k = hits/(k |test|).
template <typename Real>
PrAtKReport pr_at_k(const BasicClassifierModel<Real>& model, const std::vector<LabeledComment>& test,
                    std::size_t k_max, unsigned threads = 1) {
  if (test.empty()) throw DataError("pr_at_k: empty test set");
  const std::size_t n_labels = model.num_labels();
  require(k_max >= 1 && k_max <= n_labels, "pr_at_k: k_max must be in [1, L]");
  // rank of the true label per item (n_labels when the model never saw it)
  std::vector<std::size_t> rank(test.size(), n_labels);
  parallel_for(test.size(), threads, [&](std::size_t b, std::size_t e, unsigned) {
    for (std::size_t i = b; i < e; ++i) {
      const auto top = predict_topk(model, test[i].tokens, n_labels);
      for (std::size_t r = 0; r < top.ranked.size(); ++r) {
        if (top.ranked[r].label == test[i].label) {
          rank[i] = r;
          break;
        }
      }
    }
  });
  PrAtKReport report;
  report.test_size = test.size();
  report.label_count = n_labels;
  const double n = static_cast<double>(test.size());
  for (std::size_t k = 1; k <= k_max; ++k) {
    PrAtKRow row;
    row.k = k;
    row.hits = static_cast<std::size_t>(std::count_if(rank.begin(), rank.end(), [&](std::size_t r) { return r < k; }));
    row.recall = static_cast<double>(row.hits) / n;
    row.precision = static_cast<double>(row.hits) / (static_cast<double>(k) * n);
    report.rows.push_back(row);
  }
  return report;
}

struct TopicEngagement {
  int topic = 0;
  std::size_t posts = 0;
  std::uint64_t likes = 0;
  std::uint64_t retweets = 0;
  std::uint64_t replies = 0;
  double mean_likes = 0.0;
  double mean_retweets = 0.0;
  double mean_replies = 0.0;
  bool empty = false;
};

struct EngagementReport {
  std::vector<TopicEngagement> topics;  // ascending topic index
};

// Totals and per-post means of likes, retweets and replies over the news
// posts of each topic. Topics 0..num_topics-1 are always reported.
inline EngagementReport engagement_by_topic(const std::vector<PostRecord>& records,
                                            const std::map<std::string, int>& topic_of_news,
                                            int num_topics = 0) {
  std::map<int, TopicEngagement> acc;
  for (int t = 0; t < num_topics; ++t) acc[t].topic = t;
  for (const auto& [id, t] : topic_of_news) acc[t].topic = t;
  for (const auto& r : records) {
    if (r.kind != PostKind::News) continue;
    auto it = topic_of_news.find(r.id);
    if (it == topic_of_news.end()) continue;
    auto& e = acc[it->second];
    ++e.posts;
    e.likes += r.likes;
    e.retweets += r.retweets;
    e.replies += r.reply_count;
  }
  EngagementReport report;
  for (auto& [t, e] : acc) {
    if (e.posts == 0) {
      e.empty = true;
    } else {
      const double n = static_cast<double>(e.posts);
      e.mean_likes = static_cast<double>(e.likes) / n;
      e.mean_retweets = static_cast<double>(e.retweets) / n;
      e.mean_replies = static_cast<double>(e.replies) / n;
    }
    report.topics.push_back(e);
  }
  return report;
}

// Normalized mutual information, arithmetic-mean normalization. Two
// single-cluster labelings score 1.
inline double normalized_mutual_information(const std::vector<int>& a, const std::vector<int>& b) {
  require(a.size() == b.size() && !a.empty(), "nmi: labelings must be non-empty and equal length");
  std::map<int, double> ca, cb;
  std::map<std::pair<int, int>, double> joint;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ca[a[i]] += 1;
    cb[b[i]] += 1;
    joint[{a[i], b[i]}] += 1;
  }
  const double n = static_cast<double>(a.size());
  auto entropy = [n](const std::map<int, double>& c) {
    double h = 0.0;
    for (const auto& [k, v] : c) h -= v / n * std::log(v / n);
    return h;
  };
  double mi = 0.0;
  for (const auto& [key, v] : joint) {
    mi += v / n * std::log(v * n / (ca[key.first] * cb[key.second]));
  }
  const double ha = entropy(ca), hb = entropy(cb);
  if (ha == 0.0 && hb == 0.0) return 1.0;
  const double denom = 0.5 * (ha + hb);
  return std::clamp(mi / denom, 0.0, 1.0);
}

inline void write_pr_csv(const PrAtKReport& report, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write: " + path);
  out << "k,precision,recall,hits\n";
  char buf[128];
  for (const auto& r : report.rows) {
    std::snprintf(buf, sizeof buf, "%zu,%.9f,%.9f,%zu\n", r.k, r.precision, r.recall, r.hits);
    out << buf;
  }
}

inline void write_engagement_csv(const EngagementReport& report, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write: " + path);
  out << "topic,posts,likes,retweets,replies,mean_likes,mean_retweets,mean_replies,empty\n";
  char buf[256];
  for (const auto& e : report.topics) {
    std::snprintf(buf, sizeof buf, "%d,%zu,%llu,%llu,%llu,%.6f,%.6f,%.6f,%d\n", e.topic, e.posts,
                  static_cast<unsigned long long>(e.likes), static_cast<unsigned long long>(e.retweets),
                  static_cast<unsigned long long>(e.replies), e.mean_likes, e.mean_retweets,
                  e.mean_replies, e.empty ? 1 : 0);
    out << buf;
  }
}

}  // namespace topicflow
