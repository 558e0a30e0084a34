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

// C_V topic coherence: boolean sliding-window probabilities, NPMI context
// vectors, one-set segmentation and cosine indirect confirmation. Also the
// topic-count sweep that picks K by mean coherence over repeated LDA runs.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <numeric>
#include <set>
#include <string>
#include <vector>

#include "topicflow/common.hpp"
#include "topicflow/corpus.hpp"
#include "topicflow/lda.hpp"

namespace topicflow {

struct CoherenceConfig {
  std::size_t top_n = 10;
  std::size_t window = 110;
  double gamma_exp = 1.0;
  double epsilon = 1e-12;
  unsigned threads = 1;

  void validate() const {
    require(top_n >= 2, "coherence: top_n must be >= 2");
    require(window >= 1, "coherence: window must be >= 1");
  }
};

// Number of sliding windows containing each word, and each pair of words,
// of a fixed word set. Windows never cross document boundaries.
struct WindowCounts {
  std::vector<WordId> words;        // sorted ascending
  Matrix<std::uint64_t> joint;      // joint(i, i) is the single-word count
  std::uint64_t total_windows = 0;

  std::size_t index_of(WordId w) const {
    auto it = std::lower_bound(words.begin(), words.end(), w);
    if (it == words.end() || *it != w) throw InvalidArgument("word not in the counted set");
    return static_cast<std::size_t>(it - words.begin());
  }
  std::uint64_t count(WordId w) const {
    const auto i = index_of(w);
    return joint(i, i);
  }
  std::uint64_t count(WordId a, WordId b) const { return joint(index_of(a), index_of(b)); }
};

inline WindowCounts window_counts(const TokenizedCorpus& corpus, const std::set<WordId>& word_set,
                                  std::size_t window, unsigned threads = 1) {
  if (word_set.empty()) throw InvalidArgument("window_counts: empty word set");
  require(window >= 1, "window_counts: window must be >= 1");
  for (WordId w : word_set) {
    require(w < corpus.vocabulary.size(), "window_counts: word id outside the vocabulary");
  }
  WindowCounts out;
  out.words.assign(word_set.begin(), word_set.end());
  const std::size_t n = out.words.size();
  std::vector<int> slot(corpus.vocabulary.size(), -1);
  for (std::size_t i = 0; i < n; ++i) slot[out.words[i]] = static_cast<int>(i);

  const unsigned workers = std::max(1u, threads);
  std::vector<Matrix<std::uint64_t>> partial(workers, Matrix<std::uint64_t>(n, n));
  std::vector<std::uint64_t> partial_total(workers, 0);

  parallel_for(corpus.size(), workers, [&](std::size_t begin, std::size_t end, unsigned w) {
    auto& joint = partial[w];
    std::vector<std::uint32_t> in_window(n, 0);
    std::vector<std::size_t> present;
    std::vector<std::size_t> where(n, 0);
    auto enter = [&](WordId t) {
      const int s = slot[t];
      if (s < 0) return;
      const auto i = static_cast<std::size_t>(s);
      if (in_window[i]++ == 0) {
        where[i] = present.size();
        present.push_back(i);
      }
    };
    auto leave = [&](WordId t) {
      const int s = slot[t];
      if (s < 0) return;
      const auto i = static_cast<std::size_t>(s);
      if (--in_window[i] == 0) {
        const std::size_t last = present.back();
        present[where[i]] = last;
        where[last] = where[i];
        present.pop_back();
      }
    };
    auto record = [&] {
      ++partial_total[w];
      for (std::size_t a = 0; a < present.size(); ++a) {
        const std::size_t i = present[a];
        joint(i, i) += 1;
        for (std::size_t b = a + 1; b < present.size(); ++b) {
          const std::size_t j = present[b];
          joint(i, j) += 1;
          joint(j, i) += 1;
        }
      }
    };

    for (std::size_t d = begin; d < end; ++d) {
      const auto& toks = corpus.docs[d].tokens;
      const std::size_t len = toks.size();
      const std::size_t width = std::min(window, len);
      for (std::size_t p = 0; p < width; ++p) enter(toks[p]);
      record();
      for (std::size_t start = 1; start + window <= len; ++start) {
        leave(toks[start - 1]);
        enter(toks[start + window - 1]);
        record();
      }
      for (WordId t : toks) {
        if (slot[t] >= 0) in_window[static_cast<std::size_t>(slot[t])] = 0;
      }
      present.clear();
    }
  });

  out.joint = std::move(partial[0]);
  out.total_windows = partial_total[0];
  for (unsigned w = 1; w < workers; ++w) {
    for (std::size_t i = 0; i < out.joint.data().size(); ++i) out.joint.data()[i] += partial[w].data()[i];
    out.total_windows += partial_total[w];
  }
  return out;
}

// NPMI from window probabilities, clamped to [-1, 1]. A zero marginal is
// replaced by epsilon. Joint probability 1 means perfect co-occurrence (1).
inline double npmi(double p_joint, double p_a, double p_b, double epsilon) {
  if (p_joint >= 1.0) return 1.0;
  const double denom_a = p_a > 0.0 ? p_a : epsilon;
  const double denom_b = p_b > 0.0 ? p_b : epsilon;
  const double pmi = std::log((p_joint + epsilon) / (denom_a * denom_b));
  const double value = pmi / -std::log(p_joint + epsilon);
  return std::clamp(value, -1.0, 1.0);
}

struct CoherenceResult {
  std::vector<double> per_topic;
  double mean = 0.0;
  std::vector<WordId> unseen_words;  // top words present in no window (epsilon path)
};

namespace coherence_detail {

inline double signed_pow(double x, double e) {
  if (e == 1.0) return x;
  return std::copysign(std::pow(std::abs(x), e), x);
}

inline double cosine(std::span<const double> a, std::span<const double> b) {
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na == 0.0 || nb == 0.0) return 0.0;
  return dot / (std::sqrt(na) * std::sqrt(nb));
}

}  // namespace coherence_detail

// C_V of one topic's word set given precomputed window counts.
inline double topic_cv(const std::vector<WordId>& topic, const WindowCounts& counts,
                       const CoherenceConfig& cfg) {
  const std::size_t m = topic.size();
  const double total = static_cast<double>(counts.total_windows);
  std::vector<double> prob(m);
  for (std::size_t i = 0; i < m; ++i) prob[i] = static_cast<double>(counts.count(topic[i])) / total;

  Matrix<double> context(m, m);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      double value;
      if (topic[i] == topic[j]) {
        value = prob[i] > 0.0 ? 1.0 : npmi(0.0, 0.0, 0.0, cfg.epsilon);
      } else {
        const double pj = static_cast<double>(counts.count(topic[i], topic[j])) / total;
        value = npmi(pj, prob[i], prob[j], cfg.epsilon);
      }
      context(i, j) = coherence_detail::signed_pow(value, cfg.gamma_exp);
    }
  }
  std::vector<double> centroid(m, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) centroid[j] += context(i, j);
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < m; ++i) sum += coherence_detail::cosine(context.row(i), centroid);
  return sum / static_cast<double>(m);
}

inline CoherenceResult cv_score(const std::vector<std::vector<WordId>>& topics,
                                const TokenizedCorpus& corpus, const CoherenceConfig& cfg) {
  require(!topics.empty(), "cv_score: no topics");
  require(cfg.window >= 1, "cv_score: window must be >= 1");
  std::set<WordId> all;
  for (const auto& t : topics) {
    require(t.size() >= 2, "cv_score: each topic needs at least two words");
    all.insert(t.begin(), t.end());
  }
  const auto counts = window_counts(corpus, all, cfg.window, cfg.threads);
  CoherenceResult out;
  for (WordId w : all) {
    if (counts.count(w) == 0) out.unseen_words.push_back(w);
  }
  for (const auto& t : topics) out.per_topic.push_back(topic_cv(t, counts, cfg));
  out.mean = std::accumulate(out.per_topic.begin(), out.per_topic.end(), 0.0) /
             static_cast<double>(out.per_topic.size());
  return out;
}

inline CoherenceResult cv_score(const LdaModel& model, const TokenizedCorpus& corpus,
                                const CoherenceConfig& cfg) {
  std::vector<std::vector<WordId>> topics;
  for (std::size_t k = 0; k < model.num_topics(); ++k) {
    topics.push_back(top_word_ids(model, k, cfg.top_n));
  }
  return cv_score(topics, corpus, cfg);
}

// ---------------------------------------------------------------------------
// Topic-count sweep
// ---------------------------------------------------------------------------

struct SweepEntry {
  int k = 0;
  std::vector<double> scores;  // one per successful run
  double mean = 0.0;
  double std = 0.0;  // population standard deviation over runs
  std::vector<std::string> failures;
};

struct SweepReport {
  std::vector<SweepEntry> entries;  // candidates with at least one successful run
  std::vector<int> excluded;        // candidates whose runs all failed
  int selected_k = 0;
};

// Trains `runs` models per candidate K with seeds seed, seed+1, ... and picks
// the K with the highest mean C_V (ties: smaller K). Cells run in parallel
// when cfg.threads > 1, each training single-threaded.
inline SweepReport sweep(const TokenizedCorpus& corpus, std::vector<int> candidates, int runs,
                         const LdaConfig& lda_template, const CoherenceConfig& cfg) {
  require(runs >= 1, "sweep: runs must be >= 1");
  require(!candidates.empty(), "sweep: no candidate K");
  cfg.validate();
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

  struct Cell {
    double score = 0.0;
    std::string error;
  };
  const std::size_t cells = candidates.size() * static_cast<std::size_t>(runs);
  std::vector<Cell> results(cells);
  CoherenceConfig cell_cfg = cfg;
  cell_cfg.threads = 1;
  parallel_for(cells, std::max(1u, cfg.threads), [&](std::size_t begin, std::size_t end, unsigned) {
    for (std::size_t c = begin; c < end; ++c) {
      const int k = candidates[c / static_cast<std::size_t>(runs)];
      const auto run = c % static_cast<std::size_t>(runs);
      LdaConfig lc = lda_template;
      lc.k = k;
      lc.seed = lda_template.seed + run;
      if (cfg.threads > 1) lc.threads = 1;
      try {
        const auto fit = fit_lda(corpus, lc);
        results[c].score = cv_score(fit.model, corpus, cell_cfg).mean;
      } catch (const Error& e) {
        results[c].error = e.what();
      }
    }
  });

  SweepReport report;
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t ci = 0; ci < candidates.size(); ++ci) {
    SweepEntry entry;
    entry.k = candidates[ci];
    for (int r = 0; r < runs; ++r) {
      const auto& cell = results[ci * static_cast<std::size_t>(runs) + static_cast<std::size_t>(r)];
      if (cell.error.empty()) {
        entry.scores.push_back(cell.score);
      } else {
        entry.failures.push_back("K=" + std::to_string(entry.k) + " run " + std::to_string(r) +
                                 ": " + cell.error);
      }
    }
    if (entry.scores.empty()) {
      report.excluded.push_back(entry.k);
      continue;
    }
    const double n = static_cast<double>(entry.scores.size());
    entry.mean = std::accumulate(entry.scores.begin(), entry.scores.end(), 0.0) / n;
    double var = 0.0;
    for (double s : entry.scores) var += (s - entry.mean) * (s - entry.mean);
    entry.std = std::sqrt(var / n);
    if (entry.mean > best) {
      best = entry.mean;
      report.selected_k = entry.k;
    }
    report.entries.push_back(std::move(entry));
  }
  if (report.entries.empty()) throw DataError("sweep: every training run failed");
  return report;
}

inline void write_sweep_csv(const SweepReport& report, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write: " + path);
  out << "K,mean_cv,std_cv,selected\n";
  char buf[128];
  for (const auto& e : report.entries) {
    std::snprintf(buf, sizeof buf, "%d,%.9f,%.9f,%d\n", e.k, e.mean, e.std,
                  e.k == report.selected_k ? 1 : 0);
    out << buf;
  }
  if (!out) throw IoError("write failed: " + path);
}

// Reads back the selected K from a sweep CSV.
inline int read_selected_k(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open: " + path);
  std::string line;
  std::getline(in, line);
  while (std::getline(in, line)) {
    if (line.size() >= 2 && line.substr(line.size() - 2) == ",1") return std::stoi(line);
  }
  throw DataError(path + ": no selected K");
}

}  // namespace topicflow
