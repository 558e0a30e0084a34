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

// Subword-enriched embeddings: skip-gram with negative sampling over words
// plus hashed character n-grams, document vectors, and a supervised
// averaged-embedding softmax classifier.
//
// Models are templates over the parameter type so that gradient checks can
// run in double precision; the library and CLI use float.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "topicflow/common.hpp"
#include "topicflow/corpus.hpp"
#include "topicflow/text.hpp"

namespace topicflow {

struct EmbedConfig {
  std::size_t dim = 100;
  std::size_t window = 5;
  std::size_t negatives = 5;
  std::size_t min_n = 3;
  std::size_t max_n = 6;
  std::size_t buckets = 2'000'000;
  double lr = 0.05;
  int epochs = 5;
  std::size_t min_count = 1;
  std::uint64_t seed = 42;
  unsigned threads = 1;

  void validate() const {
    require(dim >= 1, "embed: dim must be >= 1");
    require(window >= 1, "embed: window must be >= 1");
    require(min_n >= 1 && min_n <= max_n, "embed: need 1 <= min_n <= max_n");
    require(buckets >= 1, "embed: buckets must be >= 1");
    require(lr > 0, "embed: lr must be > 0");
    require(epochs >= 1, "embed: epochs must be >= 1");
    require(min_count >= 1, "embed: min_count must be >= 1");
  }
};

// Character n-grams of "<word>" with lengths min_n..max_n (code points),
// hashed with 32-bit FNV-1a modulo the bucket count.
inline std::vector<std::string> ngram_strings(std::string_view word, std::size_t min_n,
                                              std::size_t max_n) {
  std::u32string wrapped = U"<";
  wrapped += text::decode_utf8(word);
  wrapped += U">";
  std::vector<std::string> out;
  for (std::size_t n = min_n; n <= max_n && n <= wrapped.size(); ++n) {
    for (std::size_t i = 0; i + n <= wrapped.size(); ++i) {
      out.push_back(text::encode_utf8(std::u32string_view(wrapped).substr(i, n)));
    }
  }
  return out;
}

inline std::vector<std::uint32_t> extract_ngrams(std::string_view word, const EmbedConfig& cfg) {
  std::vector<std::uint32_t> out;
  for (const auto& g : ngram_strings(word, cfg.min_n, cfg.max_n)) {
    out.push_back(static_cast<std::uint32_t>(fnv1a32(g) % cfg.buckets));
  }
  return out;
}

// Word table shared by the unsupervised and supervised models. Input rows
// [0, V) are words, rows [V, V + buckets) are n-gram buckets.
class SubwordDictionary {
 public:
  SubwordDictionary() = default;
  SubwordDictionary(std::vector<std::string> words, const EmbedConfig& cfg)
      : words_(std::move(words)), min_n_(cfg.min_n), max_n_(cfg.max_n), buckets_(cfg.buckets) {
    for (std::size_t i = 0; i < words_.size(); ++i) {
      index_.emplace(words_[i], static_cast<std::uint32_t>(i));
    }
    rows_.reserve(words_.size());
    for (std::size_t i = 0; i < words_.size(); ++i) rows_.push_back(compute_rows(words_[i]));
  }

  std::size_t size() const { return words_.size(); }
  std::size_t input_rows() const { return words_.size() + buckets_; }
  const std::vector<std::string>& words() const { return words_; }

  std::optional<std::uint32_t> id_of(std::string_view w) const {
    auto it = index_.find(std::string(w));
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  const std::vector<std::uint32_t>& rows_of(std::uint32_t id) const { return rows_[id]; }

  // Input rows composing any word, in or out of vocabulary.
  std::vector<std::uint32_t> rows_of(std::string_view w) const {
    if (auto id = id_of(w)) return rows_[*id];
    return compute_rows(w);
  }

  std::uint64_t hash() const {
    std::uint64_t h = fnv1a64("");
    for (const auto& w : words_) {
      h = fnv1a64(w, h);
      h = fnv1a64(std::string_view("\0", 1), h);
    }
    return h;
  }

 private:
  std::vector<std::uint32_t> compute_rows(std::string_view w) const {
    std::vector<std::uint32_t> rows;
    if (auto id = id_of(w)) rows.push_back(*id);
    const auto base = static_cast<std::uint32_t>(words_.size());
    for (const auto& g : ngram_strings(w, min_n_, max_n_)) {
      rows.push_back(base + static_cast<std::uint32_t>(fnv1a32(g) % buckets_));
    }
    return rows;
  }

  std::vector<std::string> words_;
  std::unordered_map<std::string, std::uint32_t> index_;
  std::vector<std::vector<std::uint32_t>> rows_;
  std::size_t min_n_ = 3;
  std::size_t max_n_ = 6;
  std::size_t buckets_ = 1;
};

template <typename Real>
struct BasicEmbeddingModel {
  EmbedConfig config;
  SubwordDictionary dict;
  std::vector<std::uint64_t> counts;  // per word, for the negative table
  Matrix<Real> input;                 // (V + buckets) x dim
  Matrix<Real> output;                // V x dim
};

using EmbeddingModel = BasicEmbeddingModel<float>;

template <typename Real>
struct BasicClassifierModel {
  EmbedConfig config;
  SubwordDictionary dict;
  std::vector<int> labels;  // index -> label value, first-appearance order
  Matrix<Real> input;       // (V + buckets) x dim
  Matrix<Real> output;      // L x dim

  std::size_t num_labels() const { return labels.size(); }
};

using ClassifierModel = BasicClassifierModel<float>;

namespace embed_detail {

inline double log_sigmoid(double x) {
  return x >= 0 ? -std::log1p(std::exp(-x)) : x - std::log1p(std::exp(x));
}

inline double sigmoid(double x) {
  return x >= 0 ? 1.0 / (1.0 + std::exp(-x)) : std::exp(x) / (1.0 + std::exp(x));
}

template <typename Real>
void init_input(Matrix<Real>& m, std::size_t dim, Rng& rng) {
  const double bound = 1.0 / static_cast<double>(dim);
  for (auto& x : m.data()) x = static_cast<Real>(rng.uniform(-bound, bound));
}

template <typename Real>
std::vector<double> sum_rows(const Matrix<Real>& m, std::span<const std::uint32_t> rows) {
  std::vector<double> h(m.cols(), 0.0);
  for (auto r : rows) {
    const auto row = m.row(r);
    for (std::size_t j = 0; j < h.size(); ++j) h[j] += row[j];
  }
  return h;
}

template <typename Real>
double dot(std::span<const Real> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t j = 0; j < b.size(); ++j) s += a[j] * b[j];
  return s;
}

// Cumulative unigram^0.75 distribution.
class NegativeTable {
 public:
  explicit NegativeTable(const std::vector<std::uint64_t>& counts) : cdf_(counts.size()) {
    double acc = 0.0;
    for (std::size_t i = 0; i < counts.size(); ++i) {
      acc += std::pow(static_cast<double>(counts[i]), 0.75);
      cdf_[i] = acc;
    }
  }
  std::uint32_t sample(Rng& rng) const {
    const double u = rng.uniform() * cdf_.back();
    auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
    if (it == cdf_.end()) --it;
    return static_cast<std::uint32_t>(it - cdf_.begin());
  }

 private:
  std::vector<double> cdf_;
};

}  // namespace embed_detail

// ---------------------------------------------------------------------------
// Skip-gram negative-sampling loss and its gradient
// ---------------------------------------------------------------------------

// Gradient of one (center, context, negatives) term. The center vector is the
// sum of the center's input rows, so every row receives `hidden`; output row
// t receives coefficient * center vector (accumulated over repeats).
struct PairGradient {
  std::vector<double> center;  // sum of the center's input rows
  std::vector<double> hidden;
  std::vector<std::pair<std::uint32_t, double>> output;
  double loss = 0.0;
};

template <typename Real>
PairGradient skipgram_gradient(const BasicEmbeddingModel<Real>& model,
                               std::span<const std::uint32_t> center_rows, std::uint32_t context,
                               std::span<const std::uint32_t> negatives) {
  using namespace embed_detail;
  PairGradient g;
  g.center = sum_rows(model.input, center_rows);
  const auto& h = g.center;
  g.hidden.assign(h.size(), 0.0);
  auto term = [&](std::uint32_t target, bool positive) {
    const auto u = model.output.row(target);
    const double s = dot<Real>(u, h);
    // d/ds of -log sigma(s) is sigma(s) - 1; of -log sigma(-s) is sigma(s)
    const double coeff = positive ? sigmoid(s) - 1.0 : sigmoid(s);
    g.loss -= positive ? log_sigmoid(s) : log_sigmoid(-s);
    for (std::size_t j = 0; j < h.size(); ++j) g.hidden[j] += coeff * u[j];
    g.output.emplace_back(target, coeff);
  };
  term(context, true);
  for (auto n : negatives) term(n, false);
  return g;
}

template <typename Real>
double skipgram_loss(const BasicEmbeddingModel<Real>& model,
                     std::span<const std::uint32_t> center_rows, std::uint32_t context,
                     std::span<const std::uint32_t> negatives) {
  using namespace embed_detail;
  const auto h = sum_rows(model.input, center_rows);
  double loss = -log_sigmoid(dot<Real>(model.output.row(context), h));
  for (auto n : negatives) loss -= log_sigmoid(-dot<Real>(model.output.row(n), h));
  return loss;
}

template <typename Real>
void apply_gradient(BasicEmbeddingModel<Real>& model, std::span<const std::uint32_t> center_rows,
                    const PairGradient& g, double lr) {
  const auto& h = g.center;
  for (const auto& [target, coeff] : g.output) {
    auto u = model.output.row(target);
    for (std::size_t j = 0; j < h.size(); ++j) u[j] -= static_cast<Real>(lr * coeff * h[j]);
  }
  for (auto r : center_rows) {
    auto row = model.input.row(r);
    for (std::size_t j = 0; j < h.size(); ++j) row[j] -= static_cast<Real>(lr * g.hidden[j]);
  }
}

struct EmbedTrainStats {
  std::vector<double> epoch_loss;  // mean loss per (center, context) pair
  std::size_t vocab_size = 0;
};

template <typename Real = float>
struct UnsupervisedFit {
  BasicEmbeddingModel<Real> model;
  EmbedTrainStats stats;
};

// Skip-gram training over the corpus token streams. Words with collection
// frequency below min_count are pruned. Single-threaded runs are
// deterministic; threads > 1 runs lock-free (hogwild) SGD over shards.
template <typename Real = float>
UnsupervisedFit<Real> train_unsupervised(const TokenizedCorpus& corpus, const EmbedConfig& cfg) {
  using namespace embed_detail;
  cfg.validate();
  std::vector<std::string> kept;
  std::vector<std::uint64_t> counts;
  std::vector<std::int64_t> remap(corpus.vocabulary.size(), -1);
  for (WordId i = 0; i < corpus.vocabulary.size(); ++i) {
    if (corpus.vocabulary.coll_freq(i) >= cfg.min_count) {
      remap[i] = static_cast<std::int64_t>(kept.size());
      kept.push_back(corpus.vocabulary.word(i));
      counts.push_back(corpus.vocabulary.coll_freq(i));
    }
  }
  if (kept.empty()) throw DataError("embed: empty vocabulary after min_count pruning");

  std::vector<std::vector<std::uint32_t>> streams;
  for (const auto& doc : corpus.docs) {
    std::vector<std::uint32_t> s;
    for (WordId t : doc.tokens) {
      if (remap[t] >= 0) s.push_back(static_cast<std::uint32_t>(remap[t]));
    }
    if (!s.empty()) streams.push_back(std::move(s));
  }
  if (streams.empty()) throw DataError("embed: no tokens left after min_count pruning");

  UnsupervisedFit<Real> fit;
  auto& model = fit.model;
  model.config = cfg;
  model.dict = SubwordDictionary(std::move(kept), cfg);
  model.counts = counts;
  Rng init_rng(cfg.seed);
  model.input = Matrix<Real>(model.dict.input_rows(), cfg.dim);
  init_input(model.input, cfg.dim, init_rng);
  model.output = Matrix<Real>(model.dict.size(), cfg.dim, Real{0});
  fit.stats.vocab_size = model.dict.size();

  const NegativeTable table(counts);
  const unsigned workers = std::max(1u, cfg.threads);

  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    std::vector<double> loss(workers, 0.0);
    std::vector<std::size_t> pairs(workers, 0);
    std::vector<std::size_t> done(workers, 0);
    parallel_for(streams.size(), workers, [&](std::size_t begin, std::size_t end, unsigned w) {
      Rng rng(cfg.seed + 7919u * static_cast<std::uint64_t>(epoch + 1) + w);
      std::size_t shard_tokens = 0;
      for (std::size_t s = begin; s < end; ++s) shard_tokens += streams[s].size();
      std::vector<std::uint32_t> negs;
      for (std::size_t s = begin; s < end; ++s) {
        const auto& stream = streams[s];
        for (std::size_t i = 0; i < stream.size(); ++i) {
          const double progress =
              (static_cast<double>(epoch) +
               static_cast<double>(done[w]) / static_cast<double>(shard_tokens)) /
              static_cast<double>(cfg.epochs);
          const double lr = cfg.lr * std::max(0.0, 1.0 - progress);
          ++done[w];
          const auto& rows = model.dict.rows_of(stream[i]);
          const std::size_t radius = 1 + rng.below(cfg.window);
          const std::size_t lo = i >= radius ? i - radius : 0;
          const std::size_t hi = std::min(stream.size() - 1, i + radius);
          for (std::size_t o = lo; o <= hi; ++o) {
            if (o == i) continue;
            const std::uint32_t target = stream[o];
            negs.clear();
            for (std::size_t n = 0; n < cfg.negatives; ++n) {
              std::uint32_t neg = table.sample(rng);
              for (int tries = 0; neg == target && tries < 16; ++tries) neg = table.sample(rng);
              if (neg != target) negs.push_back(neg);
            }
            const auto g = skipgram_gradient(model, rows, target, negs);
            loss[w] += g.loss;
            ++pairs[w];
            apply_gradient(model, rows, g, lr);
          }
        }
      }
    });
    const double total_loss = std::accumulate(loss.begin(), loss.end(), 0.0);
    const double total_pairs = static_cast<double>(std::accumulate(pairs.begin(), pairs.end(), std::size_t{0}));
    const double mean = total_pairs > 0 ? total_loss / total_pairs : 0.0;
    if (!std::isfinite(mean)) throw NumericalError("embed: non-finite loss in epoch " + std::to_string(epoch));
    fit.stats.epoch_loss.push_back(mean);
  }
  return fit;
}

template <typename Real>
std::vector<double> word_vector(const BasicEmbeddingModel<Real>& model, std::string_view word) {
  const auto rows = model.dict.rows_of(word);
  return embed_detail::sum_rows(model.input, rows);
}

struct DocVector {
  std::vector<double> values;
  bool flagged = false;  // no usable word; values is the zero vector
};

// Mean of the L2-normalized vectors of the tokens; zero vectors are skipped.
template <typename Real>
DocVector doc_vector(const BasicEmbeddingModel<Real>& model, const std::vector<std::string>& tokens) {
  DocVector out;
  out.values.assign(model.config.dim, 0.0);
  std::size_t used = 0;
  for (const auto& t : tokens) {
    const auto v = word_vector(model, t);
    double norm = 0.0;
    for (double x : v) norm += x * x;
    norm = std::sqrt(norm);
    if (norm == 0.0) continue;
    for (std::size_t j = 0; j < v.size(); ++j) out.values[j] += v[j] / norm;
    ++used;
  }
  if (used == 0) {
    out.flagged = true;
    return out;
  }
  for (auto& x : out.values) x /= static_cast<double>(used);
  return out;
}

// ---------------------------------------------------------------------------
// Supervised classifier
// ---------------------------------------------------------------------------

struct LabeledTokens {
  int label = 0;
  std::vector<std::string> tokens;
};

struct SoftmaxGradient {
  std::vector<double> hidden;  // d loss / d row for each input row (mean already applied)
  std::vector<double> probs;
  std::vector<double> centre;  // hidden activation (mean of input rows)
  double loss = 0.0;
};

namespace embed_detail {

template <typename Real>
std::vector<std::uint32_t> token_rows(const SubwordDictionary& dict, const std::vector<std::string>& tokens) {
  std::vector<std::uint32_t> rows;
  for (const auto& t : tokens) {
    const auto r = dict.rows_of(t);
    rows.insert(rows.end(), r.begin(), r.end());
  }
  return rows;
}

template <typename Real>
std::vector<double> logits(const BasicClassifierModel<Real>& model, const std::vector<double>& h) {
  std::vector<double> z(model.num_labels());
  for (std::size_t l = 0; l < z.size(); ++l) z[l] = dot<Real>(model.output.row(l), h);
  return z;
}

inline std::vector<double> softmax(const std::vector<double>& z) {
  const double m = *std::max_element(z.begin(), z.end());
  std::vector<double> p(z.size());
  double s = 0.0;
  for (std::size_t i = 0; i < z.size(); ++i) s += (p[i] = std::exp(z[i] - m));
  for (auto& x : p) x /= s;
  return p;
}

template <typename Real>
std::vector<double> mean_rows(const Matrix<Real>& m, std::span<const std::uint32_t> rows) {
  auto h = sum_rows(m, rows);
  if (!rows.empty()) {
    for (auto& x : h) x /= static_cast<double>(rows.size());
  }
  return h;
}

}  // namespace embed_detail

template <typename Real>
double softmax_loss(const BasicClassifierModel<Real>& model, std::span<const std::uint32_t> rows,
                    std::size_t label_index) {
  using namespace embed_detail;
  const auto h = mean_rows(model.input, rows);
  const auto z = logits(model, h);
  const double m = *std::max_element(z.begin(), z.end());
  double s = 0.0;
  for (double x : z) s += std::exp(x - m);
  return -(z[label_index] - m - std::log(s));
}

// Cross-entropy gradient. Output row l receives (p_l - [l == y]) * centre;
// each input row receives `hidden`.
template <typename Real>
SoftmaxGradient softmax_gradient(const BasicClassifierModel<Real>& model,
                                 std::span<const std::uint32_t> rows, std::size_t label_index) {
  using namespace embed_detail;
  SoftmaxGradient g;
  g.centre = mean_rows(model.input, rows);
  g.probs = softmax(logits(model, g.centre));
  g.loss = -std::log(std::max(g.probs[label_index], 1e-300));
  g.hidden.assign(model.config.dim, 0.0);
  for (std::size_t l = 0; l < g.probs.size(); ++l) {
    const double coeff = g.probs[l] - (l == label_index ? 1.0 : 0.0);
    const auto w = model.output.row(l);
    for (std::size_t j = 0; j < g.hidden.size(); ++j) g.hidden[j] += coeff * w[j];
  }
  if (!rows.empty()) {
    for (auto& x : g.hidden) x /= static_cast<double>(rows.size());
  }
  return g;
}

template <typename Real>
void apply_gradient(BasicClassifierModel<Real>& model, std::span<const std::uint32_t> rows,
                    std::size_t label_index, const SoftmaxGradient& g, double lr) {
  for (std::size_t l = 0; l < g.probs.size(); ++l) {
    const double coeff = g.probs[l] - (l == label_index ? 1.0 : 0.0);
    auto w = model.output.row(l);
    for (std::size_t j = 0; j < w.size(); ++j) w[j] -= static_cast<Real>(lr * coeff * g.centre[j]);
  }
  for (auto r : rows) {
    auto row = model.input.row(r);
    for (std::size_t j = 0; j < row.size(); ++j) row[j] -= static_cast<Real>(lr * g.hidden[j]);
  }
}

template <typename Real = float>
struct SupervisedFit {
  BasicClassifierModel<Real> model;
  std::vector<double> epoch_loss;
  std::size_t dropped_empty = 0;
};

template <typename Real = float>
SupervisedFit<Real> train_supervised(const std::vector<LabeledTokens>& data, const EmbedConfig& cfg) {
  using namespace embed_detail;
  cfg.validate();
  SupervisedFit<Real> fit;
  std::vector<const LabeledTokens*> usable;
  std::map<std::string, std::uint64_t> word_counts;
  auto& model = fit.model;
  std::unordered_map<int, std::size_t> label_index;
  for (const auto& item : data) {
    if (item.tokens.empty()) {
      ++fit.dropped_empty;
      continue;
    }
    usable.push_back(&item);
    if (label_index.emplace(item.label, model.labels.size()).second) model.labels.push_back(item.label);
    for (const auto& t : item.tokens) ++word_counts[t];
  }
  if (model.labels.size() < 2) {
    throw DataError("train_supervised: need at least two distinct labels, got " +
                    std::to_string(model.labels.size()));
  }
  std::vector<std::string> words;
  for (const auto& [w, c] : word_counts) {
    if (c >= cfg.min_count) words.push_back(w);
  }
  model.config = cfg;
  model.dict = SubwordDictionary(std::move(words), cfg);
  Rng rng(cfg.seed);
  model.input = Matrix<Real>(model.dict.input_rows(), cfg.dim);
  init_input(model.input, cfg.dim, rng);
  model.output = Matrix<Real>(model.labels.size(), cfg.dim, Real{0});

  std::vector<std::vector<std::uint32_t>> rows(usable.size());
  std::vector<std::size_t> targets(usable.size());
  for (std::size_t i = 0; i < usable.size(); ++i) {
    rows[i] = token_rows<Real>(model.dict, usable[i]->tokens);
    targets[i] = label_index.at(usable[i]->label);
  }

  const double total_work = static_cast<double>(cfg.epochs) * static_cast<double>(usable.size());
  std::vector<std::size_t> order(usable.size());
  std::size_t step = 0;
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    rng.shuffle(order);
    double loss = 0.0;
    for (std::size_t i : order) {
      const double lr = cfg.lr * std::max(0.0, 1.0 - static_cast<double>(step++) / total_work);
      const auto g = softmax_gradient(model, rows[i], targets[i]);
      loss += g.loss;
      apply_gradient(model, rows[i], targets[i], g, lr);
    }
    const double mean = loss / static_cast<double>(usable.size());
    if (!std::isfinite(mean)) {
      throw NumericalError("train_supervised: non-finite loss in epoch " + std::to_string(epoch));
    }
    fit.epoch_loss.push_back(mean);
  }
  return fit;
}

struct LabelScore {
  int label = 0;
  double probability = 0.0;
};

struct TopK {
  std::vector<LabelScore> ranked;
  bool flagged = false;  // no known token or n-gram: uniform logits
};

// Labels by descending softmax probability; ties by ascending label index.
template <typename Real>
TopK predict_topk(const BasicClassifierModel<Real>& model, const std::vector<std::string>& tokens,
                  std::size_t k) {
  using namespace embed_detail;
  const std::size_t n_labels = model.num_labels();
  if (k < 1 || k > n_labels) {
    throw InvalidArgument("predict_topk: k must be in [1, " + std::to_string(n_labels) + "]");
  }
  const auto rows = token_rows<Real>(model.dict, tokens);
  TopK out;
  out.flagged = rows.empty();
  const auto p = softmax(logits(model, mean_rows(model.input, rows)));
  std::vector<std::size_t> idx(n_labels);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return p[a] > p[b]; });
  for (std::size_t i = 0; i < k; ++i) out.ranked.push_back({model.labels[idx[i]], p[idx[i]]});
  return out;
}

// ---------------------------------------------------------------------------
// Model files
// ---------------------------------------------------------------------------

inline constexpr std::string_view kVectorMagic = "TFVEC1";
inline constexpr std::string_view kClassifierMagic = "TFCLS1";

namespace embed_detail {

inline void put_config(BinaryWriter& w, const EmbedConfig& c) {
  w.put<std::uint64_t>(c.dim);
  w.put<std::uint64_t>(c.window);
  w.put<std::uint64_t>(c.negatives);
  w.put<std::uint64_t>(c.min_n);
  w.put<std::uint64_t>(c.max_n);
  w.put<std::uint64_t>(c.buckets);
  w.put<double>(c.lr);
  w.put<std::uint32_t>(static_cast<std::uint32_t>(c.epochs));
  w.put<std::uint64_t>(c.min_count);
  w.put<std::uint64_t>(c.seed);
}

inline EmbedConfig get_config(BinaryReader& r) {
  EmbedConfig c;
  c.dim = r.get<std::uint64_t>();
  c.window = r.get<std::uint64_t>();
  c.negatives = r.get<std::uint64_t>();
  c.min_n = r.get<std::uint64_t>();
  c.max_n = r.get<std::uint64_t>();
  c.buckets = r.get<std::uint64_t>();
  c.lr = r.get<double>();
  c.epochs = static_cast<int>(r.get<std::uint32_t>());
  c.min_count = r.get<std::uint64_t>();
  c.seed = r.get<std::uint64_t>();
  c.validate();
  return c;
}

inline void put_words(BinaryWriter& w, const SubwordDictionary& dict) {
  w.put<std::uint64_t>(dict.hash());
  w.put<std::uint64_t>(dict.size());
  for (const auto& word : dict.words()) w.put_string(word);
}

inline SubwordDictionary get_words(BinaryReader& r, const EmbedConfig& cfg, const std::string& path) {
  const auto hash = r.get<std::uint64_t>();
  const auto n = r.get<std::uint64_t>();
  std::vector<std::string> words;
  words.reserve(n);
  for (std::uint64_t i = 0; i < n; ++i) words.push_back(r.get_string());
  SubwordDictionary dict(std::move(words), cfg);
  if (dict.hash() != hash) throw DataError(path + ": vocabulary hash mismatch");
  return dict;
}

template <typename Real>
void put_matrix(BinaryWriter& w, const Matrix<Real>& m) {
  w.put<std::uint64_t>(m.rows());
  w.put<std::uint64_t>(m.cols());
  std::vector<float> data(m.data().begin(), m.data().end());
  w.put_array<float>(data);
}

template <typename Real>
Matrix<Real> get_matrix(BinaryReader& r, std::size_t rows, std::size_t cols, const std::string& path) {
  const auto nr = r.get<std::uint64_t>();
  const auto nc = r.get<std::uint64_t>();
  auto data = r.get_array<float>();
  if (nr != rows || nc != cols || data.size() != rows * cols) {
    throw DataError(path + ": matrix dimensions do not match header");
  }
  Matrix<Real> m(rows, cols);
  std::copy(data.begin(), data.end(), m.data().begin());
  return m;
}

}  // namespace embed_detail

template <typename Real>
void save_embedding(const BasicEmbeddingModel<Real>& model, const std::string& path) {
  using namespace embed_detail;
  BinaryWriter w(path);
  w.magic(kVectorMagic);
  put_config(w, model.config);
  put_words(w, model.dict);
  w.put_array<std::uint64_t>(model.counts);
  put_matrix(w, model.input);
  put_matrix(w, model.output);
  w.close();
}

inline EmbeddingModel load_embedding(const std::string& path) {
  using namespace embed_detail;
  BinaryReader r(path);
  r.expect_magic(kVectorMagic);
  EmbeddingModel model;
  model.config = get_config(r);
  model.dict = get_words(r, model.config, path);
  model.counts = r.get_array<std::uint64_t>();
  model.input = get_matrix<float>(r, model.dict.input_rows(), model.config.dim, path);
  model.output = get_matrix<float>(r, model.dict.size(), model.config.dim, path);
  return model;
}

template <typename Real>
void save_classifier(const BasicClassifierModel<Real>& model, const std::string& path) {
  using namespace embed_detail;
  BinaryWriter w(path);
  w.magic(kClassifierMagic);
  put_config(w, model.config);
  put_words(w, model.dict);
  std::vector<std::int64_t> labels(model.labels.begin(), model.labels.end());
  w.put_array<std::int64_t>(labels);
  put_matrix(w, model.input);
  put_matrix(w, model.output);
  w.close();
}

inline ClassifierModel load_classifier(const std::string& path) {
  using namespace embed_detail;
  BinaryReader r(path);
  r.expect_magic(kClassifierMagic);
  ClassifierModel model;
  model.config = get_config(r);
  model.dict = get_words(r, model.config, path);
  const auto labels = r.get_array<std::int64_t>();
  model.labels.assign(labels.begin(), labels.end());
  model.input = get_matrix<float>(r, model.dict.input_rows(), model.config.dim, path);
  model.output = get_matrix<float>(r, model.labels.size(), model.config.dim, path);
  return model;
}

}  // namespace topicflow
